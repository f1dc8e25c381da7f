// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <functional>
#include <vector>

#include "opnb/common.hpp"

namespace opnb {

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;  // sup norm
  double c1 = 1e-4;                  // sufficient-decrease constant
  double c2 = 0.9;                   // curvature constant
};

struct LbfgsResult {
  Vector x;
  double f = 0.0;
  Vector grad;
  std::vector<double> trace;  // accepted objective values, initial included
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
};

// Minimizes f with limited-memory BFGS and a strong-Wolfe line search
// (bracket + zoom, cubic interpolation). fg evaluates f at x and fills the
// gradient. A non-finite value at the start throws NonFiniteObjective; a
// non-finite value met during the line search is treated as infinitely bad
// and backtracked away from. If the line search cannot make progress the
// best iterate so far is returned with line_search_failed set.
LbfgsResult lbfgs_minimize(
    const std::function<double(const Vector&, Vector&)>& fg, const Vector& x0,
    const LbfgsOptions& opts = {});

}  // namespace opnb
