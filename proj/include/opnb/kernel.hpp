// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cmath>

#include "opnb/common.hpp"

namespace opnb {

// Smoothing kernel for the projected-density estimates. Only the order-1
// poly-exponential family is provided: K(x) = (1+|x|)e^{-|x|}/4. It is C1
// (K'(0) = 0), integrates to 1, and its poly-times-exponential structure
// is what makes the exact O(n log n) cumulative sums possible.
struct KernelSpec {
  double h = 1.0;
};

inline double kernel_eval(const KernelSpec&, double x) {
  const double a = std::fabs(x);
  return 0.25 * (1.0 + a) * std::exp(-a);
}

inline double kernel_deriv(const KernelSpec&, double x) {
  return -0.25 * x * std::exp(-std::fabs(x));
}

}  // namespace opnb
