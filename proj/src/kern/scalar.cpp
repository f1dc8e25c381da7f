// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include <cmath>
#include <cstddef>

#include "opnb/kern/kernels.hpp"

namespace opnb::kern {
namespace {

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double s_sq_l2(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

double s_sq_l2_scaled(const double* x, const double* y, const double* inv_h,
                      std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (x[i] - y[i]) * inv_h[i];
    acc += d * d;
  }
  return acc;
}

void s_exp_v(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

double s_exp_sum_shifted(const double* x, std::size_t n, double shift) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(x[i] - shift);
  return acc;
}

void s_gauss_accum(const double* ev, std::size_t m, const double* xs,
                   std::size_t n, double inv_h, double* out) {
  for (std::size_t s = 0; s < m; ++s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (ev[s] - xs[i]) * inv_h;
      acc += std::exp(-0.5 * t * t);
    }
    out[s] = acc;
  }
}

void s_polyexp_v(const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(z[i]);
    out[i] = 0.25 * (1.0 + a) * std::exp(-a);
  }
}

void s_polyexp_deriv_v(const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = -0.25 * z[i] * std::exp(-std::fabs(z[i]));
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",          s_sum,        s_dot,       s_sq_l2,
      s_sq_l2_scaled,    s_exp_v,      s_exp_sum_shifted,
      s_gauss_accum,     s_polyexp_v,  s_polyexp_deriv_v,
  };
  return ops;
}

}  // namespace opnb::kern
