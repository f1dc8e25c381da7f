// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>

namespace opnb::kern {

// Data-parallel inner loops used by the density estimators and classifiers.
// Each operation has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorized variant; the backend is chosen once at runtime.
// The variants agree with the reference to ~1e-13 relative (exp is a
// polynomial approximation, reductions reassociate); equivalence is covered
// by tests/test_kernels.cpp.
struct Ops {
  const char* name;

  // sum of x[0..n)
  double (*sum)(const double* x, std::size_t n);
  // inner product
  double (*dot)(const double* x, const double* y, std::size_t n);
  // squared Euclidean distance
  double (*sq_l2)(const double* x, const double* y, std::size_t n);
  // sum of ((x[i]-y[i]) * inv_h[i])^2
  double (*sq_l2_scaled)(const double* x, const double* y,
                         const double* inv_h, std::size_t n);
  // out[i] = exp(x[i]); inputs outside [-708.25, 709.0] saturate to 0 /
  // exp(709.0)
  void (*exp_v)(const double* x, double* out, std::size_t n);
  // sum of exp(x[i] - shift); the logsumexp inner loop
  double (*exp_sum_shifted)(const double* x, std::size_t n, double shift);
  // out[s] = sum_i exp(-0.5 * ((ev[s]-xs[i]) * inv_h)^2); Gaussian KDE
  // accumulation before the 1/(n h sqrt(2 pi)) normalisation
  void (*gauss_accum)(const double* ev, std::size_t m, const double* xs,
                      std::size_t n, double inv_h, double* out);
  // out[i] = (1+|z_i|) exp(-|z_i|) / 4
  void (*polyexp_v)(const double* z, double* out, std::size_t n);
  // out[i] = -z_i exp(-|z_i|) / 4
  void (*polyexp_deriv_v)(const double* z, double* out, std::size_t n);
};

// Runtime-selected backend. Honours the OPNB_SIMD environment variable
// ("scalar" or "avx2") on first use.
const Ops& ops();

const Ops& scalar_ops();

// AVX2+FMA backend, or nullptr when the CPU (or build) lacks it.
const Ops* avx2_ops();

// Overrides the selected backend by name ("scalar"/"avx2"). Returns false if
// the named backend is unavailable. Intended for tests and benchmarking.
bool force_backend(const char* name);

}  // namespace opnb::kern
