// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <vector>

#include "opnb/common.hpp"
#include "opnb/dataset.hpp"
#include "opnb/kernel.hpp"

namespace opnb {

// Weighted kernel sums S(e_s) = sum_j w_j K((e_s - x_j)/h) for all eval
// points, exact, in O((n+m) log(n+m)). The kernel splits as
// (1+u)e^{-u} = e^{-u} + u e^{-u} on each side of the eval point, so a
// sorted sweep can carry the left and right cumulative parts with a decay
// factor per step; no term ever exceeds the weight scale, so there is no
// overflow for arbitrarily spread inputs.
Vector fast_kernel_sums(const KernelSpec& spec, const Vector& sample,
                        const Vector& weights, const Vector& evals);

// Same sweep for S'(e_s) = sum_j w_j K'((e_s - x_j)/h).
Vector fast_kernel_deriv_sums(const KernelSpec& spec, const Vector& sample,
                              const Vector& weights, const Vector& evals);

// Both at once (single sort).
void fast_sums(const KernelSpec& spec, const Vector& sample,
               const Vector& weights, const Vector& evals, Vector* out_kernel,
               Vector* out_deriv);

// Sample mass accumulated on an equally spaced grid by linear binning:
// each point splits its weight between the two neighbouring nodes in
// proportion to proximity, so total weight is preserved exactly.
struct BinnedSample {
  Vector grid;
  Vector weights;
  Index m() const { return grid.size(); }
};

// Grid spans [min, max] of the points. All points identical degenerates to
// a single node carrying the full weight.
BinnedSample bin_sample(const Vector& points, const Vector& weights, int m);

// Same, with the span fixed by the caller (used to share one grid between
// the sample and the evaluation points). Points must lie inside [lo, hi].
BinnedSample bin_sample_on(const Vector& points, const Vector& weights,
                           double lo, double hi, int m);

// Kernel sums of a binned sample: the sweep runs over the m grid nodes
// (constant decay per step) and eval points are linearly interpolated
// between nodes. Evals must lie within the grid span.
void binned_sums(const KernelSpec& spec, const BinnedSample& bs,
                 const Vector& evals, Vector* out_kernel, Vector* out_deriv);

// f-hat_{Z_t|k}(e_s) for every eval point s and class k: row s, column k is
// the class-k projected-marginal KDE (1/(n_k h)) sum_{i: y_i=k} K((e_s -
// z_i)/h), computed with the exact sweep per class.
Matrix kde_per_class(const KernelSpec& spec, const Vector& projected_column,
                     const IntVector& labels, const Vector& evals,
                     const ClassPriors& priors);

}  // namespace opnb
