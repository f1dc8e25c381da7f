// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/fastsum.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "opnb/kern/kernels.hpp"

namespace opnb {

namespace {

struct Event {
  double x;
  int type;  // 0 = sample, 1 = eval; samples sort first at equal x
  Index idx;
};

}  // namespace

void fast_sums(const KernelSpec& spec, const Vector& sample,
               const Vector& weights, const Vector& evals, Vector* out_kernel,
               Vector* out_deriv) {
  const Index n = sample.size();
  const Index m = evals.size();
  if (n == 0) fail(Errc::EmptySample, "kernel sum over empty sample");
  if (weights.size() != n) {
    fail(Errc::DimensionMismatch, "weight count != sample count");
  }
  const double h = spec.h;

  std::vector<Event> ev;
  ev.reserve(static_cast<std::size_t>(n + m));
  for (Index j = 0; j < n; ++j) ev.push_back({sample[j], 0, j});
  for (Index s = 0; s < m; ++s) ev.push_back({evals[s], 1, s});
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.type != b.type) return a.type < b.type;
    return a.idx < b.idx;
  });

  // per-step decays e^{-(gap)/h}, batch-evaluated
  const std::size_t ne = ev.size();
  std::vector<double> decay(ne > 1 ? ne - 1 : 0);
  {
    std::vector<double> arg(decay.size());
    for (std::size_t i = 0; i + 1 < ne; ++i) {
      arg[i] = -(ev[i + 1].x - ev[i].x) / h;
    }
    if (!arg.empty()) {
      kern::ops().exp_v(arg.data(), decay.data(), arg.size());
    }
  }

  // left sweep: A1 = sum_{x_j <= e} w_j e^{(x_j-e)/h},
  //             A2 = sum_{x_j <= e} w_j ((e-x_j)/h) e^{(x_j-e)/h}
  Vector left_k(m), left_d(m);
  double a1 = 0.0, a2 = 0.0;
  for (std::size_t i = 0; i < ne; ++i) {
    if (i > 0) {
      const double delta = (ev[i].x - ev[i - 1].x) / h;
      const double d = decay[i - 1];
      a2 = (a2 + a1 * delta) * d;
      a1 *= d;
    }
    if (ev[i].type == 0) {
      a1 += weights[ev[i].idx];
    } else {
      left_k[ev[i].idx] = a1 + a2;
      left_d[ev[i].idx] = a2;
    }
  }

  // right sweep; reverse order puts evals before samples at equal x, so a
  // sample tied with an eval is counted exactly once (on the left)
  Vector right_k(m), right_d(m);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = ne; i-- > 0;) {
    if (i + 1 < ne) {
      const double delta = (ev[i + 1].x - ev[i].x) / h;
      const double d = decay[i];
      b2 = (b2 + b1 * delta) * d;
      b1 *= d;
    }
    if (ev[i].type == 1) {
      right_k[ev[i].idx] = b1 + b2;
      right_d[ev[i].idx] = b2;
    } else {
      b1 += weights[ev[i].idx];
    }
  }

  if (out_kernel) *out_kernel = 0.25 * (left_k + right_k);
  if (out_deriv) *out_deriv = 0.25 * (right_d - left_d);
}

Vector fast_kernel_sums(const KernelSpec& spec, const Vector& sample,
                        const Vector& weights, const Vector& evals) {
  Vector out;
  fast_sums(spec, sample, weights, evals, &out, nullptr);
  return out;
}

Vector fast_kernel_deriv_sums(const KernelSpec& spec, const Vector& sample,
                              const Vector& weights, const Vector& evals) {
  Vector out;
  fast_sums(spec, sample, weights, evals, nullptr, &out);
  return out;
}

BinnedSample bin_sample_on(const Vector& points, const Vector& weights,
                           double lo, double hi, int m) {
  if (points.size() == 0) fail(Errc::EmptySample, "binning an empty sample");
  if (weights.size() != points.size()) {
    fail(Errc::DimensionMismatch, "weight count != point count");
  }
  BinnedSample bs;
  if (!(hi > lo) || m < 2) {
    bs.grid = Vector::Constant(1, lo);
    bs.weights = Vector::Constant(1, weights.sum());
    return bs;
  }
  const double step = (hi - lo) / static_cast<double>(m - 1);
  bs.grid.resize(m);
  for (int g = 0; g < m; ++g) bs.grid[g] = lo + step * g;
  bs.weights = Vector::Zero(m);
  for (Index j = 0; j < points.size(); ++j) {
    double pos = (points[j] - lo) / step;
    if (pos < 0.0) pos = 0.0;
    if (pos > static_cast<double>(m - 1)) pos = static_cast<double>(m - 1);
    Index g0 = static_cast<Index>(pos);
    if (g0 > m - 2) g0 = m - 2;
    const double frac = pos - static_cast<double>(g0);
    bs.weights[g0] += weights[j] * (1.0 - frac);
    bs.weights[g0 + 1] += weights[j] * frac;
  }
  return bs;
}

BinnedSample bin_sample(const Vector& points, const Vector& weights, int m) {
  if (points.size() == 0) fail(Errc::EmptySample, "binning an empty sample");
  return bin_sample_on(points, weights, points.minCoeff(), points.maxCoeff(),
                       m);
}

void binned_sums(const KernelSpec& spec, const BinnedSample& bs,
                 const Vector& evals, Vector* out_kernel, Vector* out_deriv) {
  const Index m = bs.m();
  const Index ne = evals.size();
  const double h = spec.h;

  if (m == 1) {
    const double g0 = bs.grid[0];
    const double w = bs.weights[0];
    if (out_kernel) out_kernel->resize(ne);
    if (out_deriv) out_deriv->resize(ne);
    for (Index s = 0; s < ne; ++s) {
      const double u = (evals[s] - g0) / h;
      if (out_kernel) (*out_kernel)[s] = w * kernel_eval(spec, u);
      if (out_deriv) (*out_deriv)[s] = w * kernel_deriv(spec, u);
    }
    return;
  }

  const double step = bs.grid[1] - bs.grid[0];
  const double delta = step / h;
  const double d = std::exp(-delta);

  // node-level sweeps, constant decay per step
  Vector node_k(m), node_d(m);
  {
    double a1 = 0.0, a2 = 0.0;
    for (Index g = 0; g < m; ++g) {
      if (g > 0) {
        a2 = (a2 + a1 * delta) * d;
        a1 *= d;
      }
      a1 += bs.weights[g];
      node_k[g] = a1 + a2;
      node_d[g] = a2;
    }
  }
  {
    double b1 = 0.0, b2 = 0.0;
    for (Index g = m; g-- > 0;) {
      if (g + 1 < m) {
        b2 = (b2 + b1 * delta) * d;
        b1 *= d;
      }
      node_k[g] = 0.25 * (node_k[g] + b1 + b2);
      node_d[g] = 0.25 * (b2 - node_d[g]);
      b1 += bs.weights[g];
    }
  }

  if (out_kernel) out_kernel->resize(ne);
  if (out_deriv) out_deriv->resize(ne);
  const double lo = bs.grid[0];
  for (Index s = 0; s < ne; ++s) {
    double pos = (evals[s] - lo) / step;
    if (pos < 0.0) pos = 0.0;
    if (pos > static_cast<double>(m - 1)) pos = static_cast<double>(m - 1);
    Index g0 = static_cast<Index>(pos);
    if (g0 > m - 2) g0 = m - 2;
    const double frac = pos - static_cast<double>(g0);
    if (out_kernel) {
      (*out_kernel)[s] = node_k[g0] * (1.0 - frac) + node_k[g0 + 1] * frac;
    }
    if (out_deriv) {
      (*out_deriv)[s] = node_d[g0] * (1.0 - frac) + node_d[g0 + 1] * frac;
    }
  }
}

Matrix kde_per_class(const KernelSpec& spec, const Vector& projected_column,
                     const IntVector& labels, const Vector& evals,
                     const ClassPriors& priors) {
  const Index n = projected_column.size();
  if (labels.size() != n) {
    fail(Errc::DimensionMismatch, "label count != sample count");
  }
  const int K = priors.num_classes();
  Matrix out(evals.size(), K);
  for (int k = 1; k <= K; ++k) {
    std::vector<double> vals;
    for (Index i = 0; i < n; ++i) {
      if (labels[i] == k) vals.push_back(projected_column[i]);
    }
    if (vals.empty()) {
      fail(Errc::EmptyClass, "class " + std::to_string(k) + " has no points");
    }
    const Vector xs = Eigen::Map<const Vector>(vals.data(),
                                               static_cast<Index>(vals.size()));
    const Vector w = Vector::Constant(
        xs.size(), 1.0 / (static_cast<double>(xs.size()) * spec.h));
    out.col(k - 1) = fast_kernel_sums(spec, xs, w, evals);
  }
  return out;
}

}  // namespace opnb
