// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/objective.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "opnb/fastsum.hpp"

namespace opnb {

std::string penalty_to_string(PenaltyMode mode) {
  switch (mode) {
    case PenaltyMode::frobenius:
      return "frobenius";
    case PenaltyMode::total_covariance:
      return "total-cov";
    case PenaltyMode::within_class_covariance:
      return "within-cov";
  }
  return "frobenius";
}

PenaltyMode penalty_from_string(const std::string& s) {
  if (s == "frobenius") return PenaltyMode::frobenius;
  if (s == "total-cov") return PenaltyMode::total_covariance;
  if (s == "within-cov") return PenaltyMode::within_class_covariance;
  fail(Errc::ParseError, "unknown penalty mode: " + s);
}

std::string init_to_string(InitKind kind) {
  switch (kind) {
    case InitKind::pca:
      return "pca";
    case InitKind::random:
      return "random";
    case InitKind::explicit_v:
      return "explicit";
  }
  return "pca";
}

InitKind init_from_string(const std::string& s) {
  if (s == "pca") return InitKind::pca;
  if (s == "random") return InitKind::random;
  if (s == "explicit") return InitKind::explicit_v;
  fail(Errc::ParseError, "unknown init kind: " + s);
}

namespace {

constexpr double kExpCap = 575.6;  // exp arg cap, ~1e250

std::vector<std::vector<Index>> rows_by_class(const IntVector& y, int K) {
  std::vector<std::vector<Index>> rows(static_cast<std::size_t>(K));
  for (Index i = 0; i < y.size(); ++i) {
    const int k = y[i];
    if (k < 1 || k > K) {
      fail(Errc::EmptyClass, "label " + std::to_string(k) + " outside 1..K");
    }
    rows[static_cast<std::size_t>(k - 1)].push_back(i);
  }
  for (int k = 0; k < K; ++k) {
    if (rows[static_cast<std::size_t>(k)].empty()) {
      fail(Errc::EmptyClass, "class " + std::to_string(k + 1) + " is empty");
    }
  }
  return rows;
}

Vector gather(const Vector& v, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out[static_cast<Index>(j)] = v[idx[j]];
  return out;
}

// one projected column's worth of kernel-sum machinery, exact or on a
// shared grid spanning the column
struct ColumnSums {
  const KernelSpec& spec;
  const Vector& col;
  bool binned;
  int bins;
  double lo = 0.0, hi = 0.0;

  ColumnSums(const KernelSpec& s, const Vector& c, const BinningConfig& b)
      : spec(s), col(c), binned(b.enabled), bins(b.bins) {
    if (binned) {
      lo = col.minCoeff();
      hi = col.maxCoeff();
    }
  }

  void run(const Vector& xs, const Vector& w, const Vector& evals,
           Vector* out_k, Vector* out_d) const {
    if (binned) {
      BinnedSample bs = bin_sample_on(xs, w, lo, hi, bins);
      binned_sums(spec, bs, evals, out_k, out_d);
    } else {
      fast_sums(spec, xs, w, evals, out_k, out_d);
    }
  }
};

}  // namespace

LikelihoodParts likelihood_parts(const Matrix& Z, const IntVector& y,
                                 const ClassPriors& priors,
                                 const KernelSpec& kernel,
                                 const BinningConfig& binning) {
  const Index n = Z.rows();
  const Index pp = Z.cols();
  const int K = priors.num_classes();
  if (y.size() != n) fail(Errc::DimensionMismatch, "labels != rows of Z");
  if (!Z.allFinite()) fail(Errc::NonFiniteEntry, "projected data not finite");

  const auto rows = rows_by_class(y, K);

  LikelihoodParts parts;
  parts.logf.resize(static_cast<std::size_t>(pp));
  parts.logf_total = Matrix::Zero(n, K);

  for (Index t = 0; t < pp; ++t) {
    const Vector col = Z.col(t);
    ColumnSums cs(kernel, col, binning);
    Matrix& logf = parts.logf[static_cast<std::size_t>(t)];
    logf.resize(n, K);
    for (int k = 0; k < K; ++k) {
      const auto& rk = rows[static_cast<std::size_t>(k)];
      const Vector xs = gather(col, rk);
      const Vector w = Vector::Constant(
          xs.size(), 1.0 / (static_cast<double>(xs.size()) * kernel.h));
      Vector f;
      cs.run(xs, w, col, &f, nullptr);
      for (Index i = 0; i < n; ++i) {
        logf(i, k) = f[i] > kDensityFloor ? std::log(f[i]) : kLogDensityFloor;
      }
    }
    parts.logf_total += logf;
  }

  Vector logpi(K);
  for (int k = 0; k < K; ++k) logpi[k] = std::log(priors.pi[k]);

  parts.logmix.resize(n);
  double ll = 0.0;
  for (Index i = 0; i < n; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      mx = std::max(mx, logpi[k] + parts.logf_total(i, k));
    }
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
      sum += std::exp(logpi[k] + parts.logf_total(i, k) - mx);
    }
    parts.logmix[i] = mx + std::log(sum);
    ll += logpi[y[i] - 1] + parts.logf_total(i, y[i] - 1) - parts.logmix[i];
  }
  parts.loglik = ll;
  return parts;
}

double log_likelihood(const Matrix& Z, const IntVector& y,
                      const ClassPriors& priors, const KernelSpec& kernel) {
  return likelihood_parts(Z, y, priors, kernel).loglik;
}

Matrix penalty_matrix(PenaltyMode mode, const Matrix& X, const IntVector& y) {
  const Index p = X.cols();
  if (mode == PenaltyMode::frobenius) return Matrix::Identity(p, p);

  const Index n = X.rows();
  Matrix C;
  if (mode == PenaltyMode::total_covariance) {
    const Matrix centered = X.rowwise() - X.colwise().mean();
    C = centered.transpose() * centered / static_cast<double>(n);
  } else {
    if (y.size() != n) fail(Errc::DimensionMismatch, "labels != rows of X");
    int K = 0;
    for (Index i = 0; i < n; ++i) K = std::max(K, y[i]);
    const auto rows = rows_by_class(y, K);
    C = Matrix::Zero(p, p);
    for (int k = 0; k < K; ++k) {
      const auto& rk = rows[static_cast<std::size_t>(k)];
      Matrix Xk(static_cast<Index>(rk.size()), p);
      for (std::size_t j = 0; j < rk.size(); ++j) {
        Xk.row(static_cast<Index>(j)) = X.row(rk[j]);
      }
      const Matrix ck = Xk.rowwise() - Xk.colwise().mean();
      // ML class covariance, pooled with weight n_k/n
      C += ck.transpose() * ck / static_cast<double>(n);
    }
  }
  return 0.5 * (C + C.transpose());
}

double penalized_objective(const Matrix& V, const Dataset& ds,
                           const OPNBConfig& config, const Matrix& C) {
  const Matrix Z = ds.X * V;
  const double ll =
      log_likelihood(Z, ds.y, class_priors(ds), config.kernel);
  return ll / static_cast<double>(ds.n()) -
         config.lambda * (V.transpose() * C * V).trace();
}

Matrix gradient_z(const Matrix& Z, const IntVector& y,
                  const ClassPriors& priors, const KernelSpec& kernel,
                  const BinningConfig& binning) {
  return gradient_z(Z, y, priors, kernel, binning,
                    likelihood_parts(Z, y, priors, kernel, binning));
}

Matrix gradient_z(const Matrix& Z, const IntVector& y,
                  const ClassPriors& priors, const KernelSpec& kernel,
                  const BinningConfig& binning, const LikelihoodParts& parts) {
  const Index n = Z.rows();
  const Index pp = Z.cols();
  const int K = priors.num_classes();
  const double h = kernel.h;
  const double h2 = h * h;

  const auto rows = rows_by_class(y, K);
  const Vector ones = Vector::Ones(n);

  Matrix G = Matrix::Zero(n, pp);
  for (Index t = 0; t < pp; ++t) {
    const Vector col = Z.col(t);
    ColumnSums cs(kernel, col, binning);
    const Matrix& logf = parts.logf[static_cast<std::size_t>(t)];

    // own-class term: (1/(n_k h^2)) sum_{i in k} K'((z_st-z_it)/h)
    //                 [1/f(z_it) + 1/f(z_st)]
    // plus the per-class unweighted sums D_k(s) reused by the mixture term
    Matrix D(n, K);
    for (int k = 0; k < K; ++k) {
      const auto& rk = rows[static_cast<std::size_t>(k)];
      const double nk = static_cast<double>(rk.size());
      const Vector xs = gather(col, rk);

      Vector dk;
      cs.run(xs, gather(ones, rk), col, nullptr, &dk);
      D.col(k) = dk;

      Vector invf(static_cast<Index>(rk.size()));
      for (std::size_t j = 0; j < rk.size(); ++j) {
        invf[static_cast<Index>(j)] =
            std::exp(std::min(-logf(rk[j], k), kExpCap));
      }
      Vector sw;
      cs.run(xs, invf, xs, nullptr, &sw);
      for (std::size_t j = 0; j < rk.size(); ++j) {
        G(rk[j], t) += (sw[static_cast<Index>(j)] +
                        dk[rk[j]] * invf[static_cast<Index>(j)]) /
                       (nk * h2);
      }
    }

    // mixture term; w(i,k) = f_{all-but-t | k}(z_i) / f_Z(z_i)
    Matrix W(n, K);
    for (Index i = 0; i < n; ++i) {
      for (int k = 0; k < K; ++k) {
        W(i, k) = std::exp(std::min(
            parts.logf_total(i, k) - logf(i, k) - parts.logmix[i], kExpCap));
      }
    }
    for (Index s = 0; s < n; ++s) {
      double acc = 0.0;
      for (int k = 0; k < K; ++k) acc += W(s, k) * D(s, k);
      G(s, t) -= acc / (static_cast<double>(n) * h2);
    }
    for (int k = 0; k < K; ++k) {
      const auto& rk = rows[static_cast<std::size_t>(k)];
      Vector s2;
      cs.run(col, W.col(k), gather(col, rk), nullptr, &s2);
      for (std::size_t j = 0; j < rk.size(); ++j) {
        G(rk[j], t) -= s2[static_cast<Index>(j)] /
                       (static_cast<double>(n) * h2);
      }
    }
  }
  return G;
}

Matrix gradient_v(const Matrix& X, const Matrix& grad_z, const Matrix& V,
                  double lambda, const Matrix& C) {
  if (X.rows() != grad_z.rows() || X.cols() != V.rows() ||
      grad_z.cols() != V.cols() || C.rows() != V.rows()) {
    fail(Errc::DimensionMismatch, "gradient_v: inconsistent shapes");
  }
  return X.transpose() * grad_z / static_cast<double>(X.rows()) -
         2.0 * lambda * C * V;
}

std::pair<double, double> ica_decomposition_check(const Matrix& Z,
                                                  const IntVector& y,
                                                  const ClassPriors& priors,
                                                  const KernelSpec& kernel) {
  const Index n = Z.rows();
  const Index pp = Z.cols();
  const int K = priors.num_classes();
  const auto rows = rows_by_class(y, K);

  // lhs: point-major accumulation over full-column density evaluations
  double lhs = 0.0;
  {
    Matrix logf_total = Matrix::Zero(n, K);
    for (Index t = 0; t < pp; ++t) {
      const Matrix f = kde_per_class(kernel, Z.col(t), y, Z.col(t), priors);
      for (Index i = 0; i < n; ++i) {
        for (int k = 0; k < K; ++k) {
          logf_total(i, k) +=
              f(i, k) > kDensityFloor ? std::log(f(i, k)) : kLogDensityFloor;
        }
      }
    }
    for (Index i = 0; i < n; ++i) {
      lhs += std::log(priors.pi[y[i] - 1]) + logf_total(i, y[i] - 1);
    }
  }

  // rhs: class-major, per-class evaluation subsets and column means
  double rhs = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto& rk = rows[static_cast<std::size_t>(k)];
    const double nk = static_cast<double>(rk.size());
    rhs += nk * std::log(priors.pi[k]);
    for (Index t = 0; t < pp; ++t) {
      const Vector xs = gather(Vector(Z.col(t)), rk);
      const Vector w = Vector::Constant(xs.size(), 1.0 / (nk * kernel.h));
      const Vector f = fast_kernel_sums(kernel, xs, w, xs);
      double mean_log = 0.0;
      for (Index j = 0; j < f.size(); ++j) {
        mean_log += f[j] > kDensityFloor ? std::log(f[j]) : kLogDensityFloor;
      }
      mean_log /= nk;
      rhs += nk * mean_log;
    }
  }
  return {lhs, rhs};
}

}  // namespace opnb
