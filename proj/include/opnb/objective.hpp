// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opnb/common.hpp"
#include "opnb/dataset.hpp"
#include "opnb/kernel.hpp"

namespace opnb {

enum class PenaltyMode { frobenius, total_covariance, within_class_covariance };
enum class InitKind { pca, random, explicit_v };

// CLI vocabulary: frobenius | total-cov | within-cov, pca | random | explicit.
std::string penalty_to_string(PenaltyMode mode);
PenaltyMode penalty_from_string(const std::string& s);
std::string init_to_string(InitKind kind);
InitKind init_from_string(const std::string& s);

struct BinningConfig {
  bool enabled = false;
  int bins = 1000;
};

struct OPNBConfig {
  int p_prime = -1;  // -1 resolves to min(p, 20)
  double lambda = 0.001;
  PenaltyMode penalty = PenaltyMode::frobenius;
  KernelSpec kernel{};
  InitKind init = InitKind::pca;
  Matrix init_v;  // used when init == explicit_v
  std::uint64_t seed = 0;
  int n_restarts = 1;
  BinningConfig binning{true, 1000};
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;

  int resolve_p_prime(Index p) const {
    if (p_prime > 0) return static_cast<int>(std::min<Index>(p_prime, p));
    return static_cast<int>(std::min<Index>(p, 20));
  }
};

// Everything the likelihood and its gradient share: per-column floored log
// marginals log f-hat_{Z_t|k}(z_it), their per-class totals, and the log
// mixture log f-hat_Z(z_i). All products over columns and the mixture are
// kept in log space; each marginal log is floored at log(1e-300) so a
// far-tail point cannot produce -inf.
struct LikelihoodParts {
  double loglik = 0.0;       // l-tilde(Z), always <= 0
  std::vector<Matrix> logf;  // per column: n x K
  Matrix logf_total;         // n x K
  Vector logmix;             // n
};

LikelihoodParts likelihood_parts(const Matrix& Z, const IntVector& y,
                                 const ClassPriors& priors,
                                 const KernelSpec& kernel,
                                 const BinningConfig& binning = {});

// l-tilde(Z) with exact kernel sums.
double log_likelihood(const Matrix& Z, const IntVector& y,
                      const ClassPriors& priors, const KernelSpec& kernel);

// Penalty weight matrix C for tr(V^T C V): identity, total data covariance,
// or pooled within-class covariance (ML, weights n_k/n) of the scaled
// training data.
Matrix penalty_matrix(PenaltyMode mode, const Matrix& X, const IntVector& y);

// (1/n) l-tilde(X V) - lambda tr(V^T C V), exact sums.
double penalized_objective(const Matrix& V, const Dataset& ds,
                           const OPNBConfig& config, const Matrix& C);

// d l-tilde / d z_st for all entries. Each column costs ~4K kernel-sum
// sweeps: the per-class densities, the weighted own-class sums, the
// unweighted per-class sums at all points, and the mixture-ratio-weighted
// sums at own-class points.
Matrix gradient_z(const Matrix& Z, const IntVector& y,
                  const ClassPriors& priors, const KernelSpec& kernel,
                  const BinningConfig& binning = {});

// Same, reusing already-computed likelihood parts for Z.
Matrix gradient_z(const Matrix& Z, const IntVector& y,
                  const ClassPriors& priors, const KernelSpec& kernel,
                  const BinningConfig& binning, const LikelihoodParts& parts);

// Chain rule to V plus the penalty term: (1/n) X^T grad_z - 2 lambda C V.
Matrix gradient_v(const Matrix& X, const Matrix& grad_z, const Matrix& V,
                  double lambda, const Matrix& C);

// Both sides of the decomposition of the likelihood's first term into
// per-class, per-column averages: lhs sums over points, rhs over classes
// and columns through separate sum calls. Equal up to rounding.
std::pair<double, double> ica_decomposition_check(const Matrix& Z,
                                                  const IntVector& y,
                                                  const ClassPriors& priors,
                                                  const KernelSpec& kernel);

}  // namespace opnb
