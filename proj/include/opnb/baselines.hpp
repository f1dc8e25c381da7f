// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "opnb/dataset.hpp"

namespace opnb {

// h = (4/3)^{1/5} sigma-hat n^{-1/5}, sample sd with divisor n-1.
double silverman_bandwidth(const Vector& values);

struct NBBandwidthConfig {
  double alpha = 0.3;  // bandwidth for binary columns
  double gamma = 1.0;  // multiplier on Silverman for continuous columns
};

// Naive Bayes with per-column Gaussian KDE marginals. Continuous columns
// get a per-class Silverman bandwidth times gamma; binary columns share
// alpha across classes.
struct NBKDEModel {
  std::vector<Matrix> class_rows;  // per class: n_k x p
  Matrix bandwidth;                // K x p
  ClassPriors priors;
  std::vector<ColumnKind> column_kind;
  std::vector<std::string> class_names;

  Index p() const { return bandwidth.cols(); }
  int num_classes() const { return priors.num_classes(); }
};

NBKDEModel fit_nb(const Dataset& ds, const NBBandwidthConfig& bw);
Matrix posterior_nb(const NBKDEModel& model, const Matrix& X_new);
IntVector predict_nb(const NBKDEModel& model, const Matrix& X_new);

// Kernel discriminant analysis: full multivariate Gaussian-product KDE per
// class with a diagonal bandwidth matrix, gamma (4/(n_k(p_c+2)))^{1/(p_c+4)}
// times the class marginal sds on the continuous block and alpha on the
// binary block.
struct KDDAModel {
  std::vector<Matrix> class_rows;  // per class: n_k x p
  Matrix bandwidth;                // K x p diagonal entries
  ClassPriors priors;
  std::vector<std::string> class_names;

  Index p() const { return bandwidth.cols(); }
  int num_classes() const { return priors.num_classes(); }
};

KDDAModel fit_kdda(const Dataset& ds, double alpha, double gamma);
Matrix posterior_kdda(const KDDAModel& model, const Matrix& X_new);
IntVector predict_kdda(const KDDAModel& model, const Matrix& X_new);

// Reduced-rank LDA: shared within-class covariance (ML, weights n_k/n,
// ridge jitter 1e-8 trace/p), classification by Mahalanobis distance
// restricted to the top-r discriminant directions.
struct LDAModel {
  Matrix whiten;  // p x p inverse square root of the jittered pooled cov
  Matrix basis;   // p x r, orthonormal discriminant basis in whitened coords
  Matrix means;   // K x p
  ClassPriors priors;
  std::vector<std::string> class_names;

  Index p() const { return whiten.rows(); }
  int rank() const { return static_cast<int>(basis.cols()); }
  int num_classes() const { return priors.num_classes(); }
};

LDAModel fit_lda(const Dataset& ds, int r);
Matrix posterior_lda(const LDAModel& model, const Matrix& X_new);
IntVector predict_lda(const LDAModel& model, const Matrix& X_new);

// Regularized discriminant analysis: per-class Gaussian with covariance
// lambda Sigma_k + (1-lambda) Sigma_W, jittered like LDA; lambda = 0 is
// LDA, lambda = 1 is QDA.
struct RDAModel {
  double lambda = 0.0;
  Matrix means;             // K x p
  std::vector<Matrix> cov;  // per class, jittered blend
  std::vector<Matrix> chol; // lower Cholesky factors of cov
  Vector logdet;            // per class
  ClassPriors priors;
  std::vector<std::string> class_names;

  Index p() const { return means.cols(); }
  int num_classes() const { return priors.num_classes(); }
};

RDAModel fit_rda(const Dataset& ds, double lambda);
Matrix posterior_rda(const RDAModel& model, const Matrix& X_new);
IntVector predict_rda(const RDAModel& model, const Matrix& X_new);

// Nearest centroid and one nearest neighbour, Euclidean distance. Distance
// ties go to the smallest class index / smallest training row index.
IntVector predict_nc(const Dataset& train, const Matrix& X_new);
IntVector predict_1nn(const Dataset& train, const Matrix& X_new);

void save_nb(const NBKDEModel& model, const std::string& path);
NBKDEModel load_nb(const std::string& path);
void save_kdda(const KDDAModel& model, const std::string& path);
KDDAModel load_kdda(const std::string& path);
void save_lda(const LDAModel& model, const std::string& path);
LDAModel load_lda(const std::string& path);
void save_rda(const RDAModel& model, const std::string& path);
RDAModel load_rda(const std::string& path);

}  // namespace opnb
