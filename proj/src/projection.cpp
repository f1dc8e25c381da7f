// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/projection.hpp"

#include <cmath>

#include "opnb/rng.hpp"

namespace opnb {

Matrix project(const Matrix& X, const Matrix& V) {
  if (X.cols() != V.rows()) {
    fail(Errc::DimensionMismatch,
         "project: X has " + std::to_string(X.cols()) + " columns, V has " +
             std::to_string(V.rows()) + " rows");
  }
  return X * V;
}

namespace {

void fix_column_signs(Matrix& V) {
  for (Index c = 0; c < V.cols(); ++c) {
    Index arg = 0;
    double best = 0.0;
    for (Index r = 0; r < V.rows(); ++r) {
      const double a = std::fabs(V(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (V(arg, c) < 0.0) V.col(c) = -V.col(c);
  }
}

}  // namespace

Matrix pca_init(const Matrix& X, int p_prime) {
  const Index p = X.cols();
  if (p_prime < 1 || p_prime > p) {
    fail(Errc::DimensionMismatch, "pca_init: p' out of range");
  }
  const Index n = X.rows();
  const Matrix centered = X.rowwise() - X.colwise().mean();
  const Matrix cov =
      centered.transpose() * centered / static_cast<double>(n > 1 ? n - 1 : 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  Matrix V(p, p_prime);
  // eigenvalues come back ascending
  for (int c = 0; c < p_prime; ++c) {
    V.col(c) = es.eigenvectors().col(p - 1 - c);
  }
  fix_column_signs(V);
  return V;
}

Matrix random_init(std::uint64_t seed, int p, int p_prime) {
  if (p_prime < 1 || p_prime > p) {
    fail(Errc::DimensionMismatch, "random_init: p' out of range");
  }
  Rng rng(seed);
  Matrix G(p, p_prime);
  for (int c = 0; c < p_prime; ++c) {
    for (int r = 0; r < p; ++r) G(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(p, p_prime);
  // make the factorization unique: positive R diagonal
  const Matrix R = qr.matrixQR().topLeftCorner(p_prime, p_prime);
  for (int c = 0; c < p_prime; ++c) {
    if (R(c, c) < 0.0) Q.col(c) = -Q.col(c);
  }
  return Q;
}

}  // namespace opnb
