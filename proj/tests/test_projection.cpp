// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>

#include <cmath>

#include "opnb/projection.hpp"
#include "opnb/rng.hpp"

using namespace opnb;

namespace {

Matrix random_matrix(Rng& rng, Index r, Index c) {
  Matrix M(r, c);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) M(i, j) = rng.normal();
  }
  return M;
}

}  // namespace

TEST_CASE("project: identity and scaling") {
  Rng rng(31u);
  Matrix X = random_matrix(rng, 7, 4);
  CHECK(project(X, Matrix::Identity(4, 4)) == X);
  CHECK(project(X, 2.0 * Matrix::Identity(4, 4)) == 2.0 * X);
}

TEST_CASE("project matches the per-entry oracle") {
  Rng rng(32u);
  Matrix X = random_matrix(rng, 9, 5);
  Matrix V = random_matrix(rng, 5, 3);
  Matrix Z = project(X, V);
  for (Index i = 0; i < 9; ++i) {
    for (Index d = 0; d < 3; ++d) {
      double acc = 0.0;
      for (Index j = 0; j < 5; ++j) acc += X(i, j) * V(j, d);
      CHECK(std::fabs(Z(i, d) - acc) < 1e-12);
    }
  }
}

TEST_CASE("project rejects mismatched shapes") {
  Matrix X = Matrix::Zero(3, 4);
  Matrix V = Matrix::Zero(5, 2);
  CHECK_THROWS_AS(project(X, V), Error);
}

TEST_CASE("pca_init on axis-aligned data picks the long axis") {
  Matrix X(4, 2);
  X << 2, 0, -2, 0, 0, 1, 0, -1;
  Matrix V = pca_init(X, 1);
  CHECK(V(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(V(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pca_init columns are orthonormal, ordered, and satisfy the eigen equation") {
  Rng rng(33u);
  const Index n = 200, p = 6;
  Matrix X = random_matrix(rng, n, p);
  X.col(0) *= 3.0;
  X.col(1) *= 2.0;
  const int pp = 4;
  Matrix V = pca_init(X, pp);

  CHECK((V.transpose() * V - Matrix::Identity(pp, pp)).cwiseAbs().maxCoeff() <
        1e-10);

  const Matrix centered = X.rowwise() - X.colwise().mean();
  const Matrix cov = centered.transpose() * centered / double(n - 1);
  Vector lambda(pp);
  for (int c = 0; c < pp; ++c) {
    lambda[c] = V.col(c).dot(cov * V.col(c));
    // eigen-equation residual
    CHECK((cov * V.col(c) - lambda[c] * V.col(c)).norm() < 1e-9);
    // sign convention
    Index arg;
    V.col(c).cwiseAbs().maxCoeff(&arg);
    CHECK(V(arg, c) > 0.0);
  }
  for (int c = 0; c + 1 < pp; ++c) CHECK(lambda[c] >= lambda[c + 1] - 1e-12);

  // no direction beats the leading eigenvalue
  for (int probe = 0; probe < 200; ++probe) {
    Vector u = random_matrix(rng, p, 1);
    u.normalize();
    CHECK(u.dot(cov * u) <= lambda[0] + 1e-9);
  }
}

TEST_CASE("random_init is deterministic and orthonormal") {
  Matrix A = random_init(77u, 8, 3);
  Matrix B = random_init(77u, 8, 3);
  CHECK(A == B);
  CHECK((A.transpose() * A - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-10);
  Matrix C = random_init(78u, 8, 3);
  CHECK((A - C).cwiseAbs().maxCoeff() > 1e-6);
}
