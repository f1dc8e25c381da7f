// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>

#include "opnb/common.hpp"

namespace opnb {

// Z = X V. The projection matrix is a plain dense p x p' matrix; columns
// are the projection directions.
Matrix project(const Matrix& X, const Matrix& V);

// Top p' unit-norm eigenvectors of the sample covariance (divisor n-1),
// ordered by decreasing eigenvalue, each column's sign fixed so its
// largest-magnitude entry is positive.
Matrix pca_init(const Matrix& X, int p_prime);

// I.i.d. standard normal entries, columns orthonormalized, deterministic
// per seed.
Matrix random_init(std::uint64_t seed, int p, int p_prime);

}  // namespace opnb
