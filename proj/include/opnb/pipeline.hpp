// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opnb/common.hpp"
#include "opnb/dataset.hpp"

namespace opnb {

// Policy constants for the fixed cleanup sequence. All counts positive.
struct PreprocessConfig {
  Index max_samples = 3000;
  int min_class_size = 10;
  int categorical_threshold = 5;  // at most this many unique values
  double perturbation_fraction = 0.01;
  Index max_dimensions = 300;
  std::uint64_t seed = 0;
};

// Sorted distinct values of a one-hot encoded source column; the first
// level is the dropped reference.
struct OheMap {
  std::string column;
  std::vector<double> levels;
};

struct PreprocessInfo {
  std::vector<std::string> steps;
  std::vector<std::string> dropped_classes;
  std::vector<std::string> dropped_columns;
  std::vector<OheMap> ohe;
  bool pca_applied = false;
  Index pca_components = 0;
  std::uint64_t seed = 0;
};

struct PreprocessResult {
  Dataset data;
  PreprocessInfo info;
};

// Runs the cleanup steps in order: (1) stratified subsample to at most
// max_samples rows, (2) drop classes smaller than min_class_size, (3) drop
// constant columns, (4) one-hot encode low-cardinality columns into G-1
// indicators with the first sorted level as reference, (5) add Gaussian
// noise with sd = perturbation_fraction * column sd to every column,
// (6) reduce to the leading max_dimensions principal components when wider
// than that. Deterministic per cfg.seed.
PreprocessResult preprocess(const Dataset& raw, const PreprocessConfig& cfg);

// The applied-steps sidecar as a JSON document.
std::string preprocess_info_json(const PreprocessInfo& info);

// Per-class largest-remainder quotas, then a uniform without-replacement
// draw within each class. Returns sorted row indices.
std::vector<Index> stratified_sample(const IntVector& y, Index target_n,
                                     std::uint64_t seed);

// Rows of ds restricted to the given indices, metadata kept. Every class
// must keep at least one row.
Dataset take_rows(const Dataset& ds, const std::vector<Index>& rows);

struct Split {
  Dataset train;
  Dataset test;
};

// Stratified split. Quotas are clamped so both sides keep at least one
// observation of every class; each class needs >= 2 members.
Split train_test_split(const Dataset& ds, double train_fraction,
                       std::uint64_t seed);

// Fold id in [0, folds) per observation. Classes are shuffled then dealt
// round-robin, the starting fold carrying over from class to class, so
// fold sizes differ by at most one within every class and overall.
std::vector<int> stratified_kfold(const IntVector& y, int folds,
                                  std::uint64_t seed);

// Per-column training standard deviations (divisor n-1), all > 0.
struct ScalingParams {
  Vector sd;
};

// Test data must be scaled with the training sds.
ScalingParams fit_scaling(const Matrix& X_train);
Matrix apply_scaling(const Matrix& X, const ScalingParams& params);

}  // namespace opnb
