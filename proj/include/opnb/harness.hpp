// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opnb/common.hpp"
#include "opnb/dataset.hpp"

namespace opnb {

enum class Method { opnb, nb, kdda, lda, rda, nc, nn1 };

// CLI vocabulary: opnb | nb | kdda | lda | rda | nc | 1nn
std::string method_to_string(Method m);
Method method_from_string(const std::string& s);

// One hyperparameter combination, name -> value.
struct HyperPoint {
  std::vector<std::pair<std::string, double>> values;
};

double hyper_value(const HyperPoint& hp, const std::string& name);
std::string hyper_to_json(const HyperPoint& hp);

// Default tuning grid. OPNB sweeps the penalty weight over 1e-4 * 2^i for
// i = 0..9; NB and KDDA take the alpha x gamma product grid (alpha outer);
// RDA blends over 0.1..1.0; LDA tries every discriminant dimension up to
// min(p, K-1). NC and 1-NN have nothing to tune and get one empty point.
std::vector<HyperPoint> default_grid(Method m, const Dataset& train);

// Scales train and test with the training sds, fits the method with the
// given hyperparameters, and returns test-set label predictions. The seed
// only affects methods with internal randomness.
IntVector fit_predict(Method m, const HyperPoint& hp, const Dataset& train,
                      const Matrix& X_test, std::uint64_t seed);

struct CVResult {
  std::size_t best_index = 0;
  std::vector<double> mean_error;  // per grid point; empty when not swept
};

// Mean misclassification over stratified folds, per grid point; the folds
// are a function of (train.y, folds, seed) alone, so every method tuned
// with the same arguments sees identical folds. Ties break to the earliest
// grid point. A single-point grid is returned without any fold fitting.
CVResult cross_validate(Method m, const std::vector<HyperPoint>& grid,
                        const Dataset& train, int folds, std::uint64_t seed);

struct BenchmarkDataset {
  std::string name;
  Dataset data;
};

struct RunOptions {
  int repeats = 10;
  int folds = 5;
  double train_fraction = 0.75;
  std::uint64_t seed = 0;
  bool record_timing = true;  // false zeroes the seconds column
};

struct CellResult {
  double error = 0.0;       // NaN when the cell failed
  std::string hyperparams;  // selected combination as a JSON object
  double seconds = 0.0;
  std::string failure;      // empty on success
};

struct ExperimentReport {
  std::vector<std::string> dataset_names;
  std::vector<Method> methods;
  int repeats = 0;
  std::uint64_t seed = 0;
  // cells[dataset][method][repeat]
  std::vector<std::vector<std::vector<CellResult>>> cells;
};

// For every dataset x repeat: one stratified split shared by all methods,
// CV tuning on the train side, a refit on the full train side with the
// selected combination, and the misclassification rate on the test side.
// A failing cell records its message and the run continues.
ExperimentReport run_experiment(const std::vector<BenchmarkDataset>& datasets,
                                const std::vector<Method>& methods,
                                const RunOptions& opts);

// datasets x methods table of per-cell errors averaged over repeats,
// skipping failed cells; NaN when every repeat failed.
Matrix average_errors(const ExperimentReport& rep);

// Per row: (err - min) / (1 - min). The best method maps to 0. Rows whose
// finite minimum is 1 (or with no finite entry) are DegenerateRow errors;
// NaN cells pass through.
Matrix min_normalize(const Matrix& errors);

struct StudentisedTable {
  Matrix values;
  std::vector<bool> degenerate_rows;  // zero row sd: row left all zero
};

// Per row: (err - mean) / sd with the sample sd (divisor n-1), skipping
// NaN cells. Needs at least two methods.
StudentisedTable studentise(const Matrix& errors);

// wins(a, b) = number of rows where method a's error is strictly below
// method b's. Ties and NaN comparisons count for neither side.
Eigen::MatrixXi pairwise_wins(const Matrix& avg_errors);

struct DatasetStats {
  Index p = 0;
  Index n = 0;
  double binary_proportion = 0.0;
  double imbalance = 0.0;  // variance of the class proportions
  int num_classes = 0;
  double complexity = 0.0;
};

// The six characterization statistics. The complexity score is the
// min-normalized NC error from an NC vs 1-NN run under the same split
// protocol (10 repeats, timing off).
DatasetStats dataset_stats(const Dataset& ds, std::uint64_t seed);

// OLS of the response on the six statistics plus an intercept, predictors
// scaled to unit variance (population sd) beforehand. Returns (intercept,
// 6 slopes). Needs at least 7 rows and a full-rank design.
Vector stats_regression(const std::vector<DatasetStats>& stats,
                        const Vector& response);

// Long-format rows: dataset, method, repeat, error, hyperparams, seconds.
void write_report_csv(const ExperimentReport& rep, const std::string& path);

// Summary with the averaged, min-normalized, and studentised tables, the
// pairwise-win matrix, and any per-cell failures. Rows that cannot be
// normalized are emitted as nulls.
std::string report_summary_json(const ExperimentReport& rep);

}  // namespace opnb
