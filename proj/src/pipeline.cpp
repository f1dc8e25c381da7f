// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json_io.hpp"
#include "opnb/projection.hpp"
#include "opnb/rng.hpp"

namespace opnb {

namespace {

double sample_sd(const Vector& col) {
  const Index n = col.size();
  if (n < 2) return 0.0;
  const double mean = col.mean();
  return std::sqrt((col.array() - mean).square().sum() /
                   static_cast<double>(n - 1));
}

std::vector<Index> class_counts_of(const IntVector& y, int K) {
  std::vector<Index> counts(static_cast<std::size_t>(K), 0);
  for (Index i = 0; i < y.size(); ++i) {
    ++counts[static_cast<std::size_t>(y[i] - 1)];
  }
  return counts;
}

int max_label(const IntVector& y) {
  int K = 0;
  for (Index i = 0; i < y.size(); ++i) K = std::max(K, y[i]);
  return K;
}

// Largest-remainder apportionment of target over the class counts.
std::vector<Index> quotas(const std::vector<Index>& counts, Index target,
                          Index n) {
  const std::size_t K = counts.size();
  std::vector<Index> q(K);
  std::vector<Index> rem(K);
  Index used = 0;
  for (std::size_t k = 0; k < K; ++k) {
    q[k] = target * counts[k] / n;
    rem[k] = target * counts[k] - q[k] * n;
    used += q[k];
  }
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rem[a] != rem[b]) return rem[a] > rem[b];
    return a < b;
  });
  for (std::size_t i = 0; used < target; ++i) {
    ++q[order[i]];
    ++used;
  }
  return q;
}

std::vector<std::vector<Index>> rows_by_label(const IntVector& y, int K) {
  std::vector<std::vector<Index>> rows(static_cast<std::size_t>(K));
  for (Index i = 0; i < y.size(); ++i) {
    rows[static_cast<std::size_t>(y[i] - 1)].push_back(i);
  }
  return rows;
}

std::string column_name(const Dataset& ds, Index j) {
  if (j < static_cast<Index>(ds.column_names.size())) {
    return ds.column_names[static_cast<std::size_t>(j)];
  }
  return "col" + std::to_string(j + 1);
}

std::string class_name(const Dataset& ds, int label) {
  if (label >= 1 && label <= static_cast<int>(ds.class_names.size())) {
    return ds.class_names[static_cast<std::size_t>(label - 1)];
  }
  return std::to_string(label);
}

std::vector<double> sorted_unique(const Vector& col) {
  std::vector<double> v(col.data(), col.data() + col.size());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<Index> stratified_sample(const IntVector& y, Index target_n,
                                     std::uint64_t seed) {
  const Index n = y.size();
  if (target_n > n) {
    fail(Errc::TargetTooLarge, "sample target " + std::to_string(target_n) +
                                   " exceeds " + std::to_string(n) + " rows");
  }
  if (n == 0) return {};
  const int K = max_label(y);
  const std::vector<Index> counts = class_counts_of(y, K);
  const std::vector<Index> q = quotas(counts, target_n, n);
  auto rows = rows_by_label(y, K);

  Rng rng(seed);
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(target_n));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rng.shuffle(rows[k]);
    out.insert(out.end(), rows[k].begin(),
               rows[k].begin() + static_cast<std::ptrdiff_t>(q[k]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dataset take_rows(const Dataset& ds, const std::vector<Index>& rows) {
  Dataset out;
  out.X.resize(static_cast<Index>(rows.size()), ds.p());
  out.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Index>(i)) = ds.X.row(rows[i]);
    out.y[static_cast<Index>(i)] = ds.y[rows[i]];
  }
  out.column_kind = ds.column_kind;
  out.column_names = ds.column_names;
  out.class_names = ds.class_names;
  out.class_counts.assign(ds.class_counts.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ++out.class_counts[static_cast<std::size_t>(out.y[static_cast<Index>(i)] - 1)];
  }
  for (std::size_t k = 0; k < out.class_counts.size(); ++k) {
    if (out.class_counts[k] == 0) {
      fail(Errc::EmptyClass, "row selection drops class " +
                                 class_name(ds, static_cast<int>(k) + 1));
    }
  }
  return out;
}

Split train_test_split(const Dataset& ds, double train_fraction,
                       std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(Errc::ParseError, "train fraction must be in (0, 1)");
  }
  const Index n = ds.n();
  const int K = ds.num_classes();
  std::vector<Index> counts(ds.class_counts.begin(), ds.class_counts.end());
  for (int k = 0; k < K; ++k) {
    if (counts[static_cast<std::size_t>(k)] < 2) {
      fail(Errc::ClassTooSmall,
           "class " + class_name(ds, k + 1) + " has fewer than 2 members");
    }
  }
  const Index target = static_cast<Index>(
      std::llround(train_fraction * static_cast<double>(n)));
  if (target < K || n - target < K) {
    fail(Errc::ClassTooSmall, "train fraction leaves a side without every class");
  }

  // clamp quotas so both sides keep at least one row of every class
  std::vector<Index> q = quotas(counts, target, n);
  Index total = 0;
  for (int k = 0; k < K; ++k) {
    auto& qk = q[static_cast<std::size_t>(k)];
    qk = std::clamp(qk, Index{1}, counts[static_cast<std::size_t>(k)] - 1);
    total += qk;
  }
  while (total != target) {
    const double scale = static_cast<double>(target) / static_cast<double>(n);
    int pick = -1;
    double best = 0.0;
    for (int k = 0; k < K; ++k) {
      const std::size_t ks = static_cast<std::size_t>(k);
      const double excess =
          static_cast<double>(q[ks]) - scale * static_cast<double>(counts[ks]);
      if (total > target && q[ks] > 1 && (pick < 0 || excess > best)) {
        pick = k;
        best = excess;
      }
      if (total < target && q[ks] < counts[ks] - 1 &&
          (pick < 0 || -excess > best)) {
        pick = k;
        best = -excess;
      }
    }
    const std::size_t ks = static_cast<std::size_t>(pick);
    if (total > target) {
      --q[ks];
      --total;
    } else {
      ++q[ks];
      ++total;
    }
  }

  auto rows = rows_by_label(ds.y, K);
  Rng rng(seed);
  std::vector<Index> train_rows, test_rows;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rng.shuffle(rows[k]);
    train_rows.insert(train_rows.end(), rows[k].begin(),
                      rows[k].begin() + static_cast<std::ptrdiff_t>(q[k]));
    test_rows.insert(test_rows.end(),
                     rows[k].begin() + static_cast<std::ptrdiff_t>(q[k]),
                     rows[k].end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return Split{take_rows(ds, train_rows), take_rows(ds, test_rows)};
}

std::vector<int> stratified_kfold(const IntVector& y, int folds,
                                  std::uint64_t seed) {
  if (folds < 1) fail(Errc::ParseError, "fold count must be positive");
  const Index n = y.size();
  std::vector<int> fold(static_cast<std::size_t>(n), 0);
  if (n == 0) return fold;
  auto rows = rows_by_label(y, max_label(y));
  Rng rng(seed);
  int offset = 0;
  for (auto& idx : rows) {
    rng.shuffle(idx);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      fold[static_cast<std::size_t>(idx[j])] =
          (offset + static_cast<int>(j)) % folds;
    }
    offset = (offset + static_cast<int>(idx.size())) % folds;
  }
  return fold;
}

ScalingParams fit_scaling(const Matrix& X_train) {
  if (X_train.rows() < 2) {
    fail(Errc::ZeroStandardDeviation,
         "scaling needs at least 2 training rows");
  }
  ScalingParams params;
  params.sd.resize(X_train.cols());
  for (Index j = 0; j < X_train.cols(); ++j) {
    const double sd = sample_sd(X_train.col(j));
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      fail(Errc::ZeroStandardDeviation,
           "training column " + std::to_string(j + 1) + " has zero sd");
    }
    params.sd[j] = sd;
  }
  return params;
}

Matrix apply_scaling(const Matrix& X, const ScalingParams& params) {
  if (X.cols() != params.sd.size()) {
    fail(Errc::DimensionMismatch, "scaling expects " +
                                      std::to_string(params.sd.size()) +
                                      " columns, got " +
                                      std::to_string(X.cols()));
  }
  return X.array().rowwise() / params.sd.transpose().array();
}

PreprocessResult preprocess(const Dataset& raw, const PreprocessConfig& cfg) {
  PreprocessResult res;
  PreprocessInfo& info = res.info;
  info.seed = cfg.seed;

  // step 1: stratified subsample
  std::vector<Index> keep(static_cast<std::size_t>(raw.n()));
  std::iota(keep.begin(), keep.end(), Index{0});
  if (raw.n() > cfg.max_samples) {
    keep = stratified_sample(raw.y, cfg.max_samples, derive_seed(cfg.seed, 0));
    info.steps.push_back("subsampled " + std::to_string(raw.n()) + " rows to " +
                         std::to_string(cfg.max_samples));
  }

  // step 2: drop small classes
  std::vector<Index> counts(static_cast<std::size_t>(raw.num_classes()), 0);
  for (Index r : keep) ++counts[static_cast<std::size_t>(raw.y[r] - 1)];
  std::vector<bool> dropped_class(counts.size(), false);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < cfg.min_class_size) {
      dropped_class[k] = true;
      if (counts[k] > 0) {
        info.dropped_classes.push_back(class_name(raw, static_cast<int>(k) + 1));
        info.steps.push_back("dropped class " +
                             class_name(raw, static_cast<int>(k) + 1) + " (" +
                             std::to_string(counts[k]) + " rows)");
      }
    }
  }
  std::vector<Index> rows;
  for (Index r : keep) {
    if (!dropped_class[static_cast<std::size_t>(raw.y[r] - 1)]) {
      rows.push_back(r);
    }
  }
  if (rows.empty()) {
    fail(Errc::NoClassesRemain, "every class fell below " +
                                    std::to_string(cfg.min_class_size) +
                                    " observations");
  }

  const Index n = static_cast<Index>(rows.size());
  IntVector y(n);
  for (Index i = 0; i < n; ++i) y[i] = raw.y[rows[static_cast<std::size_t>(i)]];

  // step 3: drop constant columns
  std::vector<Index> cols;
  for (Index j = 0; j < raw.p(); ++j) {
    double lo = raw.X(rows[0], j), hi = lo;
    for (Index i = 1; i < n; ++i) {
      const double v = raw.X(rows[static_cast<std::size_t>(i)], j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo == hi) {
      info.dropped_columns.push_back(column_name(raw, j));
      info.steps.push_back("dropped constant column " + column_name(raw, j));
    } else {
      cols.push_back(j);
    }
  }
  if (cols.empty()) {
    fail(Errc::EmptyTable, "no columns left after dropping constants");
  }

  // step 4: one-hot encode low-cardinality columns
  std::vector<Vector> out_cols;
  std::vector<std::string> out_names;
  std::vector<ColumnKind> out_kinds;
  for (Index j : cols) {
    Vector col(n);
    for (Index i = 0; i < n; ++i) {
      col[i] = raw.X(rows[static_cast<std::size_t>(i)], j);
    }
    const std::vector<double> levels = sorted_unique(col);
    if (static_cast<int>(levels.size()) <= cfg.categorical_threshold) {
      info.ohe.push_back(OheMap{column_name(raw, j), levels});
      info.steps.push_back("one-hot encoded column " + column_name(raw, j) +
                           " (" + std::to_string(levels.size()) + " levels)");
      for (std::size_t g = 1; g < levels.size(); ++g) {
        Vector ind(n);
        for (Index i = 0; i < n; ++i) {
          ind[i] = col[i] == levels[g] ? 1.0 : 0.0;
        }
        out_cols.push_back(std::move(ind));
        out_names.push_back(column_name(raw, j) + "=" +
                            format_double(levels[g]));
        out_kinds.push_back(ColumnKind::binary_ohe);
      }
    } else {
      out_cols.push_back(std::move(col));
      out_names.push_back(column_name(raw, j));
      out_kinds.push_back(j < static_cast<Index>(raw.column_kind.size())
                              ? raw.column_kind[static_cast<std::size_t>(j)]
                              : ColumnKind::continuous);
    }
  }

  Matrix X(n, static_cast<Index>(out_cols.size()));
  for (std::size_t j = 0; j < out_cols.size(); ++j) {
    X.col(static_cast<Index>(j)) = out_cols[j];
  }

  // step 5: perturb every column with noise scaled to its sd
  Rng noise(derive_seed(cfg.seed, 1));
  for (Index j = 0; j < X.cols(); ++j) {
    const double sd = sample_sd(X.col(j));
    for (Index i = 0; i < n; ++i) {
      X(i, j) += cfg.perturbation_fraction * sd * noise.normal();
    }
  }
  info.steps.push_back("perturbed " + std::to_string(X.cols()) +
                       " columns (noise sd = " +
                       format_double(cfg.perturbation_fraction) +
                       " column sd)");

  // step 6: principal component reduction
  if (X.cols() > cfg.max_dimensions) {
    const Matrix V = pca_init(X, static_cast<int>(cfg.max_dimensions));
    const Matrix centered = X.rowwise() - X.colwise().mean();
    info.steps.push_back("replaced " + std::to_string(X.cols()) +
                         " columns with " + std::to_string(cfg.max_dimensions) +
                         " principal components");
    info.pca_applied = true;
    info.pca_components = cfg.max_dimensions;
    X = centered * V;
    out_names.clear();
    out_kinds.assign(static_cast<std::size_t>(X.cols()),
                     ColumnKind::continuous);
    for (Index j = 0; j < X.cols(); ++j) {
      out_names.push_back("pc" + std::to_string(j + 1));
    }
  }

  res.data.X = std::move(X);
  res.data.y = std::move(y);
  res.data.column_kind = std::move(out_kinds);
  res.data.column_names = std::move(out_names);
  res.data.class_names = raw.class_names;
  validate(res.data);
  return res;
}

std::string preprocess_info_json(const PreprocessInfo& info) {
  detail::json j;
  j["steps"] = info.steps;
  j["dropped_classes"] = info.dropped_classes;
  j["dropped_columns"] = info.dropped_columns;
  j["ohe"] = detail::json::array();
  for (const OheMap& m : info.ohe) {
    j["ohe"].push_back({{"column", m.column}, {"levels", m.levels}});
  }
  j["pca"] = {{"applied", info.pca_applied},
              {"components", info.pca_components}};
  j["seed"] = info.seed;
  return j.dump(2);
}

}  // namespace opnb
