// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "json_io.hpp"
#include "opnb/baselines.hpp"
#include "opnb/model.hpp"
#include "opnb/pipeline.hpp"
#include "opnb/rng.hpp"

namespace opnb {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double misclassification(const IntVector& pred, const IntVector& truth) {
  Index wrong = 0;
  for (Index i = 0; i < truth.size(); ++i) {
    wrong += pred[i] != truth[i] ? 1 : 0;
  }
  return truth.size() == 0
             ? 0.0
             : static_cast<double>(wrong) / static_cast<double>(truth.size());
}

Dataset with_matrix(const Dataset& ds, Matrix X) {
  Dataset out = ds;
  out.X = std::move(X);
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string method_to_string(Method m) {
  switch (m) {
    case Method::opnb: return "opnb";
    case Method::nb: return "nb";
    case Method::kdda: return "kdda";
    case Method::lda: return "lda";
    case Method::rda: return "rda";
    case Method::nc: return "nc";
    case Method::nn1: return "1nn";
  }
  fail(Errc::ParseError, "unknown method");
}

Method method_from_string(const std::string& s) {
  if (s == "opnb") return Method::opnb;
  if (s == "nb") return Method::nb;
  if (s == "kdda") return Method::kdda;
  if (s == "lda") return Method::lda;
  if (s == "rda") return Method::rda;
  if (s == "nc") return Method::nc;
  if (s == "1nn") return Method::nn1;
  fail(Errc::ParseError, "unknown method: " + s);
}

double hyper_value(const HyperPoint& hp, const std::string& name) {
  for (const auto& [key, value] : hp.values) {
    if (key == name) return value;
  }
  fail(Errc::ParseError, "missing hyperparameter: " + name);
}

std::string hyper_to_json(const HyperPoint& hp) {
  detail::json j = detail::json::object();
  for (const auto& [key, value] : hp.values) j[key] = value;
  return j.dump();
}

std::vector<HyperPoint> default_grid(Method m, const Dataset& train) {
  std::vector<HyperPoint> grid;
  switch (m) {
    case Method::opnb:
      for (int i = 0; i < 10; ++i) {
        grid.push_back({{{"lambda", 1e-4 * std::pow(2.0, i)}}});
      }
      break;
    case Method::nb:
    case Method::kdda:
      for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        for (double gamma : {1.0 / 3.0, 0.5, 1.0, 2.0, 3.0}) {
          grid.push_back({{{"alpha", alpha}, {"gamma", gamma}}});
        }
      }
      break;
    case Method::lda: {
      const int rmax = std::max(
          1, static_cast<int>(std::min<Index>(train.p(),
                                              train.num_classes() - 1)));
      for (int r = 1; r <= rmax; ++r) {
        grid.push_back({{{"r", static_cast<double>(r)}}});
      }
      break;
    }
    case Method::rda:
      for (int i = 1; i <= 10; ++i) {
        grid.push_back({{{"lambda", static_cast<double>(i) / 10.0}}});
      }
      break;
    case Method::nc:
    case Method::nn1:
      grid.push_back({});
      break;
  }
  return grid;
}

IntVector fit_predict(Method m, const HyperPoint& hp, const Dataset& train,
                      const Matrix& X_test, std::uint64_t seed) {
  const ScalingParams scale = fit_scaling(train.X);
  const Dataset ts = with_matrix(train, apply_scaling(train.X, scale));
  const Matrix Xs = apply_scaling(X_test, scale);
  switch (m) {
    case Method::opnb: {
      OPNBConfig cfg;
      cfg.lambda = hyper_value(hp, "lambda");
      cfg.seed = seed;
      return predict(fit(ts, cfg), Xs);
    }
    case Method::nb: {
      NBBandwidthConfig bw{hyper_value(hp, "alpha"), hyper_value(hp, "gamma")};
      return predict_nb(fit_nb(ts, bw), Xs);
    }
    case Method::kdda:
      return predict_kdda(
          fit_kdda(ts, hyper_value(hp, "alpha"), hyper_value(hp, "gamma")),
          Xs);
    case Method::lda:
      return predict_lda(
          fit_lda(ts, static_cast<int>(std::llround(hyper_value(hp, "r")))),
          Xs);
    case Method::rda:
      return predict_rda(fit_rda(ts, hyper_value(hp, "lambda")), Xs);
    case Method::nc:
      return predict_nc(ts, Xs);
    case Method::nn1:
      return predict_1nn(ts, Xs);
  }
  fail(Errc::ParseError, "unknown method");
}

CVResult cross_validate(Method m, const std::vector<HyperPoint>& grid,
                        const Dataset& train, int folds, std::uint64_t seed) {
  if (grid.empty()) fail(Errc::ParseError, "empty tuning grid");
  if (grid.size() == 1) return CVResult{0, {}};

  const std::vector<int> fold = stratified_kfold(train.y, folds, seed);
  std::vector<double> acc(grid.size(), 0.0);
  int used = 0;
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> in_rows, out_rows;
    for (Index i = 0; i < train.n(); ++i) {
      if (fold[static_cast<std::size_t>(i)] == f) {
        out_rows.push_back(i);
      } else {
        in_rows.push_back(i);
      }
    }
    if (out_rows.empty() || in_rows.empty()) continue;
    const Dataset cv_train = take_rows(train, in_rows);
    Matrix Xf(static_cast<Index>(out_rows.size()), train.p());
    IntVector yf(static_cast<Index>(out_rows.size()));
    for (std::size_t i = 0; i < out_rows.size(); ++i) {
      Xf.row(static_cast<Index>(i)) = train.X.row(out_rows[i]);
      yf[static_cast<Index>(i)] = train.y[out_rows[i]];
    }
    ++used;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const IntVector pred =
          fit_predict(m, grid[g], cv_train, Xf, derive_seed(seed, 7000 + f));
      acc[g] += misclassification(pred, yf);
    }
  }

  CVResult res;
  res.mean_error.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    res.mean_error[g] = used > 0 ? acc[g] / used : kNan;
    if (res.mean_error[g] < res.mean_error[res.best_index]) {
      res.best_index = g;
    }
  }
  return res;
}

ExperimentReport run_experiment(const std::vector<BenchmarkDataset>& datasets,
                                const std::vector<Method>& methods,
                                const RunOptions& opts) {
  using clock = std::chrono::steady_clock;
  ExperimentReport rep;
  rep.methods = methods;
  rep.repeats = opts.repeats;
  rep.seed = opts.seed;
  for (const BenchmarkDataset& bd : datasets) {
    rep.dataset_names.push_back(bd.name);
  }
  rep.cells.assign(
      datasets.size(),
      std::vector<std::vector<CellResult>>(
          methods.size(),
          std::vector<CellResult>(static_cast<std::size_t>(opts.repeats))));

  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (int r = 0; r < opts.repeats; ++r) {
      const std::uint64_t cell_seed =
          derive_seed(derive_seed(opts.seed, d), static_cast<std::uint64_t>(r));
      Split split;
      std::string split_failure;
      try {
        split = train_test_split(datasets[d].data, opts.train_fraction,
                                 derive_seed(cell_seed, 0));
      } catch (const std::exception& e) {
        split_failure = e.what();
      }
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        CellResult& cell = rep.cells[d][mi][static_cast<std::size_t>(r)];
        if (!split_failure.empty()) {
          cell.error = kNan;
          cell.failure = split_failure;
          continue;
        }
        const auto t0 = clock::now();
        try {
          const std::vector<HyperPoint> grid =
              default_grid(methods[mi], split.train);
          const CVResult cv =
              cross_validate(methods[mi], grid, split.train, opts.folds,
                             derive_seed(cell_seed, 1));
          const HyperPoint& hp = grid[cv.best_index];
          const IntVector pred = fit_predict(methods[mi], hp, split.train,
                                             split.test.X,
                                             derive_seed(cell_seed, 2));
          cell.error = misclassification(pred, split.test.y);
          cell.hyperparams = hyper_to_json(hp);
        } catch (const std::exception& e) {
          cell.error = kNan;
          cell.failure = e.what();
        }
        if (opts.record_timing) {
          cell.seconds =
              std::chrono::duration<double>(clock::now() - t0).count();
        }
      }
    }
  }
  return rep;
}

Matrix average_errors(const ExperimentReport& rep) {
  const Index D = static_cast<Index>(rep.dataset_names.size());
  const Index M = static_cast<Index>(rep.methods.size());
  Matrix avg(D, M);
  for (Index d = 0; d < D; ++d) {
    for (Index m = 0; m < M; ++m) {
      double sum = 0.0;
      int count = 0;
      for (const CellResult& cell :
           rep.cells[static_cast<std::size_t>(d)][static_cast<std::size_t>(m)]) {
        if (std::isfinite(cell.error)) {
          sum += cell.error;
          ++count;
        }
      }
      avg(d, m) = count > 0 ? sum / count : kNan;
    }
  }
  return avg;
}

Matrix min_normalize(const Matrix& errors) {
  Matrix out(errors.rows(), errors.cols());
  for (Index d = 0; d < errors.rows(); ++d) {
    double lo = kNan;
    for (Index m = 0; m < errors.cols(); ++m) {
      const double e = errors(d, m);
      if (std::isfinite(e) && !(e >= lo)) lo = e;
    }
    if (!std::isfinite(lo) || lo >= 1.0) {
      fail(Errc::DegenerateRow,
           "row " + std::to_string(d + 1) + " has no error below 1");
    }
    for (Index m = 0; m < errors.cols(); ++m) {
      const double e = errors(d, m);
      out(d, m) = std::isfinite(e) ? (e - lo) / (1.0 - lo) : kNan;
    }
  }
  return out;
}

StudentisedTable studentise(const Matrix& errors) {
  if (errors.cols() < 2) {
    fail(Errc::ZeroVariance, "studentisation needs at least two methods");
  }
  StudentisedTable tab;
  tab.values.resize(errors.rows(), errors.cols());
  tab.degenerate_rows.assign(static_cast<std::size_t>(errors.rows()), false);
  for (Index d = 0; d < errors.rows(); ++d) {
    double sum = 0.0;
    int count = 0;
    for (Index m = 0; m < errors.cols(); ++m) {
      if (std::isfinite(errors(d, m))) {
        sum += errors(d, m);
        ++count;
      }
    }
    const double mean = count > 0 ? sum / count : 0.0;
    double ss = 0.0;
    for (Index m = 0; m < errors.cols(); ++m) {
      if (std::isfinite(errors(d, m))) {
        ss += (errors(d, m) - mean) * (errors(d, m) - mean);
      }
    }
    const double sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
    const bool degenerate = !(sd > 0.0);
    tab.degenerate_rows[static_cast<std::size_t>(d)] = degenerate;
    for (Index m = 0; m < errors.cols(); ++m) {
      const double e = errors(d, m);
      if (!std::isfinite(e)) {
        tab.values(d, m) = kNan;
      } else {
        tab.values(d, m) = degenerate ? 0.0 : (e - mean) / sd;
      }
    }
  }
  return tab;
}

Eigen::MatrixXi pairwise_wins(const Matrix& avg_errors) {
  const Index M = avg_errors.cols();
  Eigen::MatrixXi wins = Eigen::MatrixXi::Zero(M, M);
  for (Index a = 0; a < M; ++a) {
    for (Index b = 0; b < M; ++b) {
      if (a == b) continue;
      for (Index d = 0; d < avg_errors.rows(); ++d) {
        if (std::isfinite(avg_errors(d, a)) &&
            std::isfinite(avg_errors(d, b)) &&
            avg_errors(d, a) < avg_errors(d, b)) {
          ++wins(a, b);
        }
      }
    }
  }
  return wins;
}

DatasetStats dataset_stats(const Dataset& ds, std::uint64_t seed) {
  DatasetStats st;
  st.p = ds.p();
  st.n = ds.n();
  st.num_classes = ds.num_classes();
  Index binary = 0;
  for (ColumnKind k : ds.column_kind) {
    binary += k == ColumnKind::binary_ohe ? 1 : 0;
  }
  st.binary_proportion =
      ds.p() > 0 ? static_cast<double>(binary) / static_cast<double>(ds.p())
                 : 0.0;
  const ClassPriors pr = class_priors(ds);
  const double mean = 1.0 / pr.num_classes();
  st.imbalance = (pr.pi.array() - mean).square().sum() / pr.num_classes();

  RunOptions opts;
  opts.seed = seed;
  opts.record_timing = false;
  const ExperimentReport rep = run_experiment(
      {{"complexity", ds}}, {Method::nc, Method::nn1}, opts);
  const Matrix norm = min_normalize(average_errors(rep));
  st.complexity = norm(0, 0);
  return st;
}

Vector stats_regression(const std::vector<DatasetStats>& stats,
                        const Vector& response) {
  const Index n = static_cast<Index>(stats.size());
  if (n != response.size()) {
    fail(Errc::DimensionMismatch, "one response per dataset required");
  }
  if (n < 7) {
    fail(Errc::RankDeficient, "need at least 7 datasets for 7 coefficients");
  }
  Matrix X(n, 7);
  for (Index i = 0; i < n; ++i) {
    const DatasetStats& s = stats[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    X(i, 1) = static_cast<double>(s.p);
    X(i, 2) = static_cast<double>(s.n);
    X(i, 3) = s.binary_proportion;
    X(i, 4) = s.imbalance;
    X(i, 5) = static_cast<double>(s.num_classes);
    X(i, 6) = s.complexity;
  }
  // population sd, so replicating the whole corpus cannot change the fit
  for (Index j = 1; j < 7; ++j) {
    const double mean = X.col(j).mean();
    const double sd = std::sqrt((X.col(j).array() - mean).square().sum() /
                                static_cast<double>(n));
    if (!(sd > 0.0)) {
      fail(Errc::RankDeficient,
           "statistic " + std::to_string(j) + " is constant");
    }
    X.col(j) /= sd;
  }
  const Matrix A = X.transpose() * X;
  Eigen::FullPivLU<Matrix> lu(A);
  if (lu.rank() < 7) {
    fail(Errc::RankDeficient, "collinear statistics");
  }
  return lu.solve(X.transpose() * response);
}

void write_report_csv(const ExperimentReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::ParseError, "cannot write " + path);
  out << "dataset,method,repeat,error,hyperparams,seconds\n";
  for (std::size_t d = 0; d < rep.dataset_names.size(); ++d) {
    for (std::size_t m = 0; m < rep.methods.size(); ++m) {
      for (int r = 0; r < rep.repeats; ++r) {
        const CellResult& cell = rep.cells[d][m][static_cast<std::size_t>(r)];
        out << csv_field(rep.dataset_names[d]) << ','
            << method_to_string(rep.methods[m]) << ',' << r << ','
            << format_double(cell.error) << ','
            << csv_field(cell.hyperparams) << ','
            << format_double(cell.seconds) << '\n';
      }
    }
  }
  if (!out.good()) fail(Errc::ParseError, "write failed for " + path);
}

std::string report_summary_json(const ExperimentReport& rep) {
  detail::json j;
  j["datasets"] = rep.dataset_names;
  j["methods"] = detail::json::array();
  for (Method m : rep.methods) j["methods"].push_back(method_to_string(m));
  j["repeats"] = rep.repeats;
  j["seed"] = rep.seed;

  const Matrix avg = average_errors(rep);
  j["average_errors"] = detail::mat_to_json(avg);

  // normalize row by row so one degenerate dataset cannot poison the rest
  detail::json norm = detail::json::array();
  for (Index d = 0; d < avg.rows(); ++d) {
    try {
      const Matrix row = min_normalize(avg.row(d));
      norm.push_back(detail::mat_to_json(row)[0]);
    } catch (const Error&) {
      norm.push_back(detail::json::value_t::null);
    }
  }
  j["min_normalized"] = norm;

  if (avg.cols() >= 2) {
    const StudentisedTable tab = studentise(avg);
    j["studentised"] = detail::mat_to_json(tab.values);
    j["studentised_degenerate_rows"] = tab.degenerate_rows;
  } else {
    j["studentised"] = detail::json::value_t::null;
  }

  const Eigen::MatrixXi wins = pairwise_wins(avg);
  detail::json w = detail::json::array();
  for (Index a = 0; a < wins.rows(); ++a) {
    detail::json row = detail::json::array();
    for (Index b = 0; b < wins.cols(); ++b) row.push_back(wins(a, b));
    w.push_back(row);
  }
  j["pairwise_wins"] = w;

  detail::json failures = detail::json::array();
  for (std::size_t d = 0; d < rep.dataset_names.size(); ++d) {
    for (std::size_t m = 0; m < rep.methods.size(); ++m) {
      for (int r = 0; r < rep.repeats; ++r) {
        const CellResult& cell = rep.cells[d][m][static_cast<std::size_t>(r)];
        if (!cell.failure.empty()) {
          failures.push_back({{"dataset", rep.dataset_names[d]},
                              {"method", method_to_string(rep.methods[m])},
                              {"repeat", r},
                              {"message", cell.failure}});
        }
      }
    }
  }
  j["failures"] = failures;
  return j.dump(2);
}

}  // namespace opnb
