// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "opnb/harness.hpp"
#include "opnb/pipeline.hpp"
#include "opnb/rng.hpp"

using namespace opnb;

namespace {

Dataset gaussian_classes(Rng& rng, Index n, Index p, int K, double sep) {
  Dataset ds;
  ds.X.resize(n, p);
  ds.y.resize(n);
  for (Index i = 0; i < n; ++i) {
    const int k = i < K ? static_cast<int>(i) + 1
                        : 1 + static_cast<int>(rng.below(K));
    ds.y[i] = k;
    for (Index j = 0; j < p; ++j) {
      ds.X(i, j) = rng.normal() + sep * (k - 1) * (j == 0 ? 1.0 : 0.0);
    }
  }
  validate(ds);
  return ds;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("method names round trip") {
  for (Method m : {Method::opnb, Method::nb, Method::kdda, Method::lda,
                   Method::rda, Method::nc, Method::nn1}) {
    CHECK(method_from_string(method_to_string(m)) == m);
  }
  CHECK(method_to_string(Method::nn1) == "1nn");
  try {
    method_from_string("svm");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
  }
}

TEST_CASE("default grids match the tuning protocol") {
  Rng rng(31u);
  Dataset ds = gaussian_classes(rng, 60, 4, 3, 2.0);

  std::vector<HyperPoint> g = default_grid(Method::opnb, ds);
  REQUIRE(g.size() == 10);
  CHECK(hyper_value(g[0], "lambda") == 1e-4);
  CHECK(hyper_value(g[9], "lambda") == doctest::Approx(1e-4 * 512).epsilon(1e-14));

  g = default_grid(Method::nb, ds);
  REQUIRE(g.size() == 25);
  CHECK(hyper_value(g[0], "alpha") == 0.1);
  CHECK(hyper_value(g[0], "gamma") == doctest::Approx(1.0 / 3.0));
  CHECK(hyper_value(g[24], "alpha") == 0.5);
  CHECK(hyper_value(g[24], "gamma") == 3.0);
  CHECK(default_grid(Method::kdda, ds).size() == 25);

  g = default_grid(Method::rda, ds);
  REQUIRE(g.size() == 10);
  CHECK(hyper_value(g[0], "lambda") == doctest::Approx(0.1));
  CHECK(hyper_value(g[9], "lambda") == 1.0);

  g = default_grid(Method::lda, ds);  // min(p, K-1) = 2
  REQUIRE(g.size() == 2);
  CHECK(hyper_value(g[1], "r") == 2.0);

  CHECK(default_grid(Method::nc, ds).size() == 1);
  CHECK(default_grid(Method::nn1, ds).size() == 1);
  CHECK(default_grid(Method::nc, ds)[0].values.empty());

  try {
    hyper_value(g[0], "missing");
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
  }
  nlohmann::json j = nlohmann::json::parse(
      hyper_to_json(default_grid(Method::nb, ds)[3]));
  CHECK(j["alpha"] == 0.1);
}

TEST_CASE("cross validation selects the recomputed minimum") {
  Rng rng(32u);
  Dataset train = gaussian_classes(rng, 60, 3, 2, 2.5);
  std::vector<HyperPoint> grid;
  for (double alpha : {0.1, 0.5}) {
    for (double gamma : {1.0 / 3.0, 1.0, 3.0}) {
      grid.push_back({{{"alpha", alpha}, {"gamma", gamma}}});
    }
  }
  const std::uint64_t seed = 17u;
  CVResult res = cross_validate(Method::nb, grid, train, 5, seed);
  REQUIRE(res.mean_error.size() == grid.size());

  // NB fits carry no internal randomness, so the documented fold contract
  // is enough to rebuild every grid error from scratch
  const std::vector<int> fold = stratified_kfold(train.y, 5, seed);
  std::vector<double> acc(grid.size(), 0.0);
  int used = 0;
  for (int f = 0; f < 5; ++f) {
    std::vector<Index> in_rows, out_rows;
    for (Index i = 0; i < train.n(); ++i) {
      (fold[static_cast<std::size_t>(i)] == f ? out_rows : in_rows)
          .push_back(i);
    }
    if (out_rows.empty() || in_rows.empty()) continue;
    Dataset cv_train = take_rows(train, in_rows);
    Matrix Xf(static_cast<Index>(out_rows.size()), train.p());
    IntVector yf(static_cast<Index>(out_rows.size()));
    for (std::size_t i = 0; i < out_rows.size(); ++i) {
      Xf.row(static_cast<Index>(i)) = train.X.row(out_rows[i]);
      yf[static_cast<Index>(i)] = train.y[out_rows[i]];
    }
    ++used;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const IntVector pred = fit_predict(Method::nb, grid[g], cv_train, Xf, 0);
      Index wrong = 0;
      for (Index i = 0; i < yf.size(); ++i) {
        wrong += pred[i] != yf[i] ? 1 : 0;
      }
      acc[g] += static_cast<double>(wrong) / static_cast<double>(yf.size());
    }
  }
  std::size_t best = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    acc[g] /= used;
    CHECK(res.mean_error[g] == acc[g]);
    if (acc[g] < acc[best]) best = g;
  }
  CHECK(res.best_index == best);

  // single-point grids skip the sweep
  CVResult single = cross_validate(
      Method::nc, std::vector<HyperPoint>{{}}, train, 5, seed);
  CHECK(single.best_index == 0);
  CHECK(single.mean_error.empty());
}

TEST_CASE("cross validation ties break to the earliest grid point") {
  Rng rng(33u);
  // classes separated along one axis: every discriminant count succeeds
  Dataset train = gaussian_classes(rng, 90, 3, 3, 8.0);
  std::vector<HyperPoint> grid = default_grid(Method::lda, train);
  REQUIRE(grid.size() == 2);
  CVResult res = cross_validate(Method::lda, grid, train, 5, 3u);
  CHECK(res.mean_error[0] == res.mean_error[1]);
  CHECK(res.best_index == 0);
}

TEST_CASE("experiment report: shapes, determinism, and bounded errors") {
  Rng rng(34u);
  std::vector<BenchmarkDataset> data;
  data.push_back({"easy", gaussian_classes(rng, 80, 2, 2, 6.0)});
  data.push_back({"noise", gaussian_classes(rng, 60, 2, 2, 0.0)});
  RunOptions opts;
  opts.repeats = 3;
  opts.seed = 5;
  opts.record_timing = false;
  const std::vector<Method> methods{Method::nc, Method::nn1};

  ExperimentReport rep = run_experiment(data, methods, opts);
  REQUIRE(rep.cells.size() == 2);
  REQUIRE(rep.cells[0].size() == 2);
  REQUIRE(rep.cells[0][0].size() == 3);
  for (const auto& per_dataset : rep.cells) {
    for (const auto& per_method : per_dataset) {
      for (const CellResult& cell : per_method) {
        CHECK(cell.failure.empty());
        CHECK(cell.error >= 0.0);
        CHECK(cell.error <= 1.0);
        CHECK(cell.seconds == 0.0);
      }
    }
  }
  // the separated dataset is easy for both classifiers
  const Matrix avg = average_errors(rep);
  CHECK(avg(0, 0) <= 0.1);
  CHECK(avg(0, 1) <= 0.1);
  // pure noise hovers around coin-flip error
  CHECK(avg(1, 0) >= 0.25);
  CHECK(avg(1, 0) <= 0.75);

  ExperimentReport again = run_experiment(data, methods, opts);
  CHECK(report_summary_json(again) == report_summary_json(rep));

  opts.record_timing = true;
  ExperimentReport timed = run_experiment(data, methods, opts);
  double total = 0.0;
  for (const auto& pd : timed.cells) {
    for (const auto& pm : pd) {
      for (const CellResult& cell : pm) total += cell.seconds;
    }
  }
  CHECK(total > 0.0);
  // timing does not change the measured errors
  CHECK((average_errors(timed) - avg).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("experiment cells fail in isolation") {
  Rng rng(35u);
  Dataset single = gaussian_classes(rng, 30, 2, 1, 0.0);
  RunOptions opts;
  opts.repeats = 2;
  opts.record_timing = false;
  ExperimentReport rep = run_experiment(
      {{"one-class", single}}, {Method::lda, Method::nc}, opts);
  for (int r = 0; r < 2; ++r) {
    const CellResult& lda_cell = rep.cells[0][0][static_cast<std::size_t>(r)];
    CHECK_FALSE(lda_cell.failure.empty());
    CHECK(std::isnan(lda_cell.error));
    const CellResult& nc_cell = rep.cells[0][1][static_cast<std::size_t>(r)];
    CHECK(nc_cell.failure.empty());
    CHECK(nc_cell.error == 0.0);
  }
}

TEST_CASE("fit_predict perfectly recalls training points through 1-nn") {
  Rng rng(36u);
  Dataset ds = gaussian_classes(rng, 40, 3, 2, 1.0);
  IntVector pred = fit_predict(Method::nn1, {}, ds, ds.X, 0);
  for (Index i = 0; i < 40; ++i) CHECK(pred[i] == ds.y[i]);
}

TEST_CASE("min normalization maps the best method to zero") {
  Matrix errors(3, 2);
  errors << 0.2, 0.2, 0.2, 0.4, 0.5, 0.3;
  Matrix out = min_normalize(errors);
  CHECK(out(0, 0) == 0.0);
  CHECK(out(0, 1) == 0.0);
  CHECK(out(1, 0) == 0.0);
  CHECK(out(1, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(out(2, 1) == 0.0);
  CHECK(out(2, 0) == doctest::Approx(0.2 / 0.7).epsilon(1e-12));
  CHECK(out.minCoeff() >= 0.0);
  for (Index d = 0; d < 3; ++d) {
    CHECK(out.row(d).minCoeff() == 0.0);
  }

  Matrix with_nan(1, 3);
  with_nan << 0.2, std::nan(""), 0.4;
  Matrix norm = min_normalize(with_nan);
  CHECK(norm(0, 0) == 0.0);
  CHECK(std::isnan(norm(0, 1)));
  CHECK(norm(0, 2) == doctest::Approx(0.25).epsilon(1e-12));

  Matrix bad(1, 2);
  bad << 1.0, 1.0;
  try {
    min_normalize(bad);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateRow);
  }
}

TEST_CASE("studentisation gives zero-mean unit-sd rows") {
  Matrix errors(1, 2);
  errors << 0.2, 0.4;
  StudentisedTable tab = studentise(errors);
  CHECK(tab.values(0, 0) == doctest::Approx(-0.7071068).epsilon(1e-6));
  CHECK(tab.values(0, 1) == doctest::Approx(0.7071068).epsilon(1e-6));
  CHECK_FALSE(tab.degenerate_rows[0]);

  Rng rng(37u);
  Matrix wide(4, 6);
  for (Index d = 0; d < 4; ++d) {
    for (Index m = 0; m < 6; ++m) wide(d, m) = rng.uniform01();
  }
  StudentisedTable t2 = studentise(wide);
  for (Index d = 0; d < 4; ++d) {
    CHECK(std::fabs(t2.values.row(d).mean()) <= 1e-12);
    const double sd = std::sqrt(
        (t2.values.row(d).array() - t2.values.row(d).mean()).square().sum() /
        5.0);
    CHECK(std::fabs(sd - 1.0) <= 1e-12);
  }
  StudentisedTable shifted = studentise(wide.array() + 0.37);
  CHECK((shifted.values - t2.values).cwiseAbs().maxCoeff() <= 1e-12);

  Matrix flat(1, 3);
  flat << 0.3, 0.3, 0.3;
  StudentisedTable t3 = studentise(flat);
  CHECK(t3.degenerate_rows[0]);
  CHECK(t3.values.row(0).cwiseAbs().maxCoeff() == 0.0);

  try {
    studentise(Matrix::Zero(2, 1));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroVariance);
  }
}

TEST_CASE("pairwise wins count strict improvements only") {
  Matrix table(162, 2);
  for (Index d = 0; d < 75; ++d) {
    table(d, 0) = 0.1;
    table(d, 1) = 0.2;
  }
  for (Index d = 75; d < 154; ++d) {
    table(d, 0) = 0.3;
    table(d, 1) = 0.2;
  }
  for (Index d = 154; d < 162; ++d) {
    table(d, 0) = 0.25;
    table(d, 1) = 0.25;
  }
  Eigen::MatrixXi wins = pairwise_wins(table);
  CHECK(wins(0, 1) == 75);
  CHECK(wins(1, 0) == 79);
  CHECK(wins(0, 1) + wins(1, 0) + 8 == 162);
  CHECK(wins(0, 0) == 0);

  Matrix same(5, 3);
  same.setConstant(0.2);
  CHECK(pairwise_wins(same).cwiseAbs().maxCoeff() == 0);

  Matrix hand(3, 3);
  hand << 0.1, 0.2, 0.3, 0.2, 0.1, 0.3, 0.1, 0.1, 0.2;
  Eigen::MatrixXi w = pairwise_wins(hand);
  CHECK(w(0, 1) == 1);
  CHECK(w(1, 0) == 1);
  CHECK(w(0, 2) == 3);
  CHECK(w(2, 0) == 0);
  CHECK(w(1, 2) == 3);
  CHECK(w(2, 1) == 0);
}

TEST_CASE("dataset statistics capture shape, balance, and difficulty") {
  Rng rng(38u);
  Dataset easy;
  easy.X.resize(60, 3);
  easy.y.resize(60);
  for (Index i = 0; i < 60; ++i) {
    easy.y[i] = 1 + static_cast<int>(i % 2);  // exactly 30 per class
    for (Index j = 0; j < 3; ++j) {
      easy.X(i, j) = rng.normal() + (j == 0 ? 50.0 * (easy.y[i] - 1) : 0.0);
    }
  }
  validate(easy);
  DatasetStats st = dataset_stats(easy, 4u);
  CHECK(st.p == 3);
  CHECK(st.n == 60);
  CHECK(st.num_classes == 2);
  CHECK(st.binary_proportion == 0.0);
  CHECK(st.imbalance == 0.0);
  CHECK(st.complexity == 0.0);  // NC solves it, so it is the row minimum

  Dataset binary;
  binary.X.resize(40, 2);
  binary.y.resize(40);
  for (Index i = 0; i < 40; ++i) {
    binary.y[i] = i < 30 ? 1 : 2;  // 3:1 imbalance
    binary.X(i, 0) = static_cast<double>(rng.below(2));
    binary.X(i, 1) = static_cast<double>(rng.below(2));
  }
  binary.column_kind = {ColumnKind::binary_ohe, ColumnKind::binary_ohe};
  validate(binary);
  DatasetStats bs = dataset_stats(binary, 4u);
  CHECK(bs.binary_proportion == 1.0);
  CHECK(bs.imbalance == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(bs.complexity >= 0.0);
}

TEST_CASE("stats regression matches a pseudo-inverse oracle") {
  Rng rng(39u);
  const Index n = 12;
  std::vector<DatasetStats> stats;
  for (Index i = 0; i < n; ++i) {
    DatasetStats s;
    s.p = 2 + static_cast<Index>(rng.below(40));
    s.n = 50 + static_cast<Index>(rng.below(1000));
    s.binary_proportion = rng.uniform01();
    s.imbalance = rng.uniform01() * 0.2;
    s.num_classes = 2 + static_cast<int>(rng.below(6));
    s.complexity = rng.uniform01();
    stats.push_back(s);
  }
  Vector response(n);
  for (Index i = 0; i < n; ++i) response[i] = rng.normal();

  Vector coef = stats_regression(stats, response);
  REQUIRE(coef.size() == 7);

  // rebuild the standardized design independently and solve by SVD
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
  for (Index j = 1; j < 7; ++j) {
    const double mean = X.col(j).mean();
    X.col(j) /= std::sqrt((X.col(j).array() - mean).square().sum() /
                          static_cast<double>(n));
  }
  Vector oracle = X.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                      .solve(response);
  CHECK((coef - oracle).cwiseAbs().maxCoeff() <= 1e-9);

  // an exactly linear response is recovered with near-zero residuals
  Vector beta(7);
  beta << 0.3, -1.0, 0.5, 2.0, -0.7, 0.1, 1.4;
  Vector linear = X * beta;
  Vector fitted = stats_regression(stats, linear);
  CHECK((fitted - beta).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((X * fitted - linear).cwiseAbs().maxCoeff() <= 1e-10);

  // duplicating every dataset leaves the coefficients unchanged
  std::vector<DatasetStats> doubled = stats;
  doubled.insert(doubled.end(), stats.begin(), stats.end());
  Vector resp2(2 * n);
  resp2 << response, response;
  Vector coef2 = stats_regression(doubled, resp2);
  CHECK((coef2 - coef).cwiseAbs().maxCoeff() <= 1e-10);

  try {
    stats_regression(
        std::vector<DatasetStats>(stats.begin(), stats.begin() + 6),
        response.head(6));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RankDeficient);
  }
  std::vector<DatasetStats> collinear = stats;
  for (DatasetStats& s : collinear) s.imbalance = 2.0 * s.binary_proportion;
  try {
    stats_regression(collinear, response);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RankDeficient);
  }
}

TEST_CASE("report files: long csv and json summary") {
  Rng rng(40u);
  std::vector<BenchmarkDataset> data;
  data.push_back({"alpha", gaussian_classes(rng, 50, 2, 2, 4.0)});
  RunOptions opts;
  opts.repeats = 2;
  opts.record_timing = false;
  ExperimentReport rep =
      run_experiment(data, {Method::nc, Method::nn1}, opts);

  const std::string path = "/tmp/opnb_report_test.csv";
  write_report_csv(rep, path);
  std::string text = slurp(path);
  std::istringstream lines(text);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 1 + 1 * 2 * 2);
  CHECK(text.rfind("dataset,method,repeat,error,hyperparams,seconds", 0) == 0);
  CHECK(text.find("alpha,nc,0,") != std::string::npos);
  CHECK(text.find("alpha,1nn,1,") != std::string::npos);
  std::remove(path.c_str());

  nlohmann::json j = nlohmann::json::parse(report_summary_json(rep));
  CHECK(j["datasets"] == std::vector<std::string>{"alpha"});
  CHECK(j["methods"] == std::vector<std::string>{"nc", "1nn"});
  CHECK(j["repeats"] == 2);
  REQUIRE(j["pairwise_wins"].size() == 2);
  const Matrix avg = average_errors(rep);
  CHECK(j["average_errors"][0][0] == avg(0, 0));
  CHECK(j["min_normalized"][0][0].is_number());
  CHECK(j["studentised"][0].size() == 2);
  CHECK(j["failures"].empty());
}
