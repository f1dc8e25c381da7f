// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/model.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "json_io.hpp"
#include "opnb/fastsum.hpp"
#include "opnb/lbfgs.hpp"
#include "opnb/projection.hpp"
#include "opnb/rng.hpp"

namespace opnb {

namespace {

using detail::json;
using detail::mat_from_json;
using detail::mat_to_json;
using detail::vec_from_json;
using detail::vec_to_json;

// per-column sd, divisor n-1; degenerate columns get scale 1 so they pass
// through unchanged
Vector column_sds(const Matrix& X) {
  const Index n = X.rows();
  Vector s = Vector::Ones(X.cols());
  if (n < 2) return s;
  for (Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    const double ss = (X.col(j).array() - mean).square().sum() /
                      static_cast<double>(n - 1);
    const double sd = std::sqrt(ss);
    if (std::isfinite(sd) && sd > 0.0) s[j] = sd;
  }
  return s;
}

Matrix initial_v(const Dataset& ds, const Matrix& Xs, const OPNBConfig& config,
                 int restart, int p_prime) {
  if (restart == 0) {
    switch (config.init) {
      case InitKind::pca:
        return pca_init(Xs, p_prime);
      case InitKind::random:
        return random_init(derive_seed(config.seed, 0),
                           static_cast<int>(ds.p()), p_prime);
      case InitKind::explicit_v:
        if (config.init_v.rows() != ds.p() ||
            config.init_v.cols() != p_prime) {
          fail(Errc::DimensionMismatch, "init_v has the wrong shape");
        }
        return config.init_v;
    }
  }
  return random_init(derive_seed(config.seed, static_cast<std::uint64_t>(restart)),
                     static_cast<int>(ds.p()), p_prime);
}

}  // namespace

TrainedOPNBModel fit(const Dataset& ds, const OPNBConfig& config) {
  if (ds.X.rows() != ds.y.size() || ds.n() == 0) {
    fail(Errc::DimensionMismatch, "fit: rows and labels disagree");
  }
  const Index n = ds.n();
  const Index p = ds.p();
  const ClassPriors priors = class_priors(ds);
  const int p_prime = config.init == InitKind::explicit_v
                          ? static_cast<int>(config.init_v.cols())
                          : config.resolve_p_prime(p);

  const Vector scales = column_sds(ds.X);
  Matrix Xs = ds.X;
  for (Index j = 0; j < p; ++j) Xs.col(j) /= scales[j];
  const Matrix C = penalty_matrix(config.penalty, Xs, ds.y);

  auto fg = [&](const Vector& v, Vector& g) -> double {
    const Eigen::Map<const Matrix> V(v.data(), p, p_prime);
    g.resize(v.size());
    const Matrix Z = Xs * V;
    if (!Z.allFinite()) {
      g.setZero();
      return std::numeric_limits<double>::infinity();
    }
    const LikelihoodParts parts =
        likelihood_parts(Z, ds.y, priors, config.kernel, config.binning);
    const Matrix Gz =
        gradient_z(Z, ds.y, priors, config.kernel, config.binning, parts);
    const Matrix Gv = gradient_v(Xs, Gz, V, config.lambda, C);
    Eigen::Map<Matrix>(g.data(), p, p_prime) = -Gv;
    return -(parts.loglik / static_cast<double>(n) -
             config.lambda * (V.transpose() * C * V).trace());
  };

  LbfgsOptions opts;
  opts.max_iterations = config.max_iterations;
  opts.gradient_tolerance = config.gradient_tolerance;

  const int runs = std::max(1, config.n_restarts);
  LbfgsResult best;
  bool have_best = false;
  for (int r = 0; r < runs; ++r) {
    const Matrix V0 = initial_v(ds, Xs, config, r, p_prime);
    const Vector v0 = Eigen::Map<const Vector>(V0.data(), V0.size());
    LbfgsResult res = lbfgs_minimize(fg, v0, opts);
    if (!have_best || res.f < best.f) {
      best = std::move(res);
      have_best = true;
    }
  }

  TrainedOPNBModel model;
  model.V = Eigen::Map<const Matrix>(best.x.data(), p, p_prime);
  model.column_scales = scales;
  model.priors = priors;
  model.kernel = config.kernel;
  model.line_search_warning = best.line_search_failed;
  model.final_objective = -best.f;
  model.objective_trace.reserve(best.trace.size());
  for (double f : best.trace) model.objective_trace.push_back(-f);
  model.config = config;
  model.config.p_prime = p_prime;

  model.class_names = ds.class_names;
  const int K = priors.num_classes();
  if (static_cast<int>(model.class_names.size()) != K) {
    model.class_names.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      model.class_names[static_cast<std::size_t>(k)] = std::to_string(k + 1);
    }
  }

  const Matrix Z = Xs * model.V;
  model.class_z.resize(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const std::vector<Index> rows = class_rows(ds, k);
    Matrix& Zk = model.class_z[static_cast<std::size_t>(k - 1)];
    Zk.resize(static_cast<Index>(rows.size()), p_prime);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      Zk.row(static_cast<Index>(j)) = Z.row(rows[j]);
    }
  }
  return model;
}

Matrix posterior_from_z(const TrainedOPNBModel& model, const Matrix& Z_new) {
  if (Z_new.cols() != model.p_prime()) {
    fail(Errc::DimensionMismatch, "posterior: projected width mismatch");
  }
  const Index m = Z_new.rows();
  const int K = model.num_classes();
  Matrix post(m, K);
  if (m == 0) return post;

  Matrix score(m, K);
  for (int k = 0; k < K; ++k) {
    const Matrix& Zk = model.class_z[static_cast<std::size_t>(k)];
    const double w = 1.0 / (static_cast<double>(Zk.rows()) * model.kernel.h);
    const Vector weights = Vector::Constant(Zk.rows(), w);
    score.col(k).setConstant(std::log(model.priors.pi[k]));
    for (Index d = 0; d < model.p_prime(); ++d) {
      const Vector f =
          fast_kernel_sums(model.kernel, Zk.col(d), weights, Z_new.col(d));
      for (Index i = 0; i < m; ++i) {
        score(i, k) +=
            f[i] > kDensityFloor ? std::log(f[i]) : kLogDensityFloor;
      }
    }
  }
  for (Index i = 0; i < m; ++i) {
    const double mx = score.row(i).maxCoeff();
    double denom = 0.0;
    for (int k = 0; k < K; ++k) {
      post(i, k) = std::exp(score(i, k) - mx);
      denom += post(i, k);
    }
    post.row(i) /= denom;
  }
  return post;
}

Matrix posterior(const TrainedOPNBModel& model, const Matrix& X_new) {
  if (X_new.cols() != model.p()) {
    fail(Errc::DimensionMismatch,
         "posterior: model expects " + std::to_string(model.p()) +
             " columns, got " + std::to_string(X_new.cols()));
  }
  Matrix Xs = X_new;
  for (Index j = 0; j < Xs.cols(); ++j) Xs.col(j) /= model.column_scales[j];
  return posterior_from_z(model, Xs * model.V);
}

IntVector predict(const TrainedOPNBModel& model, const Matrix& X_new) {
  const Matrix post = posterior(model, X_new);
  IntVector labels(post.rows());
  for (Index i = 0; i < post.rows(); ++i) {
    int arg = 0;
    for (int k = 1; k < post.cols(); ++k) {
      if (post(i, k) > post(i, arg)) arg = k;
    }
    labels[i] = arg + 1;
  }
  return labels;
}

void save_model(const TrainedOPNBModel& model, const std::string& path) {
  json j;
  j["format"] = "opnb-model";
  j["version"] = 1;
  j["kind"] = "opnb";
  j["p"] = model.p();
  j["p_prime"] = model.p_prime();
  j["v"] = mat_to_json(model.V);
  j["column_scales"] = vec_to_json(model.column_scales);
  j["priors"] = vec_to_json(model.priors.pi);
  j["kernel_h"] = model.kernel.h;
  j["class_names"] = model.class_names;
  json zs = json::array();
  for (const Matrix& Zk : model.class_z) zs.push_back(mat_to_json(Zk));
  j["class_z"] = std::move(zs);
  j["objective_trace"] = model.objective_trace;
  j["final_objective"] = model.final_objective;
  j["line_search_warning"] = model.line_search_warning;
  j["config"] = {{"p_prime", model.config.p_prime},
                 {"lambda", model.config.lambda},
                 {"penalty", penalty_to_string(model.config.penalty)},
                 {"init", init_to_string(model.config.init)},
                 {"seed", model.config.seed},
                 {"n_restarts", model.config.n_restarts},
                 {"binning", model.config.binning.enabled},
                 {"bins", model.config.binning.bins},
                 {"max_iterations", model.config.max_iterations},
                 {"gradient_tolerance", model.config.gradient_tolerance}};

  detail::save_json_file(j, path);
}

TrainedOPNBModel load_model(const std::string& path) {
  const json j = detail::load_json_file(path);
  try {
    if (j.at("format") != "opnb-model" || j.at("kind") != "opnb") {
      fail(Errc::ParseError, path + ": not an opnb model file");
    }
    TrainedOPNBModel model;
    const Index p = j.at("p").get<Index>();
    const Index pp = j.at("p_prime").get<Index>();
    model.V = mat_from_json(j.at("v"), pp);
    if (model.V.rows() != p) {
      fail(Errc::ParseError, path + ": projection shape mismatch");
    }
    model.column_scales = vec_from_json(j.at("column_scales"));
    model.priors.pi = vec_from_json(j.at("priors"));
    model.kernel.h = j.at("kernel_h").get<double>();
    model.class_names =
        j.at("class_names").get<std::vector<std::string>>();
    for (const json& zk : j.at("class_z")) {
      model.class_z.push_back(mat_from_json(zk, pp));
    }
    model.objective_trace =
        j.at("objective_trace").get<std::vector<double>>();
    model.final_objective = j.at("final_objective").get<double>();
    model.line_search_warning = j.at("line_search_warning").get<bool>();
    const json& c = j.at("config");
    model.config.p_prime = c.at("p_prime").get<int>();
    model.config.lambda = c.at("lambda").get<double>();
    model.config.penalty = penalty_from_string(c.at("penalty"));
    model.config.init = init_from_string(c.at("init"));
    model.config.seed = c.at("seed").get<std::uint64_t>();
    model.config.n_restarts = c.at("n_restarts").get<int>();
    model.config.binning.enabled = c.at("binning").get<bool>();
    model.config.binning.bins = c.at("bins").get<int>();
    model.config.max_iterations = c.at("max_iterations").get<int>();
    model.config.gradient_tolerance =
        c.at("gradient_tolerance").get<double>();
    return model;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
}

std::string model_kind(const std::string& path) {
  const json j = detail::load_json_file(path);
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    fail(Errc::ParseError, path + ": no model kind field");
  }
  return j.at("kind").get<std::string>();
}

}  // namespace opnb
