// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/baselines.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "opnb/kern/kernels.hpp"

namespace opnb {

namespace {

using detail::json;
using detail::mat_from_json;
using detail::mat_to_json;
using detail::vec_from_json;
using detail::vec_to_json;

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

std::vector<Matrix> gather_class_rows(const Dataset& ds) {
  const int K = ds.num_classes();
  std::vector<Matrix> out(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const std::vector<Index> rows = class_rows(ds, k);
    Matrix& M = out[static_cast<std::size_t>(k - 1)];
    M.resize(static_cast<Index>(rows.size()), ds.p());
    for (std::size_t j = 0; j < rows.size(); ++j) {
      M.row(static_cast<Index>(j)) = ds.X.row(rows[j]);
    }
  }
  return out;
}

std::vector<std::string> names_or_default(const Dataset& ds, int K) {
  if (static_cast<int>(ds.class_names.size()) == K) return ds.class_names;
  std::vector<std::string> names(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    names[static_cast<std::size_t>(k)] = std::to_string(k + 1);
  }
  return names;
}

// softmax per row, in place; rows sum to 1 exactly up to the final division
void scores_to_posterior(Matrix& score) {
  for (Index i = 0; i < score.rows(); ++i) {
    const double mx = score.row(i).maxCoeff();
    double denom = 0.0;
    for (Index k = 0; k < score.cols(); ++k) {
      score(i, k) = std::exp(score(i, k) - mx);
      denom += score(i, k);
    }
    score.row(i) /= denom;
  }
}

IntVector argmax_labels(const Matrix& post) {
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

Matrix class_mean_matrix(const std::vector<Matrix>& class_rows_v, Index p) {
  Matrix means(static_cast<Index>(class_rows_v.size()), p);
  for (std::size_t k = 0; k < class_rows_v.size(); ++k) {
    means.row(static_cast<Index>(k)) = class_rows_v[k].colwise().mean();
  }
  return means;
}

// ML covariance of one class block, divisor n_k
Matrix ml_covariance(const Matrix& rows) {
  const Matrix centered = rows.rowwise() - rows.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(rows.rows());
}

// shared jitter rule: ridge of 1e-8 trace/p
void add_jitter(Matrix& C) {
  const double tau = 1e-8 * C.trace() / static_cast<double>(C.rows());
  C.diagonal().array() += tau;
}

}  // namespace

double silverman_bandwidth(const Vector& values) {
  const Index n = values.size();
  if (n < 2) fail(Errc::DegenerateSample, "silverman: need at least 2 values");
  const double mean = values.mean();
  const double ss =
      (values.array() - mean).square().sum() / static_cast<double>(n - 1);
  const double sd = std::sqrt(ss);
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    fail(Errc::DegenerateSample, "silverman: zero standard deviation");
  }
  return std::pow(4.0 / 3.0, 0.2) * sd *
         std::pow(static_cast<double>(n), -0.2);
}

NBKDEModel fit_nb(const Dataset& ds, const NBBandwidthConfig& bw) {
  if (!(bw.alpha > 0.0) || !(bw.gamma > 0.0)) {
    fail(Errc::ParseError, "nb: bandwidths must be positive");
  }
  NBKDEModel model;
  model.priors = class_priors(ds);
  model.class_rows = gather_class_rows(ds);
  model.column_kind = ds.column_kind;
  model.class_names = names_or_default(ds, model.num_classes());

  const int K = model.num_classes();
  model.bandwidth.resize(K, ds.p());
  for (Index d = 0; d < ds.p(); ++d) {
    if (ds.column_kind[static_cast<std::size_t>(d)] ==
        ColumnKind::binary_ohe) {
      model.bandwidth.col(d).setConstant(bw.alpha);
      continue;
    }
    for (int k = 0; k < K; ++k) {
      model.bandwidth(k, d) =
          bw.gamma *
          silverman_bandwidth(model.class_rows[static_cast<std::size_t>(k)].col(d));
    }
  }
  return model;
}

Matrix posterior_nb(const NBKDEModel& model, const Matrix& X_new) {
  if (X_new.cols() != model.p()) {
    fail(Errc::DimensionMismatch,
         "nb posterior: model expects " + std::to_string(model.p()) +
             " columns, got " + std::to_string(X_new.cols()));
  }
  const Index m = X_new.rows();
  const int K = model.num_classes();
  Matrix score(m, K);
  if (m == 0) return score;
  Vector acc(m);
  for (int k = 0; k < K; ++k) {
    const Matrix& rows = model.class_rows[static_cast<std::size_t>(k)];
    const double nk = static_cast<double>(rows.rows());
    score.col(k).setConstant(std::log(model.priors.pi[k]));
    for (Index d = 0; d < model.p(); ++d) {
      const double h = model.bandwidth(k, d);
      kern::ops().gauss_accum(X_new.col(d).data(),
                              static_cast<std::size_t>(m), rows.col(d).data(),
                              static_cast<std::size_t>(rows.rows()), 1.0 / h,
                              acc.data());
      const double log_norm = std::log(nk * h) + kLogSqrt2Pi;
      for (Index i = 0; i < m; ++i) {
        const double f = acc[i];
        score(i, k) += f > kDensityFloor ? std::log(f) - log_norm
                                         : kLogDensityFloor;
      }
    }
  }
  scores_to_posterior(score);
  return score;
}

IntVector predict_nb(const NBKDEModel& model, const Matrix& X_new) {
  return argmax_labels(posterior_nb(model, X_new));
}

KDDAModel fit_kdda(const Dataset& ds, double alpha, double gamma) {
  if (!(alpha > 0.0) || !(gamma > 0.0)) {
    fail(Errc::ParseError, "kdda: bandwidths must be positive");
  }
  KDDAModel model;
  model.priors = class_priors(ds);
  model.class_rows = gather_class_rows(ds);
  model.class_names = names_or_default(ds, model.num_classes());

  Index p_c = 0;
  for (ColumnKind kind : ds.column_kind) {
    if (kind == ColumnKind::continuous) ++p_c;
  }
  const int K = model.num_classes();
  model.bandwidth.resize(K, ds.p());
  for (int k = 0; k < K; ++k) {
    const Matrix& rows = model.class_rows[static_cast<std::size_t>(k)];
    const double nk = static_cast<double>(rows.rows());
    const double factor =
        p_c > 0 ? gamma * std::pow(4.0 / (nk * (static_cast<double>(p_c) + 2.0)),
                                   1.0 / (static_cast<double>(p_c) + 4.0))
                : 0.0;
    for (Index d = 0; d < ds.p(); ++d) {
      if (ds.column_kind[static_cast<std::size_t>(d)] ==
          ColumnKind::binary_ohe) {
        model.bandwidth(k, d) = alpha;
        continue;
      }
      const double mean = rows.col(d).mean();
      const double sd =
          std::sqrt((rows.col(d).array() - mean).square().sum() / nk);
      const double h = factor * sd;
      if (!(h > 0.0) || !std::isfinite(h)) {
        fail(Errc::DegenerateSample,
             "kdda: degenerate class sd in column " + std::to_string(d));
      }
      model.bandwidth(k, d) = h;
    }
  }
  return model;
}

Matrix posterior_kdda(const KDDAModel& model, const Matrix& X_new) {
  if (X_new.cols() != model.p()) {
    fail(Errc::DimensionMismatch,
         "kdda posterior: model expects " + std::to_string(model.p()) +
             " columns, got " + std::to_string(X_new.cols()));
  }
  const Index m = X_new.rows();
  const Index p = model.p();
  const int K = model.num_classes();
  Matrix score(m, K);
  if (m == 0) return score;

  const Matrix Xt = X_new.transpose();
  const auto& ops = kern::ops();
  Vector d2;
  for (int k = 0; k < K; ++k) {
    const Matrix Ct = model.class_rows[static_cast<std::size_t>(k)].transpose();
    const Index nk = Ct.cols();
    const Vector inv_h = model.bandwidth.row(k).transpose().cwiseInverse();
    double log_norm = std::log(static_cast<double>(nk)) +
                      static_cast<double>(p) * kLogSqrt2Pi;
    for (Index d = 0; d < p; ++d) log_norm += std::log(model.bandwidth(k, d));

    d2.resize(nk);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < nk; ++j) {
        d2[j] = -0.5 * ops.sq_l2_scaled(Xt.col(i).data(), Ct.col(j).data(),
                                        inv_h.data(),
                                        static_cast<std::size_t>(p));
      }
      const double mx = d2.maxCoeff();
      const double sum =
          ops.exp_sum_shifted(d2.data(), static_cast<std::size_t>(nk), mx);
      const double logf = mx + std::log(sum) - log_norm;
      score(i, k) = std::log(model.priors.pi[k]) +
                    (logf > kLogDensityFloor ? logf : kLogDensityFloor);
    }
  }
  scores_to_posterior(score);
  return score;
}

IntVector predict_kdda(const KDDAModel& model, const Matrix& X_new) {
  return argmax_labels(posterior_kdda(model, X_new));
}

LDAModel fit_lda(const Dataset& ds, int r) {
  const int K = ds.num_classes();
  const Index p = ds.p();
  if (K < 2) fail(Errc::DimensionMismatch, "lda: needs at least two classes");
  const int r_max = static_cast<int>(std::min<Index>(p, K - 1));
  if (r < 1 || r > r_max) {
    fail(Errc::DimensionMismatch, "lda: discriminant dimension out of range");
  }

  LDAModel model;
  model.priors = class_priors(ds);
  model.class_names = names_or_default(ds, K);
  const std::vector<Matrix> rows = gather_class_rows(ds);
  model.means = class_mean_matrix(rows, p);

  Matrix Sw = Matrix::Zero(p, p);
  for (int k = 0; k < K; ++k) {
    Sw += model.priors.pi[k] * ml_covariance(rows[static_cast<std::size_t>(k)]);
  }
  add_jitter(Sw);
  Eigen::SelfAdjointEigenSolver<Matrix> es(Sw);
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0)) {
    fail(Errc::SingularCovariance, "lda: pooled covariance not invertible");
  }
  model.whiten = es.operatorInverseSqrt();

  const Vector grand = model.means.transpose() * model.priors.pi;
  Matrix B = Matrix::Zero(p, p);
  for (int k = 0; k < K; ++k) {
    const Vector mw =
        model.whiten * (model.means.row(k).transpose() - grand);
    B += model.priors.pi[k] * mw * mw.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eb(B);
  if (eb.info() != Eigen::Success) {
    fail(Errc::SingularCovariance, "lda: between-class scatter decomposition failed");
  }
  model.basis.resize(p, r);
  for (int c = 0; c < r; ++c) {
    Vector v = eb.eigenvectors().col(p - 1 - c);
    Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    model.basis.col(c) = v;
  }
  return model;
}

Matrix posterior_lda(const LDAModel& model, const Matrix& X_new) {
  if (X_new.cols() != model.p()) {
    fail(Errc::DimensionMismatch,
         "lda posterior: model expects " + std::to_string(model.p()) +
             " columns, got " + std::to_string(X_new.cols()));
  }
  const Matrix proj = model.basis.transpose() * model.whiten;  // r x p
  const Matrix Tnew = X_new * proj.transpose();                // m x r
  const Matrix Tmeans = model.means * proj.transpose();        // K x r
  const Index m = X_new.rows();
  const int K = model.num_classes();
  Matrix score(m, K);
  for (Index i = 0; i < m; ++i) {
    for (int k = 0; k < K; ++k) {
      score(i, k) = std::log(model.priors.pi[k]) -
                    0.5 * (Tnew.row(i) - Tmeans.row(k)).squaredNorm();
    }
  }
  scores_to_posterior(score);
  return score;
}

IntVector predict_lda(const LDAModel& model, const Matrix& X_new) {
  return argmax_labels(posterior_lda(model, X_new));
}

RDAModel fit_rda(const Dataset& ds, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    fail(Errc::ParseError, "rda: lambda outside [0, 1]");
  }
  const int K = ds.num_classes();
  const Index p = ds.p();
  RDAModel model;
  model.lambda = lambda;
  model.priors = class_priors(ds);
  model.class_names = names_or_default(ds, K);
  const std::vector<Matrix> rows = gather_class_rows(ds);
  model.means = class_mean_matrix(rows, p);

  std::vector<Matrix> Sk(static_cast<std::size_t>(K));
  Matrix Sw = Matrix::Zero(p, p);
  for (int k = 0; k < K; ++k) {
    Sk[static_cast<std::size_t>(k)] =
        ml_covariance(rows[static_cast<std::size_t>(k)]);
    Sw += model.priors.pi[k] * Sk[static_cast<std::size_t>(k)];
  }

  model.cov.resize(static_cast<std::size_t>(K));
  model.chol.resize(static_cast<std::size_t>(K));
  model.logdet.resize(K);
  for (int k = 0; k < K; ++k) {
    Matrix C =
        lambda * Sk[static_cast<std::size_t>(k)] + (1.0 - lambda) * Sw;
    add_jitter(C);
    Eigen::LLT<Matrix> llt(C);
    if (llt.info() != Eigen::Success) {
      fail(Errc::SingularCovariance,
           "rda: class covariance not positive definite");
    }
    model.cov[static_cast<std::size_t>(k)] = C;
    model.chol[static_cast<std::size_t>(k)] = llt.matrixL();
    double ld = 0.0;
    for (Index i = 0; i < p; ++i) {
      ld += std::log(model.chol[static_cast<std::size_t>(k)](i, i));
    }
    model.logdet[k] = 2.0 * ld;
  }
  return model;
}

Matrix posterior_rda(const RDAModel& model, const Matrix& X_new) {
  if (X_new.cols() != model.p()) {
    fail(Errc::DimensionMismatch,
         "rda posterior: model expects " + std::to_string(model.p()) +
             " columns, got " + std::to_string(X_new.cols()));
  }
  const Index m = X_new.rows();
  const int K = model.num_classes();
  Matrix score(m, K);
  for (int k = 0; k < K; ++k) {
    const Matrix D =
        (X_new.rowwise() - model.means.row(k)).transpose();  // p x m
    const Matrix Z = model.chol[static_cast<std::size_t>(k)]
                         .triangularView<Eigen::Lower>()
                         .solve(D);
    const double base = std::log(model.priors.pi[k]) - 0.5 * model.logdet[k];
    for (Index i = 0; i < m; ++i) {
      score(i, k) = base - 0.5 * Z.col(i).squaredNorm();
    }
  }
  scores_to_posterior(score);
  return score;
}

IntVector predict_rda(const RDAModel& model, const Matrix& X_new) {
  return argmax_labels(posterior_rda(model, X_new));
}

IntVector predict_nc(const Dataset& train, const Matrix& X_new) {
  if (X_new.cols() != train.p()) {
    fail(Errc::DimensionMismatch, "nc: column count mismatch");
  }
  const int K = train.num_classes();
  const std::vector<Matrix> rows = gather_class_rows(train);
  const Matrix Ct = class_mean_matrix(rows, train.p()).transpose();  // p x K
  const Matrix Xt = X_new.transpose();
  const auto& ops = kern::ops();
  IntVector labels(X_new.rows());
  for (Index i = 0; i < X_new.rows(); ++i) {
    int best = 0;
    double best_d = ops.sq_l2(Xt.col(i).data(), Ct.col(0).data(),
                              static_cast<std::size_t>(train.p()));
    for (int k = 1; k < K; ++k) {
      const double d = ops.sq_l2(Xt.col(i).data(), Ct.col(k).data(),
                                 static_cast<std::size_t>(train.p()));
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    labels[i] = best + 1;
  }
  return labels;
}

IntVector predict_1nn(const Dataset& train, const Matrix& X_new) {
  if (X_new.cols() != train.p()) {
    fail(Errc::DimensionMismatch, "1nn: column count mismatch");
  }
  const Matrix Tt = train.X.transpose();
  const Matrix Xt = X_new.transpose();
  const auto& ops = kern::ops();
  IntVector labels(X_new.rows());
  for (Index i = 0; i < X_new.rows(); ++i) {
    Index best = 0;
    double best_d = ops.sq_l2(Xt.col(i).data(), Tt.col(0).data(),
                              static_cast<std::size_t>(train.p()));
    for (Index j = 1; j < train.n(); ++j) {
      const double d = ops.sq_l2(Xt.col(i).data(), Tt.col(j).data(),
                                 static_cast<std::size_t>(train.p()));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    labels[i] = train.y[best];
  }
  return labels;
}

namespace {

json common_header(const char* kind, const ClassPriors& priors,
                   const std::vector<std::string>& names) {
  json j;
  j["format"] = "opnb-model";
  j["version"] = 1;
  j["kind"] = kind;
  j["priors"] = vec_to_json(priors.pi);
  j["class_names"] = names;
  return j;
}

void check_header(const json& j, const char* kind, const std::string& path) {
  if (!j.contains("format") || j.at("format") != "opnb-model" ||
      !j.contains("kind") || j.at("kind") != kind) {
    fail(Errc::ParseError, path + ": not a " + kind + " model file");
  }
}

json class_rows_to_json(const std::vector<Matrix>& rows) {
  json a = json::array();
  for (const Matrix& M : rows) a.push_back(mat_to_json(M));
  return a;
}

std::vector<Matrix> class_rows_from_json(const json& a, Index p) {
  std::vector<Matrix> rows;
  for (const json& m : a) rows.push_back(mat_from_json(m, p));
  return rows;
}

}  // namespace

void save_nb(const NBKDEModel& model, const std::string& path) {
  json j = common_header("nb", model.priors, model.class_names);
  j["p"] = model.p();
  j["bandwidth"] = mat_to_json(model.bandwidth);
  j["class_rows"] = class_rows_to_json(model.class_rows);
  json kinds = json::array();
  for (ColumnKind k : model.column_kind) {
    kinds.push_back(k == ColumnKind::binary_ohe ? "binary" : "continuous");
  }
  j["column_kind"] = std::move(kinds);
  detail::save_json_file(j, path);
}

NBKDEModel load_nb(const std::string& path) {
  const json j = detail::load_json_file(path);
  check_header(j, "nb", path);
  try {
    NBKDEModel model;
    const Index p = j.at("p").get<Index>();
    model.bandwidth = mat_from_json(j.at("bandwidth"), p);
    model.class_rows = class_rows_from_json(j.at("class_rows"), p);
    model.priors.pi = vec_from_json(j.at("priors"));
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    for (const json& k : j.at("column_kind")) {
      model.column_kind.push_back(k == "binary" ? ColumnKind::binary_ohe
                                                : ColumnKind::continuous);
    }
    return model;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
}

void save_kdda(const KDDAModel& model, const std::string& path) {
  json j = common_header("kdda", model.priors, model.class_names);
  j["p"] = model.p();
  j["bandwidth"] = mat_to_json(model.bandwidth);
  j["class_rows"] = class_rows_to_json(model.class_rows);
  detail::save_json_file(j, path);
}

KDDAModel load_kdda(const std::string& path) {
  const json j = detail::load_json_file(path);
  check_header(j, "kdda", path);
  try {
    KDDAModel model;
    const Index p = j.at("p").get<Index>();
    model.bandwidth = mat_from_json(j.at("bandwidth"), p);
    model.class_rows = class_rows_from_json(j.at("class_rows"), p);
    model.priors.pi = vec_from_json(j.at("priors"));
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    return model;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
}

void save_lda(const LDAModel& model, const std::string& path) {
  json j = common_header("lda", model.priors, model.class_names);
  j["p"] = model.p();
  j["r"] = model.rank();
  j["whiten"] = mat_to_json(model.whiten);
  j["basis"] = mat_to_json(model.basis);
  j["means"] = mat_to_json(model.means);
  detail::save_json_file(j, path);
}

LDAModel load_lda(const std::string& path) {
  const json j = detail::load_json_file(path);
  check_header(j, "lda", path);
  try {
    LDAModel model;
    const Index p = j.at("p").get<Index>();
    const Index r = j.at("r").get<Index>();
    model.whiten = mat_from_json(j.at("whiten"), p);
    model.basis = mat_from_json(j.at("basis"), r);
    model.means = mat_from_json(j.at("means"), p);
    model.priors.pi = vec_from_json(j.at("priors"));
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    return model;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
}

void save_rda(const RDAModel& model, const std::string& path) {
  json j = common_header("rda", model.priors, model.class_names);
  j["p"] = model.p();
  j["lambda"] = model.lambda;
  j["means"] = mat_to_json(model.means);
  j["cov"] = class_rows_to_json(model.cov);
  detail::save_json_file(j, path);
}

RDAModel load_rda(const std::string& path) {
  const json j = detail::load_json_file(path);
  check_header(j, "rda", path);
  try {
    RDAModel model;
    const Index p = j.at("p").get<Index>();
    model.lambda = j.at("lambda").get<double>();
    model.means = mat_from_json(j.at("means"), p);
    model.cov = class_rows_from_json(j.at("cov"), p);
    model.priors.pi = vec_from_json(j.at("priors"));
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    const int K = model.num_classes();
    model.chol.resize(static_cast<std::size_t>(K));
    model.logdet.resize(K);
    for (int k = 0; k < K; ++k) {
      Eigen::LLT<Matrix> llt(model.cov[static_cast<std::size_t>(k)]);
      if (llt.info() != Eigen::Success) {
        fail(Errc::SingularCovariance,
             path + ": stored covariance not positive definite");
      }
      model.chol[static_cast<std::size_t>(k)] = llt.matrixL();
      double ld = 0.0;
      for (Index i = 0; i < p; ++i) {
        ld += std::log(model.chol[static_cast<std::size_t>(k)](i, i));
      }
      model.logdet[k] = 2.0 * ld;
    }
    return model;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
}

}  // namespace opnb
