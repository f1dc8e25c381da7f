// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "opnb/baselines.hpp"
#include "opnb/dataset.hpp"
#include "opnb/harness.hpp"
#include "opnb/model.hpp"
#include "opnb/pipeline.hpp"
#include "opnb/projection.hpp"

namespace {

using namespace opnb;
using nlohmann::json;

constexpr const char* kToolVersion = "1.0.0";

json provenance(const std::string& command, std::uint64_t seed) {
  return {{"tool", "opnb"},
          {"version", kToolVersion},
          {"command", command},
          {"seed", seed}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(Errc::ParseError, path + ": cannot open for writing");
  out << text;
  if (!out.good()) fail(Errc::ParseError, path + ": write failed");
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

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end && begin < end;
}

// Feature-only table: every column numeric, an optional non-numeric first
// line is treated as a header.
Matrix read_matrix(const std::string& path, char delim) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, path + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    bool ok = true;
    while (std::getline(ss, field, delim)) {
      double v = 0.0;
      if (!parse_double(field, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (rows.empty() && lineno == 1) continue;  // header line
      fail(Errc::ParseError,
           path + ":" + std::to_string(lineno) + ": non-numeric field");
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      fail(Errc::ParseError, path + ":" + std::to_string(lineno) +
                                 ": expected " + std::to_string(width) +
                                 " fields, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(Errc::EmptyTable, path + ": no data rows");
  Matrix X(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      X(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return X;
}

std::string label_name(const std::vector<std::string>& names, int label) {
  if (label >= 1 && label <= static_cast<int>(names.size())) {
    return names[static_cast<std::size_t>(label - 1)];
  }
  return std::to_string(label);
}

int argmax_row(const Matrix& post, Index i) {
  int best = 0;
  for (int k = 1; k < post.cols(); ++k) {
    if (post(i, k) > post(i, best)) best = k;
  }
  return best;
}

double column_median(Vector v) {
  std::sort(v.data(), v.data() + v.size());
  const Index n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<BenchmarkDataset> load_corpus(const std::string& dir,
                                          const std::string& label_col) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (ec) fail(Errc::ParseError, dir + ": cannot list directory");
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(Errc::EmptyTable, dir + ": no csv files");
  CsvOptions opts;
  opts.label_col = label_col;
  std::vector<BenchmarkDataset> corpus;
  for (const fs::path& f : files) {
    corpus.push_back({f.stem().string(), read_csv(f.string(), opts)});
  }
  return corpus;
}

struct PreprocessArgs {
  std::string in, out, label_col;
  std::uint64_t seed = 0;
};

void cmd_preprocess(const PreprocessArgs& a) {
  CsvOptions opts;
  opts.label_col = a.label_col;
  const Dataset raw = read_csv(a.in, opts);
  PreprocessConfig cfg;
  cfg.seed = a.seed;
  const PreprocessResult res = preprocess(raw, cfg);
  write_csv(a.out, res.data);

  json j = provenance("preprocess", a.seed);
  j["config"] = {{"max_samples", cfg.max_samples},
                 {"min_class_size", cfg.min_class_size},
                 {"categorical_threshold", cfg.categorical_threshold},
                 {"perturbation_fraction", cfg.perturbation_fraction},
                 {"max_dimensions", cfg.max_dimensions}};
  j["info"] = json::parse(preprocess_info_json(res.info));
  write_text(a.out + ".json", j.dump(2) + "\n");

  std::cout << "rows " << raw.n() << " -> " << res.data.n() << ", columns "
            << raw.p() << " -> " << res.data.p() << ", classes "
            << raw.num_classes() << " -> " << res.data.num_classes()
            << ", dropped " << res.info.dropped_columns.size()
            << " columns\n";
}

struct FitArgs {
  std::string in, out, label_col;
  std::string method = "opnb";
  std::string penalty = "frobenius";
  double lambda = 0.001;
  bool lambda_given = false;
  double alpha = 0.3;
  double gamma = 1.0;
  int r = 0;
  int restarts = 1;
  int bins = 1000;
  std::uint64_t seed = 0;
};

void cmd_fit(const FitArgs& a) {
  CsvOptions opts;
  opts.label_col = a.label_col;
  const Dataset train = read_csv(a.in, opts);
  json hyper;
  if (a.method == "opnb") {
    OPNBConfig cfg;
    cfg.lambda = a.lambda;
    cfg.penalty = penalty_from_string(a.penalty);
    cfg.seed = a.seed;
    cfg.n_restarts = a.restarts;
    if (a.bins == 0) {
      cfg.binning.enabled = false;
    } else {
      cfg.binning.bins = a.bins;
    }
    const TrainedOPNBModel model = fit(train, cfg);
    save_model(model, a.out);
    hyper = {{"lambda", cfg.lambda},
             {"penalty", a.penalty},
             {"restarts", cfg.n_restarts},
             {"bins", a.bins}};
    std::cout << "fitted opnb on " << train.n() << " rows, objective "
              << format_double(model.final_objective) << ", wrote " << a.out
              << "\n";
  } else if (a.method == "nb") {
    save_nb(fit_nb(train, NBBandwidthConfig{a.alpha, a.gamma}), a.out);
    hyper = {{"alpha", a.alpha}, {"gamma", a.gamma}};
    std::cout << "fitted nb on " << train.n() << " rows, wrote " << a.out
              << "\n";
  } else if (a.method == "kdda") {
    save_kdda(fit_kdda(train, a.alpha, a.gamma), a.out);
    hyper = {{"alpha", a.alpha}, {"gamma", a.gamma}};
    std::cout << "fitted kdda on " << train.n() << " rows, wrote " << a.out
              << "\n";
  } else if (a.method == "lda") {
    const int rmax = std::max(
        1,
        static_cast<int>(std::min<Index>(train.p(), train.num_classes() - 1)));
    const int r = a.r > 0 ? a.r : rmax;
    save_lda(fit_lda(train, r), a.out);
    hyper = {{"r", r}};
    std::cout << "fitted lda on " << train.n() << " rows, wrote " << a.out
              << "\n";
  } else {  // rda; the blend weight defaults to 0.5 when --lambda is absent
    const double blend = a.lambda_given ? a.lambda : 0.5;
    save_rda(fit_rda(train, blend), a.out);
    hyper = {{"lambda", blend}};
    std::cout << "fitted rda on " << train.n() << " rows, wrote " << a.out
              << "\n";
  }
  json j = provenance("fit", a.seed);
  j["method"] = a.method;
  j["input"] = a.in;
  j["hyperparams"] = hyper;
  write_text(a.out + ".meta.json", j.dump(2) + "\n");
}

struct PredictArgs {
  std::string model, in, out, label_col;
  bool no_label = false;
  std::uint64_t seed = 0;
};

void cmd_predict(const PredictArgs& a) {
  Matrix X;
  if (a.no_label) {
    X = read_matrix(a.in, ',');
  } else {
    CsvOptions opts;
    opts.label_col = a.label_col;
    X = read_csv(a.in, opts).X;
  }

  const std::string kind = model_kind(a.model);
  Matrix post;
  std::vector<std::string> names;
  if (kind == "opnb") {
    const TrainedOPNBModel m = load_model(a.model);
    post = posterior(m, X);
    names = m.class_names;
  } else if (kind == "nb") {
    const NBKDEModel m = load_nb(a.model);
    post = posterior_nb(m, X);
    names = m.class_names;
  } else if (kind == "kdda") {
    const KDDAModel m = load_kdda(a.model);
    post = posterior_kdda(m, X);
    names = m.class_names;
  } else if (kind == "lda") {
    const LDAModel m = load_lda(a.model);
    post = posterior_lda(m, X);
    names = m.class_names;
  } else if (kind == "rda") {
    const RDAModel m = load_rda(a.model);
    post = posterior_rda(m, X);
    names = m.class_names;
  } else {
    fail(Errc::ParseError, a.model + ": unknown model kind '" + kind + "'");
  }

  std::ostringstream out;
  out << "prediction";
  for (int k = 0; k < post.cols(); ++k) {
    out << ",posterior_" << csv_field(label_name(names, k + 1));
  }
  out << "\n";
  for (Index i = 0; i < post.rows(); ++i) {
    out << csv_field(label_name(names, argmax_row(post, i) + 1));
    for (int k = 0; k < post.cols(); ++k) {
      out << ',' << format_double(post(i, k));
    }
    out << "\n";
  }
  write_text(a.out, out.str());

  json j = provenance("predict", a.seed);
  j["model"] = a.model;
  j["model_kind"] = kind;
  j["rows"] = post.rows();
  write_text(a.out + ".meta.json", j.dump(2) + "\n");
  std::cout << "wrote " << post.rows() << " predictions to " << a.out << "\n";
}

struct BenchmarkArgs {
  std::string corpus, out_dir, label_col;
  std::string methods = "opnb,nb,kdda,lda,rda,nc,1nn";
  int repeats = 10;
  int folds = 5;
  double train_frac = 0.75;
  std::uint64_t seed = 0;
  bool no_timing = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void cmd_benchmark(const BenchmarkArgs& a) {
  const std::vector<BenchmarkDataset> corpus =
      load_corpus(a.corpus, a.label_col);
  std::vector<Method> methods;
  for (const std::string& name : split_list(a.methods)) {
    methods.push_back(method_from_string(name));
  }
  RunOptions opts;
  opts.repeats = a.repeats;
  opts.folds = a.folds;
  opts.train_fraction = a.train_frac;
  opts.seed = a.seed;
  opts.record_timing = !a.no_timing;

  const ExperimentReport rep = run_experiment(corpus, methods, opts);
  for (std::size_t d = 0; d < rep.dataset_names.size(); ++d) {
    for (std::size_t m = 0; m < rep.methods.size(); ++m) {
      for (int r = 0; r < rep.repeats; ++r) {
        const CellResult& cell = rep.cells[d][m][static_cast<std::size_t>(r)];
        if (!cell.failure.empty()) {
          std::cerr << "warn: " << rep.dataset_names[d] << " "
                    << method_to_string(rep.methods[m]) << " repeat " << r
                    << ": " << cell.failure << "\n";
        }
      }
    }
  }

  std::filesystem::create_directories(a.out_dir);
  write_report_csv(rep, a.out_dir + "/report.csv");
  write_text(a.out_dir + "/summary.json", report_summary_json(rep) + "\n");
  json j = provenance("benchmark", a.seed);
  j["config"] = {{"methods", split_list(a.methods)},
                 {"repeats", a.repeats},
                 {"folds", a.folds},
                 {"train_fraction", a.train_frac},
                 {"timing", !a.no_timing}};
  j["datasets"] = rep.dataset_names;
  write_text(a.out_dir + "/meta.json", j.dump(2) + "\n");
  std::cout << "benchmarked " << corpus.size() << " datasets x "
            << methods.size() << " methods x " << a.repeats
            << " repeats, wrote " << a.out_dir << "/report.csv\n";
}

struct StatsArgs {
  std::string corpus, out, label_col;
  std::string summary, target_method = "opnb";
  std::uint64_t seed = 0;
};

void cmd_stats(const StatsArgs& a) {
  const std::vector<BenchmarkDataset> corpus =
      load_corpus(a.corpus, a.label_col);
  std::vector<DatasetStats> stats;
  json rows = json::array();
  for (const BenchmarkDataset& bd : corpus) {
    const DatasetStats st = dataset_stats(bd.data, a.seed);
    stats.push_back(st);
    rows.push_back({{"name", bd.name},
                    {"p", st.p},
                    {"n", st.n},
                    {"binary_proportion", st.binary_proportion},
                    {"imbalance", st.imbalance},
                    {"num_classes", st.num_classes},
                    {"complexity", st.complexity}});
  }

  json j = provenance("stats", a.seed);
  j["datasets"] = rows;
  j["regression"] = json::value_t::null;

  if (!a.summary.empty()) {
    std::ifstream in(a.summary);
    if (!in) fail(Errc::ParseError, a.summary + ": cannot open");
    json s;
    try {
      s = json::parse(in);
    } catch (const json::exception& e) {
      fail(Errc::ParseError, a.summary + ": " + e.what());
    }
    const std::vector<std::string> methods = s.at("methods");
    const auto mit =
        std::find(methods.begin(), methods.end(), a.target_method);
    if (mit == methods.end()) {
      fail(Errc::ParseError,
           a.summary + ": no method '" + a.target_method + "' in summary");
    }
    const Index col = static_cast<Index>(mit - methods.begin());
    const std::vector<std::string> names = s.at("datasets");
    const json avg = s.at("average_errors");
    Matrix errors(static_cast<Index>(names.size()),
                  static_cast<Index>(methods.size()));
    for (Index d = 0; d < errors.rows(); ++d) {
      for (Index m = 0; m < errors.cols(); ++m) {
        const json& cell = avg.at(static_cast<std::size_t>(d))
                               .at(static_cast<std::size_t>(m));
        errors(d, m) = cell.is_number()
                           ? cell.get<double>()
                           : std::numeric_limits<double>::quiet_NaN();
      }
    }
    const StudentisedTable tab = studentise(errors);
    Vector response(static_cast<Index>(corpus.size()));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto nit = std::find(names.begin(), names.end(), corpus[i].name);
      if (nit == names.end()) {
        fail(Errc::ParseError,
             a.summary + ": dataset '" + corpus[i].name + "' not in summary");
      }
      response[static_cast<Index>(i)] =
          tab.values(static_cast<Index>(nit - names.begin()), col);
    }
    const Vector coef = stats_regression(stats, response);
    j["regression"] = {{"method", a.target_method},
                       {"intercept", coef[0]},
                       {"p", coef[1]},
                       {"n", coef[2]},
                       {"binary_proportion", coef[3]},
                       {"imbalance", coef[4]},
                       {"num_classes", coef[5]},
                       {"complexity", coef[6]}};
  }
  write_text(a.out, j.dump(2) + "\n");
  std::cout << "wrote statistics for " << corpus.size() << " datasets to "
            << a.out << "\n";
}

struct ProjectArgs {
  std::string model, in, out_prefix, label_col;
  int grid = 100;
  std::uint64_t seed = 0;
};

void cmd_project(const ProjectArgs& a) {
  CsvOptions opts;
  opts.label_col = a.label_col;
  const Dataset data = read_csv(a.in, opts);

  const std::string kind = model_kind(a.model);
  Matrix coords;
  std::vector<std::string> names;
  // grid nodes are classified in the projected space; coordinates beyond
  // the plotted pair stay at the projected-data median
  std::function<int(const Vector&)> classify;
  TrainedOPNBModel om;
  LDAModel lm;
  Matrix lda_tmeans;
  Vector lda_logpi;
  if (kind == "opnb") {
    om = load_model(a.model);
    if (om.p_prime() < 2) {
      fail(Errc::DimensionTooLow, "projection export needs p' >= 2, model has " +
                                      std::to_string(om.p_prime()));
    }
    Matrix Xs = data.X;
    if (Xs.cols() != om.p()) {
      fail(Errc::DimensionMismatch,
           "model expects " + std::to_string(om.p()) + " columns, got " +
               std::to_string(Xs.cols()));
    }
    for (Index j = 0; j < Xs.cols(); ++j) Xs.col(j) /= om.column_scales[j];
    coords = project(Xs, om.V);
    names = om.class_names;
    classify = [&om](const Vector& z) {
      const Matrix post = posterior_from_z(om, z.transpose());
      return argmax_row(post, 0);
    };
  } else if (kind == "lda") {
    lm = load_lda(a.model);
    const Index r = lm.basis.cols();
    if (r < 2) {
      fail(Errc::DimensionTooLow,
           "projection export needs >= 2 discriminant dimensions, model has " +
               std::to_string(r));
    }
    const Matrix proj = lm.basis.transpose() * lm.whiten;  // r x p
    if (data.X.cols() != proj.cols()) {
      fail(Errc::DimensionMismatch,
           "model expects " + std::to_string(proj.cols()) + " columns, got " +
               std::to_string(data.X.cols()));
    }
    coords = data.X * proj.transpose();
    lda_tmeans = lm.means * proj.transpose();  // K x r
    lda_logpi = lm.priors.pi.array().log();
    names = lm.class_names;
    classify = [&lda_tmeans, &lda_logpi](const Vector& z) {
      int best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (Index k = 0; k < lda_tmeans.rows(); ++k) {
        const double score =
            lda_logpi[k] -
            0.5 * (z.transpose() - lda_tmeans.row(k)).squaredNorm();
        if (score > best_score) {
          best_score = score;
          best = static_cast<int>(k);
        }
      }
      return best;
    };
  } else {
    fail(Errc::ParseError,
         "projection export needs an opnb or lda model, got '" + kind + "'");
  }

  const Index pp = coords.cols();
  std::ostringstream pts;
  for (Index d = 0; d < pp; ++d) pts << (d ? "," : "") << "z" << d + 1;
  pts << ",label\n";
  for (Index i = 0; i < coords.rows(); ++i) {
    for (Index d = 0; d < pp; ++d) {
      pts << (d ? "," : "") << format_double(coords(i, d));
    }
    pts << ',' << csv_field(label_name(data.class_names, data.y[i])) << "\n";
  }
  write_text(a.out_prefix + "_points.csv", pts.str());

  Vector median(pp);
  for (Index d = 0; d < pp; ++d) median[d] = column_median(coords.col(d));
  Vector lo(2), hi(2);
  for (Index d = 0; d < 2; ++d) {
    lo[d] = coords.col(d).minCoeff();
    hi[d] = coords.col(d).maxCoeff();
    const double span = hi[d] - lo[d];
    const double margin = span > 0.0 ? 0.05 * span : 0.5;
    lo[d] -= margin;
    hi[d] += margin;
  }

  std::ostringstream grid;
  grid << "z1,z2,prediction\n";
  for (int i = 0; i < a.grid; ++i) {
    for (int jx = 0; jx < a.grid; ++jx) {
      Vector z = median;
      const double t1 =
          a.grid > 1 ? static_cast<double>(i) / (a.grid - 1) : 0.5;
      const double t2 =
          a.grid > 1 ? static_cast<double>(jx) / (a.grid - 1) : 0.5;
      z[0] = lo[0] + t1 * (hi[0] - lo[0]);
      z[1] = lo[1] + t2 * (hi[1] - lo[1]);
      grid << format_double(z[0]) << ',' << format_double(z[1]) << ','
           << csv_field(label_name(names, classify(z) + 1)) << "\n";
    }
  }
  write_text(a.out_prefix + "_grid.csv", grid.str());

  json j = provenance("project", a.seed);
  j["model"] = a.model;
  j["model_kind"] = kind;
  j["grid_resolution"] = a.grid;
  j["range_z1"] = {lo[0], hi[0]};
  j["range_z2"] = {lo[1], hi[1]};
  j["median"] = std::vector<double>(median.data(), median.data() + pp);
  write_text(a.out_prefix + "_meta.json", j.dump(2) + "\n");
  std::cout << "wrote " << coords.rows() << " points and " << a.grid << "x"
            << a.grid << " grid to " << a.out_prefix << "_*.csv\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opnb: projected naive Bayes classification toolkit"};
  app.require_subcommand(1);

  const auto fraction_check = CLI::Validator(
      [](std::string& s) {
        double v = 0.0;
        if (!parse_double(s, v) || v <= 0.0 || v >= 1.0) {
          return std::string("must be strictly between 0 and 1");
        }
        return std::string();
      },
      "FRACTION");
  const auto methods_check = CLI::Validator(
      [](std::string& s) {
        for (const std::string& name : split_list(s)) {
          if (name != "opnb" && name != "nb" && name != "kdda" &&
              name != "lda" && name != "rda" && name != "nc" &&
              name != "1nn") {
            return "unknown method: " + name;
          }
        }
        if (split_list(s).empty()) return std::string("empty method list");
        return std::string();
      },
      "METHODS");

  PreprocessArgs pa;
  CLI::App* prep = app.add_subcommand(
      "preprocess", "Clean a csv: subsample, drop, encode, perturb, reduce");
  prep->add_option("input", pa.in, "input csv")->required();
  prep->add_option("output", pa.out, "output csv")->required();
  prep->add_option("--label-col", pa.label_col,
                   "label column name (default: last column)");
  prep->add_option("--seed", pa.seed, "rng seed");

  FitArgs fa;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "Fit a model on a preprocessed csv");
  fit_cmd->add_option("input", fa.in, "training csv")->required();
  fit_cmd->add_option("model", fa.out, "model file to write")->required();
  fit_cmd->add_option("--label-col", fa.label_col, "label column name");
  fit_cmd->add_option("--method", fa.method, "opnb | nb | kdda | lda | rda")
      ->check(CLI::IsMember({"opnb", "nb", "kdda", "lda", "rda"}));
  fit_cmd
      ->add_option("--lambda", fa.lambda,
                   "penalty weight (opnb, default 0.001) or covariance blend "
                   "(rda, default 0.5)")
      ->check(CLI::NonNegativeNumber);
  fit_cmd
      ->add_option("--penalty", fa.penalty,
                   "opnb penalty: frobenius | total-cov | within-cov")
      ->check(CLI::IsMember({"frobenius", "total-cov", "within-cov"}));
  fit_cmd->add_option("--alpha", fa.alpha, "binary-column bandwidth (nb, kdda)")
      ->check(CLI::PositiveNumber);
  fit_cmd
      ->add_option("--gamma", fa.gamma, "bandwidth multiplier (nb, kdda)")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--r", fa.r, "discriminant dimensions (lda, default max)")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--restarts", fa.restarts, "opnb optimizer starts")
      ->check(CLI::PositiveNumber);
  fit_cmd
      ->add_option("--bins", fa.bins,
                   "kernel-sum bins for opnb (0 for exact sums)")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--seed", fa.seed, "rng seed");

  PredictArgs da;
  CLI::App* pred =
      app.add_subcommand("predict", "Write predictions and posteriors");
  pred->add_option("model", da.model, "model file")->required();
  pred->add_option("input", da.in, "csv to score")->required();
  pred->add_option("output", da.out, "predictions csv to write")->required();
  pred->add_option("--label-col", da.label_col,
                   "label column to strip from the input");
  pred->add_flag("--no-label", da.no_label,
                 "input has no label column; read every column as a feature");
  pred->add_option("--seed", da.seed, "echoed into the sidecar");

  BenchmarkArgs ba;
  CLI::App* bench = app.add_subcommand(
      "benchmark", "Tune and evaluate methods over a csv corpus");
  bench->add_option("corpus", ba.corpus, "directory of preprocessed csvs")
      ->required();
  bench->add_option("out", ba.out_dir, "output directory")->required();
  bench->add_option("--label-col", ba.label_col, "label column name");
  bench->add_option("--methods", ba.methods, "comma list of methods")
      ->check(methods_check);
  bench->add_option("--repeats", ba.repeats, "train/test repeats")
      ->check(CLI::PositiveNumber);
  bench->add_option("--folds", ba.folds, "cross-validation folds")
      ->check(CLI::PositiveNumber);
  bench->add_option("--train-frac", ba.train_frac, "training fraction")
      ->check(fraction_check);
  bench->add_option("--seed", ba.seed, "rng seed");
  bench->add_flag("--no-timing", ba.no_timing,
                  "zero the seconds column for byte-identical reruns");

  StatsArgs sa;
  CLI::App* stats =
      app.add_subcommand("stats", "Characterize datasets; optionally regress "
                                  "a method's standardized error on the "
                                  "statistics");
  stats->add_option("corpus", sa.corpus, "directory of preprocessed csvs")
      ->required();
  stats->add_option("out", sa.out, "output json")->required();
  stats->add_option("--label-col", sa.label_col, "label column name");
  stats->add_option("--summary", sa.summary,
                    "benchmark summary.json for the regression response");
  stats->add_option("--target-method", sa.target_method,
                    "method whose error is regressed");
  stats->add_option("--seed", sa.seed, "rng seed");

  ProjectArgs ja;
  CLI::App* proj = app.add_subcommand(
      "project", "Export projected points and a decision-region lattice");
  proj->add_option("model", ja.model, "opnb or lda model file")->required();
  proj->add_option("input", ja.in, "labeled csv to project")->required();
  proj->add_option("out", ja.out_prefix, "output file prefix")->required();
  proj->add_option("--label-col", ja.label_col, "label column name");
  proj->add_option("--grid", ja.grid, "lattice resolution per axis")
      ->check(CLI::PositiveNumber);
  proj->add_option("--seed", ja.seed, "echoed into the sidecar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    fa.lambda_given = fit_cmd->count("--lambda") > 0;
    if (prep->parsed()) cmd_preprocess(pa);
    if (fit_cmd->parsed()) cmd_fit(fa);
    if (pred->parsed()) cmd_predict(da);
    if (bench->parsed()) cmd_benchmark(ba);
    if (stats->parsed()) cmd_stats(sa);
    if (proj->parsed()) cmd_project(ja);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_data_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
