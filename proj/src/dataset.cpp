// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include "opnb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <system_error>

namespace opnb {

void validate(Dataset& ds) {
  const Index n = ds.X.rows();
  if (ds.y.size() != n) {
    fail(Errc::DimensionMismatch,
         "label count " + std::to_string(ds.y.size()) + " != row count " +
             std::to_string(n));
  }
  if (!ds.X.allFinite()) {
    fail(Errc::NonFiniteEntry, "dataset matrix contains NaN or Inf");
  }
  if (n == 0) {
    fail(Errc::EmptyClass, "dataset has no observations");
  }
  if (!ds.column_kind.empty() &&
      static_cast<Index>(ds.column_kind.size()) != ds.X.cols()) {
    fail(Errc::DimensionMismatch, "column_kind length != column count");
  }
  if (ds.column_kind.empty()) {
    ds.column_kind.assign(static_cast<std::size_t>(ds.X.cols()),
                          ColumnKind::continuous);
  }

  // relabel to 1..K by first appearance
  std::map<int, int> remap;
  std::vector<int> order;
  for (Index i = 0; i < n; ++i) {
    if (remap.emplace(ds.y[i], 0).second) order.push_back(ds.y[i]);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    remap[order[k]] = static_cast<int>(k) + 1;
  }
  const int K = static_cast<int>(order.size());

  std::vector<std::string> new_names(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const int old_label = order[static_cast<std::size_t>(k)];
    if (!ds.class_names.empty() && old_label >= 1 &&
        old_label <= static_cast<int>(ds.class_names.size())) {
      new_names[static_cast<std::size_t>(k)] =
          ds.class_names[static_cast<std::size_t>(old_label - 1)];
    } else {
      new_names[static_cast<std::size_t>(k)] = std::to_string(old_label);
    }
  }

  ds.class_counts.assign(static_cast<std::size_t>(K), 0);
  for (Index i = 0; i < n; ++i) {
    ds.y[i] = remap[ds.y[i]];
    ++ds.class_counts[static_cast<std::size_t>(ds.y[i] - 1)];
  }
  ds.class_names = std::move(new_names);
}

ClassPriors class_priors(const Dataset& ds) {
  const int K = ds.num_classes();
  ClassPriors pr;
  pr.pi.resize(K);
  for (int k = 0; k < K; ++k) {
    pr.pi[k] = static_cast<double>(ds.class_counts[static_cast<std::size_t>(k)]) /
               static_cast<double>(ds.n());
  }
  return pr;
}

std::vector<Index> class_rows(const Dataset& ds, int k) {
  std::vector<Index> rows;
  for (Index i = 0; i < ds.n(); ++i) {
    if (ds.y[i] == k) rows.push_back(i);
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

// One logical CSV record; handles quoted fields with "" escapes and CRLF.
// Returns false at end of stream.
bool read_record(std::istream& in, char delim, std::vector<std::string>& out,
                 std::size_t& line_no) {
  out.clear();
  std::string field;
  bool in_quotes = false;
  bool saw_any = false;
  int c;
  while ((c = in.get()) != EOF) {
    saw_any = true;
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_no;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
    } else if (ch == delim) {
      out.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      ++line_no;
      break;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (!saw_any) return false;
  out.push_back(std::move(field));
  if (out.size() == 1 && out[0].empty()) return read_record(in, delim, out, line_no);
  return true;
}

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

Dataset read_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ParseError, path + ": cannot open");

  std::size_t line_no = 1;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  std::vector<std::string> rec;

  if (opts.has_header) {
    if (!read_record(in, opts.delimiter, header, line_no)) {
      fail(Errc::EmptyTable, path + ": empty file");
    }
  }
  std::vector<std::size_t> row_lines;
  while (true) {
    const std::size_t at = line_no;
    if (!read_record(in, opts.delimiter, rec, line_no)) break;
    row_lines.push_back(at);
    rows.push_back(rec);
  }
  if (rows.empty()) fail(Errc::EmptyTable, path + ": no data rows");

  const std::size_t width = opts.has_header ? header.size() : rows[0].size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      fail(Errc::ParseError,
           path + ":" + std::to_string(row_lines[r]) + ": expected " +
               std::to_string(width) + " fields, got " +
               std::to_string(rows[r].size()));
    }
  }

  std::size_t label_idx;
  if (!opts.label_col.empty()) {
    if (!opts.has_header) {
      fail(Errc::ParseError, path + ": label column by name needs a header");
    }
    auto it = std::find(header.begin(), header.end(), opts.label_col);
    if (it == header.end()) {
      fail(Errc::ParseError,
           path + ": no column named '" + opts.label_col + "'");
    }
    label_idx = static_cast<std::size_t>(it - header.begin());
  } else if (opts.label_index >= 0) {
    if (static_cast<std::size_t>(opts.label_index) >= width) {
      fail(Errc::ParseError, path + ": label index out of range");
    }
    label_idx = static_cast<std::size_t>(opts.label_index);
  } else {
    label_idx = width - 1;
  }
  if (width < 2) fail(Errc::EmptyTable, path + ": no covariate columns");

  const std::size_t n = rows.size();
  const std::size_t p = width - 1;

  Dataset ds;
  ds.X.resize(static_cast<Index>(n), static_cast<Index>(p));
  ds.y.resize(static_cast<Index>(n));
  ds.column_names.resize(p);

  std::vector<std::size_t> cov_cols;
  for (std::size_t c = 0; c < width; ++c) {
    if (c != label_idx) cov_cols.push_back(c);
  }
  for (std::size_t j = 0; j < p; ++j) {
    ds.column_names[j] = opts.has_header
                             ? header[cov_cols[j]]
                             : "x" + std::to_string(j + 1);
  }

  // covariates: numeric if every field parses, otherwise level-coded by
  // sorted value order
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t c = cov_cols[j];
    bool numeric = true;
    for (std::size_t r = 0; r < n; ++r) {
      if (!parse_double(rows[r][c])) {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      for (std::size_t r = 0; r < n; ++r) {
        ds.X(static_cast<Index>(r), static_cast<Index>(j)) =
            *parse_double(rows[r][c]);
      }
    } else {
      std::map<std::string, int> levels;
      for (std::size_t r = 0; r < n; ++r) levels.emplace(rows[r][c], 0);
      int code = 0;
      for (auto& [_, v] : levels) v = code++;
      for (std::size_t r = 0; r < n; ++r) {
        ds.X(static_cast<Index>(r), static_cast<Index>(j)) =
            static_cast<double>(levels[rows[r][c]]);
      }
    }
  }

  // labels by first appearance; original strings kept as class names
  std::map<std::string, int> label_map;
  std::vector<std::string> label_order;
  for (std::size_t r = 0; r < n; ++r) {
    const std::string& s = rows[r][label_idx];
    auto [it, fresh] = label_map.emplace(s, 0);
    if (fresh) {
      it->second = static_cast<int>(label_order.size()) + 1;
      label_order.push_back(s);
    }
    ds.y[static_cast<Index>(r)] = it->second;
  }
  ds.class_names = label_order;

  // one-hot indicator columns are written as "col=level"; the marker
  // survives the csv round trip where an explicit kind field would not
  ds.column_kind.resize(p, ColumnKind::continuous);
  for (std::size_t j = 0; j < p; ++j) {
    if (ds.column_names[j].find('=') != std::string::npos) {
      ds.column_kind[j] = ColumnKind::binary_ohe;
    }
  }

  validate(ds);
  return ds;
}

void write_csv(const std::string& path, const Dataset& ds, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::ParseError, path + ": cannot open for writing");

  const Index n = ds.n();
  const Index p = ds.p();
  for (Index j = 0; j < p; ++j) {
    const std::string& name = ds.column_names.empty()
                                  ? "x" + std::to_string(j + 1)
                                  : ds.column_names[static_cast<std::size_t>(j)];
    out << name << delimiter;
  }
  out << "class\n";
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) {
      out << format_double(ds.X(i, j)) << delimiter;
    }
    const int k = ds.y[i];
    if (!ds.class_names.empty()) {
      out << ds.class_names[static_cast<std::size_t>(k - 1)];
    } else {
      out << k;
    }
    out << "\n";
  }
}

}  // namespace opnb
