// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <fstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "opnb/common.hpp"

namespace opnb::detail {

using nlohmann::json;

inline json mat_to_json(const Matrix& M) {
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix mat_from_json(const json& j, Index cols) {
  const Index rows = static_cast<Index>(j.size());
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != cols) {
      fail(Errc::ParseError, "model matrix is not rectangular");
    }
    for (Index c = 0; c < cols; ++c) {
      M(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return M;
}

inline json vec_to_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vector vec_from_json(const json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) {
    v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  }
  return v;
}

inline void save_json_file(const json& j, const std::string& path) {
  std::ofstream ofs(path);
  if (!ofs) fail(Errc::ParseError, "cannot open for writing: " + path);
  ofs << j.dump(2) << "\n";
  if (!ofs) fail(Errc::ParseError, "write failed: " + path);
}

inline json load_json_file(const std::string& path) {
  std::ifstream ifs(path);
  if (!ifs) fail(Errc::ParseError, "cannot open file: " + path);
  try {
    json j;
    ifs >> j;
    return j;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path + ": " + e.what());
  }
}

}  // namespace opnb::detail
