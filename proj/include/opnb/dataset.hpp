// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "opnb/common.hpp"

namespace opnb {

enum class ColumnKind { continuous, binary_ohe };

// Labeled dataset. One row of X per observation; labels are contiguous
// 1..K after validate(), with the original label strings kept in
// class_names for reporting.
struct Dataset {
  Matrix X;
  IntVector y;
  std::vector<ColumnKind> column_kind;
  std::vector<int> class_counts;
  std::vector<std::string> class_names;
  std::vector<std::string> column_names;

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }
  int num_classes() const { return static_cast<int>(class_counts.size()); }
};

struct ClassPriors {
  Vector pi;
  int num_classes() const { return static_cast<int>(pi.size()); }
};

// Checks invariants and relabels classes to 1..K in order of first
// appearance. Idempotent. Throws Error with NonFiniteEntry,
// DimensionMismatch or EmptyClass.
void validate(Dataset& ds);

ClassPriors class_priors(const Dataset& ds);

// Indices of the rows belonging to class k (1-based label), in row order.
std::vector<Index> class_rows(const Dataset& ds, int k);

struct CsvOptions {
  bool has_header = true;
  // Label column by name (needs a header); when empty, label_index is used,
  // -1 meaning the last column.
  std::string label_col;
  int label_index = -1;
  char delimiter = ',';
};

// Reads a delimited text file into a Dataset. Non-numeric covariate columns
// are level-coded 0..G-1 by sorted value order. The result is validated.
Dataset read_csv(const std::string& path, const CsvOptions& opts = {});

// Writes covariate columns followed by the label column, doubles in
// shortest round-trip decimal form.
void write_csv(const std::string& path, const Dataset& ds,
               char delimiter = ',');

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace opnb
