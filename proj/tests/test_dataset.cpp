// Copyright 2026 opnb toolkit contributors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>

#include "opnb/dataset.hpp"

using namespace opnb;

namespace {

Dataset tiny(std::initializer_list<int> labels) {
  Dataset ds;
  const Index n = static_cast<Index>(labels.size());
  ds.X.resize(n, 1);
  ds.y.resize(n);
  Index i = 0;
  for (int l : labels) {
    ds.X(i, 0) = static_cast<double>(i);
    ds.y[i] = l;
    ++i;
  }
  return ds;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("validate accepts a minimal set and counts classes") {
  Dataset ds = tiny({1, 2});
  validate(ds);
  CHECK(ds.num_classes() == 2);
  CHECK(ds.class_counts[0] == 1);
  CHECK(ds.class_counts[1] == 1);
}

TEST_CASE("validate compacts labels by first appearance") {
  Dataset ds = tiny({1, 3});
  validate(ds);
  CHECK(ds.y[0] == 1);
  CHECK(ds.y[1] == 2);
  CHECK(ds.class_names[1] == "3");

  Dataset ds2 = tiny({7, 2, 7, 5});
  validate(ds2);
  CHECK(ds2.y[0] == 1);
  CHECK(ds2.y[1] == 2);
  CHECK(ds2.y[2] == 1);
  CHECK(ds2.y[3] == 3);
  CHECK(ds2.class_counts == std::vector<int>{2, 1, 1});
}

TEST_CASE("validate is idempotent") {
  Dataset ds = tiny({4, 4, 9, 2});
  validate(ds);
  const Dataset before = ds;
  validate(ds);
  CHECK(ds.y == before.y);
  CHECK(ds.class_counts == before.class_counts);
  CHECK(ds.class_names == before.class_names);
}

TEST_CASE("validate contract errors") {
  Dataset nan_ds = tiny({1, 2});
  nan_ds.X(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(nan_ds), Error);

  Dataset mismatch = tiny({1, 2});
  mismatch.y.resize(3);
  try {
    validate(mismatch);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }

  Dataset empty;
  empty.X.resize(0, 1);
  empty.y.resize(0);
  try {
    validate(empty);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyClass);
  }
}

TEST_CASE("class priors") {
  Dataset ds = tiny({1, 1, 2, 2});
  validate(ds);
  ClassPriors pr = class_priors(ds);
  CHECK(pr.pi[0] == 0.5);
  CHECK(pr.pi[1] == 0.5);

  Dataset ds2 = tiny({1, 2, 2, 2});
  validate(ds2);
  ClassPriors pr2 = class_priors(ds2);
  CHECK(pr2.pi[0] == 0.25);
  CHECK(pr2.pi[1] == 0.75);
  CHECK(pr2.pi.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("priors are permutation-equivariant under relabeling") {
  Dataset a = tiny({1, 1, 2, 3, 3, 3});
  Dataset b = tiny({3, 3, 1, 2, 2, 2});
  validate(a);
  validate(b);
  // same multiset of counts, first-appearance order differs
  ClassPriors pa = class_priors(a);
  ClassPriors pb = class_priors(b);
  CHECK(pa.pi[0] == pb.pi[0]);
  CHECK(pa.pi[1] == pb.pi[1]);
  CHECK(pa.pi[2] == pb.pi[2]);
}

TEST_CASE("csv round trip with string labels and quoting") {
  const std::string path = write_temp(
      "opnb_csv_1.csv",
      "a,b,class\n1.5,2.25,yes\n-0.5,1e-3,no\n\"3\",\"4\",\"yes\"\n");
  Dataset ds = read_csv(path);
  CHECK(ds.n() == 3);
  CHECK(ds.p() == 2);
  CHECK(ds.num_classes() == 2);
  CHECK(ds.X(0, 0) == 1.5);
  CHECK(ds.X(1, 1) == 1e-3);
  CHECK(ds.X(2, 1) == 4.0);
  CHECK(ds.class_names[0] == "yes");
  CHECK(ds.y[2] == 1);

  const std::string out = "/tmp/opnb_csv_1_out.csv";
  write_csv(out, ds);
  Dataset back = read_csv(out);
  CHECK(back.X == ds.X);
  CHECK(back.y == ds.y);
  CHECK(back.class_names == ds.class_names);
  std::remove(path.c_str());
  std::remove(out.c_str());
}

TEST_CASE("csv label column by name and by index") {
  const std::string path = write_temp(
      "opnb_csv_2.csv", "lab,u,v\nA,1,2\nB,3,4\nA,5,6\n");
  CsvOptions by_name;
  by_name.label_col = "lab";
  Dataset ds = read_csv(path, by_name);
  CHECK(ds.p() == 2);
  CHECK(ds.column_names[0] == "u");
  CHECK(ds.X(1, 0) == 3.0);

  CsvOptions by_index;
  by_index.label_index = 0;
  Dataset ds2 = read_csv(path, by_index);
  CHECK(ds2.X == ds.X);
  CHECK(ds2.y == ds.y);
  std::remove(path.c_str());
}

TEST_CASE("csv categorical covariates are level-coded in sorted order") {
  const std::string path = write_temp(
      "opnb_csv_3.csv", "color,n,class\nred,1,1\nblue,2,1\ngreen,3,2\n");
  Dataset ds = read_csv(path);
  // sorted levels: blue=0, green=1, red=2
  CHECK(ds.X(0, 0) == 2.0);
  CHECK(ds.X(1, 0) == 0.0);
  CHECK(ds.X(2, 0) == 1.0);
  std::remove(path.c_str());
}

TEST_CASE("csv marks indicator columns by the = in their name") {
  const std::string path = write_temp(
      "opnb_csv_kind.csv",
      "weight,color=red,class\n1.5,0.01,a\n2.5,0.98,b\n0.5,0.02,a\n");
  Dataset ds = read_csv(path);
  REQUIRE(ds.column_kind.size() == 2);
  CHECK(ds.column_kind[0] == ColumnKind::continuous);
  CHECK(ds.column_kind[1] == ColumnKind::binary_ohe);
  std::remove(path.c_str());
}

TEST_CASE("csv malformed rows are reported with line numbers") {
  const std::string path = write_temp(
      "opnb_csv_4.csv", "a,b,class\n1,2,x\n1,2\n");
  try {
    read_csv(path);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("csv headerless input") {
  const std::string path = write_temp("opnb_csv_5.csv", "1,2,0\n3,4,1\n");
  CsvOptions opts;
  opts.has_header = false;
  Dataset ds = read_csv(path, opts);
  CHECK(ds.n() == 2);
  CHECK(ds.p() == 2);
  CHECK(ds.column_names[0] == "x1");
  std::remove(path.c_str());
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}
