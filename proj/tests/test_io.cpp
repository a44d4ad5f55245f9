#include "nlpbma/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <random>
#include <string>

using namespace nlpbma;

TEST_SUITE("io") {

TEST_CASE("parse_csv reads a numeric table") {
  const std::string text = "y,x1,x2\r\n1.5,2,-3e-2\n\n 0.25 , -1 , 4.125 \n";
  auto t = parse_csv(text);
  REQUIRE(t.header.size() == 3);
  CHECK(t.header[0] == "y");
  CHECK(t.header[2] == "x2");
  REQUIRE(t.values.rows() == 2);
  CHECK(t.values(0, 0) == 1.5);
  CHECK(t.values(0, 2) == -3e-2);
  CHECK(t.values(1, 1) == -1.0);
  CHECK(t.values(1, 2) == 4.125);
}

TEST_CASE("parse_csv rejects malformed input with line numbers") {
  try {
    parse_csv("a,b\n1,2\n3\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    parse_csv("a,b\n1,zap\n");
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("zap") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_csv(""), CsvError);
  CHECK_THROWS_AS(parse_csv("a,,b\n"), CsvError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,\n"), CsvError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,1e\n"), CsvError);
}

TEST_CASE("dataset_from_table splits response and design") {
  auto t = parse_csv("y,a,b\n1,2,3\n4,5,6\n7,8,9\n");
  auto d = dataset_from_table(t);
  CHECK(d.n() == 3);
  CHECK(d.p() == 2);
  CHECK(d.y[1] == 4.0);
  CHECK(d.X(2, 1) == 9.0);
  REQUIRE(d.column_names.size() == 2);
  CHECK(d.column_names[0] == "a");
  CHECK(d.column_names[1] == "b");

  CHECK_THROWS_AS(dataset_from_table(parse_csv("only\n1\n")), CsvError);
  CHECK_THROWS_AS(dataset_from_table(parse_csv("y,x\n")), CsvError);
}

TEST_CASE("format_double round trips doubles") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double x = mant(gen) * std::pow(10.0, expo(gen));
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("render_csv then parse_csv is the identity") {
  Matrix m(2, 3);
  m << 0.1, -2.5e-7, 3.0, 1e12, 0.0, -0.333333333333333314;
  const auto text = render_csv({"u", "v", "w"}, m);
  auto t = parse_csv(text);
  REQUIRE(t.values.rows() == 2);
  REQUIRE(t.values.cols() == 3);
  CHECK((t.values - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(render_csv({"u", "v"}, m), std::invalid_argument);
}

TEST_CASE("text file round trip and missing file error") {
  const std::string path = "nlpbma_io_test.tmp";
  const std::string content = "header\n1,2\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("definitely/not/a/file.csv"), std::runtime_error);
  CHECK_THROWS_AS(write_text_file("no/such/dir/out.json", "x"), std::runtime_error);
}

}  // TEST_SUITE
