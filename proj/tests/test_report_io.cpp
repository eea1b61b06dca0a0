#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>

#include "srlab/report_io.hpp"

using namespace srlab;

TEST_CASE("format_double survives a parse round trip") {
  for (const double x : {1.0 / 3.0, 0.1, 1e-300, 2.2250738585072014e-308, 12345.6789,
                         -9.87e200, 0.0}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("render_json round-trips values and is byte-stable") {
  ordered_json doc;
  doc["name"] = "quote \" and\nnewline";
  doc["count"] = 42;
  doc["flag"] = false;
  doc["nothing"] = nullptr;
  doc["third"] = 1.0 / 3.0;
  doc["list"] = ordered_json::array({1, 2.5, "x"});
  doc["nested"] = {{"a", ordered_json::array()}, {"b", ordered_json::object()}};

  const std::string text = render_json(doc);
  CHECK(text == render_json(doc));
  const auto parsed = nlohmann::ordered_json::parse(text);
  CHECK(parsed == doc);
  CHECK(parsed["third"].get<double>() == 1.0 / 3.0);
}

TEST_CASE("non-finite doubles render as null") {
  ordered_json doc;
  doc["bad"] = std::numeric_limits<double>::infinity();
  const auto parsed = nlohmann::json::parse(render_json(doc));
  CHECK(parsed["bad"].is_null());
}

TEST_CASE("csv quoting and shape validation") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows.push_back({"plain", "has,comma"});
  t.rows.push_back({"has \"quote\"", "multi\nline"});
  const std::string text = render_csv(t);
  CHECK(text == "a,b\nplain,\"has,comma\"\n\"has \"\"quote\"\"\",\"multi\nline\"\n");

  t.rows.push_back({"only-one-cell"});
  CHECK_THROWS_AS(render_csv(t), std::logic_error);
}

TEST_CASE("write_text_file writes exactly the given bytes") {
  const std::string path = "report_io_test.tmp";
  write_text_file(path, "line\n");
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "line\n");
  std::remove(path.c_str());
}
