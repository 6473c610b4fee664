#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hwgrowth/cli.hpp"
#include "hwgrowth/errors.hpp"
#include "hwgrowth/io.hpp"

using namespace hwgrowth;

namespace {

DiscreteMeasure csv(const std::string& text) {
  std::istringstream in(text);
  return io::parse_measure_csv(in);
}

DiscreteMeasure json_text(const std::string& text) {
  std::istringstream in(text);
  return io::parse_measure_json(in);
}

std::size_t error_line(const std::string& text) {
  try {
    csv(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("format_number round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(io::format_number(x)) == x);
  }
  CHECK(io::format_number(0.5) == "0.5");
  CHECK(io::format_number(INFINITY) == "inf");
  CHECK(io::format_number(-INFINITY) == "-inf");
  CHECK(io::format_number(NAN) == "nan");
}

TEST_CASE("parse_measure_csv: accepted forms") {
  const DiscreteMeasure a = csv("re,im,mass\n1,0,2\n0,-3,0.5\n");
  REQUIRE(a.size() == 2);
  CHECK(a.atoms()[0].mass == 2.0);
  CHECK(a.atoms()[1].point == ComplexPoint(0, -3));

  const DiscreteMeasure b = csv("re,im\n1.5,2\n-1e3,+4\n");
  REQUIRE(b.size() == 2);
  CHECK(b.atoms()[0].mass == 1.0);
  CHECK(b.atoms()[1].point == ComplexPoint(-1000, 4));

  // Comments, blank lines, CRLF, a BOM and an empty mass field.
  const DiscreteMeasure c = csv("\xEF\xBB\xBF# zeros\r\nre, im, mass\r\n\r\n 2 , 0 , \r\n# x\n3,1,4\n");
  REQUIRE(c.size() == 2);
  CHECK(c.atoms()[0].mass == 1.0);
  CHECK(c.atoms()[1].mass == 4.0);

  CHECK(csv("re,im,mass\n").empty());
}

TEST_CASE("parse_measure_csv: errors carry line numbers") {
  CHECK(error_line("re,im,mass\n1,0,1\n1,x,1\n") == 3);
  CHECK(error_line("x,y\n1,0\n") == 1);
  CHECK(error_line("re,im,mass\n1,0,1\n\n0,0,1\n") == 4);   // atom at the origin
  CHECK(error_line("re,im,mass\n1,0,-1\n") == 2);          // negative mass
  CHECK(error_line("re,im\n1,0,1\n") == 2);                // too many fields
  CHECK(error_line("re,im,mass\n1\n") == 2);               // too few fields
  CHECK(error_line("re,im,mass\n1,nan,1\n") == 2);
  CHECK_THROWS_AS(csv(""), ParseError);
  try {
    csv("re,im,mass\n1,0,1\n1,x,1\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("parse_measure_json") {
  const DiscreteMeasure a = json_text(R"([{"re": 1, "im": 2, "mass": 3}, {"re": -1, "im": 0}])");
  REQUIRE(a.size() == 2);
  CHECK(a.atoms()[0].mass == 3.0);
  CHECK(a.atoms()[1].mass == 1.0);
  CHECK(json_text("[]").empty());
  CHECK_THROWS_AS(json_text("{"), ParseError);
  CHECK_THROWS_AS(json_text(R"({"re": 1})"), ParseError);
  CHECK_THROWS_AS(json_text(R"([{"re": 1}])"), ParseError);
  CHECK_THROWS_AS(json_text(R"([{"re": "1", "im": 0}])"), ParseError);
  CHECK_THROWS_AS(json_text(R"([{"re": 0, "im": 0}])"), ParseError);
  CHECK_THROWS_AS(json_text(R"([{"re": 1, "im": 0, "mass": 0}])"), ParseError);
}

TEST_CASE("measure CSV round trip is lossless") {
  std::mt19937_64 rng(42);
  const DiscreteMeasure m = cli::random_measure(rng, 50);
  std::ostringstream out;
  io::write_measure_csv(out, m);
  const DiscreteMeasure back = csv(out.str());
  REQUIRE(back.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(back.atoms()[i].point == m.atoms()[i].point);
    CHECK(back.atoms()[i].mass == m.atoms()[i].mass);
  }
}

TEST_CASE("report serialization") {
  BoundReport rep;
  rep.q = 1;
  rep.measure = "2 atoms";
  BoundRow row;
  row.r = 2.0;
  row.lhs = -INFINITY;
  row.rhs_p1_a = 1.25;
  row.ok = false;
  row.error = "quadrature failed";
  rep.rows.push_back(row);
  rep.passed = false;

  std::ostringstream js;
  io::write_bound_report_json(js, rep);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["kind"] == "bound_report");
  CHECK(doc["q"] == 1);
  CHECK(doc["passed"] == false);
  CHECK(doc["rows"][0]["lhs"] == "-inf");
  CHECK(doc["rows"][0]["rhs_p1_a"] == 1.25);
  CHECK(doc["rows"][0]["error"] == "quadrature failed");
  CHECK(doc["rho"].is_null());

  std::ostringstream cs;
  io::write_bound_report_csv(cs, rep);
  CHECK(cs.str() ==
        "r,lhs,rhs_p1_a,rhs_p1_b,rhs_p2_a,rhs_p2_b,violation,identity_gap,ok\n"
        "2,-inf,1.25,0,0,0,0,0,0\n");

  const std::vector<BoundReport> sweep{rep, rep};
  std::ostringstream ss;
  io::write_bound_sweep_csv(ss, sweep);
  CHECK(ss.str().starts_with("trial,q,r,"));
  CHECK(ss.str().find("\n1,1,2,") != std::string::npos);

  TypeBoundReport t;
  t.rho = 0.5;
  t.type_u = 3.0;
  std::ostringstream tj;
  io::write_type_report_json(tj, t);
  CHECK(nlohmann::json::parse(tj.str())["type_u"] == 3.0);
}
