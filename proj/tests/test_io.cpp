#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "sideinfo/io.hpp"
#include "support.hpp"

using namespace sideinfo;
using testing::code_of;

TEST_CASE("format_double round trips") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(gen) * std::pow(10.0, static_cast<int>(gen() % 20) - 10);
    CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(0.0) == "0");
}

TEST_CASE("distribution file parsing") {
  std::istringstream in("index,prob\r\n# comment\n1,0.75\n0,0.25\n");
  const auto p = io::parse_distribution(in, "mem");
  CHECK(p.size() == 2);
  CHECK(p[0] == 0.25);
  CHECK(p[1] == 0.75);

  std::istringstream headerless("0,1\n");
  CHECK(io::parse_distribution(headerless)[0] == 1.0);
}

TEST_CASE("distribution file errors carry line numbers") {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      io::parse_distribution(in, "f.csv");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("index,prob\n0,0.5\n0,0.5\n").find("f.csv:3:") != std::string::npos);
  CHECK(message("0,0.5\n1,abc\n").find("f.csv:2:") != std::string::npos);
  CHECK(message("0,0.5\n2,0.5\n").find("f.csv") != std::string::npos);
  CHECK(message("0,0.5,7\n1,0.5\n").find("f.csv:1:") != std::string::npos);
  // Well-formed rows that do not sum to one fail Distribution validation.
  std::istringstream bad_sum("0,0.5\n1,0.4\n");
  CHECK(code_of([&] { io::parse_distribution(bad_sum); }) == ErrorCode::kInput);
}

TEST_CASE("counts and symbol lists") {
  std::istringstream counts("index,count\n0,3\n2,0\n1,5\n");
  CHECK(io::parse_counts(counts) == std::vector<std::uint64_t>{3, 5, 0});
  std::istringstream negative("0,-1\n");
  CHECK(code_of([&] { io::parse_counts(negative); }) == ErrorCode::kParse);
  std::istringstream symbols("index\n4\n1\n");
  CHECK(io::parse_symbol_list(symbols) == std::vector<Symbol>{4, 1});
}

TEST_CASE("write then parse reproduces the distribution exactly") {
  std::mt19937_64 gen(8);
  for (int k = 0; k < 50; ++k) {
    const auto p = testing::random_distribution(gen, 1 + gen() % 30);
    std::ostringstream out;
    io::write_distribution(out, p);
    std::istringstream in(out.str());
    CHECK(io::parse_distribution(in) == p);
  }
}

TEST_CASE("lexicon quoting") {
  std::ostringstream out;
  io::write_lexicon(out, {"plain", "a,b", "say\"hi\""});
  CHECK(out.str() == "index,token\n0,plain\n1,\"a,b\"\n2,\"say\"\"hi\"\"\"\n");
}

TEST_CASE("risk report table layout") {
  RiskReport a;
  a.estimator = "alpha";
  a.grid.push_back({10, 0.5, 0.01, 100, 0, {{"gain", 0.25}}});
  a.grid.push_back({20, 0.25, 0.005, 99, 1, {{"gain", 0.125}}});
  a.bounds.push_back({10, 0.75, {{"lb_lecam", 0.125}}});
  RiskReport b;
  b.estimator = "beta";
  b.grid.push_back({10, 1.0, 0.0, 100, 0, {}});
  const std::string csv = io::format_risk_reports({a, b});
  CHECK(csv ==
        "# schema: sideinfo-risk/1\n"
        "estimator,n,loss,stderr,trials,failures,ub_interp,lb_lecam,gain\n"
        "alpha,10,0.5,0.01,100,0,0.75,0.125,0.25\n"
        "alpha,20,0.25,0.005,99,1,,,0.125\n"
        "beta,10,1,0,100,0,,,\n");
}

TEST_CASE("missing files are io errors") {
  CHECK(code_of([] { io::read_distribution("/nonexistent/p.csv"); }) == ErrorCode::kIo);
}
