#include <catch_amalgamated.hpp>

#include "caplab/props.hpp"

using namespace caplab;

TEST_CASE("property suites pass") {
  for (const auto& name : props::suite_names()) {
    for (std::uint64_t seed : {1ull, 20261016ull}) {
      auto rep = props::run_suite(name, seed);
      INFO(props::to_json(rep).dump(2));
      CHECK(rep.passed());
      CHECK_FALSE(rep.checks.empty());
      for (const auto& c : rep.checks) CHECK(c.cases > 0);
    }
  }
}

TEST_CASE("suite reports are reproducible") {
  auto a = props::to_json(props::run_suite("curvature", 7)).dump();
  auto b = props::to_json(props::run_suite("curvature", 7)).dump();
  CHECK(a == b);
  auto c = props::to_json(props::run_suite("curvature", 8)).dump();
  CHECK(a != c);
}

TEST_CASE("unknown suite") { CHECK_THROWS_AS(props::run_suite("nope", 1), InputError); }
