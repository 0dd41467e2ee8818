#include <random>

#include "doctest.h"
#include "scottlab/posets.hpp"
#include "scottlab/verify.hpp"

using namespace scottlab;

TEST_CASE("random generators are seeded") {
  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 5; ++i) CHECK(random_structure(a, 4) == random_structure(b, 4));
  std::mt19937_64 c(4);
  for (int i = 0; i < 20; ++i) {
    PosetPresentation p = random_nbc_presentation(c, 1 + i % 4);
    CHECK(validate(p).empty());
    CHECK(p.tails.size() == 1);
  }
}

TEST_CASE("verification suite passes and repeats") {
  VerifyOptions opt;
  opt.seed = 7;
  opt.sweep = 10;
  auto first = run_verification(opt);
  REQUIRE(first.size() == 10);
  for (const auto& r : first) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.passed);
    CHECK(r.instances > 0);
  }
  auto second = run_verification(opt);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].name == second[i].name);
    CHECK(first[i].instances == second[i].instances);
  }
}
