#include <algorithm>
#include <random>

#include "builders.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "scottlab/backforth.hpp"
#include "scottlab/products.hpp"
#include "scottlab/search.hpp"

using namespace scottlab;

namespace {

Ordinal level_of(const FiniteStructure& m, Tuple a, Tuple b) {
  auto v = bf_level(m, a, m, b);
  REQUIRE(v.level);
  REQUIRE(v.exact);
  return *v.level;
}

// Table level capped at k, -1 when the qf types differ.
int capped(const BfLevel& v, int k) {
  if (!v.level) return -1;
  if (!v.level->is_finite()) return k;
  return std::min<int>(k, static_cast<int>(v.level->value()));
}

}  // namespace

TEST_CASE("bf levels of small examples") {
  CHECK(level_of(build::pure_set(2), {0}, {1}) == Ordinal::infinity());
  // c is alone in its class, a has a partner.
  CHECK(level_of(build::equivalence({2, 1}), {2}, {0}) == Ordinal::fin(0));
  CHECK(level_of(build::linear_order(3), {0, 2}, {0, 2}) == Ordinal::infinity());
  // Rigid, yet 0 and 1 share their quantifier-free type.
  CHECK(level_of(build::linear_order(3), {0}, {1}) == Ordinal::fin(0));
  Element a[1] = {0}, b[1] = {1};
  CHECK(oracle::ef_level(build::linear_order(3), a, build::linear_order(3), b, 3) == 0);
}

TEST_CASE("Scott ranks") {
  CHECK(scott_rank(build::pure_set(4)) == Ordinal::fin(0));
  CHECK(scott_rank(build::linear_order(3)) == Ordinal::fin(1));
  CHECK(scott_rank(build::equivalence({2, 1})) == Ordinal::fin(1));
}

TEST_CASE("complete tables match the Ehrenfeucht-Fraisse oracle") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  const int k = 4;
  for (int it = 0; it < 40; ++it) {
    FiniteStructure m = build::random_structure(rng, size(rng), 1, 1, 0, 0.35);
    BfTable t(m);
    for (Element x = 0; x < m.size(); ++x)
      for (Element y = 0; y < m.size(); ++y) {
        Element a[1] = {x}, b[1] = {y};
        CHECK(capped(t.level(a, b), k) == oracle::ef_level(m, a, m, b, k));
      }
  }
}

TEST_CASE("two-structure tables match the oracle") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 30; ++it) {
    FiniteStructure m = build::random_structure(rng, 3, 1, 1, 0, 0.4);
    FiniteStructure n = build::random_structure(rng, 3, 1, 1, 0, 0.4);
    Tuple e{};
    const int k = 4;
    CHECK(capped(bf_level(m, e, n, e), k) == oracle::ef_level(m, e, n, e, k));
    const bool iso = oracle::isomorphism(m, n).has_value();
    auto v = bf_level(m, e, n, e);
    CHECK((v.level && v.level->is_infinite()) == iso);
  }
}

TEST_CASE("bf fixpoint equals Aut-orbits on pairs") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  for (int it = 0; it < 40; ++it) {
    FiniteStructure m = build::random_structure(rng, size(rng), 1, 1, 0, 0.3);
    auto auts = oracle::automorphisms(m);
    BfTable t(m);
    for (Element a0 = 0; a0 < m.size(); ++a0)
      for (Element a1 = 0; a1 < m.size(); ++a1)
        for (Element b0 = 0; b0 < m.size(); ++b0)
          for (Element b1 = 0; b1 < m.size(); ++b1) {
            Element a[2] = {a0, a1}, b[2] = {b0, b1};
            auto v = t.level(a, b);
            CHECK((v.level && v.level->is_infinite()) == oracle::same_orbit(auts, a, b));
          }
  }
}

TEST_CASE("class counts are nondecreasing") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 20; ++it) {
    FiniteStructure m = build::random_structure(rng, 4, 1, 1, 0, 0.3);
    BfTable t(m);
    for (std::size_t k = 1; k < t.level_count(); ++k) CHECK(t.class_count(k) >= t.class_count(k - 1));
    CHECK(t.stabilized());
  }
}

TEST_CASE("bounded tables give lower bounds") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 20; ++it) {
    FiniteStructure m = build::random_structure(rng, 4, 1, 1, 0, 0.35);
    BfOptions o;
    o.max_length = 2;
    BfTable bounded(m, o), full(m);
    for (Element x = 0; x < 4; ++x)
      for (Element y = 0; y < 4; ++y) {
        Element a[1] = {x}, b[1] = {y};
        auto lb = bounded.level(a, b), ex = full.level(a, b);
        CHECK(lb.level.has_value() == ex.level.has_value());
        if (!lb.level) continue;
        if (lb.exact) CHECK(*lb.level == *ex.level);
        else CHECK(*lb.level <= *ex.level);
      }
  }
}

TEST_CASE("bases") {
  auto b = find_finite_base(build::linear_order(3), 3);
  REQUIRE(b);
  CHECK(b->empty());

  auto p = find_finite_base(build::pure_set(3), 3);
  REQUIRE(p);
  CHECK(*p == Tuple{0, 1});

  BfTable t(build::pure_set(3));
  Tuple none{};
  CHECK_FALSE(is_base(t, none));
}

TEST_CASE("bases of a truncated product pin down the non-free factor") {
  ProductSpec spec{{build::pure_set(3)}, {build::pure_set(2)}};
  FiniteStructure m = build_truncated_product(spec, 2);
  REQUIRE(m.size() == 6);
  auto auts = oracle::automorphisms(m);
  auto b = find_finite_base(m, 6);
  REQUIRE(b);
  CHECK(oracle::is_base(auts, *b));
  // Every base fixes each point of the 3-element factor.
  for (unsigned mask = 0; mask < 64; ++mask) {
    Tuple s;
    for (Element x = 0; x < 6; ++x)
      if ((mask >> x) & 1) s.push_back(x);
    if (!oracle::is_base(auts, s)) continue;
    std::vector<Element> seen;
    for (Element x : s) seen.push_back(product_coords(spec, 2, x)[0]);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    CHECK(seen.size() >= 2);
    CHECK(s.size() >= b->size());
  }
}

TEST_CASE("find_finite_base agrees with the automorphism route") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  for (int it = 0; it < 40; ++it) {
    FiniteStructure m = build::random_structure(rng, size(rng), 1, 1, 0, 0.3);
    auto auts = oracle::automorphisms(m);
    auto b = find_finite_base(m, m.size());
    REQUIRE(b);
    CHECK(oracle::is_base(auts, *b));
    // No lexicographically earlier subset of the same size, and none smaller, is a base.
    const std::size_t n = m.size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Tuple s;
      for (Element x = 0; x < n; ++x)
        if ((mask >> x) & 1) s.push_back(x);
      if (s.size() < b->size()) CHECK_FALSE(oracle::is_base(auts, s));
      if (s.size() == b->size() && s < *b) CHECK_FALSE(oracle::is_base(auts, s));
    }
  }
}

TEST_CASE("naming constants") {
  FiniteStructure m = build::equivalence({2, 2});
  Tuple none{};
  CHECK(expand_constants(m, none) == m);

  Element c0[1] = {0};
  FiniteStructure two = expand_constants(build::pure_set(2), c0);
  CHECK(two.signature().constant_count() == 1);
  CHECK(scott_rank(two) == Ordinal::fin(0));
  CHECK(oracle::automorphisms(two).size() == 1);

  // The partner of the named point is the only other element E-related to it.
  FiniteStructure e = expand_constants(m, c0);
  CHECK(bf_level(e, Tuple{1}, e, Tuple{2}).level == std::nullopt);
  CHECK(*bf_level(e, Tuple{2}, e, Tuple{3}).level == Ordinal::infinity());
}

TEST_CASE("naming constants leaves levels unchanged") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 40; ++it) {
    FiniteStructure m = build::random_structure(rng, 4, 1, 1, 0, 0.35);
    std::uniform_int_distribution<Element> pick(0, 3);
    Element a = pick(rng), b = pick(rng), x = pick(rng), y = pick(rng);
    Element ca[1] = {a}, cb[1] = {b}, xs[1] = {x}, ys[1] = {y};
    Element ax[2] = {a, x}, by[2] = {b, y};
    CHECK(bf_level(m, ax, m, by) == bf_level(expand_constants(m, ca), xs, expand_constants(m, cb), ys));
  }
}

TEST_CASE("sorted expansions") {
  FiniteStructure m = build::equivalence({2, 2});
  CHECK(expand_sorts(m, {}).structure.size() == 4);

  std::vector<EquivSpec> fam{{"E", {"E"}}};
  SortedExpansion s = expand_sorts(m, fam);
  CHECK(s.structure.size() == 6);
  CHECK(s.home_size == 4);
  CHECK(s.sort_size == std::vector<std::size_t>{2});
  BfTable a(m), b(s.structure);
  for (Element x = 0; x < 4; ++x)
    for (Element y = 0; y < 4; ++y) {
      Element tx[1] = {x}, ty[1] = {y};
      CHECK(a.level(tx, ty) == b.level(tx, ty));
    }
}

TEST_CASE("sorted expansion by two nested equivalences") {
  FiniteStructure m = build::nested_equivalences();
  std::vector<EquivSpec> fam{{"E", {"E"}}, {"F", {"F"}}};
  SortedExpansion s = expand_sorts(m, fam);
  CHECK(s.structure.size() == 8 + 2 + 4);
  BfOptions o;
  o.max_length = 3;
  BfTable a(m, o), b(s.structure, o);
  for (Element x = 0; x < 8; ++x)
    for (Element y = 0; y < 8; ++y) {
      Element tx[1] = {x}, ty[1] = {y};
      auto la = a.level(tx, ty), lb = b.level(tx, ty);
      CHECK(la.level.has_value() == lb.level.has_value());
      CHECK(oracle::ef_level(m, tx, m, ty, 2) == oracle::ef_level(s.structure, tx, s.structure, ty, 2));
    }
}

TEST_CASE("quotients") {
  FiniteStructure m = build::equivalence({2, 1});
  std::vector<std::string> none;
  Quotient eq = quotient(m, {"eq", {"="}}, none);
  CHECK(eq.structure.size() == 3);
  CHECK(std::all_of(eq.colors.begin(), eq.colors.end(), [](auto c) { return c == 2; }));

  Quotient total = quotient(m, {"all", {}}, none);
  CHECK(total.structure.size() == 1);
  CHECK(total.colors == std::vector<std::uint32_t>{4});

  ProductSpec spec{{}, {build::pure_set(2)}};
  FiniteStructure p = build_truncated_product(spec, 2);
  Quotient q = quotient(p, {"E0", {"E_0"}}, none);
  CHECK(q.structure.size() == 2);
  CHECK(q.colors == std::vector<std::uint32_t>{3, 3});
}

TEST_CASE("non-equivalence is rejected") {
  FiniteStructure lo = build::linear_order(3);
  CHECK_FALSE(is_equivalence(lo, {"lt", {"<"}}));
  std::vector<EquivSpec> fam{{"lt", {"<"}}};
  CHECK_THROWS_AS(expand_sorts(lo, fam), InputError);
}
