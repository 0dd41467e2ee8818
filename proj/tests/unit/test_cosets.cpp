#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "scottlab/backforth.hpp"
#include "scottlab/cosets.hpp"

using namespace scottlab;

namespace {

PairSet all_pairs(const FinCosetSystem& c) {
  PairSet out;
  for (Word f = 0; f < c.domain_size(); ++f)
    for (Word g : c.at(f).elements()) out.emplace_back(f, g);
  return out;
}

// Coherent subsets of C with at most two pairs.
std::vector<PairSet> small_coherent_sets(const FinCosetSystem& c) {
  const PairSet p = all_pairs(c);
  std::vector<PairSet> out{{}};
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.push_back({p[i]});
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (oracle::coherent(c, p[i], p[j])) out.push_back({p[i], p[j]});
  }
  return out;
}

// n = m = 1 with the g bit placed before the f bit, so every pair must agree on g.
FinCosetSystem early_g() {
  return FinCosetSystem(1, 1, {Coset::single(1, 0), Coset::single(1, 1)}, {1}, {0});
}

}  // namespace

TEST_CASE("bit vectors") {
  BitVec a = BitVec::parse("0110");
  CHECK(a.kind() == BitVec::Kind::Fin);
  CHECK(a.length() == 4);
  CHECK(a.at(1));
  CHECK_FALSE(a.at(3));
  CHECK(a.to_string() == "0110");

  BitVec e = BitVec::parse("0111(1)");
  CHECK(e == BitVec::ev_const(0b0, 1, true));
  CHECK(e.to_string() == "0(1)");
  CHECK(e.at(40));
  CHECK(e.truncate(3) == BitVec::fin(0b110, 3));
  CHECK(BitVec::parse("(0)") == BitVec::ev_const(0, 0, false));
  CHECK_THROWS_AS(BitVec::parse("01x"), InputError);
  CHECK(bits_from_string(bits_to_string(0b1011, 4)) == 0b1011);
}

TEST_CASE("cosets") {
  Coset c(3, {0b011, 0b110}, 0b001);
  CHECK(c.size() == 4);
  CHECK(c.contains(0b001));
  CHECK(c.contains(0b010));
  CHECK_FALSE(c.contains(0b000));
  CHECK(c == Coset(3, {0b101, 0b011}, 0b111));
  CHECK(c.group().contains(0));
  CHECK(c.shifted(0b001).is_group());
  auto el = c.elements();
  CHECK(std::is_sorted(el.begin(), el.end()));
  CHECK(el.size() == 4);
  CHECK_THROWS_AS(Coset(2, {0b100}, 0), InputError);

  auto u = union_as_coset(Coset::single(2, 0b00), Coset::single(2, 0b11));
  REQUIRE(u);
  CHECK(u->size() == 2);
  CHECK_FALSE(union_as_coset(Coset(2, {0b01}, 0), Coset::single(2, 0b10)));
}

TEST_CASE("base and zero systems") {
  FinCosetSystem b = base_system(1, 1);
  CHECK(b.at(0) == Coset::single(1, 0));
  CHECK(b.at(1) == Coset::single(1, 1));
  for (Word f = 0; f < b.domain_size(); ++f) CHECK(group_part(b).at(f) == Coset::single(1, 0));

  CHECK(CosetRanks(zero_system(2, 2)).empty_rank() == Ordinal::infinity());
  CHECK(oracle::coset_set_rank(zero_system(2, 2), {}) == Ordinal::infinity());

  for (auto [n, m] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 3}}) {
    FinCosetSystem c = base_system(n, m);
    CosetRanks r(c);
    const Word ones_f = (Word{1} << n) - 1, ones_g = (Word{1} << m) - 1;
    CHECK(r.empty_rank() == Ordinal::fin(1));
    CHECK(oracle::coset_set_rank(c, {}) == Ordinal::fin(1));
    CHECK(r.pair_rank(ones_f, ones_g) == Ordinal::fin(0));
    CHECK(oracle::coset_set_rank(c, {{ones_f, ones_g}}) == Ordinal::fin(0));
  }
  // With one bit on each side the zero-prefix cut never forces anything.
  CHECK(CosetRanks(base_system(1, 1)).empty_rank() == Ordinal::infinity());
  CHECK(oracle::coset_set_rank(base_system(1, 1), {}) == Ordinal::infinity());
}

TEST_CASE("rank errors") {
  FinCosetSystem b = base_system(2, 1);
  CosetRanks r(b);
  CHECK_THROWS_AS(r.rank({{0, 1}}), InputError);
  CHECK_THROWS_AS(r.rank({{0, 0}, {3, 1}, {1, 0}, {2, 0}, {3, 0}}), InputError);
}

TEST_CASE("group parts") {
  for (FinCosetSystem c : {base_system(2, 1), successor(base_system(2, 1)), early_g()}) {
    FinCosetSystem g = group_part(c);
    CHECK(CosetRanks(g).empty_rank() == Ordinal::infinity());
    CHECK(group_part(g) == g);
    for (Word f = 0; f < g.domain_size(); ++f) CHECK(g.at(f).is_group());
  }
}

TEST_CASE("successor") {
  FinCosetSystem c = base_system(2, 1);
  for (std::uint64_t k = 1; k <= 2; ++k) {
    CHECK(CosetRanks(c).empty_rank() == Ordinal::fin(k));
    CHECK(oracle::coset_set_rank(c, {}) == Ordinal::fin(k));
    FinCosetSystem d = successor(c);
    CHECK(d.n() == c.n() + 2);
    CHECK(d.m() == c.m() + 2);
    for (Word f = 0; f < d.domain_size(); f += 2) CHECK(d.at(f) == Coset::single(d.m(), 0));
    c = d;
  }
  CHECK(CosetRanks(c).empty_rank() == Ordinal::fin(3));
  CHECK(CosetRanks(early_g()).empty_rank() == Ordinal::fin(1));
  CHECK(CosetRanks(successor(early_g())).empty_rank() == Ordinal::fin(2));
}

TEST_CASE("f_map") {
  CHECK(f_map(0, {}).empty());
  auto one = f_map(1, {{0b10, 0b1}});
  REQUIRE(one.size() == 1);
  CHECK(one[0] == std::pair<Word, Word>{0b1000 | 0b01, 0b101});

  std::mt19937_64 rng(5);
  for (FinCosetSystem c : {base_system(2, 1), successor(base_system(2, 1))}) {
    FinCosetSystem d = successor(c);
    const PairSet p = all_pairs(c);
    std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
    for (int it = 0; it < 200; ++it) {
      PairSet b;
      for (int k = 0, sz = 1 + it % 3; k < sz; ++k) b.push_back(p[pick(rng)]);
      for (int i : {0, 1}) {
        PairSet fb = f_map(i, b);
        for (const auto& [f, g] : fb) CHECK(d.contains(f, g));
        CHECK(is_coherent(c, b) == is_coherent(d, fb));
      }
    }
  }
}

TEST_CASE("rank transport along f_map") {
  FinCosetSystem c = successor(base_system(2, 1));
  FinCosetSystem d = successor(c);
  CosetRanks rc(c), rd(d);
  std::size_t checked = 0;
  for (const PairSet& b : small_coherent_sets(c)) {
    if (b.empty()) continue;
    for (int i : {0, 1}) {
      PairSet fb = f_map(i, b);
      PairSet with = successor_anchor(i, c);
      with.insert(with.end(), fb.begin(), fb.end());
      REQUIRE(is_coherent(d, with));
      CHECK(rd.rank(fb) <= rc.rank(b));
      CHECK(rc.rank(b) <= rd.rank(with));
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("set ranks against the oracle") {
  for (FinCosetSystem c : {base_system(2, 1), base_system(2, 2), early_g(), successor(base_system(2, 1))}) {
    CosetRanks r(c);
    for (const PairSet& a : small_coherent_sets(c)) {
      const Ordinal want = oracle::coset_set_rank(c, a);
      CHECK(r.rank(a) == want);
      // Minimum lemma and monotonicity.
      if (!a.empty()) {
        Ordinal lo = Ordinal::infinity();
        for (const auto& [f, g] : a) {
          Ordinal single = oracle::coset_set_rank(c, {{f, g}});
          lo = std::min(lo, single);
          CHECK(want <= single);
        }
        CHECK(want == lo);
      }
    }
  }
}

TEST_CASE("extra f bits leave ranks alone") {
  FinCosetSystem c = base_system(2, 1);
  for (int k = 0; k < 3; ++k) {
    CHECK(CosetRanks(pad_f(c)).empty_rank() == CosetRanks(c).empty_rank());
    CHECK(CosetRanks(pad_f(pad_f(c))).empty_rank() == CosetRanks(c).empty_rank());
    c = successor(c);
  }
}

TEST_CASE("limits") {
  std::vector<FinCosetSystem> bad{successor(base_system(2, 1)), base_system(2, 1)};
  CHECK_THROWS_AS(limit(bad), InputError);
  std::vector<FinCosetSystem> infinite{zero_system(1, 1)};
  CHECK_THROWS_AS(limit(infinite), InputError);

  SUBCASE("small layout against the oracle") {
    std::vector<FinCosetSystem> parts{early_g(), successor(early_g())};
    LimitSystem l = limit(parts);
    CosetRanks lr(l.d);
    TauEvaluator tau(l);
    CHECK(lr.empty_rank() == Ordinal::fin(2));
    CHECK(oracle::coset_set_rank(l.d, {}) == Ordinal::fin(2));
    bool zero_seen = false, inf_seen = false;
    for (Word f = 0; f < l.d.domain_size(); ++f)
      for (Word g : l.d.at(f).elements()) {
        const Ordinal t = tau.tau(f, g);
        CHECK(t == lr.pair_rank(f, g));
        CHECK(t == oracle::coset_set_rank(l.d, {{f, g}}));
        zero_seen |= t == Ordinal::fin(0);
        inf_seen |= t.is_infinite();
      }
    CHECK(zero_seen);
    CHECK_FALSE(inf_seen);
  }

  SUBCASE("base chain") {
    std::vector<FinCosetSystem> parts{base_system(2, 1), successor(base_system(2, 1))};
    LimitSystem l = limit(parts);
    CosetRanks lr(l.d);
    TauEvaluator tau(l);
    CHECK(lr.empty_rank() == Ordinal::fin(2));
    for (Word f = 0; f < l.d.domain_size(); ++f)
      for (Word g : l.d.at(f).elements()) {
        CHECK(l.selector(g, 1));
        CHECK(tau.tau(f, g) == lr.pair_rank(f, g));
      }
  }
}

TEST_CASE("unary structures") {
  FinCosetSystem c = base_system(2, 1);
  FiniteStructure mc = to_unary_structure(c), mg = to_unary_structure(group_part(c));
  CHECK(mc.size() == 8);
  CHECK(to_unary_structure(zero_system(2, 1)) == mg);

  // rank 1 gives 1-equivalence; the predicates still differ.
  BfLevel v = bf_level(mc, {}, mg, {});
  REQUIRE(v.level);
  CHECK(v.exact);
  CHECK(*v.level >= Ordinal::fin(1));
  CHECK(v.level->is_finite());
  CHECK(oracle::ef_level(mc, {}, mg, {}, 3) == static_cast<int>(v.level->value()));
  CHECK_FALSE(oracle::isomorphism(mc, mg));

  FinCosetSystem s = successor(c);
  CHECK_THROWS_AS(to_unary_structure(s, Caps{.universe = 64, .tuples = 64}), CapExceeded);
}
