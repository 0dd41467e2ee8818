#include <algorithm>
#include <random>
#include <set>

#include "builders.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "scottlab/posets.hpp"
#include "scottlab/search.hpp"
#include "scottlab/verify.hpp"

using namespace scottlab;

namespace {

PosetPresentation with_tail(TailKind kind, int delta, LadderKind ladder = LadderKind::DisjointPairs) {
  PosetPresentation p;
  TailBlock t;
  t.kind = kind;
  t.delta = delta;
  t.ladder = ladder;
  p.tails.push_back(t);
  return p;
}

std::size_t class_count(const FiniteStructure& m, const std::string& rel) {
  std::set<std::vector<Element>> classes;
  for (Element x = 0; x < m.size(); ++x) {
    std::vector<Element> c;
    for (Element y = 0; y < m.size(); ++y)
      if (m.holds(rel, {x, y})) c.push_back(y);
    classes.insert(c);
  }
  return classes.size();
}

}  // namespace

TEST_CASE("presentation validation") {
  CHECK(validate(benchmark_presentation(0)).empty());

  PosetPresentation bad;
  bad.elems = {"a"};
  bad.delta["a"] = 1;
  CHECK_FALSE(validate(bad).empty());

  PosetPresentation cyc;
  cyc.elems = {"a", "b"};
  cyc.delta = {{"a", 2}, {"b", 2}};
  cyc.le = {{"a", "b"}, {"b", "a"}};
  CHECK_FALSE(validate(cyc).empty());
  CHECK_THROWS_AS(materialize(cyc, 1), InputError);
}

TEST_CASE("nearly binary crosscutting") {
  PosetPresentation p = with_tail(TailKind::Antichain, 2);
  p.elems = {"a", "b"};
  p.delta = {{"a", 2}, {"b", 3}};
  p.le = {{"a", "b"}};
  p.tails[0].above = {"a"};
  NbcResult r = is_nearly_binary_crosscutting(p);
  CHECK(r.nbc);
  CHECK(r.witness_q == std::vector<std::string>{"a", "b"});
  CHECK_FALSE(benchmark_witness(p));

  CHECK_FALSE(is_nearly_binary_crosscutting(benchmark_presentation(0)).nbc);
  CHECK_FALSE(is_nearly_binary_crosscutting(benchmark_presentation(1)).nbc);
  CHECK_FALSE(is_nearly_binary_crosscutting(benchmark_presentation(2)).nbc);
  CHECK_FALSE(is_nearly_binary_crosscutting(benchmark_presentation(3)).nbc);
}

TEST_CASE("benchmark witnesses") {
  for (int i = 0; i < 4; ++i) {
    auto w = benchmark_witness(benchmark_presentation(i));
    REQUIRE(w);
    CHECK(w->index == i);
  }
  auto five = benchmark_witness(with_tail(TailKind::Antichain, 5));
  REQUIRE(five);
  CHECK(five->index == 1);
  CHECK(five->delta_prime == 3);

  auto inc = benchmark_witness(with_tail(TailKind::Ladder, 2, LadderKind::Increasing));
  REQUIRE(inc);
  CHECK(inc->index == 3);

  // A chain block wins over an antichain block.
  PosetPresentation both = with_tail(TailKind::Antichain, 4);
  both.tails.push_back(TailBlock{TailKind::Chain, LadderKind::DisjointPairs, 2, {}});
  auto w = benchmark_witness(both);
  REQUIRE(w);
  CHECK(w->index == 0);
  CHECK(w->block == 1);
}

TEST_CASE("materialized tails") {
  FinitePoset p2 = materialize(benchmark_presentation(2), 2);
  CHECK(p2.size() == 4);
  CHECK(p2.less(p2.index("t0.p0"), p2.index("t0.q0")));
  CHECK_FALSE(p2.less(p2.index("t0.p0"), p2.index("t0.q1")));
  FinitePoset p3 = materialize(benchmark_presentation(3), 2);
  CHECK(p3.less(p3.index("t0.p0"), p3.index("t0.q1")));
  CHECK_FALSE(p3.less(p3.index("t0.p1"), p3.index("t0.q0")));
  FinitePoset p0 = materialize(benchmark_presentation(0), 3);
  CHECK(p0.less(p0.index("t0.0"), p0.index("t0.2")));
}

TEST_CASE("truncated canonical models") {
  FinitePoset one({"p"}, {}, {2});
  auto m1 = build_truncated_model(one, one.names());
  CHECK(m1.structure.size() == 2);
  CHECK(class_count(m1.structure, "E_p") == 2);

  FinitePoset chain({"p0", "p1"}, {{"p0", "p1"}}, {2, 2});
  auto mc = build_truncated_model(chain, chain.names());
  CHECK(mc.structure.size() == 4);
  CHECK(class_count(mc.structure, "E_p0") == 2);
  CHECK(class_count(mc.structure, "E_p1") == 4);

  FinitePoset anti({"p0", "p1"}, {}, {2, 2});
  auto ma = build_truncated_model(anti, anti.names());
  REQUIRE(ma.structure.size() == 4);
  // Every E_p0 class meets every E_p1 class in exactly one point.
  for (Element x = 0; x < 4; ++x)
    for (Element y = 0; y < 4; ++y) {
      int meet = 0;
      for (Element z = 0; z < 4; ++z) meet += ma.structure.holds("E_p0", {x, z}) && ma.structure.holds("E_p1", {y, z});
      CHECK(meet == 1);
    }
}

TEST_CASE("canonical models agree with coordinate comparison") {
  FinitePoset p({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}, {2, 3, 2});
  auto m = build_truncated_model(p, p.names());
  CHECK(m.structure.size() == 12);
  for (Element x = 0; x < m.structure.size(); ++x) {
    CHECK(m.element(m.coords(x)) == x);
    for (Element y = 0; y < m.structure.size(); ++y)
      for (std::size_t q = 0; q < p.size(); ++q) {
        bool agree = true;
        for (std::size_t r = 0; r < p.size(); ++r)
          if (p.leq(r, q)) agree = agree && m.coords(x)[r] == m.coords(y)[r];
        CHECK(m.structure.holds("E_" + p.name(q), {x, y}) == agree);
      }
  }
  CHECK(check_tp_axioms(m.structure, m.q).ok);
}

TEST_CASE("axiom violations") {
  FinitePoset chain({"p0", "p1"}, {{"p0", "p1"}}, {2, 2});
  Signature sig;
  sig.add_relation("E_p0", 2);
  sig.add_relation("E_p1", 2);
  FiniteStructure m(sig, 4);
  for (Element x = 0; x < 4; ++x) {
    m.add("E_p1", {x, x});
    for (Element y = 0; y < 4; ++y)
      if ((x < 3) == (y < 3)) m.add("E_p0", {x, y});
  }
  AxiomReport r = check_tp_axioms(m, chain);
  CHECK_FALSE(r.ok);
  CHECK(r.axiom == "splitting");

  FinitePoset anti({"p0", "p1"}, {}, {2, 2});
  auto full = build_truncated_model(anti, anti.names());
  Signature s2 = full.structure.signature();
  FiniteStructure cut(s2, 3);
  for (std::size_t rel = 0; rel < s2.relation_count(); ++rel)
    for (const auto& t : full.structure.tuples(rel))
      if (t[0] < 3 && t[1] < 3) cut.add(rel, t);
  AxiomReport c = check_tp_axioms(cut, anti);
  CHECK_FALSE(c.ok);
  CHECK(c.axiom == "amalgamation");
}

TEST_CASE("covering bases of random nbc presentations") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 25; ++it) {
    PosetPresentation p = random_nbc_presentation(rng, it % 3);
    NbcResult nbc = is_nearly_binary_crosscutting(p);
    REQUIRE(nbc.nbc);
    FinitePoset q = materialize(p, 1);
    Caps caps;
    caps.universe = 64;
    auto model = build_truncated_model(q, q.names(), caps);
    CHECK(check_tp_axioms(model.structure, model.q).ok);
    Tuple b = covering_base(model, nbc.witness_q);
    std::size_t bound = 1;
    for (const auto& w : nbc.witness_q) bound *= static_cast<std::size_t>(q.delta(q.index(w)));
    CHECK(b.size() <= bound);
    if (model.structure.size() <= 8) CHECK(oracle::is_base(oracle::automorphisms(model.structure), b));
    else CHECK_FALSE(has_nontrivial_automorphism_fixing(model.structure, b, caps));
  }
}
