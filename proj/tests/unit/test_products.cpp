#include <algorithm>
#include <map>

#include "builders.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "scottlab/backforth.hpp"
#include "scottlab/posets.hpp"
#include "scottlab/products.hpp"
#include "scottlab/search.hpp"

using namespace scottlab;

namespace {

// Same structure with its relation symbols listed in name order.
FiniteStructure by_name(const FiniteStructure& m) {
  std::vector<std::size_t> order(m.signature().relation_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto& rels = m.signature().relations();
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rels[a].name < rels[b].name; });
  Signature sig;
  for (auto r : order) sig.add_relation(rels[r].name, rels[r].arity);
  FiniteStructure out(sig, m.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& t : m.tuples(order[i])) out.add(i, t);
  return out;
}

ProductSpec constant(const FiniteStructure& f) { return build::constant_tail(f); }

}  // namespace

TEST_CASE("two 2-element factors give the 2-antichain canonical model") {
  FiniteStructure prod = build_truncated_product(constant(build::pure_set(2)), 2);
  FinitePoset anti({"p0", "p1"}, {}, {2, 2});
  auto model = build_truncated_model(anti, anti.names());
  FiniteStructure renamed = rename_relations(prod, {{"E_0", "E_p0"}, {"E_1", "E_p1"}});
  CHECK(oracle::isomorphism(by_name(renamed), by_name(model.structure)).has_value());
}

TEST_CASE("lifted relations") {
  ProductSpec spec{{build::cyclic_order(3)}, {build::pure_set(2)}};
  FiniteStructure m = build_truncated_product(spec, 2);
  REQUIRE(m.size() == 6);
  const FiniteStructure c = build::cyclic_order(3);
  for (Element x = 0; x < 6; ++x) {
    Tuple cx = product_coords(spec, 2, x);
    CHECK(product_element(spec, cx) == x);
    for (Element y = 0; y < 6; ++y) {
      Tuple cy = product_coords(spec, 2, y);
      CHECK(m.holds("E_0", {x, y}) == (cx[0] == cy[0]));
      CHECK(m.holds("E_1", {x, y}) == (cx[1] == cy[1]));
      for (Element z = 0; z < 6; ++z) {
        Tuple cz = product_coords(spec, 2, z);
        CHECK(m.holds("Cyc@0", {x, y, z}) == c.holds("Cyc", {cx[0], cy[0], cz[0]}));
      }
    }
  }
  // Coordinate 0 is most significant.
  CHECK(product_coords(spec, 2, 1) == Tuple{0, 1});
}

TEST_CASE("two-class factors realize the disjoint-pairs ladder") {
  Caps caps;
  caps.universe = 16;
  for (std::size_t n : {1, 2}) {
    FiniteStructure prod = build_truncated_product(constant(build::equivalence({2, 2})), n, caps);
    FinitePoset p2 = materialize(benchmark_presentation(2), n);
    auto model = build_truncated_model(p2, p2.names(), caps);
    std::map<std::string, std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      names["E@" + std::to_string(i)] = "E_t0.p" + std::to_string(i);
      names["E_" + std::to_string(i)] = "E_t0.q" + std::to_string(i);
    }
    CHECK(isomorphic(by_name(rename_relations(prod, names)), by_name(model.structure), caps).has_value());
  }
}

TEST_CASE("I_* and Borel verdicts") {
  IStar two = istar(constant(build::pure_set(2)));
  CHECK(two.tail_free());
  CHECK(two.prefix_nonfree.empty());
  CHECK_FALSE(istar(constant(build::pure_set(3))).tail_free());
  CHECK(istar(constant(build::cyclic_order(5))).tail_free());

  CHECK(borel_verdict(constant(build::pure_set(2))) == BorelVerdict::Borel);
  CHECK(borel_verdict(constant(build::pure_set(3))) == BorelVerdict::NonBorel);
  CHECK(borel_verdict(constant(build::cyclic_order(3))) == BorelVerdict::Borel);
  CHECK(borel_verdict(constant(build::equivalence({2, 2}))) == BorelVerdict::NonBorel);
  CHECK(borel_verdict({{build::pure_set(3)}, {build::pure_set(2)}}) == BorelVerdict::Borel);
  CHECK(istar({{build::pure_set(3)}, {build::pure_set(2)}}).prefix_nonfree == std::vector<std::size_t>{0});
  CHECK(to_string(BorelVerdict::NonBorel) == "NonBorel");
}

TEST_CASE("periodic tails are classified by one period") {
  ProductSpec spec{{}, {build::pure_set(2), build::pure_set(3)}};
  IStar s = istar(spec);
  CHECK(s.tail_nonfree == std::vector<std::size_t>{1});
  CHECK(borel_verdict(spec) == BorelVerdict::NonBorel);
}

TEST_CASE("invalid products") {
  CHECK_THROWS_AS(validate(ProductSpec{{build::pure_set(2)}, {}}), InputError);
  CHECK_THROWS_AS(validate(constant(build::pure_set(1))), InputError);
}

TEST_CASE("constructed bases") {
  ConstructedBase free = construct_base(constant(build::pure_set(2)), 3);
  CHECK(free.tuple.size() == 1);
  REQUIRE(free.verified);
  CHECK(*free.verified);

  ProductSpec spec{{build::pure_set(3)}, {build::pure_set(2)}};
  ConstructedBase b = construct_base(spec, 2);
  CHECK(b.tuple.size() == 3);
  CHECK(b.nonfree == std::vector<std::size_t>{0});
  std::vector<Element> first;
  for (Element x : b.tuple) first.push_back(product_coords(spec, 2, x)[0]);
  std::sort(first.begin(), first.end());
  CHECK(first == std::vector<Element>{0, 1, 2});
  FiniteStructure m = build_truncated_product(spec, 2);
  CHECK(oracle::is_base(oracle::automorphisms(m), b.tuple));

  CHECK_THROWS_AS(construct_base(constant(build::pure_set(3)), 2), InputError);
  CHECK_FALSE(oracle::is_base(oracle::automorphisms(m), Tuple{}));
}

TEST_CASE("gadget validation") {
  ProductSpec spec = constant(build::pure_set(3));
  GadgetSpec g;
  g.basepoints = {0, 0};
  g.factors = {{0, {0, 2, 1}, 1}, {1, {0, 2, 1}, 1}};
  g.family = {{{0}, {{1}}}, {{0, 1}, {}}};
  CHECK_NOTHROW(build_rank_gadget(spec, g, 2));

  GadgetSpec moved = g;
  moved.factors[0].g = {1, 0, 2};
  CHECK_THROWS_AS(build_rank_gadget(spec, moved, 2), InputError);

  GadgetSpec ident = g;
  ident.factors[0].g = {0, 1, 2};
  CHECK_THROWS_AS(build_rank_gadget(spec, ident, 2), InputError);

  GadgetSpec fixed = g;
  fixed.factors[0].d = 0;
  CHECK_THROWS_AS(build_rank_gadget(spec, fixed, 2), InputError);

  ProductSpec four = constant(build::pure_set(4));
  GadgetSpec composite;
  composite.basepoints = {0};
  composite.factors = {{0, {0, 2, 3, 1}, 1}};
  composite.family = {{{0}, {{1}}}};
  CHECK_NOTHROW(build_rank_gadget(four, composite, 1));
  composite.factors[0].g = {1, 2, 3, 0};  // order 4, moves the basepoint anyway
  CHECK_THROWS_AS(build_rank_gadget(four, composite, 1), InputError);

  GadgetSpec undirected = g;
  undirected.family = {{{0}, {{1}}}, {{1}, {{1}}}};
  CHECK_THROWS_AS(build_rank_gadget(spec, undirected, 2), InputError);
}

TEST_CASE("gadget universes") {
  ProductSpec spec = constant(build::pure_set(3));
  GadgetSpec g;
  g.basepoints = {0, 0};
  g.factors = {{0, {0, 2, 1}, 1}, {1, {0, 2, 1}, 1}};
  g.family = {{{0}, {{1}}}, {{0, 1}, {}}};
  RankGadget r = build_rank_gadget(spec, g, 2);
  // Basepoint, f_{0} = (1,0), its translate (2,0), and f_{0,1} = (1,1).
  CHECK(r.structure.size() == 4);
  CHECK(r.points[r.f[0]] == Tuple{1, 0});
  CHECK(r.points[r.translate(0, {1})] == Tuple{2, 0});
  CHECK(r.points[r.f[1]] == Tuple{1, 1});
  CHECK(r.points[r.structure.constant(0)] == Tuple{0, 0});

  // Without family elements only finitely supported points remain.
  GadgetSpec wide = g;
  wide.support_bound = 1;
  RankGadget w = build_rank_gadget(spec, wide, 2);
  CHECK(w.structure.size() == 1 + 2 + 2 + 1);
}

TEST_CASE("gadget ranks bound bf levels from below") {
  ProductSpec spec = constant(build::pure_set(3));
  GadgetSpec g;
  g.basepoints = {0, 0};
  g.factors = {{0, {0, 2, 1}, 1}, {1, {0, 2, 1}, 1}};
  g.family = {{{0}, {{1}}}, {{0, 1}, {{1, 1}}}};
  RankGadget r = build_rank_gadget(spec, g, 2);
  const InvSystem& sys = r.system.system;
  RankTable ranks = sys.rank_table(RankQuantifier::AllAbove);
  for (std::size_t p = 0; p < sys.size(); ++p)
    for (std::size_t i = 0; i < sys.elements(p).size(); ++i) {
      Element x = r.translate(p, sys.elements(p)[i]);
      Element a[1] = {r.f[p]}, b[1] = {x};
      const int ef = oracle::ef_level(r.structure, a, r.structure, b, 3);
      const Ordinal& rk = ranks.ranks[p][i];
      for (int k = 0; k <= 2; ++k)
        if (rk >= Ordinal::fin(k)) CHECK(ef >= k);
    }
}
