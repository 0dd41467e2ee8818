#include "scottlab/verify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "scottlab/backforth.hpp"
#include "scottlab/cosets.hpp"
#include "scottlab/invsystems.hpp"
#include "scottlab/products.hpp"
#include "scottlab/reductions.hpp"
#include "scottlab/search.hpp"

namespace scottlab {

FiniteStructure random_structure(std::mt19937_64& rng, std::size_t size, const RandomSignature& rs) {
  Signature sig;
  for (std::size_t i = 0; i < rs.unary; ++i) sig.add_relation("U" + std::to_string(i), 1);
  for (std::size_t i = 0; i < rs.binary; ++i) sig.add_relation("R" + std::to_string(i), 2);
  for (std::size_t i = 0; i < rs.ternary; ++i) sig.add_relation("T" + std::to_string(i), 3);
  FiniteStructure m(sig, size);
  std::bernoulli_distribution coin(rs.density);
  for (std::size_t r = 0; r < sig.relation_count(); ++r) {
    const std::size_t k = sig.relations()[r].arity;
    Tuple t(k, 0);
    while (true) {
      if (coin(rng)) m.add(r, t);
      std::size_t i = k;
      while (i > 0 && ++t[i - 1] == size) t[--i] = 0;
      if (i == 0) break;
    }
  }
  return m;
}

PosetPresentation random_nbc_presentation(std::mt19937_64& rng, std::size_t finite_size) {
  PosetPresentation p;
  std::uniform_int_distribution<int> delta(2, 3);
  std::bernoulli_distribution coin(0.4);
  for (std::size_t i = 0; i < finite_size; ++i) {
    const std::string name = "a" + std::to_string(i);
    p.elems.push_back(name);
    p.delta[name] = delta(rng);
    for (std::size_t j = 0; j < i; ++j)
      if (coin(rng)) p.le.emplace_back("a" + std::to_string(j), name);
  }
  TailBlock t;
  t.kind = TailKind::Antichain;
  t.delta = 2;
  for (const auto& e : p.elems)
    if (coin(rng)) t.above.push_back(e);
  p.tails.push_back(t);
  return p;
}

namespace {

struct Check {
  CheckResult r;
  explicit Check(std::string name) { r.name = std::move(name); }
  void fail(const std::string& why) {
    if (r.passed) r.detail = why;
    r.passed = false;
  }
};

std::string show(std::span<const Element> t) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < t.size(); ++i) s << (i ? "," : "") << t[i];
  s << ")";
  return s.str();
}

FiniteStructure pure_set(std::size_t n) { return FiniteStructure(Signature{}, n); }

FiniteStructure cyclic_order(std::size_t n) {
  Signature sig;
  sig.add_relation("Cyc", 3);
  FiniteStructure m(sig, n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z) {
        const std::size_t a = (y + n - x) % n, b = (z + n - x) % n;
        if (a != 0 && b != 0 && a < b) m.add("Cyc", {x, y, z});
      }
  return m;
}

FiniteStructure two_class(std::size_t half) {
  Signature sig;
  sig.add_relation("E", 2);
  FiniteStructure m(sig, 2 * half);
  for (Element x = 0; x < 2 * half; ++x)
    for (Element y = 0; y < 2 * half; ++y)
      if (x / half == y / half) m.add("E", {x, y});
  return m;
}

void check_orbits(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<CheckResult>& out) {
  Check c("bf fixpoint equals Aut-orbits");
  std::uniform_int_distribution<std::size_t> size(1, 4);
  for (std::size_t it = 0; it < opt.sweep; ++it) {
    FiniteStructure m = random_structure(rng, size(rng));
    BfTable table(m);
    for (std::size_t k = 1; k <= std::min<std::size_t>(2, m.size()); ++k) {
      TuplePartition orbits = orbit_partition(m, k, opt.caps);
      for (std::uint64_t a = 0; a < orbits.tuple_count(); ++a)
        for (std::uint64_t b = a; b < orbits.tuple_count(); ++b) {
          Tuple ta = orbits.tuple(a), tb = orbits.tuple(b);
          auto lv = table.level(ta, tb).level;
          const bool bf = lv && lv->is_infinite();
          if (bf != (orbits.block_of_code(a) == orbits.block_of_code(b)))
            c.fail("tuples " + show(ta) + " and " + show(tb) + " disagree");
        }
    }
    for (std::size_t k = 1; k < table.level_count(); ++k)
      if (table.class_count(k) < table.class_count(k - 1)) c.fail("levels are not nested");
    ++c.r.instances;
  }
  out.push_back(c.r);
}

void check_constants(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<CheckResult>& out) {
  Check c("levels unchanged by naming constants");
  std::uniform_int_distribution<std::size_t> size(2, 4);
  for (std::size_t it = 0; it < opt.sweep; ++it) {
    FiniteStructure m = random_structure(rng, size(rng));
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(m.size() - 1));
    Element a = pick(rng), b = pick(rng), x = pick(rng), y = pick(rng);
    Element ab[2] = {a, x}, cd[2] = {b, y};
    auto whole = bf_level(m, ab, m, cd);
    Element ca[1] = {a}, cb[1] = {b};
    auto expanded = bf_level(expand_constants(m, ca), std::span<const Element>(&x, 1), expand_constants(m, cb),
                             std::span<const Element>(&y, 1));
    if (whole != expanded) c.fail("levels " + to_string(whole) + " vs " + to_string(expanded));
    ++c.r.instances;
  }
  out.push_back(c.r);
}

void check_sorts(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<CheckResult>& out) {
  Check c("home-sort levels unchanged by adding sorts");
  std::uniform_int_distribution<std::size_t> size(2, 4);
  for (std::size_t it = 0; it < opt.sweep; ++it) {
    const std::size_t n = size(rng);
    FiniteStructure m = random_structure(rng, n, {1, 0, 0, 0.4});
    std::uniform_int_distribution<std::size_t> cls(0, n - 1);
    std::vector<std::size_t> label(n);
    for (auto& l : label) l = cls(rng);
    m.add_relation_symbol("E", 2);
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y)
        if (label[x] == label[y]) m.add("E", {x, y});
    std::vector<EquivSpec> fam{{"E", {"E"}}};
    SortedExpansion s = expand_sorts(m, fam);
    BfTable base(m), sorted(s.structure);
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y) {
        Element tx[1] = {x}, ty[1] = {y};
        if (base.level(tx, ty) != sorted.level(tx, ty))
          c.fail("elements " + std::to_string(x) + ", " + std::to_string(y) + ": " + to_string(base.level(tx, ty)) +
                 " vs " + to_string(sorted.level(tx, ty)));
      }
    ++c.r.instances;
  }
  out.push_back(c.r);
}

void check_bases(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<CheckResult>& out) {
  Check c("find_finite_base returns a minimum base");
  std::uniform_int_distribution<std::size_t> size(1, 5);
  for (std::size_t it = 0; it < opt.sweep; ++it) {
    FiniteStructure m = random_structure(rng, size(rng), {1, 1, 0, 0.3});
    auto b = find_finite_base(m, m.size());
    if (!b) {
      c.fail("no base found");
      continue;
    }
    if (has_nontrivial_automorphism_fixing(m, *b, opt.caps)) c.fail("output " + show(*b) + " is not a base");
    if (!b->empty()) {
      // Every smaller set of the same size minus one fails.
      std::vector<bool> sel(m.size(), false);
      std::fill(sel.begin(), sel.begin() + static_cast<long>(b->size() - 1), true);
      do {
        Tuple t;
        for (Element x = 0; x < m.size(); ++x)
          if (sel[x]) t.push_back(x);
        if (!has_nontrivial_automorphism_fixing(m, t, opt.caps)) c.fail("smaller base " + show(t) + " exists");
      } while (std::prev_permutation(sel.begin(), sel.end()));
    }
    ++c.r.instances;
  }
  out.push_back(c.r);
}

void check_posets(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<CheckResult>& out) {
  Check c("nbc presentations: axioms and E_Q covering base");
  Caps caps = opt.caps;
  caps.universe = std::max<std::size_t>(caps.universe, 64);
  std::uniform_int_distribution<std::size_t> size(0, 2);
  for (std::size_t it = 0; it < opt.sweep; ++it) {
    PosetPresentation p = random_nbc_presentation(rng, size(rng));
    NbcResult nbc = is_nearly_binary_crosscutting(p);
    if (!nbc.nbc) c.fail("random presentation not recognized as nbc: " + nbc.reason);
    if (benchmark_witness(p)) c.fail("benchmark found in an nbc presentation");
    FinitePoset q = materialize(p, 2);
    auto model = build_truncated_model(q, q.names(), caps);
    auto ax = check_tp_axioms(model.structure, model.q);
    if (!ax.ok) c.fail("axiom " + ax.axiom + " fails: " + ax.detail);
    Tuple base = covering_base(model, nbc.witness_q);
    std::size_t bound = 1;
    for (const auto& w : nbc.witness_q) bound *= static_cast<std::size_t>(q.delta(q.index(w)));
    if (base.size() > bound) c.fail("covering base larger than the product of deltas on Q");
    if (has_nontrivial_automorphism_fixing(model.structure, base, caps)) c.fail("covering base is not a base");
    ++c.r.instances;
  }
  for (int i = 0; i < 4; ++i) {
    auto w = benchmark_witness(benchmark_presentation(i));
    if (!w || w->index != i) c.fail("benchmark " + std::to_string(i) + " misclassified");
    ++c.r.instances;
  }
  out.push_back(c.r);
}

void check_products(const VerifyOptions& opt, std::vector<CheckResult>& out) {
  Check c("product classifications");
  auto expect = [&](const std::string& what, ProductSpec spec, BorelVerdict v) {
    if (borel_verdict(spec, opt.caps) != v) c.fail(what + " misclassified");
    if (v == BorelVerdict::Borel) {
      auto b = construct_base(spec, 2, opt.caps);
      if (b.verified && !*b.verified) c.fail(what + ": constructed base fails");
    }
    ++c.r.instances;
  };
  expect("T2", {{}, {pure_set(2)}}, BorelVerdict::Borel);
  expect("T3", {{}, {pure_set(3)}}, BorelVerdict::NonBorel);
  expect("cyclic orders", {{}, {cyclic_order(3), cyclic_order(4)}}, BorelVerdict::Borel);
  expect("two-class factors", {{}, {two_class(2)}}, BorelVerdict::NonBorel);
  expect("finite non-free prefix", {{pure_set(3)}, {pure_set(2)}}, BorelVerdict::Borel);
  out.push_back(c.r);
}

void check_cosets(std::vector<CheckResult>& out) {
  Check c("coset rank ladder, group parts and tau");
  FinCosetSystem s = base_system(2, 1);
  for (std::uint64_t k = 1; k <= 3; ++k) {
    CosetRanks r(s);
    if (r.empty_rank() != Ordinal::fin(k)) c.fail("rank " + r.empty_rank().to_string() + " at step " + std::to_string(k));
    if (!CosetRanks(group_part(s)).empty_rank().is_infinite()) c.fail("group part has finite rank");
    if (CosetRanks(pad_f(s)).empty_rank() != r.empty_rank()) c.fail("rank changes with an extra f bit");
    ++c.r.instances;
    s = successor(s);
  }
  std::vector<FinCosetSystem> parts{base_system(2, 1), successor(base_system(2, 1))};
  LimitSystem l = limit(parts);
  CosetRanks lr(l.d);
  TauEvaluator tau(l);
  for (Word f = 0; f < l.d.domain_size(); ++f)
    for (Word g : l.d.at(f).elements())
      if (tau.tau(f, g) != lr.pair_rank(f, g)) c.fail("tau differs from the singleton rank");
  if (lr.empty_rank() != Ordinal::fin(2)) c.fail("limit has rank " + lr.empty_rank().to_string());
  ++c.r.instances;
  out.push_back(c.r);
}

void for_each_tree(std::size_t max_nodes, const std::function<void(const RootedTree&)>& fn) {
  std::vector<int> parent{-1};
  std::function<void()> rec = [&] {
    fn(RootedTree(parent));
    if (parent.size() == max_nodes) return;
    for (int p = 0; p < static_cast<int>(parent.size()); ++p) {
      // Canonical-ish: parents nondecreasing, which covers every shape.
      if (parent.size() > 1 && p < parent.back()) continue;
      parent.push_back(p);
      rec();
      parent.pop_back();
    }
  };
  rec();
}

void check_trees(const VerifyOptions& opt, std::vector<CheckResult>& out) {
  Check c("tree systems: rank bounded by strongness, strong extensions");
  for_each_tree(4, [&](const RootedTree& t) {
    for (std::uint64_t k : {2, 3}) {
      TreeSystem ts(t, k);
      CoordinateSystem m = ts.materialize(opt.caps.tuples);
      RankTable ranks = m.system.rank_table();
      for (NodeSet u : t.downward_closed_sets())
        for (const auto& f : ts.elements(u)) {
          auto rep = tree_rank_correspondence(ts, m, ranks, f);
          if (rep.strongness < rep.rank) c.fail("rank above strongness at " + node_set_name(u));
          NodeSet frontier = t.succ_plus(u) & ~u;
          for (std::size_t s = 0; s < t.size(); ++s) {
            if (!((frontier >> s) & 1)) continue;
            for (std::uint64_t a = 0; a + 1 <= t.size(); ++a) {
              Ordinal alpha = Ordinal::fin(a);
              if (!is_alpha_strong(ts, f, alpha.successor())) continue;
              TreeElement g = extend_strong(ts, f, s, alpha);
              if (!ts.in_group(g) || !is_alpha_strong(ts, g, alpha) || ts.restrict(g, u).sigma != f.sigma)
                c.fail("bad strong extension at " + node_set_name(u));
            }
          }
          ++c.r.instances;
        }
    }
  });
  out.push_back(c.r);
}

void check_reductions(const VerifyOptions& opt, std::vector<CheckResult>& out) {
  Check c("reductions preserve and reflect isomorphism");
  FinitePoset one({"a"}, {}, {2});
  FinitePoset two({"a", "b"}, {}, {2, 2});
  auto inputs = enumerate_colored_models(one, 3);
  IsoReport sub = iso_harness([&](const ColoredModel& m) { return reduce_subposet(m, two, opt.caps); }, inputs, opt.caps);
  std::vector<int> d3{3};
  IsoReport del = iso_harness([&](const ColoredModel& m) { return reduce_delta(m, d3, opt.caps); }, inputs, opt.caps);
  if (!sub.counterexamples.empty()) c.fail("reduce_subposet counterexample");
  if (!del.counterexamples.empty()) c.fail("reduce_delta counterexample");
  for (const auto& m : inputs) {
    if (!colored_isomorphic(decode_subposet(reduce_subposet(m, two, opt.caps), one), m, opt.caps))
      c.fail("decode_subposet does not invert reduce_subposet");
    std::vector<int> d2{2};
    if (!colored_isomorphic(decode_delta(reduce_delta(m, d3, opt.caps), d2), m, opt.caps))
      c.fail("decode_delta does not invert reduce_delta");
  }
  c.r.instances = sub.pairs + del.pairs;
  out.push_back(c.r);
}

void check_stability(std::vector<CheckResult>& out) {
  Check c("rank stability under a larger stand-in for Z");
  RootedTree path({-1, 0, 1});
  TreeSystem small(path, 0, 8), large(path, 0, 16);
  auto ms = small.materialize(), ml = large.materialize();
  auto rs = ms.system.rank_table(), rl = ml.system.rank_table();
  for (NodeSet u : path.downward_closed_sets()) {
    // Compare ranks of elements with small sigma values, present in both.
    for (const auto& f : small.elements(u)) {
      bool small_values = true;
      for (const auto& [s, v] : f.sigma) small_values = small_values && (v <= 2 || v >= 6);
      if (!small_values) continue;
      TreeElement g = f;
      for (auto& [s, v] : g.sigma)
        if (v >= 6) v += 8;
      auto a = tree_rank_correspondence(small, ms, rs, f).rank;
      auto b = tree_rank_correspondence(large, ml, rl, g).rank;
      if (a != b) c.fail("rank changed at " + node_set_name(u));
      ++c.r.instances;
    }
  }
  out.push_back(c.r);
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::vector<CheckResult> out;
  check_orbits(opt, rng, out);
  check_constants(opt, rng, out);
  check_sorts(opt, rng, out);
  check_bases(opt, rng, out);
  check_posets(opt, rng, out);
  check_products(opt, out);
  check_cosets(out);
  check_trees(opt, out);
  check_reductions(opt, out);
  check_stability(out);
  return out;
}

}  // namespace scottlab
