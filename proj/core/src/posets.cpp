#include "scottlab/posets.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <set>

#include "scottlab/backforth.hpp"

namespace scottlab {

std::string to_string(TailKind k) {
  switch (k) {
    case TailKind::Antichain:
      return "antichain";
    case TailKind::Chain:
      return "chain";
    case TailKind::Ladder:
      break;
  }
  return "ladder";
}

std::string to_string(LadderKind k) {
  return k == LadderKind::DisjointPairs ? "disjoint-pairs" : "increasing";
}

// --- FinitePoset -----------------------------------------------------------

FinitePoset::FinitePoset(std::vector<std::string> names,
                         const std::vector<std::pair<std::string, std::string>>& le,
                         std::vector<int> delta)
    : names_(std::move(names)), delta_(std::move(delta)) {
  const std::size_t n = names_.size();
  if (delta_.size() != n) throw InputError("delta must be given for every element");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j]) throw InputError("duplicate poset element '" + names_[i] + "'");
    if (delta_[i] < 2) throw InputError("delta(" + names_[i] + ") must be at least 2");
  }
  leq_.assign(n * n, false);
  for (std::size_t i = 0; i < n; ++i) leq_[i * n + i] = true;
  for (const auto& [a, b] : le) leq_[index(a) * n + index(b)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq_[k * n + j]) leq_[i * n + j] = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (leq_[i * n + j] && leq_[j * n + i])
        throw InputError("not a partial order: " + names_[i] + " and " + names_[j] +
                         " lie on a cycle");
}

std::optional<std::size_t> FinitePoset::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t FinitePoset::index(const std::string& name) const {
  if (auto i = find(name)) return *i;
  throw InputError("unknown poset element '" + name + "'");
}

bool FinitePoset::maximal(std::size_t a) const {
  for (std::size_t b = 0; b < size(); ++b)
    if (less(a, b)) return false;
  return true;
}

std::vector<std::size_t> FinitePoset::down_set(std::size_t a) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < size(); ++b)
    if (leq(b, a)) out.push_back(b);
  return out;
}

bool FinitePoset::downward_closed(std::span<const std::size_t> subset) const {
  std::vector<bool> in(size(), false);
  for (auto i : subset) in.at(i) = true;
  for (auto i : subset)
    for (std::size_t j = 0; j < size(); ++j)
      if (leq(j, i) && !in[j]) return false;
  return true;
}

FinitePoset FinitePoset::restrict(std::span<const std::size_t> subset) const {
  std::vector<std::string> names;
  std::vector<int> delta;
  std::vector<std::pair<std::string, std::string>> le;
  for (auto i : subset) {
    names.push_back(names_.at(i));
    delta.push_back(delta_.at(i));
  }
  for (auto i : subset)
    for (auto j : subset)
      if (less(i, j)) le.emplace_back(names_[i], names_[j]);
  return FinitePoset(std::move(names), le, std::move(delta));
}

std::vector<std::pair<std::string, std::string>> FinitePoset::strict_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (less(i, j)) out.emplace_back(names_[i], names_[j]);
  return out;
}

FinitePoset FinitePoset::with_delta(std::vector<int> delta) const {
  return FinitePoset(names_, strict_pairs(), std::move(delta));
}

// --- presentations ---------------------------------------------------------

std::vector<Diagnostic> validate(const PosetPresentation& p) {
  std::vector<Diagnostic> out;
  std::set<std::string> known;
  for (const auto& e : p.elems) {
    if (!known.insert(e).second) out.push_back({e, "duplicate element"});
    auto it = p.delta.find(e);
    if (it == p.delta.end())
      out.push_back({e, "missing delta"});
    else if (it->second < 2)
      out.push_back({e, "delta must be at least 2, got " + std::to_string(it->second)});
  }
  for (const auto& [name, d] : p.delta)
    if (!known.count(name)) out.push_back({name, "delta given for an unknown element"});
  bool names_ok = true;
  for (const auto& [a, b] : p.le)
    for (const auto& x : {a, b})
      if (!known.count(x)) {
        out.push_back({x, "order relation mentions an unknown element"});
        names_ok = false;
      }
  if (names_ok) {
    const std::size_t n = p.elems.size();
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx.emplace(p.elems[i], i);
    std::vector<bool> r(n * n, false);
    for (const auto& [a, b] : p.le) r[idx[a] * n + idx[b]] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (r[i * n + k])
          for (std::size_t j = 0; j < n; ++j)
            if (r[k * n + j]) r[i * n + j] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && r[i * n + j] && r[j * n + i]) {
          out.push_back({p.elems[i], "lies on a cycle of the order relation"});
          break;
        }
  }
  for (std::size_t b = 0; b < p.tails.size(); ++b) {
    const auto& t = p.tails[b];
    const std::string name = "t" + std::to_string(b);
    if (t.delta < 2) out.push_back({name, "delta must be at least 2, got " + std::to_string(t.delta)});
    for (const auto& a : t.above)
      if (!known.count(a)) out.push_back({name, "tail lies above unknown element '" + a + "'"});
  }
  return out;
}

namespace {

void require_valid(const PosetPresentation& p) {
  auto d = validate(p);
  if (!d.empty()) throw InputError("invalid poset presentation: " + d.front().element + ": " + d.front().message);
}

}  // namespace

FinitePoset finite_part(const PosetPresentation& p) { return materialize(p, 0); }

FinitePoset materialize(const PosetPresentation& p, std::size_t per_tail) {
  require_valid(p);
  std::vector<std::string> names = p.elems;
  std::vector<int> delta;
  for (const auto& e : p.elems) delta.push_back(p.delta.at(e));
  auto le = p.le;
  for (std::size_t b = 0; b < p.tails.size(); ++b) {
    const auto& t = p.tails[b];
    const std::string pre = "t" + std::to_string(b) + ".";
    std::vector<std::string> block;
    if (t.kind == TailKind::Ladder) {
      for (std::size_t i = 0; i < per_tail; ++i) {
        block.push_back(pre + "p" + std::to_string(i));
        block.push_back(pre + "q" + std::to_string(i));
      }
      for (std::size_t n = 0; n < per_tail; ++n)
        for (std::size_t m = n; m < per_tail; ++m)
          if (m == n || t.ladder == LadderKind::Increasing)
            le.emplace_back(pre + "p" + std::to_string(n), pre + "q" + std::to_string(m));
    } else {
      for (std::size_t i = 0; i < per_tail; ++i) block.push_back(pre + std::to_string(i));
      if (t.kind == TailKind::Chain)
        for (std::size_t i = 0; i + 1 < per_tail; ++i) le.emplace_back(block[i], block[i + 1]);
    }
    for (const auto& x : block) {
      names.push_back(x);
      delta.push_back(t.delta);
      for (const auto& a : t.above) le.emplace_back(a, x);
    }
  }
  return FinitePoset(std::move(names), le, std::move(delta));
}

NbcResult is_nearly_binary_crosscutting(const PosetPresentation& p) {
  require_valid(p);
  NbcResult r;
  for (std::size_t b = 0; b < p.tails.size(); ++b) {
    const auto& t = p.tails[b];
    if (t.kind == TailKind::Chain) {
      r.block = b;
      r.reason = "tail block t" + std::to_string(b) + " is a chain: infinitely many non-maximal elements";
      return r;
    }
    if (t.kind == TailKind::Ladder) {
      r.block = b;
      r.reason = "tail block t" + std::to_string(b) +
                 " is a ladder: infinitely many non-maximal elements";
      return r;
    }
    if (t.delta != 2) {
      r.block = b;
      r.reason = "tail block t" + std::to_string(b) + " has infinitely many elements with delta = " +
                 std::to_string(t.delta);
      return r;
    }
  }
  // Every tail is Antichain(2). Q = down-closure of the finite elements that
  // are non-maximal in P or have delta != 2.
  FinitePoset fin = finite_part(p);
  std::vector<bool> below_tail(fin.size(), false);
  for (const auto& t : p.tails)
    for (const auto& a : t.above) below_tail[fin.index(a)] = true;
  std::vector<bool> in_q(fin.size(), false);
  for (std::size_t i = 0; i < fin.size(); ++i) {
    if (!fin.maximal(i) || below_tail[i] || fin.delta(i) != 2)
      for (auto j : fin.down_set(i)) in_q[j] = true;
  }
  r.nbc = true;
  for (std::size_t i = 0; i < fin.size(); ++i)
    if (in_q[i]) r.witness_q.push_back(fin.name(i));
  r.reason = "all but finitely many elements are maximal with delta = 2";
  return r;
}

std::optional<BenchmarkWitness> benchmark_witness(const PosetPresentation& p) {
  require_valid(p);
  std::optional<BenchmarkWitness> best;
  auto offer = [&](BenchmarkWitness w) {
    if (!best || w.index < best->index) best = std::move(w);
  };
  for (std::size_t b = 0; b < p.tails.size(); ++b) {
    const auto& t = p.tails[b];
    const std::string pre = "t" + std::to_string(b) + ".";
    BenchmarkWitness w;
    w.block = b;
    if (t.kind == TailKind::Chain) {
      w.index = 0;
      w.selection = {pre + "0", pre + "1", pre + "2", "..."};
      w.delta_prime = 2;
      w.description = "chain block t" + std::to_string(b) + " with delta lowered to 2";
    } else if (t.kind == TailKind::Antichain && t.delta >= 3) {
      w.index = 1;
      w.selection = {pre + "0", pre + "1", pre + "2", "..."};
      w.delta_prime = 3;
      w.description = "antichain block t" + std::to_string(b) + " with delta lowered to 3";
    } else if (t.kind == TailKind::Ladder && t.delta >= 3) {
      w.index = 1;
      w.selection = {pre + "q0", pre + "q1", pre + "q2", "..."};
      w.delta_prime = 3;
      w.description = "upper rungs of ladder block t" + std::to_string(b) +
                      " form an antichain; delta lowered to 3";
    } else if (t.kind == TailKind::Ladder) {
      w.index = t.ladder == LadderKind::DisjointPairs ? 2 : 3;
      w.selection = {pre + "p0", pre + "q0", pre + "p1", pre + "q1", "..."};
      w.delta_prime = 2;
      w.description = to_string(t.ladder) + " ladder block t" + std::to_string(b);
    } else {
      continue;
    }
    offer(std::move(w));
  }
  return best;
}

PosetPresentation benchmark_presentation(int i) {
  PosetPresentation p;
  TailBlock t;
  switch (i) {
    case 0:
      t.kind = TailKind::Chain;
      break;
    case 1:
      t.kind = TailKind::Antichain;
      t.delta = 3;
      break;
    case 2:
      t.kind = TailKind::Ladder;
      t.ladder = LadderKind::DisjointPairs;
      break;
    case 3:
      t.kind = TailKind::Ladder;
      t.ladder = LadderKind::Increasing;
      break;
    default:
      throw InputError("benchmark index must be 0..3");
  }
  p.tails.push_back(t);
  return p;
}

// --- canonical models ------------------------------------------------------

Tuple TruncatedCanonicalModel::coords(Element e) const {
  Tuple c(q.size());
  for (std::size_t i = q.size(); i-- > 0;) {
    c[i] = e % static_cast<Element>(q.delta(i));
    e /= static_cast<Element>(q.delta(i));
  }
  return c;
}

Element TruncatedCanonicalModel::element(std::span<const Element> c) const {
  if (c.size() != q.size()) throw InputError("coordinate vector has the wrong length");
  Element e = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (c[i] >= static_cast<Element>(q.delta(i))) throw InputError("coordinate out of range");
    e = e * static_cast<Element>(q.delta(i)) + c[i];
  }
  return e;
}

TruncatedCanonicalModel build_truncated_model(const FinitePoset& p,
                                              std::span<const std::string> selection,
                                              const Caps& caps) {
  std::vector<std::size_t> idx;
  for (const auto& s : selection) idx.push_back(p.index(s));
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw InputError("selection lists an element twice");
  if (!p.downward_closed(idx)) throw InputError("selection is not downward closed");

  TruncatedCanonicalModel m;
  m.q = p.restrict(idx);
  std::size_t size = 1;
  for (int d : m.q.deltas()) {
    size *= static_cast<std::size_t>(d);
    if (size > caps.tuples) throw CapExceeded("truncated model exceeds the size cap");
  }

  Signature sig;
  for (const auto& name : m.q.names()) sig.add_relation("E_" + name, 2);
  FiniteStructure s(sig, size);
  std::vector<Tuple> coords(size);
  for (Element e = 0; e < size; ++e) coords[e] = m.coords(e);
  for (std::size_t qi = 0; qi < m.q.size(); ++qi) {
    auto down = m.q.down_set(qi);
    std::map<Tuple, std::vector<Element>> buckets;
    for (Element e = 0; e < size; ++e) {
      Tuple key;
      for (auto d : down) key.push_back(coords[e][d]);
      buckets[key].push_back(e);
    }
    for (const auto& [key, members] : buckets)
      for (Element x : members)
        for (Element y : members) {
          Element t[2] = {x, y};
          s.add(qi, t);
        }
  }
  m.structure = std::move(s);
  return m;
}

TruncatedCanonicalModel build_truncated_model(const PosetPresentation& p,
                                              std::span<const std::string> selection,
                                              const Caps& caps) {
  std::size_t per_tail = 1;
  for (const auto& s : selection) {
    auto dot = s.find('.');
    if (s.empty() || s[0] != 't' || dot == std::string::npos) continue;
    std::string_view rest = std::string_view(s).substr(dot + 1);
    if (!rest.empty() && (rest[0] == 'p' || rest[0] == 'q')) rest.remove_prefix(1);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec == std::errc() && ptr == rest.data() + rest.size()) per_tail = std::max(per_tail, v + 1);
  }
  return build_truncated_model(materialize(p, per_tail), selection, caps);
}

// --- axioms ----------------------------------------------------------------

AxiomReport check_tp_axioms(const FiniteStructure& m, const FinitePoset& q) {
  const std::size_t n = m.size();
  const std::size_t k = q.size();
  auto fail = [](std::string axiom, std::string detail, std::vector<Element> w) {
    return AxiomReport{false, std::move(axiom), std::move(detail), std::move(w)};
  };

  std::vector<std::size_t> rel(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto r = m.signature().find_relation("E_" + q.name(i));
    if (!r || m.signature().relations()[*r].arity != 2)
      return fail("signature", "no binary relation E_" + q.name(i), {});
    rel[i] = *r;
  }
  auto E = [&](std::size_t i, Element x, Element y) {
    Element t[2] = {x, y};
    return m.holds(rel[i], t);
  };

  // (i) equivalence relations
  for (std::size_t i = 0; i < k; ++i) {
    for (Element x = 0; x < n; ++x) {
      if (!E(i, x, x)) return fail("equivalence", "E_" + q.name(i) + " is not reflexive", {x});
      for (Element y = 0; y < n; ++y) {
        if (!E(i, x, y)) continue;
        if (!E(i, y, x)) return fail("equivalence", "E_" + q.name(i) + " is not symmetric", {x, y});
        for (Element z = 0; z < n; ++z)
          if (E(i, y, z) && !E(i, x, z))
            return fail("equivalence", "E_" + q.name(i) + " is not transitive", {x, y, z});
      }
    }
  }

  // (ii) refinement and exact splitting
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!q.less(j, i)) continue;
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
          if (E(i, x, y) && !E(j, x, y))
            return fail("refinement", "E_" + q.name(i) + " does not refine E_" + q.name(j), {x, y});
    }
    auto below = [&](Element x, Element y) {
      for (std::size_t j = 0; j < k; ++j)
        if (q.less(j, i) && !E(j, x, y)) return false;
      return true;
    };
    std::vector<bool> seen(n, false);
    for (Element x = 0; x < n; ++x) {
      if (seen[x]) continue;
      std::vector<Element> cls;
      for (Element y = 0; y < n; ++y)
        if (below(x, y)) {
          seen[y] = true;
          cls.push_back(y);
        }
      std::size_t parts = 0;
      std::vector<bool> done(n, false);
      for (Element y : cls) {
        if (done[y]) continue;
        ++parts;
        for (Element z : cls)
          if (E(i, y, z)) done[z] = true;
      }
      if (parts != static_cast<std::size_t>(q.delta(i)))
        return fail("splitting",
                    "E_" + q.name(i) + " splits the lower class of " + std::to_string(x) + " into " +
                        std::to_string(parts) + " classes, expected " + std::to_string(q.delta(i)),
                    {x});
    }
  }

  // (iii) amalgamation over every nonempty downward-closed subset
  if (k > 20) throw CapExceeded("too many poset elements for the amalgamation check");
  std::vector<std::vector<Element>> reps(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<bool> seen(n, false);
    for (Element x = 0; x < n; ++x) {
      if (seen[x]) continue;
      reps[i].push_back(x);
      for (Element y = 0; y < n; ++y)
        if (E(i, x, y)) seen[y] = true;
    }
  }
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> sub;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) sub.push_back(i);
    if (!q.downward_closed(sub)) continue;
    std::stable_sort(sub.begin(), sub.end(), [&](std::size_t a, std::size_t b) {
      return q.down_set(a).size() < q.down_set(b).size();
    });
    std::vector<Element> choice(k);
    std::optional<AxiomReport> bad;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (bad) return;
      if (pos == sub.size()) {
        for (Element a = 0; a < n; ++a) {
          bool ok = true;
          for (auto i : sub) ok = ok && E(i, a, choice[i]);
          if (ok) return;
        }
        std::vector<Element> w;
        for (auto i : sub) w.push_back(choice[i]);
        bad = fail("amalgamation", "compatible system has no common realization", w);
        return;
      }
      const std::size_t i = sub[pos];
      for (Element r : reps[i]) {
        bool ok = true;
        for (std::size_t p2 = 0; p2 < pos && ok; ++p2)
          if (q.less(sub[p2], i)) ok = E(sub[p2], choice[sub[p2]], r);
        if (!ok) continue;
        choice[i] = r;
        rec(pos + 1);
      }
    };
    rec(0);
    if (bad) return *bad;
  }
  return {};
}

Tuple covering_base(const TruncatedCanonicalModel& model, std::span<const std::string> witness) {
  std::vector<bool> in(model.q.size(), false);
  for (const auto& w : witness)
    for (auto d : model.q.down_set(model.q.index(w))) in[d] = true;
  std::set<Tuple> seen;
  Tuple out;
  for (Element e = 0; e < model.structure.size(); ++e) {
    Tuple c = model.coords(e), key;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (in[i]) key.push_back(c[i]);
    if (seen.insert(key).second) out.push_back(e);
  }
  return out;
}

}  // namespace scottlab
