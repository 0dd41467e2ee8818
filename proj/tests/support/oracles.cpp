#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oracle {

using namespace scottlab;

namespace {

bool preserves(const FiniteStructure& m, const FiniteStructure& n, const Perm& p) {
  const auto& sig = m.signature();
  for (std::size_t c = 0; c < sig.constant_count(); ++c)
    if (p[m.constant(c)] != n.constant(c)) return false;
  for (std::size_t r = 0; r < sig.relation_count(); ++r) {
    if (m.tuple_count(r) != n.tuple_count(r)) return false;
    for (const auto& t : m.tuples(r)) {
      Tuple img(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) img[i] = p[t[i]];
      if (!n.holds(r, img)) return false;
    }
  }
  return true;
}

bool same_signature(const FiniteStructure& m, const FiniteStructure& n) {
  const auto& a = m.signature();
  const auto& b = n.signature();
  if (a.relation_count() != b.relation_count() || a.constant_count() != b.constant_count()) return false;
  for (std::size_t r = 0; r < a.relation_count(); ++r)
    if (a.relations()[r].name != b.relations()[r].name || a.relations()[r].arity != b.relations()[r].arity)
      return false;
  return true;
}

}  // namespace

std::vector<Perm> automorphisms(const FiniteStructure& m) {
  Perm p(m.size());
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    if (preserves(m, m, p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::optional<Perm> isomorphism(const FiniteStructure& m, const FiniteStructure& n,
                                std::span<const std::uint32_t> cm, std::span<const std::uint32_t> cn) {
  if (m.size() != n.size() || !same_signature(m, n)) return std::nullopt;
  Perm p(m.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; ok && i < cm.size(); ++i) ok = cm[i] == cn[p[i]];
    if (ok && preserves(m, n, p)) return p;
  } while (std::next_permutation(p.begin(), p.end()));
  return std::nullopt;
}

std::optional<Perm> isomorphism_dfs(const FiniteStructure& m, const FiniteStructure& n,
                                    std::span<const std::uint32_t> cm, std::span<const std::uint32_t> cn,
                                    std::span<const Element> fixed) {
  if (m.size() != n.size() || !same_signature(m, n)) return std::nullopt;
  const auto& sig = m.signature();
  for (std::size_t r = 0; r < sig.relation_count(); ++r)
    if (m.tuple_count(r) != n.tuple_count(r)) return std::nullopt;
  for (std::size_t c = 0; c < sig.constant_count(); ++c)
    if (std::find(fixed.begin(), fixed.end(), m.constant(c)) != fixed.end() && m.constant(c) != n.constant(c))
      return std::nullopt;
  // Tuples of m grouped by their largest element, checked once it is placed.
  std::vector<std::vector<std::pair<std::size_t, Tuple>>> by_max(m.size());
  for (std::size_t r = 0; r < sig.relation_count(); ++r)
    for (const auto& t : m.tuples(r)) {
      if (t.empty()) continue;
      by_max[*std::max_element(t.begin(), t.end())].emplace_back(r, t);
    }
  const Element none = static_cast<Element>(m.size());
  Perm p(m.size(), none);
  std::vector<bool> used(n.size(), false);
  std::function<bool(Element)> go = [&](Element x) {
    if (x == m.size()) {
      for (std::size_t c = 0; c < sig.constant_count(); ++c)
        if (p[m.constant(c)] != n.constant(c)) return false;
      return true;
    }
    const bool pinned = std::find(fixed.begin(), fixed.end(), x) != fixed.end();
    for (Element y = 0; y < n.size(); ++y) {
      if (used[y] || (pinned && y != x)) continue;
      if (!cm.empty() && cm[x] != cn[y]) continue;
      p[x] = y;
      bool ok = true;
      for (const auto& [r, t] : by_max[x]) {
        Tuple img(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) img[i] = p[t[i]];
        if (!n.holds(r, img)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        used[y] = true;
        if (go(x + 1)) return true;
        used[y] = false;
      }
    }
    p[x] = none;
    return false;
  };
  if (!go(0)) return std::nullopt;
  return p;
}

bool moves_something_fixing(const FiniteStructure& m, std::span<const Element> b) {
  // Try each point x outside b as the image of some y != x, with b pinned.
  for (Element y = 0; y < m.size(); ++y) {
    if (std::find(b.begin(), b.end(), y) != b.end()) continue;
    for (Element x = 0; x < m.size(); ++x) {
      if (x == y || std::find(b.begin(), b.end(), x) != b.end()) continue;
      // Relabel m so that y becomes x, then look for an isomorphism to m fixing b.
      Perm swap(m.size());
      std::iota(swap.begin(), swap.end(), 0);
      std::swap(swap[x], swap[y]);
      FiniteStructure relabeled(m.signature(), m.size());
      for (std::size_t r = 0; r < m.signature().relation_count(); ++r)
        for (const auto& t : m.tuples(r)) {
          Tuple img(t.size());
          for (std::size_t i = 0; i < t.size(); ++i) img[i] = swap[t[i]];
          relabeled.add(r, img);
        }
      for (std::size_t c = 0; c < m.signature().constant_count(); ++c)
        relabeled.set_constant(c, swap[m.constant(c)]);
      // An isomorphism relabeled -> m fixing b and x yields an automorphism sending y to x.
      std::vector<Element> pins(b.begin(), b.end());
      pins.push_back(x);
      if (isomorphism_dfs(relabeled, m, {}, {}, pins)) return true;
    }
  }
  return false;
}

bool same_orbit(std::span<const Perm> auts, std::span<const Element> a, std::span<const Element> b) {
  if (a.size() != b.size()) return false;
  for (const auto& g : auts) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < a.size(); ++i) ok = g[a[i]] == b[i];
    if (ok) return true;
  }
  return false;
}

bool is_base(std::span<const Perm> auts, std::span<const Element> b) {
  for (const auto& g : auts) {
    bool fixes = std::all_of(b.begin(), b.end(), [&](Element x) { return g[x] == x; });
    bool identity = true;
    for (std::size_t i = 0; identity && i < g.size(); ++i) identity = g[i] == i;
    if (fixes && !identity) return false;
  }
  return true;
}

bool qftp_equal(const FiniteStructure& m, std::span<const Element> a, const FiniteStructure& n,
                std::span<const Element> b) {
  if (a.size() != b.size() || !same_signature(m, n)) return false;
  Tuple ta(a.begin(), a.end()), tb(b.begin(), b.end());
  for (std::size_t c = 0; c < m.signature().constant_count(); ++c) {
    ta.push_back(m.constant(c));
    tb.push_back(n.constant(c));
  }
  const std::size_t t = ta.size();
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j)
      if ((ta[i] == ta[j]) != (tb[i] == tb[j])) return false;
  for (std::size_t r = 0; r < m.signature().relation_count(); ++r) {
    const std::size_t k = m.signature().relations()[r].arity;
    if (t == 0) {
      if (k == 0 && m.holds(r, Tuple{}) != n.holds(r, Tuple{})) return false;
      continue;
    }
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      Tuple x(k), y(k);
      for (std::size_t i = 0; i < k; ++i) x[i] = ta[idx[i]], y[i] = tb[idx[i]];
      if (m.holds(r, x) != n.holds(r, y)) return false;
      std::size_t i = k;
      while (i > 0 && ++idx[i - 1] == t) idx[--i] = 0;
      if (i == 0) break;
    }
  }
  return true;
}

int ef_level(const FiniteStructure& m, std::span<const Element> a, const FiniteStructure& n,
             std::span<const Element> b, int max_k) {
  std::map<std::tuple<Tuple, Tuple, int>, bool> memo;
  std::function<bool(const Tuple&, const Tuple&, int)> eq = [&](const Tuple& x, const Tuple& y, int k) {
    if (!qftp_equal(m, x, n, y)) return false;
    if (k == 0) return true;
    auto key = std::make_tuple(x, y, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = true;
    for (Element u = 0; ok && u < m.size(); ++u) {
      bool found = false;
      for (Element v = 0; !found && v < n.size(); ++v) {
        Tuple x2 = x, y2 = y;
        x2.push_back(u);
        y2.push_back(v);
        found = eq(x2, y2, k - 1);
      }
      ok = found;
    }
    for (Element v = 0; ok && v < n.size(); ++v) {
      bool found = false;
      for (Element u = 0; !found && u < m.size(); ++u) {
        Tuple x2 = x, y2 = y;
        x2.push_back(u);
        y2.push_back(v);
        found = eq(x2, y2, k - 1);
      }
      ok = found;
    }
    memo[key] = ok;
    return ok;
  };
  Tuple x(a.begin(), a.end()), y(b.begin(), b.end());
  int level = -1;
  for (int k = 0; k <= max_k && eq(x, y, k); ++k) level = k;
  return level;
}

// --- coset systems ------------------------------------------------------------

bool coherent(const FinCosetSystem& c, const Pair& x, const Pair& y) {
  std::size_t top = 0;
  for (auto p : c.f_pos()) top = std::max(top, p + 1);
  for (auto p : c.g_pos()) top = std::max(top, p + 1);
  for (std::size_t k = 0; k <= top; ++k) {
    Word fm = 0, gm = 0;
    for (std::size_t i = 0; i < c.n(); ++i)
      if (c.f_pos()[i] < k) fm |= Word{1} << i;
    for (std::size_t j = 0; j < c.m(); ++j)
      if (c.g_pos()[j] < k) gm |= Word{1} << j;
    if ((x.first & fm) == (y.first & fm) && (x.second & gm) != (y.second & gm)) return false;
  }
  return true;
}

namespace {

bool coherent_with(const FinCosetSystem& c, const std::vector<Pair>& a, const Pair& p) {
  return std::all_of(a.begin(), a.end(), [&](const Pair& q) { return coherent(c, q, p); });
}

// at_least(A, k) depends on A only through the g values still admissible at
// every f, so the search is memoized on that table.
class SetRank {
 public:
  using State = std::vector<std::uint64_t>;  // per f, mask over C[f].elements()

  explicit SetRank(const FinCosetSystem& c) : c_(c) {
    for (Word f = 0; f < c.domain_size(); ++f) {
      elems_.push_back(c.at(f).elements());
      if (elems_.back().size() > 64) throw std::length_error("coset too large for the oracle");
    }
  }

  State initial(const std::vector<Pair>& a) const {
    State s(c_.domain_size());
    for (Word f = 0; f < c_.domain_size(); ++f)
      for (std::size_t i = 0; i < elems_[f].size(); ++i)
        if (coherent_with(c_, a, {f, elems_[f][i]})) s[f] |= std::uint64_t{1} << i;
    return s;
  }

  State add(const State& s, Word f, std::size_t i) const {
    State t(s.size());
    const Pair p{f, elems_[f][i]};
    for (Word f2 = 0; f2 < s.size(); ++f2)
      for (std::size_t j = 0; j < elems_[f2].size(); ++j)
        if (((s[f2] >> j) & 1) && coherent(c_, p, {f2, elems_[f2][j]})) t[f2] |= std::uint64_t{1} << j;
    return t;
  }

  bool at_least(const State& s, int k) {
    if (k == 0) return true;
    auto& slot = memo_[s];
    if (k <= slot.first) return true;
    if (slot.second && k >= slot.second) return false;
    bool ok = std::none_of(s.begin(), s.end(), [](std::uint64_t m) { return m == 0; });
    for (Word f = 0; ok && f < s.size(); ++f) {
      bool found = false;
      for (std::size_t i = 0; !found && i < elems_[f].size(); ++i)
        if ((s[f] >> i) & 1) found = at_least(add(s, f, i), k - 1);
      ok = found;
    }
    auto& out = memo_[s];
    if (ok) out.first = std::max(out.first, k);
    else out.second = out.second ? std::min(out.second, k) : k;
    return ok;
  }

 private:
  const FinCosetSystem& c_;
  std::vector<std::vector<Word>> elems_;
  std::map<State, std::pair<int, int>> memo_;
};

}  // namespace

bool extends_to_section(const FinCosetSystem& c, std::vector<Pair> a) {
  std::map<Word, Word> fixed(a.begin(), a.end());
  std::vector<Pair> chosen;
  std::function<bool(Word)> go = [&](Word f) {
    if (f == c.domain_size()) return true;
    std::vector<Word> options;
    if (auto it = fixed.find(f); it != fixed.end()) options = {it->second};
    else options = c.at(f).elements();
    for (Word g : options) {
      if (!c.contains(f, g) || !coherent_with(c, chosen, {f, g})) continue;
      chosen.emplace_back(f, g);
      if (go(f + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return go(0);
}

Ordinal coset_set_rank(const FinCosetSystem& c, std::vector<Pair> a) {
  std::sort(a.begin(), a.end());
  if (extends_to_section(c, a)) return Ordinal::infinity();
  SetRank r(c);
  const auto s = r.initial(a);
  int k = 0;
  while (r.at_least(s, k + 1)) ++k;
  return Ordinal::fin(static_cast<std::uint64_t>(k));
}

// --- inverse systems ----------------------------------------------------------

Ordinal thread_rank(const InvSystem& s, std::size_t p, const GroupElement& a, RankQuantifier q) {
  std::size_t top = 0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    bool is_top = true;
    for (std::size_t u = 0; is_top && u < s.size(); ++u) is_top = u == t || s.less(u, t);
    if (is_top) top = t;
  }
  auto norm = [&](std::size_t i, const GroupElement& x) { return s.ambient(i).normalize(x); };
  const GroupElement target = norm(p, a);
  if (p == top) return Ordinal::infinity();
  for (const auto& b : s.elements(top))
    if (norm(p, s.project(p, top, b)) == target) return Ordinal::infinity();

  std::map<std::tuple<std::size_t, GroupElement, int>, bool> memo;
  std::function<bool(std::size_t, const GroupElement&, int)> at_least = [&](std::size_t i, const GroupElement& x,
                                                                          int k) -> bool {
    if (k == 0) return true;
    auto key = std::make_tuple(i, x, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<std::size_t> next;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!s.less(i, j)) continue;
      bool cover = true;
      for (std::size_t m = 0; cover && m < s.size(); ++m) cover = !(s.less(i, m) && s.less(m, j));
      if (q == RankQuantifier::AllAbove || cover) next.push_back(j);
    }
    bool ok = true;
    for (std::size_t j : next) {
      bool found = false;
      for (const auto& b : s.elements(j))
        if (norm(i, s.project(i, j, b)) == x && at_least(j, b, k - 1)) {
          found = true;
          break;
        }
      if (!(ok = found)) break;
    }
    return memo[key] = ok;
  };
  int k = 0;
  while (k <= static_cast<int>(s.size()) && at_least(p, target, k + 1)) ++k;
  return Ordinal::fin(static_cast<std::uint64_t>(k));
}

}  // namespace oracle
