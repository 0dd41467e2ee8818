#include "scottlab/backforth.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace scottlab {

namespace {

template <class T>
struct VecHash {
  std::size_t operator()(const std::vector<T>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (T x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

void require_same_signature(const FiniteStructure& m, const FiniteStructure& n) {
  const auto& a = m.signature();
  const auto& b = n.signature();
  bool same = a.constants() == b.constants() && a.relation_count() == b.relation_count();
  for (std::size_t r = 0; same && r < a.relation_count(); ++r)
    same = a.relations()[r].name == b.relations()[r].name &&
           a.relations()[r].arity == b.relations()[r].arity;
  if (!same) throw InputError("signature mismatch");
}

// Atoms over T terms that mention the last term, in a fixed order.
struct NewAtom {
  std::size_t rel;
  std::vector<std::size_t> args;
};

std::vector<NewAtom> new_atoms(const Signature& sig, std::size_t T, bool only_last) {
  std::vector<NewAtom> out;
  for (std::size_t r = 0; r < sig.relation_count(); ++r) {
    const std::size_t ar = sig.relations()[r].arity;
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < ar; ++i) space *= T;
    std::vector<std::size_t> args(ar);
    for (std::uint64_t code = 0; code < space; ++code) {
      std::uint64_t c = code;
      bool has_last = false;
      for (std::size_t i = ar; i-- > 0;) {
        args[i] = static_cast<std::size_t>(c % T);
        c /= T;
        has_last |= args[i] + 1 == T;
      }
      if (only_last && !has_last) continue;
      out.push_back({r, args});
    }
  }
  return out;
}

// Decode the index of a distinct tuple (see BfTable::global_index).
Tuple decode_distinct(std::size_t n, std::size_t len, std::size_t idx) {
  std::vector<std::size_t> digits(len);
  for (std::size_t j = len; j-- > 0;) {
    digits[j] = idx % (n - j);
    idx /= (n - j);
  }
  Tuple t(len);
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < len; ++j) {
    std::size_t d = digits[j];
    for (Element a = 0; a < n; ++a) {
      if (used[a]) continue;
      if (d-- == 0) {
        t[j] = a;
        used[a] = true;
        break;
      }
    }
  }
  return t;
}

void push_bits(std::vector<std::uint64_t>& key, const std::vector<bool>& bits) {
  std::uint64_t word = 0;
  std::size_t fill = 0;
  for (bool b : bits) {
    word |= std::uint64_t(b) << fill;
    if (++fill == 64) {
      key.push_back(word);
      word = 0;
      fill = 0;
    }
  }
  key.push_back(word);
}

}  // namespace

std::string to_string(const BfLevel& v) {
  if (!v.level) return "qftp differ";
  return (v.exact ? "" : ">= ") + v.level->to_string();
}

BfTable::BfTable(const FiniteStructure& left, const FiniteStructure& right, const BfOptions& opt) {
  require_same_signature(left, right);
  build(&left, &right, opt);
}

BfTable::BfTable(const FiniteStructure& m, const BfOptions& opt) { build(&m, nullptr, opt); }

void BfTable::build(const FiniteStructure* l, const FiniteStructure* r, const BfOptions& opt) {
  std::vector<const FiniteStructure*> ss{l};
  if (r) ss.push_back(r);
  for (auto* s : ss) s->validate();

  std::size_t total = 0;
  common_bound_ = 0;
  for (auto* s : ss) {
    SideInfo info;
    info.n = s->size();
    info.bound = opt.max_length ? std::min(opt.max_length, info.n) : info.n;
    complete_ = complete_ && info.bound == info.n;
    info.base = total;
    info.count.push_back(1);
    for (std::size_t len = 0; len < info.bound; ++len) {
      std::size_t next = info.count.back() * (info.n - len);
      if (next > opt.tuple_cap) throw CapExceeded("bf tuple space exceeds the cap");
      info.count.push_back(next);
    }
    std::size_t acc = 0;
    for (std::size_t c : info.count) {
      info.offset.push_back(acc);
      acc += c;
    }
    total += acc;
    if (total > opt.tuple_cap) throw CapExceeded("bf tuple space exceeds the cap");
    common_bound_ = std::max(common_bound_, info.bound);
    sides_.push_back(std::move(info));
  }
  if (opt.max_length) common_bound_ = opt.max_length;

  const Signature& sig = l->signature();
  const std::size_t nconst = sig.constant_count();

  // Level 0: qftp classes, built incrementally from the parent's class and
  // the atoms that mention the newest element.
  std::vector<std::uint32_t> cur(total, 0);
  std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, VecHash<std::uint64_t>> intern0;
  auto intern = [&](const std::vector<std::uint64_t>& key) {
    return intern0.try_emplace(key, static_cast<std::uint32_t>(intern0.size())).first->second;
  };
  std::map<std::size_t, std::vector<NewAtom>> atom_cache;
  auto atoms_for = [&](std::size_t T) -> const std::vector<NewAtom>& {
    auto it = atom_cache.find(T);
    if (it == atom_cache.end()) it = atom_cache.emplace(T, new_atoms(sig, T, true)).first;
    return it->second;
  };

  std::vector<std::uint64_t> key;
  std::vector<bool> bits;
  Tuple args;
  for (std::size_t si = 0; si < ss.size(); ++si) {
    const FiniteStructure& S = *ss[si];
    const SideInfo& info = sides_[si];
    std::vector<Element> terms;
    for (std::size_t c = 0; c < nconst; ++c) terms.push_back(S.constant(c));

    bits.clear();
    for (std::size_t i = 0; i < nconst; ++i)
      for (std::size_t j = 0; j < nconst; ++j) bits.push_back(terms[i] == terms[j]);
    for (const auto& atom : new_atoms(sig, nconst, false)) {
      args.resize(atom.args.size());
      for (std::size_t q = 0; q < args.size(); ++q) args[q] = terms[atom.args[q]];
      bits.push_back(S.holds(atom.rel, args));
    }
    key.assign(1, ~std::uint64_t{0});
    push_bits(key, bits);
    cur[info.base] = intern(key);

    for (std::size_t len = 0; len < info.bound; ++len) {
      const std::size_t T = nconst + len + 1;
      const auto& atoms = atoms_for(T);
      for (std::size_t i = 0; i < info.count[len]; ++i) {
        Tuple t = decode_distinct(info.n, len, i);
        std::vector<bool> used(info.n, false);
        for (Element e : t) used[e] = true;
        terms.resize(nconst);
        terms.insert(terms.end(), t.begin(), t.end());
        terms.push_back(0);
        const std::uint32_t parent = cur[info.base + info.offset[len] + i];
        std::size_t j = 0;
        for (Element a = 0; a < info.n; ++a) {
          if (used[a]) continue;
          terms.back() = a;
          bits.clear();
          for (std::size_t q = 0; q + 1 < T; ++q) bits.push_back(terms[q] == a);
          for (const auto& atom : atoms) {
            args.resize(atom.args.size());
            for (std::size_t q = 0; q < args.size(); ++q) args[q] = terms[atom.args[q]];
            bits.push_back(S.holds(atom.rel, args));
          }
          key.assign(1, parent);
          push_bits(key, bits);
          cur[info.base + info.offset[len + 1] + i * (info.n - len) + j] = intern(key);
          ++j;
        }
      }
    }
  }
  class_count_.push_back(intern0.size());
  parent_.emplace_back();

  // Refinement: a class at level k+1 is (own class, set of child classes) at level k.
  std::vector<std::uint32_t> next(total);
  std::vector<std::uint32_t> sigv;
  for (std::size_t k = 0;; ++k) {
    if (!complete_ && k >= common_bound_) break;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash<std::uint32_t>> ids;
    std::vector<std::uint32_t> parents;
    for (const SideInfo& info : sides_) {
      for (std::size_t len = 0; len <= info.bound; ++len) {
        for (std::size_t i = 0; i < info.count[len]; ++i) {
          const std::size_t g = info.base + info.offset[len] + i;
          sigv.assign(1, cur[g]);
          if (len < info.bound) {
            const std::size_t first = info.base + info.offset[len + 1] + i * (info.n - len);
            sigv.insert(sigv.end(), cur.begin() + first, cur.begin() + first + (info.n - len));
            std::sort(sigv.begin() + 1, sigv.end());
            sigv.erase(std::unique(sigv.begin() + 1, sigv.end()), sigv.end());
          }
          auto [it, fresh] = ids.try_emplace(sigv, static_cast<std::uint32_t>(ids.size()));
          if (fresh) parents.push_back(cur[g]);
          next[g] = it->second;
        }
      }
    }
    if (ids.size() == class_count_.back()) {
      stabilized_ = true;
      break;
    }
    class_count_.push_back(ids.size());
    parent_.push_back(std::move(parents));
    cur.swap(next);
  }
  final_ = std::move(cur);
}

std::size_t BfTable::fixpoint_level() const { return class_count_.size() - 1; }

std::optional<std::size_t> BfTable::horizon(std::size_t length) const {
  if (complete_) return std::nullopt;
  return length <= common_bound_ ? common_bound_ - length : 0;
}

std::size_t BfTable::tuple_count(Side s, std::size_t length) const {
  const SideInfo& info = side(s);
  if (length > info.bound) return 0;
  return info.count[length];
}

Tuple BfTable::tuple_at(Side s, std::size_t length, std::size_t index) const {
  const SideInfo& info = side(s);
  if (length > info.bound || index >= info.count[length]) throw InputError("tuple index out of range");
  return decode_distinct(info.n, length, index);
}

std::size_t BfTable::global_index(Side s, std::span<const Element> t) const {
  const SideInfo& info = side(s);
  if (t.size() > info.bound)
    throw InputError("tuple of " + std::to_string(t.size()) +
                     " distinct elements exceeds the length bound " + std::to_string(info.bound));
  std::vector<bool> used(info.n, false);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    Element e = t[j];
    if (e >= info.n) throw InputError("element outside the universe");
    if (used[e]) throw InputError("tuple has repeated elements");
    std::size_t rank = 0;
    for (Element a = 0; a < e; ++a) rank += !used[a];
    used[e] = true;
    idx = idx * (info.n - j) + rank;
  }
  return info.base + info.offset[t.size()] + idx;
}

std::uint32_t BfTable::class_at_global(std::size_t g, std::size_t level) const {
  std::uint32_t c = final_[g];
  for (std::size_t k = class_count_.size() - 1; k > level; --k) c = parent_[k][c];
  return c;
}

std::uint32_t BfTable::class_of(Side s, std::span<const Element> t, std::size_t level) const {
  return class_at_global(global_index(s, t), std::min(level, class_count_.size() - 1));
}

std::uint32_t BfTable::final_class(Side s, std::span<const Element> t) const {
  return final_[global_index(s, t)];
}

BfLevel BfTable::level(std::span<const Element> a, std::span<const Element> b) const {
  if (a.size() != b.size()) throw InputError("tuples of different lengths");
  Tuple da, db;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return {std::nullopt, true};
    if (std::find(da.begin(), da.end(), a[i]) == da.end()) {
      da.push_back(a[i]);
      db.push_back(b[i]);
    }
  }
  std::size_t ga = global_index(Side::Left, da);
  std::size_t gb = global_index(Side::Right, db);

  // Largest level with equal classes; classes are nested, so a single scan
  // from the top suffices.
  const std::size_t top = class_count_.size() - 1;
  std::uint32_t ca = final_[ga], cb = final_[gb];
  std::optional<std::size_t> agree;
  for (std::size_t k = top;; --k) {
    if (ca == cb) {
      agree = k;
      break;
    }
    if (k == 0) break;
    ca = parent_[k][ca];
    cb = parent_[k][cb];
  }
  if (!agree) return {std::nullopt, true};

  auto hz = horizon(da.size());
  if (!hz) {
    if (*agree == top) return {Ordinal::infinity(), true};
    return {Ordinal::fin(*agree), true};
  }
  if (*agree < top && *agree < *hz) return {Ordinal::fin(*agree), true};
  return {Ordinal::fin(*hz), false};
}

BfLevel bf_level(const FiniteStructure& m, std::span<const Element> a, const FiniteStructure& n,
                 std::span<const Element> b, const BfOptions& opt) {
  return BfTable(m, n, opt).level(a, b);
}

Ordinal scott_rank(const FiniteStructure& m, const BfOptions& opt) {
  BfOptions o = opt;
  o.max_length = 0;
  return Ordinal::fin(BfTable(m, o).fixpoint_level());
}

bool is_base(const BfTable& table, std::span<const Element> b) {
  if (!table.complete()) throw InputError("base check needs a complete table");
  const std::size_t n = table.universe(Side::Left);
  std::vector<bool> in_b(n, false);
  for (Element e : b) {
    if (e >= n) throw InputError("element outside the universe");
    in_b[e] = true;
  }
  Tuple t(b.begin(), b.end());
  t.push_back(0);
  std::vector<std::uint32_t> seen;
  for (Element x = 0; x < n; ++x) {
    if (in_b[x]) continue;
    t.back() = x;
    seen.push_back(table.final_class(Side::Left, t));
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

std::optional<Tuple> find_finite_base(const FiniteStructure& m, std::size_t max_size,
                                      const BfOptions& opt) {
  BfOptions o = opt;
  o.max_length = 0;
  BfTable table(m, o);
  const std::size_t n = m.size();
  for (std::size_t s = 0; s <= std::min(max_size, n); ++s) {
    Tuple b(s);
    for (std::size_t i = 0; i < s; ++i) b[i] = static_cast<Element>(i);
    while (true) {
      if (is_base(table, b)) return b;
      std::size_t i = s;
      while (i > 0 && b[i - 1] == n - s + i - 1) --i;
      if (i == 0) break;
      ++b[i - 1];
      for (std::size_t j = i; j < s; ++j) b[j] = b[j - 1] + 1;
    }
  }
  return std::nullopt;
}

FiniteStructure expand_constants(const FiniteStructure& m, std::span<const Element> c) {
  FiniteStructure out = m;
  for (Element e : c) out.add_constant_symbol(out.signature().fresh_constant_name("k"), e);
  return out;
}

bool relation_holds(const FiniteStructure& m, const EquivSpec& e, Element x, Element y) {
  for (const auto& name : e.conjuncts) {
    if (name == "=") {
      if (x != y) return false;
      continue;
    }
    std::size_t r = m.signature().relation_index(name);
    if (m.signature().relations()[r].arity != 2)
      throw InputError("relation '" + name + "' in '" + e.name + "' is not binary");
    Element t[2] = {x, y};
    if (!m.holds(r, t)) return false;
  }
  return true;
}

bool is_equivalence(const FiniteStructure& m, const EquivSpec& e) {
  const std::size_t n = m.size();
  for (Element x = 0; x < n; ++x) {
    if (!relation_holds(m, e, x, x)) return false;
    for (Element y = 0; y < n; ++y) {
      if (!relation_holds(m, e, x, y)) continue;
      if (!relation_holds(m, e, y, x)) return false;
      for (Element z = 0; z < n; ++z)
        if (relation_holds(m, e, y, z) && !relation_holds(m, e, x, z)) return false;
    }
  }
  return true;
}

std::vector<std::vector<Element>> equivalence_classes(const FiniteStructure& m,
                                                      const EquivSpec& e) {
  if (!is_equivalence(m, e)) throw InputError("'" + e.name + "' is not an equivalence relation");
  std::vector<std::vector<Element>> classes;
  std::vector<bool> placed(m.size(), false);
  for (Element x = 0; x < m.size(); ++x) {
    if (placed[x]) continue;
    classes.emplace_back();
    for (Element y = x; y < m.size(); ++y)
      if (!placed[y] && relation_holds(m, e, x, y)) {
        placed[y] = true;
        classes.back().push_back(y);
      }
  }
  return classes;
}

SortedExpansion expand_sorts(const FiniteStructure& m, std::span<const EquivSpec> family) {
  std::vector<std::vector<std::vector<Element>>> all;
  std::size_t size = m.size();
  SortedExpansion out;
  out.home_size = m.size();
  for (const auto& e : family) {
    all.push_back(equivalence_classes(m, e));
    out.sort_offset.push_back(size);
    out.sort_size.push_back(all.back().size());
    size += all.back().size();
  }
  if (family.empty()) {
    out.structure = m;
    return out;
  }

  Signature sig = m.signature();
  const std::size_t home = sig.add_relation("Home", 1);
  std::vector<std::size_t> u_rel, pi_rel;
  for (const auto& e : family) {
    u_rel.push_back(sig.add_relation("U_" + e.name, 1));
    pi_rel.push_back(sig.add_relation("pi_" + e.name, 2));
  }
  FiniteStructure s(sig, size);
  for (std::size_t r = 0; r < m.signature().relation_count(); ++r)
    for (const auto& t : m.tuples(r)) s.add(r, t);
  for (std::size_t c = 0; c < m.signature().constant_count(); ++c) s.set_constant(c, m.constant(c));
  for (Element x = 0; x < m.size(); ++x) s.add(home, {&x, 1});
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t cls = 0; cls < all[i].size(); ++cls) {
      Element u = static_cast<Element>(out.sort_offset[i] + cls);
      s.add(u_rel[i], {&u, 1});
      for (Element x : all[i][cls]) {
        Element t[2] = {x, u};
        s.add(pi_rel[i], t);
      }
    }
  }
  out.structure = std::move(s);
  return out;
}

Quotient quotient(const FiniteStructure& m, const EquivSpec& e, std::span<const std::string> push) {
  auto classes = equivalence_classes(m, e);
  Quotient q;
  q.class_of.assign(m.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    q.colors.push_back(static_cast<std::uint32_t>(classes[c].size() + 1));
    for (Element x : classes[c]) q.class_of[x] = static_cast<Element>(c);
  }

  Signature sig;
  std::vector<std::size_t> src;
  for (const auto& name : push) {
    std::size_t r = m.signature().relation_index(name);
    const auto& sym = m.signature().relations()[r];
    sig.add_relation(sym.name, sym.arity, sym.owner);
    src.push_back(r);
  }
  for (const auto& c : m.signature().constants()) sig.add_constant(c);

  FiniteStructure s(sig, classes.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    // Invariant iff every class-tuple hit by R is hit by all of its lifts.
    std::map<Tuple, std::size_t> hits;
    for (const auto& t : m.tuples(src[i])) {
      Tuple ct;
      for (Element x : t) ct.push_back(q.class_of[x]);
      ++hits[ct];
    }
    for (const auto& [ct, count] : hits) {
      std::size_t lifts = 1;
      for (Element c : ct) lifts *= classes[c].size();
      if (lifts != count)
        throw InputError("relation '" + push[i] + "' is not invariant under '" + e.name + "'");
      s.add(i, ct);
    }
  }
  for (std::size_t c = 0; c < m.signature().constant_count(); ++c)
    s.set_constant(c, q.class_of[m.constant(c)]);
  q.structure = std::move(s);
  return q;
}

}  // namespace scottlab
