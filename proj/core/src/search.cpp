#include "scottlab/search.hpp"

#include <numeric>

namespace scottlab {

namespace {

void check_signatures(const FiniteStructure& m, const FiniteStructure& n) {
  const auto& a = m.signature();
  const auto& b = n.signature();
  bool same = a.constants() == b.constants() && a.relation_count() == b.relation_count();
  for (std::size_t r = 0; same && r < a.relation_count(); ++r)
    same = a.relations()[r].name == b.relations()[r].name &&
           a.relations()[r].arity == b.relations()[r].arity;
  if (!same) throw InputError("signature mismatch");
}

// Maps M into N element by element. Position k is checked against every
// atom whose largest argument is k, so partial maps are always partial
// isomorphisms.
class Matcher {
 public:
  Matcher(const FiniteStructure& m, const FiniteStructure& n, std::span<const std::uint32_t> cm,
          std::span<const std::uint32_t> cn)
      : m_(m), n_(n), cm_(cm), cn_(cn) {
    const std::size_t size = m.size();
    forced_.assign(size, kNone);
    for (std::size_t c = 0; c < m.signature().constant_count(); ++c) {
      Element a = m.constant(c), b = n.constant(c);
      if (forced_[a] != kNone && forced_[a] != b) consistent_ = false;
      forced_[a] = b;
    }
    checks_.resize(size);
    for (std::size_t r = 0; r < m.signature().relation_count(); ++r) {
      const std::size_t ar = m.signature().relations()[r].arity;
      Tuple t(ar);
      for (std::size_t k = 0; k < size; ++k) {
        std::uint64_t space = 1;
        for (std::size_t i = 0; i < ar; ++i) space *= (k + 1);
        for (std::uint64_t code = 0; code < space; ++code) {
          std::uint64_t c = code;
          bool has_k = false;
          for (std::size_t i = ar; i-- > 0;) {
            t[i] = static_cast<Element>(c % (k + 1));
            c /= (k + 1);
            has_k |= t[i] == k;
          }
          if (!has_k) continue;
          checks_[k].push_back({r, args_.size(), m.holds(r, t)});
          args_.insert(args_.end(), t.begin(), t.end());
        }
      }
    }
  }

  // Calls visit(image) for each isomorphism in lexicographic order until it returns true.
  template <class Visit>
  void run(Visit&& visit) {
    if (!consistent_ || m_.size() != n_.size()) return;
    img_.assign(m_.size(), 0);
    used_.assign(n_.size(), false);
    extend(0, visit);
  }

 private:
  static constexpr Element kNone = ~Element{0};

  struct Check {
    std::size_t rel;
    std::size_t offset;
    bool value;
  };

  bool fits(std::size_t k) {
    Tuple t;
    for (const Check& ch : checks_[k]) {
      const std::size_t ar = m_.signature().relations()[ch.rel].arity;
      t.resize(ar);
      for (std::size_t i = 0; i < ar; ++i) t[i] = img_[args_[ch.offset + i]];
      if (n_.holds(ch.rel, t) != ch.value) return false;
    }
    return true;
  }

  template <class Visit>
  bool extend(std::size_t k, Visit& visit) {
    if (k == m_.size()) return visit(static_cast<const Permutation&>(img_));
    for (Element v = 0; v < n_.size(); ++v) {
      if (used_[v]) continue;
      if (forced_[k] != kNone && forced_[k] != v) continue;
      if (!cm_.empty() && cm_[k] != cn_[v]) continue;
      img_[k] = v;
      if (!fits(k)) continue;
      used_[v] = true;
      bool stop = extend(k + 1, visit);
      used_[v] = false;
      if (stop) return true;
    }
    return false;
  }

  const FiniteStructure& m_;
  const FiniteStructure& n_;
  std::span<const std::uint32_t> cm_, cn_;
  std::vector<Element> forced_;
  bool consistent_ = true;
  std::vector<std::vector<Check>> checks_;
  std::vector<Element> args_;
  Permutation img_;
  std::vector<bool> used_;
};

void check_cap(const FiniteStructure& m, const Caps& caps) {
  if (m.size() > caps.universe)
    throw CapExceeded("universe of size " + std::to_string(m.size()) + " exceeds the cap of " +
                      std::to_string(caps.universe));
}

}  // namespace

std::optional<Permutation> isomorphic(const FiniteStructure& m, const FiniteStructure& n,
                                      const Caps& caps) {
  return isomorphic(m, n, {}, {}, caps);
}

std::optional<Permutation> isomorphic(const FiniteStructure& m, const FiniteStructure& n,
                                      std::span<const std::uint32_t> colors_m,
                                      std::span<const std::uint32_t> colors_n, const Caps& caps) {
  check_signatures(m, n);
  if (colors_m.empty() != colors_n.empty()) throw InputError("colors given for one side only");
  if (!colors_m.empty() && (colors_m.size() != m.size() || colors_n.size() != n.size()))
    throw InputError("coloring length does not match universe");
  if (m.size() != n.size()) return std::nullopt;
  check_cap(m, caps);
  m.validate();
  n.validate();
  std::optional<Permutation> found;
  Matcher(m, n, colors_m, colors_n).run([&](const Permutation& p) {
    found = p;
    return true;
  });
  return found;
}

PermGroup automorphism_group(const FiniteStructure& m, const Caps& caps) {
  check_cap(m, caps);
  m.validate();
  std::vector<Permutation> elems;
  Matcher(m, m, {}, {}).run([&](const Permutation& p) {
    elems.push_back(p);
    return false;
  });
  return PermGroup::from_elements(m.size(), std::move(elems));
}

bool has_nontrivial_automorphism_fixing(const FiniteStructure& m, std::span<const Element> fixed,
                                        const Caps& caps) {
  check_cap(m, caps);
  m.validate();
  // Pin the fixed points with singleton colors.
  std::vector<std::uint32_t> colors(m.size(), 0);
  std::uint32_t next = 1;
  for (Element b : fixed) {
    if (b >= m.size()) throw InputError("fixed element outside the universe");
    if (colors[b] == 0) colors[b] = next++;
  }
  bool found = false;
  Matcher(m, m, colors, colors).run([&](const Permutation& p) {
    found = !is_identity(p);
    return found;
  });
  return found;
}

TuplePartition::TuplePartition(std::size_t universe, std::size_t length,
                               std::vector<std::uint32_t> blocks)
    : universe_(universe), length_(length), blocks_(std::move(blocks)) {
  for (auto b : blocks_) block_count_ = std::max<std::size_t>(block_count_, b + 1);
}

std::uint64_t TuplePartition::code(std::span<const Element> t) const {
  if (t.size() != length_) throw InputError("tuple length mismatch");
  std::uint64_t c = 0;
  for (Element e : t) {
    if (e >= universe_) throw InputError("element outside the universe");
    c = c * universe_ + e;
  }
  return c;
}

Tuple TuplePartition::tuple(std::uint64_t c) const {
  Tuple t(length_);
  for (std::size_t i = length_; i-- > 0;) {
    t[i] = static_cast<Element>(c % universe_);
    c /= universe_;
  }
  return t;
}

TuplePartition orbit_partition(const FiniteStructure& m, std::size_t k, const Caps& caps) {
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < k; ++i) {
    space *= m.size();
    if (space > caps.tuples) throw CapExceeded("tuple space exceeds the cap");
  }
  PermGroup g = automorphism_group(m, caps);

  std::vector<std::uint64_t> parent(space);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint64_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  TuplePartition shape(m.size(), k, std::vector<std::uint32_t>(space, 0));
  for (const auto& p : g.generators()) {
    for (std::uint64_t c = 0; c < space; ++c) {
      Tuple t = shape.tuple(c);
      for (Element& e : t) e = p[e];
      std::uint64_t a = find(c), b = find(shape.code(t));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::uint32_t> blocks(space);
  std::vector<std::uint32_t> id(space, ~std::uint32_t{0});
  std::uint32_t next = 0;
  for (std::uint64_t c = 0; c < space; ++c) {
    auto r = find(c);
    if (id[r] == ~std::uint32_t{0}) id[r] = next++;
    blocks[c] = id[r];
  }
  return TuplePartition(m.size(), k, std::move(blocks));
}

}  // namespace scottlab
