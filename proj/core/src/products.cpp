#include "scottlab/products.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "scottlab/search.hpp"

namespace scottlab {

const FiniteStructure& ProductSpec::factor(std::size_t n) const {
  if (n < prefix.size()) return prefix[n];
  if (tail.empty()) throw InputError("product has an empty tail");
  return tail[(n - prefix.size()) % tail.size()];
}

void validate(const ProductSpec& spec) {
  if (spec.tail.empty()) throw InputError("product has an empty tail");
  auto check = [](const FiniteStructure& m, const std::string& where) {
    if (m.size() < 2) throw InputError(where + " has fewer than two elements");
    if (m.signature().constant_count() != 0) throw InputError(where + " has constants");
  };
  for (std::size_t i = 0; i < spec.prefix.size(); ++i) check(spec.prefix[i], "prefix factor " + std::to_string(i));
  for (std::size_t i = 0; i < spec.tail.size(); ++i) check(spec.tail[i], "tail factor " + std::to_string(i));
}

namespace {

std::vector<std::size_t> radices(const ProductSpec& spec, std::size_t n) {
  std::vector<std::size_t> r;
  for (std::size_t m = 0; m < n; ++m) r.push_back(spec.factor(m).size());
  return r;
}

Signature product_signature(const ProductSpec& spec, std::size_t n) {
  Signature sig;
  for (std::size_t m = 0; m < n; ++m) sig.add_relation("E_" + std::to_string(m), 2, static_cast<int>(m));
  for (std::size_t m = 0; m < n; ++m)
    for (const auto& r : spec.factor(m).signature().relations())
      sig.add_relation(r.name + "@" + std::to_string(m), r.arity, static_cast<int>(m));
  return sig;
}

// Fills E_m and the lifted relations on a set of product points.
void fill_product_relations(const ProductSpec& spec, std::size_t n, const std::vector<Tuple>& points,
                            FiniteStructure& out) {
  const std::size_t size = points.size();
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<std::vector<Element>> by_value(spec.factor(m).size());
    for (Element x = 0; x < size; ++x) by_value[points[x][m]].push_back(x);
    const std::size_t e = out.signature().relation_index("E_" + std::to_string(m));
    for (const auto& cls : by_value)
      for (Element x : cls)
        for (Element y : cls) {
          Element t[2] = {x, y};
          out.add(e, t);
        }
    const FiniteStructure& f = spec.factor(m);
    for (std::size_t r = 0; r < f.signature().relation_count(); ++r) {
      const auto& sym = f.signature().relations()[r];
      const std::size_t rel = out.signature().relation_index(sym.name + "@" + std::to_string(m));
      for (const auto& t : f.tuples(r)) {
        Tuple cur(t.size());
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == t.size()) {
            out.add(rel, cur);
            return;
          }
          for (Element x : by_value[t[i]]) {
            cur[i] = x;
            rec(i + 1);
          }
        };
        rec(0);
      }
    }
  }
}

}  // namespace

Tuple product_coords(const ProductSpec& spec, std::size_t n, Element e) {
  auto r = radices(spec, n);
  Tuple c(n);
  std::uint64_t x = e;
  for (std::size_t m = n; m-- > 0;) {
    c[m] = static_cast<Element>(x % r[m]);
    x /= r[m];
  }
  if (x != 0) throw InputError("element id out of range");
  return c;
}

Element product_element(const ProductSpec& spec, std::span<const Element> coords) {
  std::uint64_t x = 0;
  for (std::size_t m = 0; m < coords.size(); ++m) {
    const std::size_t k = spec.factor(m).size();
    if (coords[m] >= k) throw InputError("coordinate out of range");
    x = x * k + coords[m];
  }
  return static_cast<Element>(x);
}

FiniteStructure build_truncated_product(const ProductSpec& spec, std::size_t n, const Caps& caps) {
  validate(spec);
  if (n == 0) throw InputError("truncation must keep at least one factor");
  std::size_t size = 1;
  for (auto k : radices(spec, n)) {
    if (size > caps.tuples / k) throw CapExceeded("truncated product exceeds the universe cap");
    size *= k;
  }
  std::vector<Tuple> points(size);
  for (Element x = 0; x < size; ++x) points[x] = product_coords(spec, n, x);
  FiniteStructure out(product_signature(spec, n), size);
  fill_product_relations(spec, n, points, out);
  return out;
}

FiniteStructure rename_relations(const FiniteStructure& m,
                                 const std::map<std::string, std::string>& names) {
  Signature sig;
  for (const auto& r : m.signature().relations()) {
    auto it = names.find(r.name);
    sig.add_relation(it == names.end() ? r.name : it->second, r.arity);
  }
  for (const auto& c : m.signature().constants()) sig.add_constant(c);
  FiniteStructure out(sig, m.size());
  for (std::size_t r = 0; r < sig.relation_count(); ++r)
    for (const auto& t : m.tuples(r)) out.add(r, t);
  for (std::size_t c = 0; c < sig.constant_count(); ++c)
    if (m.constant_assigned(c)) out.set_constant(c, m.constant(c));
  return out;
}

IStar istar(const ProductSpec& spec, const Caps& caps) {
  validate(spec);
  IStar out;
  for (std::size_t i = 0; i < spec.prefix.size(); ++i)
    if (!is_free_action(automorphism_group(spec.prefix[i], caps))) out.prefix_nonfree.push_back(i);
  for (std::size_t i = 0; i < spec.tail.size(); ++i)
    if (!is_free_action(automorphism_group(spec.tail[i], caps))) out.tail_nonfree.push_back(i);
  return out;
}

std::string to_string(BorelVerdict v) { return v == BorelVerdict::Borel ? "Borel" : "NonBorel"; }

BorelVerdict borel_verdict(const ProductSpec& spec, const Caps& caps) {
  return istar(spec, caps).tail_free() ? BorelVerdict::Borel : BorelVerdict::NonBorel;
}

ConstructedBase construct_base(const ProductSpec& spec, std::size_t n, const Caps& caps) {
  IStar star = istar(spec, caps);
  if (!star.tail_free()) throw InputError("tail acts non-freely; no finite base construction applies");
  if (n == 0) throw InputError("truncation must keep at least one factor");
  ConstructedBase out;
  out.nonfree.assign(star.prefix_nonfree.begin(), star.prefix_nonfree.end());
  std::erase_if(out.nonfree, [&](std::size_t m) { return m >= n; });
  std::size_t length = 1;
  for (auto m : out.nonfree) length = std::max(length, spec.factor(m).size());
  for (std::size_t i = 0; i < length; ++i) {
    Tuple c(n, 0);
    for (auto m : out.nonfree) c[m] = static_cast<Element>(std::min(i, spec.factor(m).size() - 1));
    out.tuple.push_back(product_element(spec, c));
  }
  std::size_t size = 1;
  for (auto k : radices(spec, n)) size *= k;
  if (size <= caps.universe) {
    FiniteStructure prod = build_truncated_product(spec, n, caps);
    out.verified = !has_nontrivial_automorphism_fixing(prod, out.tuple, caps);
  }
  return out;
}

// --- rank gadget --------------------------------------------------------------

namespace {

bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool is_automorphism(const FiniteStructure& m, const Permutation& g) {
  for (std::size_t r = 0; r < m.signature().relation_count(); ++r)
    for (const auto& t : m.tuples(r)) {
      Tuple img(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) img[i] = g[t[i]];
      if (!m.holds(r, img)) return false;
    }
  return true;
}

Element power_apply(const Permutation& g, std::int64_t k, Element x) {
  for (std::int64_t i = 0; i < k; ++i) x = g[x];
  return x;
}

}  // namespace

Element RankGadget::translate(std::size_t index, const GroupElement& a) const {
  const InvSystem& sys = system.system;
  if (!sys.contains(index, a)) throw InputError("element is not in A_" + sys.name(index));
  Tuple c(basepoints_.begin(), basepoints_.end());
  const auto& coords = system.labels.at(index);
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const GadgetFactor& f = factors_[factor_slot_[coords[k]]];
    c[coords[k]] = power_apply(f.g, a[k], f.d);
  }
  return lookup_.at(c);
}

RankGadget build_rank_gadget(const ProductSpec& spec, const GadgetSpec& gadget, std::size_t n,
                             const Caps& caps) {
  validate(spec);
  if (n == 0) throw InputError("truncation must keep at least one factor");
  if (gadget.basepoints.size() != n) throw InputError("need one basepoint per factor below the truncation");
  for (std::size_t m = 0; m < n; ++m)
    if (gadget.basepoints[m] >= spec.factor(m).size())
      throw InputError("basepoint of factor " + std::to_string(m) + " out of range");

  RankGadget out;
  out.basepoints_ = gadget.basepoints;
  out.factors_ = gadget.factors;
  out.factor_slot_.assign(n, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < gadget.factors.size(); ++i) {
    const GadgetFactor& f = gadget.factors[i];
    const std::string where = "factor " + std::to_string(f.n);
    if (f.n >= n) throw InputError(where + " lies beyond the truncation");
    if (out.factor_slot_[f.n] != static_cast<std::size_t>(-1)) throw InputError(where + " selected twice");
    out.factor_slot_[f.n] = i;
    const FiniteStructure& m = spec.factor(f.n);
    if (!is_permutation(f.g, m.size())) throw InputError(where + ": g is not a permutation");
    if (is_identity(f.g)) throw InputError(where + ": g is the identity");
    if (!is_automorphism(m, f.g)) throw InputError(where + ": g is not an automorphism");
    const std::size_t p = permutation_order(f.g);
    if (!is_prime(p)) throw InputError(where + ": g has order " + std::to_string(p) + ", not prime");
    if (f.g[gadget.basepoints[f.n]] != gadget.basepoints[f.n])
      throw InputError(where + ": g does not fix the basepoint");
    if (f.d >= m.size()) throw InputError(where + ": displaced point out of range");
    for (std::size_t k = 1; k < p; ++k)
      if (power_apply(f.g, static_cast<std::int64_t>(k), f.d) == f.d)
        throw InputError(where + ": a nonzero power of g fixes d");
    out.factor_order.push_back(p);
  }

  const auto& fam = gadget.family;
  std::set<std::size_t> covered;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& c = fam[i].coords;
    if (!std::is_sorted(c.begin(), c.end()) || std::adjacent_find(c.begin(), c.end()) != c.end())
      throw InputError("family member " + std::to_string(i) + " must list distinct sorted coordinates");
    for (auto m : c) {
      if (m >= n || out.factor_slot_[m] == static_cast<std::size_t>(-1))
        throw InputError("family member " + std::to_string(i) + " uses unselected coordinate " + std::to_string(m));
      covered.insert(m);
    }
    for (std::size_t j = 0; j < i; ++j)
      if (fam[j].coords == c) throw InputError("family lists the same index set twice");
  }
  if (covered.size() != gadget.factors.size()) throw InputError("family does not cover the selected factors");
  auto subset = [&](std::size_t i, std::size_t j) {
    return std::includes(fam[j].coords.begin(), fam[j].coords.end(), fam[i].coords.begin(), fam[i].coords.end());
  };
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = 0; j < fam.size(); ++j) {
      bool bounded = false;
      for (std::size_t k = 0; k < fam.size() && !bounded; ++k) bounded = subset(i, k) && subset(j, k);
      if (!bounded) throw InputError("family is not directed");
    }

  std::vector<IndexSpec> specs;
  std::vector<MapSpec> maps;
  auto index_name = [&](std::size_t i) {
    std::string s = "I{";
    for (std::size_t k = 0; k < fam[i].coords.size(); ++k) s += (k ? "," : "") + std::to_string(fam[i].coords[k]);
    return s + "}";
  };
  for (std::size_t i = 0; i < fam.size(); ++i) {
    IndexSpec s;
    s.name = index_name(i);
    std::vector<std::uint64_t> orders;
    for (auto m : fam[i].coords) orders.push_back(out.factor_order[out.factor_slot_[m]]);
    s.ambient = AbGroup(orders);
    s.generators = fam[i].generators;
    specs.push_back(std::move(s));
    out.system.labels.push_back(fam[i].coords);
    for (std::size_t j = 0; j < fam.size(); ++j) {
      if (i == j || !subset(i, j)) continue;
      IntMatrix mat(fam[i].coords.size(), std::vector<std::int64_t>(fam[j].coords.size(), 0));
      for (std::size_t a = 0; a < fam[i].coords.size(); ++a)
        for (std::size_t b = 0; b < fam[j].coords.size(); ++b)
          if (fam[i].coords[a] == fam[j].coords[b]) mat[a][b] = 1;
      maps.push_back({index_name(j), index_name(i), std::move(mat)});
    }
  }
  out.system.system = InvSystem(std::move(specs), std::move(maps), 64, caps.tuples);

  std::set<Tuple> universe;
  Tuple base(gadget.basepoints.begin(), gadget.basepoints.end());
  std::function<void(std::size_t, std::size_t, Tuple&)> supp = [&](std::size_t m, std::size_t left, Tuple& cur) {
    if (m == n) {
      universe.insert(cur);
      if (universe.size() > caps.tuples) throw CapExceeded("gadget exceeds the universe cap");
      return;
    }
    supp(m + 1, left, cur);
    if (left == 0) return;
    for (Element v = 0; v < spec.factor(m).size(); ++v) {
      if (v == base[m]) continue;
      cur[m] = v;
      supp(m + 1, left - 1, cur);
      cur[m] = base[m];
    }
  };
  Tuple cur = base;
  supp(0, gadget.support_bound, cur);
  const InvSystem& sys = out.system.system;
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (const auto& a : sys.elements(i)) {
      Tuple c = base;
      for (std::size_t k = 0; k < fam[i].coords.size(); ++k) {
        const GadgetFactor& f = gadget.factors[out.factor_slot_[fam[i].coords[k]]];
        c[fam[i].coords[k]] = power_apply(f.g, a[k], f.d);
      }
      universe.insert(c);
      if (universe.size() > caps.tuples) throw CapExceeded("gadget exceeds the universe cap");
    }

  out.points.assign(universe.begin(), universe.end());
  for (Element x = 0; x < out.points.size(); ++x) out.lookup_.emplace(out.points[x], x);
  Signature sig = product_signature(spec, n);
  sig.add_constant("o");
  out.structure = FiniteStructure(sig, out.points.size());
  fill_product_relations(spec, n, out.points, out.structure);
  out.structure.set_constant("o", out.lookup_.at(base));
  for (std::size_t i = 0; i < fam.size(); ++i) out.f.push_back(out.translate(i, sys.ambient(i).zero()));
  return out;
}

}  // namespace scottlab
