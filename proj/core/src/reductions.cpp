#include "scottlab/reductions.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "scottlab/search.hpp"

namespace scottlab {

namespace {

// All functions with values below delta, in lexicographic order.
std::vector<Tuple> all_functions(std::span<const int> delta, std::size_t cap) {
  std::size_t total = 1;
  for (int d : delta) {
    if (total > cap / static_cast<std::size_t>(d)) throw CapExceeded("function space exceeds the cap");
    total *= static_cast<std::size_t>(d);
  }
  std::vector<Tuple> out;
  out.reserve(total);
  Tuple cur(delta.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    out.push_back(cur);
    for (std::size_t k = delta.size(); k-- > 0;) {
      if (++cur[k] < static_cast<Element>(delta[k])) break;
      cur[k] = 0;
    }
  }
  return out;
}

}  // namespace

FiniteStructure ColoredModel::structure() const {
  Signature sig;
  for (const auto& n : poset.names()) sig.add_relation("E_" + n, 2);
  FiniteStructure out(sig, points.size());
  for (std::size_t q = 0; q < poset.size(); ++q) {
    auto below = poset.down_set(q);
    std::map<Tuple, std::vector<Element>> classes;
    for (Element x = 0; x < points.size(); ++x) {
      Tuple key;
      for (auto r : below) key.push_back(points[x][r]);
      classes[key].push_back(x);
    }
    for (const auto& [k, cls] : classes)
      for (Element x : cls)
        for (Element y : cls) {
          Element t[2] = {x, y};
          out.add(q, t);
        }
  }
  return out;
}

ColoredModel make_colored_model(FinitePoset poset, std::vector<Tuple> points,
                                std::vector<std::uint32_t> colors) {
  if (points.size() != colors.size()) throw InputError("need one color per point");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a] < points[b]; });
  ColoredModel m;
  for (auto i : order) {
    const Tuple& t = points[i];
    if (t.size() != poset.size()) throw InputError("point has the wrong number of coordinates");
    for (std::size_t k = 0; k < t.size(); ++k)
      if (t[k] >= static_cast<Element>(poset.delta(k)))
        throw InputError("value at " + poset.name(k) + " is not below delta");
    if (!m.points.empty() && m.points.back() == t) throw InputError("duplicate point");
    m.points.push_back(t);
    m.colors.push_back(colors[i]);
  }
  m.poset = std::move(poset);
  return m;
}

int SymbolicElement::value(const PosetPresentation& p, const std::string& name) const {
  if (auto it = exceptions.find(name); it != exceptions.end()) return it->second;
  if (std::find(p.elems.begin(), p.elems.end(), name) != p.elems.end()) return 0;
  if (name.size() > 1 && name[0] == 't') {
    const auto dot = name.find('.');
    if (dot != std::string::npos) {
      const std::size_t b = std::stoul(name.substr(1, dot - 1));
      if (b < p.tails.size()) {
        const int v = b < tail_template.size() ? tail_template[b] : 0;
        if (v < 0 || v >= p.tails[b].delta) throw InputError("template value outside delta");
        return v;
      }
    }
  }
  throw InputError("unknown element '" + name + "'");
}

std::vector<int> SymbolicElement::restrict(const PosetPresentation& p,
                                           std::span<const std::string> names) const {
  std::vector<int> out;
  for (const auto& n : names) out.push_back(value(p, n));
  return out;
}

bool SymbolicElement::finitely_nonzero() const {
  return std::all_of(tail_template.begin(), tail_template.end(), [](int v) { return v == 0; });
}

ColoredModel reduce_subposet(const ColoredModel& m, const FinitePoset& p, const Caps& caps) {
  const FinitePoset& q = m.poset;
  std::vector<std::size_t> in_p;
  std::vector<bool> used(p.size(), false);
  for (std::size_t i = 0; i < q.size(); ++i) {
    auto j = p.find(q.name(i));
    if (!j) throw InputError("element " + q.name(i) + " is not in P");
    if (p.delta(*j) != q.delta(i)) throw InputError("delta of " + q.name(i) + " differs in P");
    in_p.push_back(*j);
    used[*j] = true;
  }
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = 0; b < q.size(); ++b)
      if (q.leq(a, b) != p.leq(in_p[a], in_p[b])) throw InputError("Q is not an induced subposet of P");
  std::vector<std::size_t> rest;
  std::vector<int> rest_delta;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (!used[j]) {
      rest.push_back(j);
      rest_delta.push_back(p.delta(j));
    }
  auto tails = all_functions(rest_delta, caps.tuples);
  if (m.points.size() * tails.size() > caps.tuples) throw CapExceeded("reduced model exceeds the cap");
  std::vector<Tuple> pts;
  std::vector<std::uint32_t> cols;
  for (std::size_t x = 0; x < m.points.size(); ++x)
    for (const auto& t : tails) {
      Tuple f(p.size(), 0);
      for (std::size_t i = 0; i < q.size(); ++i) f[in_p[i]] = m.points[x][i];
      bool zero = true;
      for (std::size_t k = 0; k < rest.size(); ++k) {
        f[rest[k]] = t[k];
        zero = zero && t[k] == 0;
      }
      pts.push_back(std::move(f));
      cols.push_back(zero ? m.colors[x] + 1 : 0);
    }
  return make_colored_model(p, std::move(pts), std::move(cols));
}

ColoredModel decode_subposet(const ColoredModel& m, const FinitePoset& q) {
  std::vector<std::size_t> in_p;
  for (std::size_t i = 0; i < q.size(); ++i) {
    auto j = m.poset.find(q.name(i));
    if (!j) throw InputError("element " + q.name(i) + " is not in the model's poset");
    in_p.push_back(*j);
  }
  std::vector<Tuple> pts;
  std::vector<std::uint32_t> cols;
  for (std::size_t x = 0; x < m.points.size(); ++x) {
    if (m.colors[x] == 0) continue;
    Tuple t;
    for (auto j : in_p) t.push_back(m.points[x][j]);
    pts.push_back(std::move(t));
    cols.push_back(m.colors[x] - 1);
  }
  if (pts.empty()) throw InputError("no points of nonzero color");
  return make_colored_model(q, std::move(pts), std::move(cols));
}

ColoredModel reduce_delta(const ColoredModel& m, std::span<const int> delta, const Caps& caps) {
  const FinitePoset& p = m.poset;
  if (delta.size() != p.size()) throw InputError("need one delta per element");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.delta(i) > delta[i]) throw InputError("delta' exceeds delta at " + p.name(i));
  if (m.points.empty()) throw InputError("model has no points");
  std::map<Tuple, std::size_t> index;
  for (std::size_t x = 0; x < m.points.size(); ++x) index.emplace(m.points[x], x);

  std::vector<Tuple> pts;
  std::vector<std::uint32_t> cols;
  for (auto& f : all_functions(delta, caps.tuples)) {
    std::vector<bool> in_i(p.size());
    bool full = true;
    for (std::size_t a = 0; a < p.size(); ++a) {
      bool ok = true;
      for (auto r : p.down_set(a)) ok = ok && f[r] < static_cast<Element>(p.delta(r));
      in_i[a] = ok;
      full = full && ok;
    }
    bool extends = false;
    for (const auto& g : m.points) {
      bool agree = true;
      for (std::size_t a = 0; a < p.size() && agree; ++a) agree = !in_i[a] || g[a] == f[a];
      if (agree) {
        extends = true;
        break;
      }
    }
    if (!extends) continue;
    std::uint32_t c = 0;
    if (full) c = m.colors[index.at(f)] + 1;
    pts.push_back(std::move(f));
    cols.push_back(c);
  }
  return make_colored_model(p.with_delta({delta.begin(), delta.end()}), std::move(pts), std::move(cols));
}

ColoredModel decode_delta(const ColoredModel& m, std::span<const int> delta_prime) {
  if (delta_prime.size() != m.poset.size()) throw InputError("need one delta per element");
  std::vector<Tuple> pts;
  std::vector<std::uint32_t> cols;
  for (std::size_t x = 0; x < m.points.size(); ++x)
    if (m.colors[x] != 0) {
      pts.push_back(m.points[x]);
      cols.push_back(m.colors[x] - 1);
    }
  if (pts.empty()) throw InputError("no points of nonzero color");
  return make_colored_model(m.poset.with_delta({delta_prime.begin(), delta_prime.end()}), std::move(pts),
                            std::move(cols));
}

bool colored_isomorphic(const ColoredModel& a, const ColoredModel& b, const Caps& caps) {
  if (a.poset.names() != b.poset.names()) throw InputError("models live on different posets");
  if (a.points.size() != b.points.size()) return false;
  auto ca = a.colors, cb = b.colors;
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  if (ca != cb) return false;
  return isomorphic(a.structure(), b.structure(), a.colors, b.colors, caps).has_value();
}

IsoReport iso_harness(const Reduction& f, std::span<const ColoredModel> inputs, const Caps& caps) {
  std::vector<ColoredModel> images;
  images.reserve(inputs.size());
  for (const auto& m : inputs) images.push_back(f(m));
  IsoReport r;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = i; j < inputs.size(); ++j) {
      ++r.pairs;
      const bool before = colored_isomorphic(inputs[i], inputs[j], caps);
      const bool after = colored_isomorphic(images[i], images[j], caps);
      if (before && after) {
        ++r.preserved;
        ++r.reflected;
      }
      if (before != after) r.counterexamples.emplace_back(i, j);
    }
  return r;
}

std::vector<ColoredModel> enumerate_colored_models(const FinitePoset& p, std::uint32_t colors,
                                                   std::size_t cap) {
  if (colors == 0) throw InputError("need at least one color");
  auto fns = all_functions(p.deltas(), cap);
  if (fns.size() > 20) throw CapExceeded("too many functions to enumerate subsets");
  std::vector<ColoredModel> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << fns.size()); ++mask) {
    std::vector<Tuple> pts;
    for (std::size_t i = 0; i < fns.size(); ++i)
      if ((mask >> i) & 1) pts.push_back(fns[i]);
    std::vector<std::uint32_t> cols(pts.size(), 0);
    while (true) {
      if (out.size() >= cap) throw CapExceeded("too many colored models");
      out.push_back(make_colored_model(p, pts, cols));
      std::size_t k = 0;
      while (k < cols.size() && ++cols[k] == colors) cols[k++] = 0;
      if (k == cols.size()) break;
    }
  }
  return out;
}

}  // namespace scottlab
