#include "scottlab/perm_group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "scottlab/error.hpp"

namespace scottlab {

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), Element{0});
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw InputError("composing permutations of different degree");
  Permutation out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = a[b[x]];
  return out;
}

Permutation inverse(const Permutation& p) {
  Permutation out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) out[p[x]] = static_cast<Element>(x);
  return out;
}

bool is_identity(const Permutation& p) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] != x) return false;
  return true;
}

bool is_permutation(const Permutation& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (Element e : p) {
    if (e >= n || seen[e]) return false;
    seen[e] = true;
  }
  return true;
}

std::size_t permutation_order(const Permutation& p) {
  std::size_t order = 1;
  Permutation q = p;
  while (!is_identity(q)) {
    q = compose(p, q);
    ++order;
  }
  return order;
}

namespace {

std::set<Permutation> closure(std::size_t degree, const std::vector<Permutation>& gens,
                              std::size_t max_order) {
  std::set<Permutation> seen{identity_permutation(degree)};
  std::deque<Permutation> queue{identity_permutation(degree)};
  while (!queue.empty()) {
    Permutation x = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : gens) {
      Permutation y = compose(g, x);
      if (seen.insert(y).second) {
        if (seen.size() > max_order) throw CapExceeded("permutation group exceeds order cap");
        queue.push_back(std::move(y));
      }
    }
  }
  return seen;
}

}  // namespace

PermGroup::PermGroup(std::size_t degree) : degree_(degree) {
  elements_.push_back(identity_permutation(degree));
}

PermGroup PermGroup::from_generators(std::size_t degree, const std::vector<Permutation>& gens,
                                     std::size_t max_order) {
  for (const auto& g : gens)
    if (!is_permutation(g, degree)) throw InputError("generator is not a permutation");
  auto set = closure(degree, gens, max_order);
  return from_elements(degree, std::vector<Permutation>(set.begin(), set.end()));
}

PermGroup PermGroup::from_elements(std::size_t degree, std::vector<Permutation> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  for (const auto& e : elements)
    if (!is_permutation(e, degree)) throw InputError("group element is not a permutation");

  PermGroup g(degree);
  g.elements_ = std::move(elements);
  std::set<Permutation> span{identity_permutation(degree)};
  for (const auto& e : g.elements_) {
    if (span.count(e)) continue;
    g.generators_.push_back(e);
    try {
      span = closure(degree, g.generators_, g.elements_.size());
    } catch (const CapExceeded&) {
      throw InputError("permutation set is not closed under composition");
    }
  }
  if (span.size() != g.elements_.size() ||
      !std::equal(span.begin(), span.end(), g.elements_.begin()))
    throw InputError("permutation set is not closed under composition");
  return g;
}

bool PermGroup::contains(const Permutation& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

bool PermGroup::verify_group() const {
  if (!contains(identity_permutation(degree_))) return false;
  for (const auto& x : elements_) {
    if (!contains(inverse(x))) return false;
    for (const auto& y : generators_)
      if (!contains(compose(y, x))) return false;
  }
  // Every element must be reachable from the generators.
  try {
    return closure(degree_, generators_, elements_.size()).size() == elements_.size();
  } catch (const CapExceeded&) {
    return false;
  }
}

bool is_free_action(const PermGroup& g) {
  for (const auto& p : g.elements()) {
    if (is_identity(p)) continue;
    for (std::size_t x = 0; x < p.size(); ++x)
      if (p[x] == x) return false;
  }
  return true;
}

}  // namespace scottlab
