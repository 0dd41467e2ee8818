#include "builders.hpp"

namespace build {

using namespace scottlab;

FiniteStructure pure_set(std::size_t n) { return FiniteStructure(Signature{}, n); }

FiniteStructure equivalence(const std::vector<std::size_t>& classes, const std::string& name) {
  std::size_t n = 0;
  std::vector<std::size_t> label;
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t i = 0; i < classes[c]; ++i, ++n) label.push_back(c);
  Signature sig;
  sig.add_relation(name, 2);
  FiniteStructure m(sig, n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (label[x] == label[y]) m.add(0, Tuple{x, y});
  return m;
}

FiniteStructure linear_order(std::size_t n) {
  Signature sig;
  sig.add_relation("<", 2);
  FiniteStructure m(sig, n);
  for (Element x = 0; x < n; ++x)
    for (Element y = x + 1; y < n; ++y) m.add(0, Tuple{x, y});
  return m;
}

FiniteStructure directed_cycle(std::size_t n) {
  Signature sig;
  sig.add_relation("R", 2);
  FiniteStructure m(sig, n);
  for (Element x = 0; x < n; ++x) m.add(0, Tuple{x, static_cast<Element>((x + 1) % n)});
  return m;
}

FiniteStructure cyclic_order(std::size_t n) {
  Signature sig;
  sig.add_relation("Cyc", 3);
  FiniteStructure m(sig, n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z) {
        const std::size_t dy = (y + n - x) % n, dz = (z + n - x) % n;
        if (dy != 0 && dz != 0 && dy < dz) m.add(0, Tuple{x, y, z});
      }
  return m;
}

FiniteStructure nested_equivalences() {
  Signature sig;
  sig.add_relation("E", 2);
  sig.add_relation("F", 2);
  FiniteStructure m(sig, 8);
  for (Element x = 0; x < 8; ++x)
    for (Element y = 0; y < 8; ++y) {
      if (x / 4 == y / 4) m.add(0, Tuple{x, y});
      if (x / 2 == y / 2) m.add(1, Tuple{x, y});
    }
  return m;
}

FiniteStructure random_structure(std::mt19937_64& rng, std::size_t size, std::size_t unary,
                                 std::size_t binary, std::size_t ternary, double density) {
  Signature sig;
  for (std::size_t i = 0; i < unary; ++i) sig.add_relation("P" + std::to_string(i), 1);
  for (std::size_t i = 0; i < binary; ++i) sig.add_relation("B" + std::to_string(i), 2);
  for (std::size_t i = 0; i < ternary; ++i) sig.add_relation("C" + std::to_string(i), 3);
  FiniteStructure m(sig, size);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t r = 0; r < sig.relation_count(); ++r) {
    const std::size_t k = sig.relations()[r].arity;
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= size;
    for (std::size_t code = 0; code < total; ++code) {
      if (u(rng) >= density) continue;
      Tuple t(k);
      std::size_t c = code;
      for (std::size_t i = k; i-- > 0; c /= size) t[i] = static_cast<Element>(c % size);
      m.add(r, t);
    }
  }
  return m;
}

ProductSpec constant_tail(const FiniteStructure& factor) { return ProductSpec{{}, {factor}}; }

}  // namespace build
