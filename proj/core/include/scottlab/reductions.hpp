#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scottlab/error.hpp"
#include "scottlab/posets.hpp"
#include "scottlab/structure.hpp"

namespace scottlab {

// A finite set of functions on the poset (values below delta), each with a color.
// Points are kept sorted; colors follow the points.
struct ColoredModel {
  FinitePoset poset;
  std::vector<Tuple> points;
  std::vector<std::uint32_t> colors;

  // E_<q>(f, g) iff f and g agree on every element of the poset below q.
  FiniteStructure structure() const;
};

// Sorts points, rejects duplicates, out-of-range values and length mismatches.
ColoredModel make_colored_model(FinitePoset poset, std::vector<Tuple> points,
                                std::vector<std::uint32_t> colors);

// Function on a presented poset: explicit values plus one value per tail block.
struct SymbolicElement {
  std::map<std::string, int> exceptions;
  std::vector<int> tail_template;

  int value(const PosetPresentation& p, const std::string& name) const;
  // Values on the named elements, in order.
  std::vector<int> restrict(const PosetPresentation& p, std::span<const std::string> names) const;
  // Nonzero at only finitely many elements.
  bool finitely_nonzero() const;
};

// P must contain the elements of Q with the same delta. The result holds all
// f with f|Q in M and any values off Q; the color is 0 when f is nonzero off
// Q and c(f|Q) + 1 otherwise.
ColoredModel reduce_subposet(const ColoredModel& m, const FinitePoset& p, const Caps& caps = {});
// The points of nonzero color restricted to q, colors lowered by one.
ColoredModel decode_subposet(const ColoredModel& m, const FinitePoset& q);

// m lives on the poset with delta' <= delta. I(f) is the set of p with
// f(r) < delta'(r) for all r <= p. The result holds all f whose restriction
// to I(f) extends to a point of m; the color is c(f) + 1 when I(f) is
// everything (so f is in m) and 0 otherwise.
ColoredModel reduce_delta(const ColoredModel& m, std::span<const int> delta, const Caps& caps = {});
// The points of nonzero color, on the poset with delta' restored.
ColoredModel decode_delta(const ColoredModel& m, std::span<const int> delta_prime);

bool colored_isomorphic(const ColoredModel& a, const ColoredModel& b, const Caps& caps = {});

struct IsoReport {
  std::size_t pairs = 0;
  std::size_t preserved = 0;   // isomorphic pairs whose images are isomorphic
  std::size_t reflected = 0;   // pairs with isomorphic images that are isomorphic
  std::vector<std::pair<std::size_t, std::size_t>> counterexamples;  // indices into the input list
};

using Reduction = std::function<ColoredModel(const ColoredModel&)>;

// Checks iso(a, b) <=> iso(f(a), f(b)) over all pairs i <= j of `inputs`.
IsoReport iso_harness(const Reduction& f, std::span<const ColoredModel> inputs, const Caps& caps = {});

// Every nonempty set of functions on the poset with every coloring below `colors`.
std::vector<ColoredModel> enumerate_colored_models(const FinitePoset& p, std::uint32_t colors,
                                                   std::size_t cap = 1'000'000);

}  // namespace scottlab
