#pragma once

#include <cstddef>
#include <vector>

#include "scottlab/structure.hpp"

namespace scottlab {

// p[x] is the image of x.
using Permutation = std::vector<Element>;

Permutation identity_permutation(std::size_t n);
// (a * b)(x) = a(b(x))
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);
bool is_identity(const Permutation& p);
bool is_permutation(const Permutation& p, std::size_t n);
std::size_t permutation_order(const Permutation& p);

// Finite permutation group on {0, ..., degree-1}, kept fully enumerated.
class PermGroup {
 public:
  explicit PermGroup(std::size_t degree = 0);

  static PermGroup from_generators(std::size_t degree, const std::vector<Permutation>& gens,
                                   std::size_t max_order = 1'000'000);
  // Throws InputError if `elements` is not a group.
  static PermGroup from_elements(std::size_t degree, std::vector<Permutation> elements);

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  // Sorted lexicographically; the identity comes first.
  const std::vector<Permutation>& elements() const { return elements_; }
  // Greedy generating set taken from elements() in order.
  const std::vector<Permutation>& generators() const { return generators_; }
  bool contains(const Permutation& p) const;

  // Closure under composition and inverse plus identity membership, by enumeration.
  bool verify_group() const;

 private:
  std::size_t degree_ = 0;
  std::vector<Permutation> elements_;
  std::vector<Permutation> generators_;
};

// No non-identity element fixes a point of {0, ..., degree-1}.
bool is_free_action(const PermGroup& g);

}  // namespace scottlab
