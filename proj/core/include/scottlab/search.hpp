#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scottlab/error.hpp"
#include "scottlab/perm_group.hpp"
#include "scottlab/structure.hpp"

namespace scottlab {

// Backtracking over images in element-id order; the first witness found is
// the lexicographically least one. Throws InputError on signature mismatch.
std::optional<Permutation> isomorphic(const FiniteStructure& m, const FiniteStructure& n,
                                      const Caps& caps = {});
// Same, additionally preserving vertex colors.
std::optional<Permutation> isomorphic(const FiniteStructure& m, const FiniteStructure& n,
                                      std::span<const std::uint32_t> colors_m,
                                      std::span<const std::uint32_t> colors_n,
                                      const Caps& caps = {});

PermGroup automorphism_group(const FiniteStructure& m, const Caps& caps = {});

// True iff some non-identity automorphism fixes every element of `fixed`.
bool has_nontrivial_automorphism_fixing(const FiniteStructure& m, std::span<const Element> fixed,
                                        const Caps& caps = {});

// Partition of all k-tuples (repeats allowed) of a universe of size n.
// Tuples are coded in mixed radix, first coordinate most significant.
class TuplePartition {
 public:
  TuplePartition(std::size_t universe, std::size_t length, std::vector<std::uint32_t> blocks);

  std::size_t universe() const { return universe_; }
  std::size_t length() const { return length_; }
  std::size_t tuple_count() const { return blocks_.size(); }
  std::size_t block_count() const { return block_count_; }

  std::uint64_t code(std::span<const Element> t) const;
  Tuple tuple(std::uint64_t code) const;
  std::uint32_t block_of(std::span<const Element> t) const { return blocks_.at(code(t)); }
  std::uint32_t block_of_code(std::uint64_t c) const { return blocks_.at(c); }
  bool same_block(std::span<const Element> a, std::span<const Element> b) const {
    return block_of(a) == block_of(b);
  }
  // Block ids are numbered by first occurrence in code order.
  const std::vector<std::uint32_t>& blocks() const { return blocks_; }

 private:
  std::size_t universe_;
  std::size_t length_;
  std::vector<std::uint32_t> blocks_;
  std::size_t block_count_ = 0;
};

// Aut(M)-orbits on M^k.
TuplePartition orbit_partition(const FiniteStructure& m, std::size_t k, const Caps& caps = {});

}  // namespace scottlab
