#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scottlab/error.hpp"
#include "scottlab/ordinal.hpp"
#include "scottlab/structure.hpp"

namespace scottlab {

struct BfOptions {
  // 0: tuples up to the universe size (complete table). Otherwise tuples up
  // to this length; levels are then exact only up to a per-length horizon.
  std::size_t max_length = 0;
  std::size_t tuple_cap = 1'000'000;
};

enum class Side : std::uint8_t { Left = 0, Right = 1 };

// Result of comparing two tuples. `level` is empty when the quantifier-free
// types already differ. When `exact` is false, `level` is a lower bound
// (the horizon of a length-bounded table).
struct BfLevel {
  std::optional<Ordinal> level;
  bool exact = true;

  friend bool operator==(const BfLevel&, const BfLevel&) = default;
};

std::string to_string(const BfLevel& v);

// Iterated refinement of quantifier-free type equality on tuples of distinct
// elements. Class ids of a level are shared between the two sides, so two
// tuples are k-equivalent iff their level-k classes coincide.
class BfTable {
 public:
  BfTable(const FiniteStructure& left, const FiniteStructure& right, const BfOptions& opt = {});
  explicit BfTable(const FiniteStructure& m, const BfOptions& opt = {});

  bool complete() const { return complete_; }
  bool stabilized() const { return stabilized_; }
  std::size_t universe(Side s) const { return side(s).n; }
  std::size_t length_bound(Side s) const { return side(s).bound; }

  // Levels 0 .. level_count()-1 are stored.
  std::size_t level_count() const { return class_count_.size(); }
  std::size_t class_count(std::size_t level) const { return class_count_.at(level); }
  // Least level whose partition equals the last stored one.
  std::size_t fixpoint_level() const;

  // Levels up to which classes of length-`length` tuples are exact; empty if complete.
  std::optional<std::size_t> horizon(std::size_t length) const;

  // Arbitrary tuples (repeats allowed). The equality patterns must agree for
  // the result to be non-empty.
  BfLevel level(std::span<const Element> a, std::span<const Element> b) const;

  // Distinct tuples only. `level` is clamped to the last stored level.
  std::uint32_t class_of(Side s, std::span<const Element> t, std::size_t level) const;
  std::uint32_t final_class(Side s, std::span<const Element> t) const;

  std::size_t tuple_count(Side s, std::size_t length) const;
  Tuple tuple_at(Side s, std::size_t length, std::size_t index) const;

 private:
  struct SideInfo {
    std::size_t n = 0;
    std::size_t bound = 0;
    std::size_t base = 0;               // global index of the empty tuple
    std::vector<std::size_t> count;     // by length
    std::vector<std::size_t> offset;    // by length, relative to base
  };

  void build(const FiniteStructure* l, const FiniteStructure* r, const BfOptions& opt);
  const SideInfo& side(Side s) const { return sides_[sides_.size() == 1 ? 0 : std::size_t(s)]; }
  std::size_t global_index(Side s, std::span<const Element> t) const;
  std::uint32_t class_at_global(std::size_t g, std::size_t level) const;

  std::vector<SideInfo> sides_;
  bool complete_ = true;
  bool stabilized_ = false;
  std::size_t common_bound_ = 0;
  std::vector<std::uint32_t> final_;                 // class at the last level, per tuple
  std::vector<std::vector<std::uint32_t>> parent_;   // parent_[k][c] = class at level k-1
  std::vector<std::size_t> class_count_;
};

BfLevel bf_level(const FiniteStructure& m, std::span<const Element> a, const FiniteStructure& n,
                 std::span<const Element> b, const BfOptions& opt = {});

// Least k such that k-equivalence implies full equivalence on all tuples of M.
Ordinal scott_rank(const FiniteStructure& m, const BfOptions& opt = {});

// B is a base iff distinct elements have distinct full bf classes over B.
bool is_base(const BfTable& complete_table, std::span<const Element> b);

// Minimum-size base, lexicographically least among those; empty if none of
// size <= max_size exists.
std::optional<Tuple> find_finite_base(const FiniteStructure& m, std::size_t max_size,
                                      const BfOptions& opt = {});

// Same universe, fresh constants naming c (named k0, k1, ... avoiding clashes).
FiniteStructure expand_constants(const FiniteStructure& m, std::span<const Element> c);

// A quantifier-free definable binary relation: conjunction of binary
// relation symbols ("=" denotes equality; an empty list is the total relation).
struct EquivSpec {
  std::string name;
  std::vector<std::string> conjuncts;
};

bool relation_holds(const FiniteStructure& m, const EquivSpec& e, Element x, Element y);
bool is_equivalence(const FiniteStructure& m, const EquivSpec& e);
// Classes sorted by least element; elements sorted.
std::vector<std::vector<Element>> equivalence_classes(const FiniteStructure& m, const EquivSpec& e);

// Home sort keeps ids 0..|M|-1; the sort for the i-th relation follows, one
// element per class in class order. Added symbols: unary Home, unary U_<E>
// and binary pi_<E> (home element, its class).
struct SortedExpansion {
  FiniteStructure structure;
  std::size_t home_size = 0;
  std::vector<std::size_t> sort_offset;
  std::vector<std::size_t> sort_size;
};

SortedExpansion expand_sorts(const FiniteStructure& m, std::span<const EquivSpec> family);

// Classes numbered by least element. Colors are |class| + 1; 0 is reserved
// for infinite classes and never produced here.
struct Quotient {
  FiniteStructure structure;
  std::vector<std::uint32_t> colors;
  std::vector<Element> class_of;
};

Quotient quotient(const FiniteStructure& m, const EquivSpec& e, std::span<const std::string> push);

}  // namespace scottlab
