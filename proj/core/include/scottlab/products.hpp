#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scottlab/error.hpp"
#include "scottlab/invsystems.hpp"
#include "scottlab/perm_group.hpp"
#include "scottlab/structure.hpp"

namespace scottlab {

// Factors M_0, M_1, ...: the prefix, then the tail repeated forever.
struct ProductSpec {
  std::vector<FiniteStructure> prefix;
  std::vector<FiniteStructure> tail;

  const FiniteStructure& factor(std::size_t n) const;
};

// Nonempty tail, every factor of size >= 2, no constants.
void validate(const ProductSpec& spec);

// Universe prod_{n<N} M_n in mixed radix, coordinate 0 most significant.
// E_<m> is equality of coordinate m; relation R of M_m is lifted as R@<m>
// (owner m) and holds iff R holds of the m-th coordinates.
FiniteStructure build_truncated_product(const ProductSpec& spec, std::size_t n,
                                        const Caps& caps = {});
Tuple product_coords(const ProductSpec& spec, std::size_t n, Element e);
Element product_element(const ProductSpec& spec, std::span<const Element> coords);

// Same structure with relation symbols renamed (unlisted names kept) and owners cleared.
FiniteStructure rename_relations(const FiniteStructure& m,
                                 const std::map<std::string, std::string>& names);

struct IStar {
  std::vector<std::size_t> prefix_nonfree;  // prefix indices whose Aut acts non-freely
  std::vector<std::size_t> tail_nonfree;    // positions within one tail period
  bool tail_free() const { return tail_nonfree.empty(); }
};

IStar istar(const ProductSpec& spec, const Caps& caps = {});

enum class BorelVerdict { Borel, NonBorel };
std::string to_string(BorelVerdict v);

// Borel iff the tail acts freely, so that I_* lies in the prefix and is finite.
BorelVerdict borel_verdict(const ProductSpec& spec, const Caps& caps = {});

struct ConstructedBase {
  Tuple tuple;                    // element ids of the truncated product
  std::vector<std::size_t> nonfree;
  std::optional<bool> verified;   // base check; empty when over the universe cap
};

// a_i(n) = the min(i, |M_n|-1)-th element of M_n for non-free n < N, and
// element 0 otherwise. Throws InputError when the tail is not free.
ConstructedBase construct_base(const ProductSpec& spec, std::size_t n, const Caps& caps = {});

// --- rank gadget --------------------------------------------------------------

struct GadgetFactor {
  std::size_t n = 0;
  Permutation g;  // automorphism of M_n of prime order fixing the basepoint
  Element d = 0;  // a point moved by g
};

struct GadgetIndex {
  std::vector<std::size_t> coords;          // sorted product coordinates of selected factors
  std::vector<GroupElement> generators;     // exponent vectors over coords
};

struct GadgetSpec {
  std::vector<Element> basepoints;          // o_n for every n < N
  std::vector<GadgetFactor> factors;
  std::vector<GadgetIndex> family;
  // Product elements with at most this many coordinates off the basepoint are kept.
  std::size_t support_bound = 0;
};

struct RankGadget {
  FiniteStructure structure;                // constant "o" names the basepoint sequence
  std::vector<Tuple> points;                // product coordinates per element, ascending
  std::vector<std::size_t> factor_order;    // prime order of g per selected factor
  CoordinateSystem system;                  // one index per family member, ordered by inclusion
  std::vector<Element> f;                   // f_I per family member

  // Element id of a + f_I; throws if a is not in A_I.
  Element translate(std::size_t index, const GroupElement& a) const;

 private:
  friend RankGadget build_rank_gadget(const ProductSpec&, const GadgetSpec&, std::size_t,
                                      const Caps&);
  std::vector<std::size_t> factor_slot_;    // per product coordinate, selected factor or npos
  std::vector<GadgetFactor> factors_;
  std::vector<Element> basepoints_;
  std::map<Tuple, Element> lookup_;
};

RankGadget build_rank_gadget(const ProductSpec& spec, const GadgetSpec& gadget, std::size_t n,
                             const Caps& caps = {});

}  // namespace scottlab
