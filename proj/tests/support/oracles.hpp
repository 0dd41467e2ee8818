#pragma once

// Slow reference implementations used to check the library. Each works
// straight from a definition and shares no code with core beyond the data
// types.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "scottlab/cosets.hpp"
#include "scottlab/invsystems.hpp"
#include "scottlab/ordinal.hpp"
#include "scottlab/structure.hpp"

namespace oracle {

using scottlab::Element;
using scottlab::FiniteStructure;
using scottlab::Tuple;
using Perm = std::vector<Element>;

// Every permutation of the universe that preserves relations and constants (n! scan).
std::vector<Perm> automorphisms(const FiniteStructure& m);
// Some bijection m -> n preserving everything, optionally also vertex colors.
std::optional<Perm> isomorphism(const FiniteStructure& m, const FiniteStructure& n,
                                std::span<const std::uint32_t> cm = {},
                                std::span<const std::uint32_t> cn = {});

// Depth-first version of the above that prunes on partial maps; usable up to
// a dozen or so points. `fixed` elements must map to themselves.
std::optional<Perm> isomorphism_dfs(const FiniteStructure& m, const FiniteStructure& n,
                                    std::span<const std::uint32_t> cm = {},
                                    std::span<const std::uint32_t> cn = {},
                                    std::span<const Element> fixed = {});
// Some automorphism other than the identity fixes b pointwise.
bool moves_something_fixing(const FiniteStructure& m, std::span<const Element> b);

bool same_orbit(std::span<const Perm> auts, std::span<const Element> a, std::span<const Element> b);
// Only the identity fixes b pointwise.
bool is_base(std::span<const Perm> auts, std::span<const Element> b);

// Atoms over the tuple and the constants agree.
bool qftp_equal(const FiniteStructure& m, std::span<const Element> a, const FiniteStructure& n,
                std::span<const Element> b);

// Largest k <= max_k with a and b k-equivalent in the Ehrenfeucht-Fraisse
// game; -1 when the quantifier-free types differ.
int ef_level(const FiniteStructure& m, std::span<const Element> a, const FiniteStructure& n,
             std::span<const Element> b, int max_k);

// --- coset systems ------------------------------------------------------------

using Pair = std::pair<scottlab::Word, scottlab::Word>;

// f|k = f'|k implies g|k = g'|k for every cut k, reading positions from the system.
bool coherent(const scottlab::FinCosetSystem& c, const Pair& x, const Pair& y);
// A total coherent section through A exists.
bool extends_to_section(const scottlab::FinCosetSystem& c, std::vector<Pair> a);
// rnk(A) from the set recursion, with infinity decided by extends_to_section.
scottlab::Ordinal coset_set_rank(const scottlab::FinCosetSystem& c, std::vector<Pair> a);

// --- inverse systems ----------------------------------------------------------

// Rank by direct recursion on the definition; infinity iff a lies in the image
// of the top index (finite directed systems have one).
scottlab::Ordinal thread_rank(const scottlab::InvSystem& s, std::size_t p, const scottlab::GroupElement& a,
                              scottlab::RankQuantifier q = scottlab::RankQuantifier::Covers);

}  // namespace oracle
