#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scottlab/cosets.hpp"
#include "scottlab/invsystems.hpp"
#include "scottlab/posets.hpp"
#include "scottlab/products.hpp"
#include "scottlab/reductions.hpp"
#include "scottlab/structure.hpp"

// JSON file formats. Parsers throw InputError with a short location on
// malformed input; dumpers produce deterministic, indented text.
namespace scottlab::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// {"size": n, "relations": [{"name", "arity", "tuples": [[...], ...]}], "constants": {"c": e}}
FiniteStructure parse_structure(const std::string& text);
std::string dump_structure(const FiniteStructure& m);

// {"prefix": [structure, ...], "tail": [structure, ...]}
ProductSpec parse_product(const std::string& text);

// {"finite": {"elems", "le", "delta"}, "tails": [{"kind", "ladder", "delta", "above"}]}
PosetPresentation parse_presentation(const std::string& text);
std::string dump_presentation(const PosetPresentation& p);

// {"z_order": 64, "indices": [{"name", "ambient": [k, ...], "generators": [[...]]}],
//  "maps": [{"from", "to", "matrix": [[...]]}]}; an ambient order of 0 is Z.
struct InvSystemFile {
  std::vector<IndexSpec> indices;
  std::vector<MapSpec> maps;
  std::uint64_t z_order = 64;
};
InvSystemFile parse_inv_system(const std::string& text);

// {"parent": [-1, 0, ...], "c_order": k, "z_order": 64}; c_order 0 is Z.
struct TreeFile {
  RootedTree tree;
  std::uint64_t c_order = 2;
  std::uint64_t z_order = 64;
};
TreeFile parse_tree(const std::string& text);

// {"n", "m", "f_pos"?, "g_pos"?, "cosets": [{"f": bits, "offset": bits, "basis": [bits]}]}
FinCosetSystem parse_coset_system(const std::string& text);
std::string dump_coset_system(const FinCosetSystem& c);
// {"systems": [coset system, ...]}
std::vector<FinCosetSystem> parse_limit(const std::string& text);

// {"poset": {"elems", "le", "delta"}, "points": [[...]], "colors": [...]}
ColoredModel parse_colored_model(const std::string& text);
std::string dump_colored_model(const ColoredModel& m);
FinitePoset parse_finite_poset(const std::string& text);

// {"product": ..., "truncate": N, "basepoints": [...], "factors": [{"n", "g", "d"}],
//  "family": [{"coords": [...], "generators": [[...]]}], "support_bound": 0}
struct GadgetFile {
  ProductSpec product;
  GadgetSpec gadget;
  std::size_t truncate = 1;
};
GadgetFile parse_gadget(const std::string& text);

}  // namespace scottlab::io
