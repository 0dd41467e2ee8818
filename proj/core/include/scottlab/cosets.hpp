#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scottlab/error.hpp"
#include "scottlab/ordinal.hpp"
#include "scottlab/structure.hpp"

namespace scottlab {

// Bit i of a word is position i of the sequence.
using Word = std::uint64_t;

// A finite word, or an eventually constant element of 2^omega given by a
// prefix and the repeated tail bit. EvConst prefixes carry no trailing copies
// of the tail bit.
class BitVec {
 public:
  enum class Kind { Fin, EvConst };

  static BitVec fin(Word bits, std::size_t length);
  static BitVec ev_const(Word prefix, std::size_t length, bool tail);
  // "0110" for Fin, "01(1)" for EvConst; character i is position i.
  static BitVec parse(const std::string& s);

  Kind kind() const { return kind_; }
  std::size_t length() const { return length_; }  // prefix length for EvConst
  Word bits() const { return bits_; }
  bool tail() const { return tail_; }
  bool at(std::size_t i) const;
  BitVec truncate(std::size_t n) const;  // Fin of length n
  std::string to_string() const;

  friend bool operator==(const BitVec&, const BitVec&) = default;

 private:
  Kind kind_ = Kind::Fin;
  Word bits_ = 0;
  std::size_t length_ = 0;
  bool tail_ = false;
};

std::string bits_to_string(Word w, std::size_t length);
Word bits_from_string(const std::string& s);

// offset + span(basis) inside F_2^dim. The basis is kept in reduced echelon
// form (pivot = highest bit, rows by decreasing pivot) and the offset is
// reduced against it, so equal cosets compare equal.
class Coset {
 public:
  Coset() = default;
  // Throws InputError if some vector does not fit in dim bits.
  Coset(std::size_t dim, std::vector<Word> generators, Word offset);
  static Coset single(std::size_t dim, Word point) { return Coset(dim, {}, point); }

  std::size_t dim() const { return dim_; }
  const std::vector<Word>& basis() const { return basis_; }
  Word offset() const { return offset_; }
  std::size_t size() const { return std::size_t{1} << basis_.size(); }

  bool contains(Word g) const;
  std::vector<Word> elements() const;  // ascending
  Coset group() const { return Coset(dim_, basis_, 0); }
  bool is_group() const { return offset_ == 0; }
  Coset shifted(Word s) const { return Coset(dim_, basis_, offset_ ^ s); }

  friend bool operator==(const Coset&, const Coset&) = default;

 private:
  Word reduce(Word v) const;

  std::size_t dim_ = 0;
  std::vector<Word> basis_;
  Word offset_ = 0;
};

// The union of two cosets of a common ambient space, when it is a coset.
std::optional<Coset> union_as_coset(const Coset& a, const Coset& b);

// A coset C[f] in F_2^m for every f in F_2^n. f_pos and g_pos give the
// positions in omega of the bits, strictly increasing; they default to 0, 1, ...
class FinCosetSystem {
 public:
  FinCosetSystem() = default;
  FinCosetSystem(std::size_t n, std::size_t m, std::vector<Coset> cosets,
                 std::vector<std::size_t> f_pos = {}, std::vector<std::size_t> g_pos = {});

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t domain_size() const { return cosets_.size(); }
  const Coset& at(Word f) const { return cosets_.at(f); }
  const std::vector<Coset>& cosets() const { return cosets_; }
  const std::vector<std::size_t>& f_pos() const { return f_pos_; }
  const std::vector<std::size_t>& g_pos() const { return g_pos_; }
  bool contains(Word f, Word g) const { return f < cosets_.size() && cosets_[f].contains(g); }

  // Number of leading g bits that must agree with a pair whose first
  // component is f2 (all m bits when f2 == f).
  std::size_t forced_prefix(Word f, Word f2) const;
  bool coherent(Word f, Word g, Word f2, Word g2) const;

  friend bool operator==(const FinCosetSystem&, const FinCosetSystem&) = default;

 private:
  std::size_t n_ = 0, m_ = 0;
  std::vector<Coset> cosets_;
  std::vector<std::size_t> f_pos_, g_pos_;
  std::vector<std::size_t> cut_;  // per f bit c: g bits with g_pos < f_pos[c]
};

using PairSet = std::vector<std::pair<Word, Word>>;

bool is_coherent(const FinCosetSystem& c, const PairSet& a);

// Singleton ranks by a fixpoint over pairs; set ranks follow by taking minima.
class CosetRanks {
 public:
  explicit CosetRanks(const FinCosetSystem& c);

  const FinCosetSystem& system() const { return sys_; }
  Ordinal pair_rank(Word f, Word g) const;
  Ordinal empty_rank() const { return empty_; }
  // Throws InputError unless a is a coherent subset of C.
  Ordinal rank(const PairSet& a) const;
  std::size_t levels() const { return levels_; }

 private:
  FinCosetSystem sys_;
  std::vector<std::vector<Word>> elems_;
  std::vector<std::vector<Ordinal>> ranks_;
  Ordinal empty_;
  std::size_t levels_ = 0;
};

Ordinal rnk_coset(const FinCosetSystem& c, const PairSet& a);

// C[f] = {0} unless f is all ones, in which case C[f] = {1...1}.
FinCosetSystem base_system(std::size_t n, std::size_t m);
// C[f] = {0} for all f.
FinCosetSystem zero_system(std::size_t n, std::size_t m);
FinCosetSystem group_part(const FinCosetSystem& c);

// D[0f] = {0}; D[1if] = i0 G[f] + j0 C[f] (j = 1-i). Two more bits each side.
FinCosetSystem successor(const FinCosetSystem& c);
// One more f bit after the last position, ignored by the cosets.
FinCosetSystem pad_f(const FinCosetSystem& c);

// (f, g) -> (1jf, i0g) with j = 1-i.
PairSet f_map(int i, const PairSet& b);
// All (0f, 0) and all (1if, i0), as pairs of the successor system.
PairSet successor_anchor(int i, const FinCosetSystem& c);

// Finite limit layout. Block k occupies positions [start, start + width):
// the g selector at start, then the component bits shifted by start + 1.
// D[f] holds the g whose last selector is 1; the others form H[f].
struct LimitBlock {
  std::size_t start = 0;
  std::size_t f_shift = 0;  // first bit of the block in an f word
  std::size_t g_shift = 0;  // selector bit in a g word; component bits follow
};

struct LimitSystem {
  FinCosetSystem d;
  FinCosetSystem h;
  std::vector<FinCosetSystem> components;
  std::vector<LimitBlock> blocks;

  Word f_block(Word f, std::size_t k) const;
  Word g_block(Word g, std::size_t k) const;
  bool selector(Word g, std::size_t k) const;
};

// Throws InputError unless the empty-set ranks are finite and strictly increasing.
LimitSystem limit(std::span<const FinCosetSystem> systems);

// min over blocks of the rank in C_k (selector 1) or G_k (selector 0).
class TauEvaluator {
 public:
  explicit TauEvaluator(const LimitSystem& l);
  Ordinal tau(Word f, Word g) const;

 private:
  const LimitSystem* l_;
  std::vector<CosetRanks> c_, g_;
};

// Universe F_2^n x F_2^m, element (f, g) = f * 2^m + g. E_p<k>: f bit k;
// E_q<k>: the f bits at positions up to g_pos[k] and g bit k; unary C.
FiniteStructure to_unary_structure(const FinCosetSystem& c, const Caps& caps = {});

}  // namespace scottlab
