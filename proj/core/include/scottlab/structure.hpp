#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scottlab {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct RelationSymbol {
  std::string name;
  std::size_t arity = 0;
  int owner = -1;  // language tag for products; -1 = untagged

  friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

class Signature {
 public:
  std::size_t add_relation(std::string name, std::size_t arity, int owner = -1);
  std::size_t add_constant(std::string name);

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<std::string>& constants() const { return constants_; }
  std::size_t relation_count() const { return relations_.size(); }
  std::size_t constant_count() const { return constants_.size(); }

  std::optional<std::size_t> find_relation(std::string_view name) const;
  std::optional<std::size_t> find_constant(std::string_view name) const;
  // Throw InputError when absent.
  std::size_t relation_index(std::string_view name) const;
  std::size_t constant_index(std::string_view name) const;

  // A constant name not yet in use, built from `stem`.
  std::string fresh_constant_name(std::string_view stem) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<RelationSymbol> relations_;
  std::vector<std::string> constants_;
};

// Finite relational structure with constants on the universe {0, ..., size-1}.
class FiniteStructure {
 public:
  FiniteStructure() = default;
  FiniteStructure(Signature sig, std::size_t size);

  const Signature& signature() const { return sig_; }
  std::size_t size() const { return size_; }

  void add(std::size_t rel, std::span<const Element> t);
  void add(std::string_view rel, std::initializer_list<Element> t);
  bool holds(std::size_t rel, std::span<const Element> t) const;
  bool holds(std::string_view rel, std::initializer_list<Element> t) const;

  // All satisfying tuples in lexicographic order.
  std::vector<Tuple> tuples(std::size_t rel) const;
  std::size_t tuple_count(std::size_t rel) const { return rels_.at(rel).count; }

  void set_constant(std::size_t c, Element e);
  void set_constant(std::string_view c, Element e);
  Element constant(std::size_t c) const;
  bool constant_assigned(std::size_t c) const { return consts_.at(c).has_value(); }

  // Extend the signature in place; the new relation starts empty.
  std::size_t add_relation_symbol(std::string name, std::size_t arity, int owner = -1);
  std::size_t add_constant_symbol(std::string name, Element e);

  // Throws InputError if some constant is unassigned.
  void validate() const;

  // Image under a bijection of the universe: element x becomes perm[x].
  FiniteStructure relabeled(std::span<const Element> perm) const;

  friend bool operator==(const FiniteStructure& a, const FiniteStructure& b);

 private:
  struct Relation {
    bool dense = true;
    std::vector<std::uint64_t> bits;
    std::set<std::uint64_t> codes;
    std::size_t count = 0;
  };

  std::uint64_t encode(std::size_t rel, std::span<const Element> t) const;
  void init_relation(Relation& r, std::size_t arity) const;

  Signature sig_;
  std::size_t size_ = 0;
  std::vector<Relation> rels_;
  std::vector<std::optional<Element>> consts_;
};

// Terms of the language: the constants, then the variables x_0, x_1, ...
struct Term {
  bool is_constant = false;
  std::size_t index = 0;

  static Term var(std::size_t i) { return {false, i}; }
  static Term cst(std::size_t i) { return {true, i}; }
};

// Atomic diagram of a tuple, including the equality pattern and constants.
class QfType {
 public:
  std::size_t length() const { return length_; }
  std::size_t constant_count() const { return nconst_; }

  bool equal(Term a, Term b) const;
  bool holds(std::size_t rel, std::span<const Term> args) const;
  bool holds(std::string_view rel, std::initializer_list<Term> args) const;

  // Positive atoms, e.g. "x0=x1", "E(x0,c0)".
  std::vector<std::string> atoms() const;

  friend bool operator==(const QfType&, const QfType&) = default;

 private:
  friend QfType qftp(const FiniteStructure& m, std::span<const Element> a);

  std::size_t slot(Term t) const;
  std::string term_name(std::size_t slot) const;

  std::vector<RelationSymbol> rels_;
  std::vector<std::string> const_names_;
  std::size_t nconst_ = 0;
  std::size_t length_ = 0;
  std::vector<bool> eq_;
  std::vector<std::vector<bool>> rel_bits_;
};

QfType qftp(const FiniteStructure& m, std::span<const Element> a);

}  // namespace scottlab
