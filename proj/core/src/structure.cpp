#include "scottlab/structure.hpp"

#include <algorithm>

#include "scottlab/error.hpp"

namespace scottlab {

namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 26;

// size^arity, or nullopt past 2^62.
std::optional<std::uint64_t> tuple_space(std::size_t size, std::size_t arity) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (size != 0 && v > (std::uint64_t{1} << 62) / size) return std::nullopt;
    v *= size;
  }
  return v;
}

}  // namespace

// --- Signature -------------------------------------------------------------

std::size_t Signature::add_relation(std::string name, std::size_t arity, int owner) {
  if (arity == 0) throw InputError("relation '" + name + "' must have positive arity");
  if (name.empty()) throw InputError("empty relation name");
  if (find_relation(name)) throw InputError("duplicate relation name '" + name + "'");
  relations_.push_back({std::move(name), arity, owner});
  return relations_.size() - 1;
}

std::size_t Signature::add_constant(std::string name) {
  if (name.empty()) throw InputError("empty constant name");
  if (find_constant(name)) throw InputError("duplicate constant name '" + name + "'");
  constants_.push_back(std::move(name));
  return constants_.size() - 1;
}

std::optional<std::size_t> Signature::find_relation(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Signature::find_constant(std::string_view name) const {
  for (std::size_t i = 0; i < constants_.size(); ++i)
    if (constants_[i] == name) return i;
  return std::nullopt;
}

std::size_t Signature::relation_index(std::string_view name) const {
  if (auto i = find_relation(name)) return *i;
  throw InputError("unknown relation '" + std::string(name) + "'");
}

std::size_t Signature::constant_index(std::string_view name) const {
  if (auto i = find_constant(name)) return *i;
  throw InputError("unknown constant '" + std::string(name) + "'");
}

std::string Signature::fresh_constant_name(std::string_view stem) const {
  for (std::size_t i = 0;; ++i) {
    std::string candidate = std::string(stem) + std::to_string(i);
    if (!find_constant(candidate)) return candidate;
  }
}

// --- FiniteStructure -------------------------------------------------------

FiniteStructure::FiniteStructure(Signature sig, std::size_t size)
    : sig_(std::move(sig)), size_(size) {
  if (size_ == 0) throw InputError("structures must have a nonempty universe");
  if (size_ > std::size_t{1} << 31) throw InputError("universe too large");
  rels_.resize(sig_.relation_count());
  for (std::size_t r = 0; r < rels_.size(); ++r) init_relation(rels_[r], sig_.relations()[r].arity);
  consts_.assign(sig_.constant_count(), std::nullopt);
}

void FiniteStructure::init_relation(Relation& r, std::size_t arity) const {
  auto space = tuple_space(size_, arity);
  if (!space) throw InputError("relation tuple space too large for encoding");
  r.dense = *space <= kDenseLimit;
  if (r.dense) r.bits.assign((*space + 63) / 64, 0);
}

std::uint64_t FiniteStructure::encode(std::size_t rel, std::span<const Element> t) const {
  const auto& sym = sig_.relations().at(rel);
  if (t.size() != sym.arity)
    throw InputError("relation '" + sym.name + "' has arity " + std::to_string(sym.arity) +
                     ", got a tuple of length " + std::to_string(t.size()));
  std::uint64_t code = 0;
  for (Element e : t) {
    if (e >= size_)
      throw InputError("element " + std::to_string(e) + " is outside the universe of size " +
                       std::to_string(size_));
    code = code * size_ + e;
  }
  return code;
}

void FiniteStructure::add(std::size_t rel, std::span<const Element> t) {
  std::uint64_t code = encode(rel, t);
  Relation& r = rels_[rel];
  if (r.dense) {
    std::uint64_t& word = r.bits[code >> 6];
    std::uint64_t bit = std::uint64_t{1} << (code & 63);
    if (!(word & bit)) {
      word |= bit;
      ++r.count;
    }
  } else if (r.codes.insert(code).second) {
    ++r.count;
  }
}

void FiniteStructure::add(std::string_view rel, std::initializer_list<Element> t) {
  add(sig_.relation_index(rel), std::span<const Element>(t.begin(), t.size()));
}

bool FiniteStructure::holds(std::size_t rel, std::span<const Element> t) const {
  std::uint64_t code = encode(rel, t);
  const Relation& r = rels_[rel];
  if (r.dense) return (r.bits[code >> 6] >> (code & 63)) & 1;
  return r.codes.count(code) != 0;
}

bool FiniteStructure::holds(std::string_view rel, std::initializer_list<Element> t) const {
  return holds(sig_.relation_index(rel), std::span<const Element>(t.begin(), t.size()));
}

std::vector<Tuple> FiniteStructure::tuples(std::size_t rel) const {
  const Relation& r = rels_.at(rel);
  const std::size_t arity = sig_.relations()[rel].arity;
  std::vector<Tuple> out;
  out.reserve(r.count);
  auto decode = [&](std::uint64_t code) {
    Tuple t(arity);
    for (std::size_t i = arity; i-- > 0;) {
      t[i] = static_cast<Element>(code % size_);
      code /= size_;
    }
    out.push_back(std::move(t));
  };
  if (r.dense) {
    for (std::size_t w = 0; w < r.bits.size(); ++w) {
      std::uint64_t word = r.bits[w];
      while (word) {
        int b = __builtin_ctzll(word);
        decode(w * 64 + static_cast<std::uint64_t>(b));
        word &= word - 1;
      }
    }
  } else {
    for (std::uint64_t code : r.codes) decode(code);
  }
  return out;
}

void FiniteStructure::set_constant(std::size_t c, Element e) {
  if (c >= consts_.size()) throw InputError("constant index out of range");
  if (e >= size_) throw InputError("constant denotes an element outside the universe");
  consts_[c] = e;
}

void FiniteStructure::set_constant(std::string_view c, Element e) {
  set_constant(sig_.constant_index(c), e);
}

Element FiniteStructure::constant(std::size_t c) const {
  const auto& v = consts_.at(c);
  if (!v) throw InputError("constant '" + sig_.constants()[c] + "' is unassigned");
  return *v;
}

std::size_t FiniteStructure::add_relation_symbol(std::string name, std::size_t arity, int owner) {
  std::size_t idx = sig_.add_relation(std::move(name), arity, owner);
  rels_.emplace_back();
  init_relation(rels_.back(), arity);
  return idx;
}

std::size_t FiniteStructure::add_constant_symbol(std::string name, Element e) {
  if (e >= size_) throw InputError("constant denotes an element outside the universe");
  std::size_t idx = sig_.add_constant(std::move(name));
  consts_.push_back(e);
  return idx;
}

void FiniteStructure::validate() const {
  for (std::size_t c = 0; c < consts_.size(); ++c)
    if (!consts_[c]) throw InputError("constant '" + sig_.constants()[c] + "' is unassigned");
}

FiniteStructure FiniteStructure::relabeled(std::span<const Element> perm) const {
  if (perm.size() != size_) throw InputError("relabeling has the wrong length");
  std::vector<bool> seen(size_, false);
  for (Element e : perm) {
    if (e >= size_ || seen[e]) throw InputError("relabeling is not a bijection");
    seen[e] = true;
  }
  FiniteStructure out(sig_, size_);
  for (std::size_t r = 0; r < rels_.size(); ++r)
    for (Tuple t : tuples(r)) {
      for (Element& e : t) e = perm[e];
      out.add(r, t);
    }
  for (std::size_t c = 0; c < consts_.size(); ++c)
    if (consts_[c]) out.consts_[c] = perm[*consts_[c]];
  return out;
}

bool operator==(const FiniteStructure& a, const FiniteStructure& b) {
  if (a.sig_ != b.sig_ || a.size_ != b.size_ || a.consts_ != b.consts_) return false;
  for (std::size_t r = 0; r < a.rels_.size(); ++r)
    if (a.rels_[r].count != b.rels_[r].count || a.tuples(r) != b.tuples(r)) return false;
  return true;
}

// --- QfType ----------------------------------------------------------------

QfType qftp(const FiniteStructure& m, std::span<const Element> a) {
  QfType t;
  t.rels_ = m.signature().relations();
  t.const_names_ = m.signature().constants();
  t.nconst_ = t.const_names_.size();
  t.length_ = a.size();

  std::vector<Element> terms;
  terms.reserve(t.nconst_ + a.size());
  for (std::size_t c = 0; c < t.nconst_; ++c) terms.push_back(m.constant(c));
  for (Element e : a) {
    if (e >= m.size())
      throw InputError("element " + std::to_string(e) + " is outside the universe");
    terms.push_back(e);
  }
  const std::size_t T = terms.size();

  t.eq_.assign(T * T, false);
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = 0; j < T; ++j) t.eq_[i * T + j] = terms[i] == terms[j];

  t.rel_bits_.resize(t.rels_.size());
  for (std::size_t r = 0; r < t.rels_.size(); ++r) {
    const std::size_t ar = t.rels_[r].arity;
    std::size_t space = 1;
    for (std::size_t k = 0; k < ar; ++k) space *= T;
    auto& bits = t.rel_bits_[r];
    bits.assign(space, false);
    Tuple args(ar);
    for (std::size_t code = 0; code < space; ++code) {
      std::size_t c = code;
      for (std::size_t k = ar; k-- > 0;) {
        args[k] = terms[c % T];
        c /= T;
      }
      bits[code] = m.holds(r, args);
    }
  }
  return t;
}

std::size_t QfType::slot(Term t) const {
  if (t.is_constant) {
    if (t.index >= nconst_) throw InputError("constant term out of range");
    return t.index;
  }
  if (t.index >= length_) throw InputError("variable term out of range");
  return nconst_ + t.index;
}

bool QfType::equal(Term a, Term b) const {
  const std::size_t T = nconst_ + length_;
  return eq_[slot(a) * T + slot(b)];
}

bool QfType::holds(std::size_t rel, std::span<const Term> args) const {
  if (rel >= rels_.size()) throw InputError("relation index out of range");
  if (args.size() != rels_[rel].arity) throw InputError("arity mismatch in qftp query");
  const std::size_t T = nconst_ + length_;
  std::size_t code = 0;
  for (Term a : args) code = code * T + slot(a);
  return rel_bits_[rel][code];
}

bool QfType::holds(std::string_view rel, std::initializer_list<Term> args) const {
  for (std::size_t r = 0; r < rels_.size(); ++r)
    if (rels_[r].name == rel) return holds(r, std::span<const Term>(args.begin(), args.size()));
  throw InputError("unknown relation '" + std::string(rel) + "'");
}

std::string QfType::term_name(std::size_t s) const {
  if (s < nconst_) return const_names_[s];
  return "x" + std::to_string(s - nconst_);
}

std::vector<std::string> QfType::atoms() const {
  std::vector<std::string> out;
  const std::size_t T = nconst_ + length_;
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = i + 1; j < T; ++j)
      if (eq_[i * T + j]) out.push_back(term_name(i) + "=" + term_name(j));
  for (std::size_t r = 0; r < rels_.size(); ++r) {
    const std::size_t ar = rels_[r].arity;
    for (std::size_t code = 0; code < rel_bits_[r].size(); ++code) {
      if (!rel_bits_[r][code]) continue;
      std::vector<std::string> names(ar);
      std::size_t c = code;
      for (std::size_t k = ar; k-- > 0;) {
        names[k] = term_name(c % T);
        c /= T;
      }
      std::string atom = rels_[r].name + "(";
      for (std::size_t k = 0; k < ar; ++k) atom += (k ? "," : "") + names[k];
      out.push_back(atom + ")");
    }
  }
  return out;
}

}  // namespace scottlab
