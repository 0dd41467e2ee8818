#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scottlab/error.hpp"
#include "scottlab/structure.hpp"

namespace scottlab {

enum class TailKind { Antichain, Chain, Ladder };
enum class LadderKind { DisjointPairs, Increasing };

// An infinite schematic block. Every element of the block lies above each
// finite element listed in `above`.
//   Antichain: t.0, t.1, ... pairwise incomparable
//   Chain:     t.0 < t.1 < ...
//   Ladder:    t.p0, t.q0, t.p1, t.q1, ... with p_n < q_n (DisjointPairs)
//              or p_n < q_m for n <= m (Increasing)
struct TailBlock {
  TailKind kind = TailKind::Antichain;
  LadderKind ladder = LadderKind::DisjointPairs;
  int delta = 2;
  std::vector<std::string> above;
};

struct PosetPresentation {
  std::vector<std::string> elems;
  std::vector<std::pair<std::string, std::string>> le;  // (a, b) means a <= b
  std::map<std::string, int> delta;
  std::vector<TailBlock> tails;
};

std::string to_string(TailKind k);
std::string to_string(LadderKind k);

struct Diagnostic {
  std::string element;
  std::string message;
};

// Empty result means the presentation is valid.
std::vector<Diagnostic> validate(const PosetPresentation& p);

// Finite poset with delta; the order is stored reflexively and transitively closed.
class FinitePoset {
 public:
  FinitePoset() = default;
  // Throws InputError on unknown names, a cycle, or delta < 2.
  FinitePoset(std::vector<std::string> names,
              const std::vector<std::pair<std::string, std::string>>& le, std::vector<int> delta);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t index(const std::string& name) const;
  int delta(std::size_t i) const { return delta_.at(i); }
  const std::vector<int>& deltas() const { return delta_; }

  bool leq(std::size_t a, std::size_t b) const { return leq_[a * size() + b]; }
  bool less(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }
  bool maximal(std::size_t a) const;
  std::vector<std::size_t> down_set(std::size_t a) const;
  bool downward_closed(std::span<const std::size_t> subset) const;

  // Induced subposet on `subset`, in the given order.
  FinitePoset restrict(std::span<const std::size_t> subset) const;
  // Comparable pairs a < b of the closed order.
  std::vector<std::pair<std::string, std::string>> strict_pairs() const;
  // Same poset with a different delta.
  FinitePoset with_delta(std::vector<int> delta) const;

 private:
  std::vector<std::string> names_;
  std::vector<bool> leq_;
  std::vector<int> delta_;
};

// Finite part plus `per_tail` elements from every block (per ladder side).
// Tail element names: t<b>.<i>, or t<b>.p<i> / t<b>.q<i> for ladders.
FinitePoset materialize(const PosetPresentation& p, std::size_t per_tail);
FinitePoset finite_part(const PosetPresentation& p);

struct NbcResult {
  bool nbc = false;
  std::vector<std::string> witness_q;      // when nbc: finite downward-closed Q
  std::optional<std::size_t> block;        // when not: the offending tail block
  std::string reason;
};

NbcResult is_nearly_binary_crosscutting(const PosetPresentation& p);

struct BenchmarkWitness {
  int index = 0;                        // 0..3
  std::size_t block = 0;
  std::vector<std::string> selection;   // schematic element names of the embedded copy
  int delta_prime = 2;                  // lowered delta on the selection
  std::string description;
};

// Least-index benchmark embedded in a tail block; empty exactly for nbc presentations.
std::optional<BenchmarkWitness> benchmark_witness(const PosetPresentation& p);

// The four benchmark presentations.
PosetPresentation benchmark_presentation(int i);

// Universe prod_{q in Q} delta(q) in mixed radix, the first element of Q most
// significant; E_<q>(f, g) iff f(q') = g(q') for all q' <= q.
struct TruncatedCanonicalModel {
  FinitePoset q;
  FiniteStructure structure;

  Tuple coords(Element e) const;
  Element element(std::span<const Element> coords) const;
};

TruncatedCanonicalModel build_truncated_model(const FinitePoset& p,
                                              std::span<const std::string> selection,
                                              const Caps& caps = {});
TruncatedCanonicalModel build_truncated_model(const PosetPresentation& p,
                                              std::span<const std::string> selection,
                                              const Caps& caps = {});

struct AxiomReport {
  bool ok = true;
  std::string axiom;   // equivalence | refinement | splitting | amalgamation | signature
  std::string detail;
  std::vector<Element> witnesses;
};

// Checks the axioms for the elements of q, reading relations E_<name>.
AxiomReport check_tp_axioms(const FiniteStructure& m, const FinitePoset& q);

// Least element of every E_W class, W = witness; sorted.
Tuple covering_base(const TruncatedCanonicalModel& model, std::span<const std::string> witness);

}  // namespace scottlab
