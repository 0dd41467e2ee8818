#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scottlab/error.hpp"
#include "scottlab/ordinal.hpp"

namespace scottlab {

using GroupElement = std::vector<std::int64_t>;

// Z_{k_0} + ... + Z_{k_{r-1}}. An order of 0 stands for Z and must be
// resolved to a finite stand-in before elements are enumerated.
class AbGroup {
 public:
  AbGroup() = default;
  explicit AbGroup(std::vector<std::uint64_t> orders);

  std::size_t rank() const { return orders_.size(); }
  const std::vector<std::uint64_t>& orders() const { return orders_; }
  bool resolved() const;
  AbGroup resolved(std::uint64_t z_order) const;

  GroupElement zero() const { return GroupElement(rank(), 0); }
  GroupElement normalize(GroupElement a) const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  bool is_zero(const GroupElement& a) const;

  // Resolved groups only.
  std::uint64_t size() const;
  std::uint64_t encode(const GroupElement& a) const;
  GroupElement decode(std::uint64_t code) const;
  // Subgroup generated by gens, sorted by encode(); throws CapExceeded past cap.
  std::vector<GroupElement> span(const std::vector<GroupElement>& gens, std::size_t cap) const;

  friend bool operator==(const AbGroup&, const AbGroup&) = default;

 private:
  std::vector<std::uint64_t> orders_;
};

// Integer matrix acting on ambient coordinates: rows index the target, columns the source.
using IntMatrix = std::vector<std::vector<std::int64_t>>;

enum class RankQuantifier {
  Covers,    // rank >= k+1 iff every cover q of p has a preimage of rank >= k
  AllAbove,  // same over every q > p
};

std::string to_string(RankQuantifier q);

struct IndexSpec {
  std::string name;
  AbGroup ambient;
  std::vector<GroupElement> generators;
};

// pi_{to,from} for to < from.
struct MapSpec {
  std::string from;
  std::string to;
  IntMatrix matrix;
};

// Rank of every element of every group, in elements() order.
struct RankTable {
  std::vector<std::vector<Ordinal>> ranks;
  std::size_t levels = 0;  // refinement rounds until the fixpoint
};

// Finite directed inverse system of finite abelian groups. The order is the
// transitive closure of the declared maps; maps between non-adjacent indices
// are composites, and every two composites must agree.
class InvSystem {
 public:
  InvSystem() = default;
  InvSystem(std::vector<IndexSpec> indices, std::vector<MapSpec> maps, std::uint64_t z_order = 64,
            std::size_t cap = 1'000'000);

  std::size_t size() const { return specs_.size(); }
  const std::string& name(std::size_t p) const { return specs_.at(p).name; }
  std::size_t index(const std::string& name) const;
  const IndexSpec& spec(std::size_t p) const { return specs_.at(p); }
  const std::vector<MapSpec>& declared_maps() const { return maps_; }
  std::uint64_t z_order() const { return z_order_; }

  bool less(std::size_t p, std::size_t q) const { return less_[p * size() + q]; }
  std::vector<std::size_t> covers(std::size_t p) const;
  std::vector<std::size_t> above(std::size_t p) const;

  const AbGroup& ambient(std::size_t p) const { return specs_.at(p).ambient; }
  const std::vector<GroupElement>& elements(std::size_t p) const { return elems_.at(p); }
  bool contains(std::size_t p, const GroupElement& a) const;
  std::optional<std::size_t> local_index(std::size_t p, const GroupElement& a) const;

  // pi_pq(b) for p <= q.
  GroupElement project(std::size_t p, std::size_t q, const GroupElement& b) const;

  RankTable rank_table(RankQuantifier quant = RankQuantifier::Covers) const;
  Ordinal rank(std::size_t p, const GroupElement& a,
               RankQuantifier quant = RankQuantifier::Covers) const;

 private:
  GroupElement apply(const IntMatrix& m, std::size_t p, const GroupElement& b) const;

  std::vector<IndexSpec> specs_;
  std::vector<MapSpec> maps_;
  std::uint64_t z_order_ = 64;
  std::vector<bool> less_;
  std::map<std::pair<std::size_t, std::size_t>, IntMatrix> pi_;
  std::vector<std::vector<GroupElement>> elems_;
  std::vector<std::map<std::uint64_t, std::size_t>> lookup_;
};

// --- tree systems ------------------------------------------------------------

using NodeSet = std::uint64_t;  // bit s = node s

class RootedTree {
 public:
  RootedTree() = default;
  // parent[root] = -1; at most 64 nodes.
  explicit RootedTree(std::vector<int> parent);

  std::size_t size() const { return parent_.size(); }
  std::size_t root() const { return root_; }
  int parent(std::size_t s) const { return parent_.at(s); }
  const std::vector<int>& parents() const { return parent_; }
  const std::vector<std::size_t>& children(std::size_t s) const { return children_.at(s); }
  // Foundation rank: leaves 0, otherwise 1 + the largest child rank.
  std::size_t rank(std::size_t s) const { return rank_.at(s); }

  bool downward_closed(NodeSet u) const;
  // u together with the children of its nodes.
  NodeSet succ_plus(NodeSet u) const;
  // Nonempty downward-closed sets ordered by size, then by mask.
  std::vector<NodeSet> downward_closed_sets() const;

 private:
  std::vector<int> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> rank_;
  std::size_t root_ = 0;
};

std::string node_set_name(NodeSet u);

// An element of A_u given by its sigma-values on succ+(u) (absent = 0) and a
// finite exception map (node, position) -> value that does not affect sigma.
struct TreeElement {
  NodeSet u = 0;
  std::map<std::size_t, std::int64_t> sigma;
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> exceptions;
};

// Inverse system with coordinates labeled by blocks (tree nodes for tree systems).
struct CoordinateSystem {
  InvSystem system;
  std::vector<std::vector<std::size_t>> labels;  // per index, one label per ambient coordinate
};

class TreeSystem {
 public:
  // c_order 0 means Z, replaced by the stand-in z_order.
  TreeSystem(RootedTree tree, std::uint64_t c_order, std::uint64_t z_order = 64);

  const RootedTree& tree() const { return tree_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t declared_order() const { return c_order_; }

  // Downward closed u, sigma supported in succ+(u), values in range, sum condition.
  bool in_group(const TreeElement& f) const;
  TreeElement restrict(const TreeElement& f, NodeSet u) const;
  std::vector<TreeElement> elements(NodeSet u) const;

  GroupElement to_vector(const TreeElement& f) const;
  TreeElement from_vector(NodeSet u, const GroupElement& v) const;

  // Index per nonempty downward-closed set; coordinates are succ+(u) in node order.
  CoordinateSystem materialize(std::size_t cap = 1'000'000) const;
  std::size_t index_of(const CoordinateSystem& m, NodeSet u) const;

 private:
  RootedTree tree_;
  std::uint64_t c_order_;
  std::uint64_t modulus_;
};

TreeSystem build_tree_system(RootedTree tree, std::uint64_t c_order, std::uint64_t z_order = 64);

bool is_alpha_strong(const TreeSystem& ts, const TreeElement& f, Ordinal alpha);
// Largest alpha with f alpha-strong: infinity when sigma vanishes.
Ordinal strongness(const TreeSystem& ts, const TreeElement& f);

// g in A_{u + s} extending f and alpha-strong, assuming f is (alpha+1)-strong.
TreeElement extend_strong(const TreeSystem& ts, const TreeElement& f, std::size_t s, Ordinal alpha);

// sigma(root) = a, sigma(child) = -a, zero elsewhere, on u = {root}.
TreeElement finishing_element(const TreeSystem& ts, std::size_t child, std::int64_t a);

struct TreeRankReport {
  Ordinal strongness;
  Ordinal rank;
};

TreeRankReport tree_rank_correspondence(const TreeSystem& ts, const CoordinateSystem& m,
                                        const RankTable& ranks, const TreeElement& f);

// Blocks K_n given by the orders of their cyclic factors. Each coordinate of
// B labeled n must have order lcm(K_n); B's declared maps must be label
// restrictions. Coordinates of the result are labeled by factor position
// (block offset + index within the block).
CoordinateSystem cyclic_composition(std::span<const std::vector<std::uint64_t>> blocks,
                                    const CoordinateSystem& b, std::size_t cap = 1'000'000);
// The element of the composed group over index p corresponding to b in B_p.
GroupElement compose_element(std::span<const std::vector<std::uint64_t>> blocks,
                             const CoordinateSystem& b, std::size_t p, const GroupElement& x);

}  // namespace scottlab
