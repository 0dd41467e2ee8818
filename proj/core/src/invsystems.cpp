#include "scottlab/invsystems.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_set>

namespace scottlab {

namespace {

std::int64_t mod(std::int64_t v, std::uint64_t k) {
  if (k == 0) return v;
  std::int64_t m = static_cast<std::int64_t>(k);
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}

}  // namespace

// --- AbGroup -----------------------------------------------------------------

AbGroup::AbGroup(std::vector<std::uint64_t> orders) : orders_(std::move(orders)) {}

bool AbGroup::resolved() const {
  return std::all_of(orders_.begin(), orders_.end(), [](auto k) { return k != 0; });
}

AbGroup AbGroup::resolved(std::uint64_t z_order) const {
  if (z_order < 2) throw InputError("the stand-in order for Z must be at least 2");
  AbGroup g = *this;
  for (auto& k : g.orders_)
    if (k == 0) k = z_order;
  return g;
}

GroupElement AbGroup::normalize(GroupElement a) const {
  if (a.size() != rank())
    throw InputError("group element has " + std::to_string(a.size()) + " entries, expected " +
                     std::to_string(rank()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = mod(a[i], orders_[i]);
  return a;
}

GroupElement AbGroup::add(const GroupElement& a, const GroupElement& b) const {
  GroupElement c(rank());
  for (std::size_t i = 0; i < rank(); ++i) c[i] = a.at(i) + b.at(i);
  return normalize(std::move(c));
}

GroupElement AbGroup::neg(const GroupElement& a) const {
  GroupElement c(rank());
  for (std::size_t i = 0; i < rank(); ++i) c[i] = -a.at(i);
  return normalize(std::move(c));
}

bool AbGroup::is_zero(const GroupElement& a) const {
  auto n = normalize(a);
  return std::all_of(n.begin(), n.end(), [](auto v) { return v == 0; });
}

std::uint64_t AbGroup::size() const {
  if (!resolved()) throw InputError("group has an unresolved Z factor");
  std::uint64_t s = 1;
  for (auto k : orders_) {
    if (s > (std::uint64_t{1} << 62) / k) throw CapExceeded("group too large");
    s *= k;
  }
  return s;
}

std::uint64_t AbGroup::encode(const GroupElement& a) const {
  auto n = normalize(a);
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < rank(); ++i) c = c * orders_[i] + static_cast<std::uint64_t>(n[i]);
  return c;
}

GroupElement AbGroup::decode(std::uint64_t code) const {
  GroupElement a(rank());
  for (std::size_t i = rank(); i-- > 0;) {
    a[i] = static_cast<std::int64_t>(code % orders_[i]);
    code /= orders_[i];
  }
  return a;
}

std::vector<GroupElement> AbGroup::span(const std::vector<GroupElement>& gens,
                                        std::size_t cap) const {
  if (!resolved()) throw InputError("group has an unresolved Z factor");
  std::vector<GroupElement> g;
  for (const auto& x : gens) g.push_back(normalize(x));
  std::unordered_set<std::uint64_t> seen{encode(zero())};
  std::deque<GroupElement> queue{zero()};
  while (!queue.empty()) {
    GroupElement x = std::move(queue.front());
    queue.pop_front();
    for (const auto& y : g) {
      GroupElement z = add(x, y);
      if (seen.insert(encode(z)).second) {
        if (seen.size() > cap) throw CapExceeded("subgroup exceeds the element cap");
        queue.push_back(std::move(z));
      }
    }
  }
  std::vector<std::uint64_t> codes(seen.begin(), seen.end());
  std::sort(codes.begin(), codes.end());
  std::vector<GroupElement> out;
  out.reserve(codes.size());
  for (auto c : codes) out.push_back(decode(c));
  return out;
}

std::string to_string(RankQuantifier q) {
  return q == RankQuantifier::Covers ? "covers" : "all-above";
}

// --- InvSystem ---------------------------------------------------------------

InvSystem::InvSystem(std::vector<IndexSpec> indices, std::vector<MapSpec> maps,
                     std::uint64_t z_order, std::size_t cap)
    : specs_(std::move(indices)), maps_(std::move(maps)), z_order_(z_order) {
  const std::size_t n = specs_.size();
  if (n == 0) throw InputError("inverse system needs at least one index");
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < p; ++q)
      if (specs_[p].name == specs_[q].name)
        throw InputError("duplicate index name '" + specs_[p].name + "'");
    specs_[p].ambient = specs_[p].ambient.resolved(z_order_);
    for (auto& g : specs_[p].generators) g = specs_[p].ambient.normalize(g);
  }

  less_.assign(n * n, false);
  std::map<std::pair<std::size_t, std::size_t>, IntMatrix> declared;
  for (auto& m : maps_) {
    const std::size_t q = index(m.from), p = index(m.to);
    if (p == q) throw InputError("map from an index to itself");
    const auto& src = specs_[q].ambient.orders();
    const auto& dst = specs_[p].ambient.orders();
    if (m.matrix.size() != dst.size())
      throw InputError("map " + m.from + " -> " + m.to + " has the wrong number of rows");
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (m.matrix[i].size() != src.size())
        throw InputError("map " + m.from + " -> " + m.to + " has the wrong number of columns");
      for (std::size_t j = 0; j < src.size(); ++j) {
        m.matrix[i][j] = mod(m.matrix[i][j], dst[i]);
        const std::uint64_t g = std::gcd(dst[i], static_cast<std::uint64_t>(m.matrix[i][j]));
        if (src[j] % (dst[i] / g) != 0)
          throw InputError("map " + m.from + " -> " + m.to + " is not a well-defined homomorphism");
      }
    }
    if (!declared.emplace(std::make_pair(p, q), m.matrix).second)
      throw InputError("map " + m.from + " -> " + m.to + " declared twice");
    less_[p * n + q] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (less_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (less_[k * n + j]) less_[i * n + j] = true;
  for (std::size_t p = 0; p < n; ++p)
    if (less_[p * n + p]) throw InputError("index order has a cycle through '" + specs_[p].name + "'");

  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      bool bounded = false;
      for (std::size_t r = 0; r < n && !bounded; ++r)
        bounded = (r == p || less(p, r)) && (r == q || less(q, r));
      if (!bounded)
        throw InputError("index poset is not directed: '" + specs_[p].name + "' and '" +
                         specs_[q].name + "' have no common upper bound");
    }

  elems_.resize(n);
  lookup_.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    elems_[p] = specs_[p].ambient.span(specs_[p].generators, cap);
    for (std::size_t i = 0; i < elems_[p].size(); ++i)
      lookup_[p].emplace(specs_[p].ambient.encode(elems_[p][i]), i);
  }

  // Composite maps along declared edges, then path independence on generators.
  auto multiply = [&](const IntMatrix& a, const IntMatrix& b, std::size_t p) {
    const auto& dst = specs_[p].ambient.orders();
    const std::size_t cols = b.empty() ? 0 : b[0].size();
    IntMatrix c(a.size(), std::vector<std::int64_t>(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        std::int64_t acc = 0;
        for (std::size_t k = 0; k < b.size(); ++k)
          acc = mod(acc + mod(a[i][k] * b[k][j], dst[i]), dst[i]);
        c[i][j] = acc;
      }
    return c;
  };
  std::function<const IntMatrix&(std::size_t, std::size_t)> pi = [&](std::size_t p,
                                                                     std::size_t q) -> const IntMatrix& {
    auto key = std::make_pair(p, q);
    if (auto it = pi_.find(key); it != pi_.end()) return it->second;
    if (auto it = declared.find(key); it != declared.end()) return pi_.emplace(key, it->second).first->second;
    for (const auto& [edge, mat] : declared) {
      if (edge.second != q) continue;
      const std::size_t r = edge.first;
      if (less(p, r)) {
        IntMatrix c = multiply(pi(p, r), mat, p);
        return pi_.emplace(key, std::move(c)).first->second;
      }
    }
    throw InvariantViolation("no path between comparable indices");
  };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (less(p, q)) pi(p, q);

  for (const auto& [edge, mat] : declared) {
    const std::size_t r = edge.first, q = edge.second;
    for (const auto& x : specs_[q].generators) {
      GroupElement y = apply(mat, r, x);
      if (!contains(r, y))
        throw InputError("map " + specs_[q].name + " -> " + specs_[r].name +
                         " does not send the group into the group");
      for (std::size_t p = 0; p < n; ++p) {
        if (!less(p, r) && p != r) continue;
        GroupElement direct = apply(pi_.at({p, q}), p, x);
        GroupElement via = p == r ? y : apply(pi_.at({p, r}), p, y);
        if (direct != via)
          throw InputError("maps do not commute on the path " + specs_[q].name + " -> " +
                           specs_[r].name + " -> " + specs_[p].name);
      }
    }
  }
}

std::size_t InvSystem::index(const std::string& name) const {
  for (std::size_t p = 0; p < specs_.size(); ++p)
    if (specs_[p].name == name) return p;
  throw InputError("unknown index '" + name + "'");
}

std::vector<std::size_t> InvSystem::covers(std::size_t p) const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < size(); ++q) {
    if (!less(p, q)) continue;
    bool minimal = true;
    for (std::size_t r = 0; r < size() && minimal; ++r) minimal = !(less(p, r) && less(r, q));
    if (minimal) out.push_back(q);
  }
  return out;
}

std::vector<std::size_t> InvSystem::above(std::size_t p) const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < size(); ++q)
    if (less(p, q)) out.push_back(q);
  return out;
}

std::optional<std::size_t> InvSystem::local_index(std::size_t p, const GroupElement& a) const {
  const auto& g = specs_.at(p).ambient;
  if (a.size() != g.rank()) return std::nullopt;
  auto it = lookup_[p].find(g.encode(a));
  if (it == lookup_[p].end()) return std::nullopt;
  return it->second;
}

bool InvSystem::contains(std::size_t p, const GroupElement& a) const {
  return local_index(p, a).has_value();
}

GroupElement InvSystem::apply(const IntMatrix& m, std::size_t p, const GroupElement& b) const {
  const auto& dst = specs_[p].ambient.orders();
  GroupElement out(dst.size(), 0);
  for (std::size_t i = 0; i < dst.size(); ++i) {
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < b.size(); ++j) acc = mod(acc + mod(m[i][j] * b[j], dst[i]), dst[i]);
    out[i] = acc;
  }
  return out;
}

GroupElement InvSystem::project(std::size_t p, std::size_t q, const GroupElement& b) const {
  GroupElement x = specs_.at(q).ambient.normalize(b);
  if (p == q) return x;
  if (!less(p, q)) throw InputError("projection between incomparable indices");
  return apply(pi_.at({p, q}), p, x);
}

RankTable InvSystem::rank_table(RankQuantifier quant) const {
  const std::size_t n = size();
  std::vector<std::vector<std::size_t>> targets(n);
  // img[p][t][b] = local index in A_p of the image of b in A_{targets[p][t]}
  std::vector<std::vector<std::vector<std::size_t>>> img(n);
  for (std::size_t p = 0; p < n; ++p) {
    targets[p] = quant == RankQuantifier::Covers ? covers(p) : above(p);
    for (std::size_t q : targets[p]) {
      std::vector<std::size_t> v;
      v.reserve(elems_[q].size());
      for (const auto& b : elems_[q]) v.push_back(*local_index(p, project(p, q, b)));
      img[p].push_back(std::move(v));
    }
  }

  RankTable out;
  out.ranks.resize(n);
  std::vector<std::vector<char>> alive(n);
  for (std::size_t p = 0; p < n; ++p) {
    alive[p].assign(elems_[p].size(), 1);
    out.ranks[p].assign(elems_[p].size(), Ordinal::infinity());
  }
  for (std::size_t k = 0;; ++k) {
    auto next = alive;
    bool changed = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t t = 0; t < targets[p].size(); ++t) {
        const std::size_t q = targets[p][t];
        std::vector<char> hit(elems_[p].size(), 0);
        for (std::size_t b = 0; b < elems_[q].size(); ++b)
          if (alive[q][b]) hit[img[p][t][b]] = 1;
        for (std::size_t a = 0; a < elems_[p].size(); ++a)
          if (next[p][a] && !hit[a]) {
            next[p][a] = 0;
            out.ranks[p][a] = Ordinal::fin(k);
            changed = true;
          }
      }
    }
    if (!changed) {
      out.levels = k;
      break;
    }
    alive.swap(next);
  }
  return out;
}

Ordinal InvSystem::rank(std::size_t p, const GroupElement& a, RankQuantifier quant) const {
  auto i = local_index(p, a);
  if (!i) throw InputError("element is not in the group at index '" + name(p) + "'");
  return rank_table(quant).ranks[p][*i];
}

// --- trees -------------------------------------------------------------------

RootedTree::RootedTree(std::vector<int> parent) : parent_(std::move(parent)) {
  const std::size_t n = parent_.size();
  if (n == 0) throw InputError("tree must have at least one node");
  if (n > 64) throw InputError("trees are limited to 64 nodes");
  std::size_t roots = 0;
  children_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (parent_[s] == -1) {
      ++roots;
      root_ = s;
    } else if (parent_[s] < 0 || static_cast<std::size_t>(parent_[s]) >= n) {
      throw InputError("parent of node " + std::to_string(s) + " is out of range");
    } else {
      children_[parent_[s]].push_back(s);
    }
  }
  if (roots != 1) throw InputError("tree must have exactly one root");
  std::vector<std::size_t> depth(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t steps = 0;
    for (int x = static_cast<int>(s); parent_[x] != -1; x = parent_[x])
      if (++steps > n) throw InputError("parent array has a cycle");
    depth[s] = steps;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return depth[a] > depth[b]; });
  rank_.assign(n, 0);
  for (auto s : order)
    for (auto c : children_[s]) rank_[s] = std::max(rank_[s], rank_[c] + 1);
}

bool RootedTree::downward_closed(NodeSet u) const {
  for (std::size_t s = 0; s < size(); ++s) {
    if (!(u >> s & 1)) continue;
    if (parent_[s] != -1 && !(u >> parent_[s] & 1)) return false;
  }
  return true;
}

NodeSet RootedTree::succ_plus(NodeSet u) const {
  NodeSet out = u;
  for (std::size_t s = 0; s < size(); ++s)
    if (u >> s & 1)
      for (auto c : children_[s]) out |= NodeSet{1} << c;
  return out;
}

std::vector<NodeSet> RootedTree::downward_closed_sets() const {
  std::set<NodeSet> seen{NodeSet{1} << root_};
  std::deque<NodeSet> queue{NodeSet{1} << root_};
  while (!queue.empty()) {
    NodeSet u = queue.front();
    queue.pop_front();
    NodeSet frontier = succ_plus(u) & ~u;
    for (std::size_t s = 0; s < size(); ++s)
      if (frontier >> s & 1) {
        NodeSet v = u | (NodeSet{1} << s);
        if (seen.insert(v).second) queue.push_back(v);
      }
  }
  std::vector<NodeSet> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](NodeSet a, NodeSet b) {
    int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

std::string node_set_name(NodeSet u) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < 64; ++i)
    if (u >> i & 1) {
      s += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
  return s + "}";
}

namespace {

std::vector<std::size_t> nodes_of(NodeSet u) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < 64; ++i)
    if (u >> i & 1) out.push_back(i);
  return out;
}

}  // namespace

TreeSystem::TreeSystem(RootedTree tree, std::uint64_t c_order, std::uint64_t z_order)
    : tree_(std::move(tree)), c_order_(c_order), modulus_(c_order ? c_order : z_order) {
  if (c_order == 1) throw InputError("value group must be nonzero");
  if (modulus_ < 2) throw InputError("the stand-in order for Z must be at least 2");
}

bool TreeSystem::in_group(const TreeElement& f) const {
  if (f.u == 0 || !tree_.downward_closed(f.u)) return false;
  if (tree_.size() < 64 && (f.u >> tree_.size()) != 0) return false;
  const NodeSet sp = tree_.succ_plus(f.u);
  for (const auto& [s, v] : f.sigma) {
    if (s >= tree_.size() || !(sp >> s & 1)) return false;
    if (v < 0 || static_cast<std::uint64_t>(v) >= modulus_) return false;
  }
  for (const auto& [key, v] : f.exceptions)
    if (key.first >= tree_.size() || !(sp >> key.first & 1)) return false;
  auto sig = [&](std::size_t s) {
    auto it = f.sigma.find(s);
    return it == f.sigma.end() ? 0 : it->second;
  };
  for (auto t : nodes_of(f.u)) {
    std::int64_t acc = sig(t);
    for (auto c : tree_.children(t)) acc += sig(c);
    if (mod(acc, modulus_) != 0) return false;
  }
  return true;
}

TreeElement TreeSystem::restrict(const TreeElement& f, NodeSet u) const {
  if (u == 0 || (u & ~f.u) != 0 || !tree_.downward_closed(u))
    throw InputError("restriction target must be a nonempty downward-closed subset");
  const NodeSet sp = tree_.succ_plus(u);
  TreeElement g;
  g.u = u;
  for (const auto& [s, v] : f.sigma)
    if (sp >> s & 1) g.sigma.emplace(s, v);
  for (const auto& [key, v] : f.exceptions)
    if (sp >> key.first & 1) g.exceptions.emplace(key, v);
  return g;
}

GroupElement TreeSystem::to_vector(const TreeElement& f) const {
  GroupElement v;
  for (auto s : nodes_of(tree_.succ_plus(f.u))) {
    auto it = f.sigma.find(s);
    v.push_back(it == f.sigma.end() ? 0 : mod(it->second, modulus_));
  }
  return v;
}

TreeElement TreeSystem::from_vector(NodeSet u, const GroupElement& v) const {
  auto nodes = nodes_of(tree_.succ_plus(u));
  if (v.size() != nodes.size()) throw InputError("vector length does not match succ+(u)");
  TreeElement f;
  f.u = u;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::int64_t x = mod(v[i], modulus_);
    if (x != 0) f.sigma.emplace(nodes[i], x);
  }
  return f;
}

namespace {

// Completes sigma on u from its values on the frontier succ+(u) \ u.
void fill_interior(const RootedTree& tree, NodeSet u, std::uint64_t modulus,
                   std::map<std::size_t, std::int64_t>& sigma) {
  auto inner = nodes_of(u);
  std::sort(inner.begin(), inner.end(), [&](auto a, auto b) { return tree.rank(a) < tree.rank(b); });
  for (auto t : inner) {
    std::int64_t acc = 0;
    for (auto c : tree.children(t)) {
      auto it = sigma.find(c);
      if (it != sigma.end()) acc += it->second;
    }
    sigma.erase(t);
    std::int64_t v = mod(-acc, modulus);
    if (v != 0) sigma.emplace(t, v);
  }
}

}  // namespace

std::vector<TreeElement> TreeSystem::elements(NodeSet u) const {
  if (u == 0 || !tree_.downward_closed(u)) throw InputError("u must be nonempty and downward closed");
  auto frontier = nodes_of(tree_.succ_plus(u) & ~u);
  std::vector<TreeElement> out;
  std::vector<std::uint64_t> digits(frontier.size(), 0);
  while (true) {
    TreeElement f;
    f.u = u;
    for (std::size_t i = 0; i < frontier.size(); ++i)
      if (digits[i]) f.sigma.emplace(frontier[i], static_cast<std::int64_t>(digits[i]));
    fill_interior(tree_, u, modulus_, f.sigma);
    out.push_back(std::move(f));
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == modulus_) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return out;
}

CoordinateSystem TreeSystem::materialize(std::size_t cap) const {
  auto sets = tree_.downward_closed_sets();
  std::vector<IndexSpec> specs;
  std::vector<MapSpec> maps;
  CoordinateSystem out;
  for (NodeSet u : sets) {
    auto coords = nodes_of(tree_.succ_plus(u));
    IndexSpec spec;
    spec.name = node_set_name(u);
    spec.ambient = AbGroup(std::vector<std::uint64_t>(coords.size(), modulus_));
    for (auto s : nodes_of(tree_.succ_plus(u) & ~u)) {
      TreeElement f;
      f.u = u;
      f.sigma.emplace(s, 1);
      fill_interior(tree_, u, modulus_, f.sigma);
      spec.generators.push_back(to_vector(f));
    }
    specs.push_back(std::move(spec));
    out.labels.push_back(coords);

    for (auto s : nodes_of(tree_.succ_plus(u) & ~u)) {
      NodeSet v = u | (NodeSet{1} << s);
      auto vcoords = nodes_of(tree_.succ_plus(v));
      IntMatrix m(coords.size(), std::vector<std::int64_t>(vcoords.size(), 0));
      for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t j = 0; j < vcoords.size(); ++j)
          if (coords[i] == vcoords[j]) m[i][j] = 1;
      maps.push_back({node_set_name(v), node_set_name(u), std::move(m)});
    }
  }
  out.system = InvSystem(std::move(specs), std::move(maps), modulus_, cap);
  return out;
}

std::size_t TreeSystem::index_of(const CoordinateSystem& m, NodeSet u) const {
  return m.system.index(node_set_name(u));
}

TreeSystem build_tree_system(RootedTree tree, std::uint64_t c_order, std::uint64_t z_order) {
  return TreeSystem(std::move(tree), c_order, z_order);
}

bool is_alpha_strong(const TreeSystem& ts, const TreeElement& f, Ordinal alpha) {
  for (const auto& [s, v] : f.sigma)
    if (mod(v, ts.modulus()) != 0 && Ordinal::fin(ts.tree().rank(s)) < alpha) return false;
  return true;
}

Ordinal strongness(const TreeSystem& ts, const TreeElement& f) {
  std::optional<std::size_t> best;
  for (const auto& [s, v] : f.sigma)
    if (mod(v, ts.modulus()) != 0)
      best = std::min(best.value_or(ts.tree().rank(s)), ts.tree().rank(s));
  return best ? Ordinal::fin(*best) : Ordinal::infinity();
}

TreeElement extend_strong(const TreeSystem& ts, const TreeElement& f, std::size_t s, Ordinal alpha) {
  const RootedTree& tree = ts.tree();
  if (!ts.in_group(f)) throw InputError("f is not an element of A_u");
  if (s >= tree.size() || (f.u >> s & 1) || !tree.downward_closed(f.u | (NodeSet{1} << s)))
    throw InputError("u + {" + std::to_string(s) + "} is not a one-node extension of u");
  auto it = f.sigma.find(s);
  const std::int64_t v = it == f.sigma.end() ? 0 : mod(it->second, ts.modulus());
  if (v != 0 && tree.children(s).empty())
    throw InputError("node " + std::to_string(s) + " is a leaf with nonzero sigma");
  if (!is_alpha_strong(ts, f, alpha.successor()))
    throw InputError("f is not " + alpha.successor().to_string() + "-strong");

  TreeElement g = f;
  g.u = f.u | (NodeSet{1} << s);
  if (v != 0) {
    std::optional<std::size_t> target;
    for (auto c : tree.children(s))
      if (Ordinal::fin(tree.rank(c)) >= alpha) {
        target = c;
        break;
      }
    if (!target) throw InputError("no child of node " + std::to_string(s) + " has rank >= " + alpha.to_string());
    g.sigma[*target] = mod(-v, ts.modulus());
  }
  if (!ts.in_group(g) || !is_alpha_strong(ts, g, alpha))
    throw InvariantViolation("strong extension failed its own check");
  return g;
}

TreeElement finishing_element(const TreeSystem& ts, std::size_t child, std::int64_t a) {
  const RootedTree& tree = ts.tree();
  if (child >= tree.size() || tree.parent(child) != static_cast<int>(tree.root()))
    throw InputError("node " + std::to_string(child) + " is not a child of the root");
  TreeElement f;
  f.u = NodeSet{1} << tree.root();
  std::int64_t x = mod(a, ts.modulus());
  if (x != 0) {
    f.sigma.emplace(tree.root(), x);
    f.sigma.emplace(child, mod(-x, ts.modulus()));
  }
  return f;
}

TreeRankReport tree_rank_correspondence(const TreeSystem& ts, const CoordinateSystem& m,
                                        const RankTable& ranks, const TreeElement& f) {
  if (!ts.in_group(f)) throw InputError("f is not an element of A_u");
  std::size_t p = ts.index_of(m, f.u);
  auto local = m.system.local_index(p, ts.to_vector(f));
  if (!local) throw InvariantViolation("tree element missing from the materialized group");
  return {strongness(ts, f), ranks.ranks[p][*local]};
}

// --- cyclic composition -------------------------------------------------------

namespace {

std::vector<std::uint64_t> block_lcms(std::span<const std::vector<std::uint64_t>> blocks,
                                      std::uint64_t z_order) {
  std::vector<std::uint64_t> out;
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    if (blocks[n].empty()) throw InputError("block " + std::to_string(n) + " is empty");
    std::uint64_t l = 1;
    for (auto k : blocks[n]) {
      std::uint64_t kk = k ? k : z_order;
      l = std::lcm(l, kk);
    }
    out.push_back(l);
  }
  return out;
}

}  // namespace

GroupElement compose_element(std::span<const std::vector<std::uint64_t>> blocks,
                             const CoordinateSystem& b, std::size_t p, const GroupElement& x) {
  const auto& labels = b.labels.at(p);
  if (x.size() != labels.size()) throw InputError("element length does not match the index");
  GroupElement out;
  for (std::size_t j = 0; j < labels.size(); ++j)
    for (auto k : blocks[labels[j]]) out.push_back(mod(x[j], k ? k : b.system.z_order()));
  return out;
}

CoordinateSystem cyclic_composition(std::span<const std::vector<std::uint64_t>> blocks,
                                    const CoordinateSystem& b, std::size_t cap) {
  const InvSystem& sys = b.system;
  const std::uint64_t z = sys.z_order();
  auto lcms = block_lcms(blocks, z);
  std::vector<std::size_t> offset(blocks.size() + 1, 0);
  for (std::size_t n = 0; n < blocks.size(); ++n) offset[n + 1] = offset[n] + blocks[n].size();
  if (b.labels.size() != sys.size()) throw InputError("labels missing for some index");

  CoordinateSystem out;
  std::vector<IndexSpec> specs;
  for (std::size_t p = 0; p < sys.size(); ++p) {
    const auto& labels = b.labels[p];
    const auto& orders = sys.ambient(p).orders();
    if (labels.size() != orders.size()) throw InputError("labels do not match the ambient group");
    IndexSpec spec;
    spec.name = sys.name(p);
    std::vector<std::uint64_t> amb;
    std::vector<std::size_t> lab;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      const std::size_t n = labels[j];
      if (n >= blocks.size()) throw InputError("coordinate labeled with an unknown block");
      if (orders[j] != lcms[n])
        throw InputError("block " + std::to_string(n) + " generates a cyclic group of order " +
                         std::to_string(lcms[n]) + ", but the coordinate has order " +
                         std::to_string(orders[j]));
      for (std::size_t i = 0; i < blocks[n].size(); ++i) {
        amb.push_back(blocks[n][i] ? blocks[n][i] : z);
        lab.push_back(offset[n] + i);
      }
    }
    spec.ambient = AbGroup(amb);
    for (const auto& g : sys.spec(p).generators) spec.generators.push_back(compose_element(blocks, b, p, g));
    specs.push_back(std::move(spec));
    out.labels.push_back(std::move(lab));
  }

  std::vector<MapSpec> maps;
  for (const auto& m : sys.declared_maps()) {
    const std::size_t q = sys.index(m.from), p = sys.index(m.to);
    const auto& lp = b.labels[p];
    const auto& lq = b.labels[q];
    for (std::size_t i = 0; i < lp.size(); ++i)
      for (std::size_t j = 0; j < lq.size(); ++j)
        if (m.matrix[i][j] != (lp[i] == lq[j] ? 1 : 0))
          throw InputError("map " + m.from + " -> " + m.to + " is not a coordinate restriction");
    const auto& op = out.labels[p];
    const auto& oq = out.labels[q];
    IntMatrix mat(op.size(), std::vector<std::int64_t>(oq.size(), 0));
    for (std::size_t i = 0; i < op.size(); ++i)
      for (std::size_t j = 0; j < oq.size(); ++j)
        if (op[i] == oq[j]) mat[i][j] = 1;
    maps.push_back({m.from, m.to, std::move(mat)});
  }
  out.system = InvSystem(std::move(specs), std::move(maps), z, cap);
  return out;
}

}  // namespace scottlab
