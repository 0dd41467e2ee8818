#include "scottlab/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace scottlab::io {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

template <class T>
T get(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw InputError(where + ": unexpected value " + j.dump());
  }
}

FiniteStructure structure_from(const json& j, const std::string& where) {
  const auto size = get<std::size_t>(field(j, "size", where), where + ".size");
  Signature sig;
  std::vector<std::pair<std::size_t, std::vector<Tuple>>> rels;
  if (j.contains("relations"))
    for (const auto& r : j.at("relations")) {
      const auto name = get<std::string>(field(r, "name", where), where + ".relations.name");
      const auto arity = get<std::size_t>(field(r, "arity", where), where + ".relations.arity");
      std::vector<Tuple> tuples;
      if (r.contains("tuples")) tuples = get<std::vector<Tuple>>(r.at("tuples"), where + "." + name);
      rels.emplace_back(sig.add_relation(name, arity), std::move(tuples));
    }
  std::vector<std::pair<std::size_t, Element>> consts;
  if (j.contains("constants"))
    for (const auto& [name, e] : j.at("constants").items())
      consts.emplace_back(sig.add_constant(name), get<Element>(e, where + ".constants." + name));
  FiniteStructure m(sig, size);
  for (const auto& [r, tuples] : rels)
    for (const auto& t : tuples) {
      if (t.size() != sig.relations()[r].arity)
        throw InputError(where + ": tuple of wrong arity in " + sig.relations()[r].name);
      for (Element x : t)
        if (x >= size) throw InputError(where + ": element " + std::to_string(x) + " out of range");
      m.add(r, t);
    }
  for (const auto& [c, e] : consts) {
    if (e >= size) throw InputError(where + ": constant out of range");
    m.set_constant(c, e);
  }
  return m;
}

ordered_json structure_to(const FiniteStructure& m) {
  ordered_json j;
  j["size"] = m.size();
  j["relations"] = ordered_json::array();
  for (std::size_t r = 0; r < m.signature().relation_count(); ++r) {
    const auto& s = m.signature().relations()[r];
    ordered_json rj;
    rj["name"] = s.name;
    rj["arity"] = s.arity;
    rj["tuples"] = m.tuples(r);
    j["relations"].push_back(rj);
  }
  ordered_json cj = ordered_json::object();
  for (std::size_t c = 0; c < m.signature().constant_count(); ++c)
    if (m.constant_assigned(c)) cj[m.signature().constants()[c]] = m.constant(c);
  j["constants"] = cj;
  return j;
}

ProductSpec product_from(const json& j) {
  ProductSpec p;
  if (j.contains("prefix"))
    for (std::size_t i = 0; i < j.at("prefix").size(); ++i)
      p.prefix.push_back(structure_from(j.at("prefix")[i], "prefix[" + std::to_string(i) + "]"));
  const auto& tail = field(j, "tail", "product");
  for (std::size_t i = 0; i < tail.size(); ++i)
    p.tail.push_back(structure_from(tail[i], "tail[" + std::to_string(i) + "]"));
  validate(p);
  return p;
}

struct FinitePart {
  std::vector<std::string> elems;
  std::vector<std::pair<std::string, std::string>> le;
  std::map<std::string, int> delta;
};

FinitePart finite_from(const json& j, const std::string& where) {
  FinitePart f;
  if (j.contains("elems")) f.elems = get<std::vector<std::string>>(j.at("elems"), where + ".elems");
  if (j.contains("le"))
    for (const auto& e : j.at("le")) {
      auto pair = get<std::vector<std::string>>(e, where + ".le");
      if (pair.size() != 2) throw InputError(where + ".le: entries are [a, b] pairs");
      f.le.emplace_back(pair[0], pair[1]);
    }
  if (j.contains("delta")) f.delta = get<std::map<std::string, int>>(j.at("delta"), where + ".delta");
  return f;
}

FinitePoset poset_from(const json& j, const std::string& where) {
  FinitePart f = finite_from(j, where);
  std::vector<int> delta;
  for (const auto& e : f.elems) {
    auto it = f.delta.find(e);
    if (it == f.delta.end()) throw InputError(where + ": no delta for " + e);
    delta.push_back(it->second);
  }
  return FinitePoset(f.elems, f.le, delta);
}

ordered_json poset_to(const FinitePoset& p) {
  ordered_json j;
  j["elems"] = p.names();
  j["le"] = ordered_json::array();
  for (const auto& [a, b] : p.strict_pairs()) j["le"].push_back({a, b});
  ordered_json d = ordered_json::object();
  for (std::size_t i = 0; i < p.size(); ++i) d[p.name(i)] = p.delta(i);
  j["delta"] = d;
  return j;
}

Coset coset_from(const json& j, std::size_t m, const std::string& where) {
  auto bits = [&](const json& v) {
    auto s = get<std::string>(v, where);
    if (s.size() != m) throw InputError(where + ": bit string '" + s + "' is not of length " + std::to_string(m));
    return bits_from_string(s);
  };
  std::vector<Word> basis;
  if (j.contains("basis"))
    for (const auto& b : j.at("basis")) basis.push_back(bits(b));
  return Coset(m, basis, bits(field(j, "offset", where)));
}

FinCosetSystem coset_system_from(const json& j, const std::string& where) {
  const auto n = get<std::size_t>(field(j, "n", where), where + ".n");
  const auto m = get<std::size_t>(field(j, "m", where), where + ".m");
  if (n > 24) throw InputError(where + ": n above 24");
  std::vector<std::size_t> fp, gp;
  if (j.contains("f_pos")) fp = get<std::vector<std::size_t>>(j.at("f_pos"), where + ".f_pos");
  if (j.contains("g_pos")) gp = get<std::vector<std::size_t>>(j.at("g_pos"), where + ".g_pos");
  const auto& cs = field(j, "cosets", where);
  if (cs.size() != (std::size_t{1} << n)) throw InputError(where + ": need 2^n cosets");
  std::vector<Coset> cosets;
  for (std::size_t f = 0; f < cs.size(); ++f) {
    const std::string w = where + ".cosets[" + std::to_string(f) + "]";
    if (cs[f].contains("f") && get<std::string>(cs[f].at("f"), w) != bits_to_string(f, n))
      throw InputError(w + ": cosets must be listed in order of f");
    cosets.push_back(coset_from(cs[f], m, w));
  }
  return FinCosetSystem(n, m, std::move(cosets), fp, gp);
}

ordered_json coset_system_to(const FinCosetSystem& c) {
  ordered_json j;
  j["n"] = c.n();
  j["m"] = c.m();
  bool plain = true;
  for (std::size_t i = 0; i < c.n(); ++i) plain = plain && c.f_pos()[i] == i;
  for (std::size_t i = 0; i < c.m(); ++i) plain = plain && c.g_pos()[i] == i;
  if (!plain) {
    j["f_pos"] = c.f_pos();
    j["g_pos"] = c.g_pos();
  }
  j["cosets"] = ordered_json::array();
  for (Word f = 0; f < c.domain_size(); ++f) {
    ordered_json e;
    e["f"] = bits_to_string(f, c.n());
    e["offset"] = bits_to_string(c.at(f).offset(), c.m());
    e["basis"] = ordered_json::array();
    for (Word b : c.at(f).basis()) e["basis"].push_back(bits_to_string(b, c.m()));
    j["cosets"].push_back(e);
  }
  return j;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

FiniteStructure parse_structure(const std::string& text) { return structure_from(parse_json(text), "structure"); }

std::string dump_structure(const FiniteStructure& m) { return structure_to(m).dump(2) + "\n"; }

ProductSpec parse_product(const std::string& text) { return product_from(parse_json(text)); }

PosetPresentation parse_presentation(const std::string& text) {
  json j = parse_json(text);
  PosetPresentation p;
  FinitePart f = finite_from(field(j, "finite", "poset"), "poset.finite");
  p.elems = f.elems;
  p.le = f.le;
  p.delta = f.delta;
  if (j.contains("tails"))
    for (std::size_t i = 0; i < j.at("tails").size(); ++i) {
      const auto& t = j.at("tails")[i];
      const std::string w = "poset.tails[" + std::to_string(i) + "]";
      TailBlock b;
      const auto kind = get<std::string>(field(t, "kind", w), w + ".kind");
      if (kind == "antichain") b.kind = TailKind::Antichain;
      else if (kind == "chain") b.kind = TailKind::Chain;
      else if (kind == "ladder") b.kind = TailKind::Ladder;
      else throw InputError(w + ": unknown kind '" + kind + "'");
      if (t.contains("ladder")) {
        const auto l = get<std::string>(t.at("ladder"), w + ".ladder");
        if (l == "disjoint-pairs") b.ladder = LadderKind::DisjointPairs;
        else if (l == "increasing") b.ladder = LadderKind::Increasing;
        else throw InputError(w + ": unknown ladder '" + l + "'");
      }
      if (t.contains("delta")) b.delta = get<int>(t.at("delta"), w + ".delta");
      if (t.contains("above")) b.above = get<std::vector<std::string>>(t.at("above"), w + ".above");
      p.tails.push_back(std::move(b));
    }
  return p;
}

std::string dump_presentation(const PosetPresentation& p) {
  ordered_json j;
  ordered_json f;
  f["elems"] = p.elems;
  f["le"] = ordered_json::array();
  for (const auto& [a, b] : p.le) f["le"].push_back({a, b});
  ordered_json d = ordered_json::object();
  for (const auto& e : p.elems)
    if (auto it = p.delta.find(e); it != p.delta.end()) d[e] = it->second;
  f["delta"] = d;
  j["finite"] = f;
  j["tails"] = ordered_json::array();
  for (const auto& t : p.tails) {
    ordered_json tj;
    tj["kind"] = to_string(t.kind);
    if (t.kind == TailKind::Ladder) tj["ladder"] = to_string(t.ladder);
    tj["delta"] = t.delta;
    tj["above"] = t.above;
    j["tails"].push_back(tj);
  }
  return j.dump(2) + "\n";
}

InvSystemFile parse_inv_system(const std::string& text) {
  json j = parse_json(text);
  InvSystemFile out;
  if (j.contains("z_order")) out.z_order = get<std::uint64_t>(j.at("z_order"), "invsys.z_order");
  for (const auto& ij : field(j, "indices", "invsys")) {
    IndexSpec s;
    s.name = get<std::string>(field(ij, "name", "invsys.indices"), "invsys.indices.name");
    const std::string w = "invsys.indices." + s.name;
    s.ambient = AbGroup(get<std::vector<std::uint64_t>>(field(ij, "ambient", w), w + ".ambient"));
    if (ij.contains("generators")) s.generators = get<std::vector<GroupElement>>(ij.at("generators"), w + ".generators");
    out.indices.push_back(std::move(s));
  }
  if (j.contains("maps"))
    for (const auto& mj : j.at("maps")) {
      MapSpec m;
      m.from = get<std::string>(field(mj, "from", "invsys.maps"), "invsys.maps.from");
      m.to = get<std::string>(field(mj, "to", "invsys.maps"), "invsys.maps.to");
      m.matrix = get<IntMatrix>(field(mj, "matrix", "invsys.maps"), "invsys.maps.matrix");
      out.maps.push_back(std::move(m));
    }
  return out;
}

TreeFile parse_tree(const std::string& text) {
  json j = parse_json(text);
  TreeFile t;
  t.tree = RootedTree(get<std::vector<int>>(field(j, "parent", "tree"), "tree.parent"));
  if (j.contains("c_order")) t.c_order = get<std::uint64_t>(j.at("c_order"), "tree.c_order");
  if (j.contains("z_order")) t.z_order = get<std::uint64_t>(j.at("z_order"), "tree.z_order");
  return t;
}

FinCosetSystem parse_coset_system(const std::string& text) {
  return coset_system_from(parse_json(text), "cosets");
}

std::string dump_coset_system(const FinCosetSystem& c) { return coset_system_to(c).dump(2) + "\n"; }

std::vector<FinCosetSystem> parse_limit(const std::string& text) {
  json j = parse_json(text);
  std::vector<FinCosetSystem> out;
  const auto& s = field(j, "systems", "limit");
  for (std::size_t i = 0; i < s.size(); ++i)
    out.push_back(coset_system_from(s[i], "limit.systems[" + std::to_string(i) + "]"));
  return out;
}

FinitePoset parse_finite_poset(const std::string& text) { return poset_from(parse_json(text), "poset"); }

ColoredModel parse_colored_model(const std::string& text) {
  json j = parse_json(text);
  FinitePoset p = poset_from(field(j, "poset", "model"), "model.poset");
  auto points = get<std::vector<Tuple>>(field(j, "points", "model"), "model.points");
  auto colors = get<std::vector<std::uint32_t>>(field(j, "colors", "model"), "model.colors");
  return make_colored_model(std::move(p), std::move(points), std::move(colors));
}

std::string dump_colored_model(const ColoredModel& m) {
  ordered_json j;
  j["poset"] = poset_to(m.poset);
  j["points"] = m.points;
  j["colors"] = m.colors;
  return j.dump(2) + "\n";
}

GadgetFile parse_gadget(const std::string& text) {
  json j = parse_json(text);
  GadgetFile g;
  g.product = product_from(field(j, "product", "gadget"));
  g.truncate = get<std::size_t>(field(j, "truncate", "gadget"), "gadget.truncate");
  g.gadget.basepoints = get<std::vector<Element>>(field(j, "basepoints", "gadget"), "gadget.basepoints");
  for (const auto& fj : field(j, "factors", "gadget")) {
    GadgetFactor f;
    f.n = get<std::size_t>(field(fj, "n", "gadget.factors"), "gadget.factors.n");
    f.g = get<Permutation>(field(fj, "g", "gadget.factors"), "gadget.factors.g");
    f.d = get<Element>(field(fj, "d", "gadget.factors"), "gadget.factors.d");
    g.gadget.factors.push_back(std::move(f));
  }
  for (const auto& ij : field(j, "family", "gadget")) {
    GadgetIndex idx;
    idx.coords = get<std::vector<std::size_t>>(field(ij, "coords", "gadget.family"), "gadget.family.coords");
    if (ij.contains("generators")) idx.generators = get<std::vector<GroupElement>>(ij.at("generators"), "gadget.family.generators");
    g.gadget.family.push_back(std::move(idx));
  }
  if (j.contains("support_bound")) g.gadget.support_bound = get<std::size_t>(j.at("support_bound"), "gadget.support_bound");
  return g;
}

}  // namespace scottlab::io
