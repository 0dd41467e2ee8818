// scottlab: batch front end for the classifiers, builders and rank engines.
#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scottlab/backforth.hpp"
#include "scottlab/cosets.hpp"
#include "scottlab/invsystems.hpp"
#include "scottlab/io.hpp"
#include "scottlab/posets.hpp"
#include "scottlab/products.hpp"
#include "scottlab/reductions.hpp"
#include "scottlab/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace scottlab;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  Caps caps;
  std::size_t truncate = 0;  // 0: the file's value, or 3 for products
  std::size_t margin = 2;
  std::string format = "text";
  std::uint64_t seed = 1;
};

// Exit 1 is reserved for property violations found while running.
struct Report {
  json data = json::object();
  std::vector<std::string> lines;
  int status = 0;

  void line(std::string s) { lines.push_back(std::move(s)); }
  void violation(const std::string& s) {
    status = 1;
    lines.push_back("VIOLATION: " + s);
  }
};

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

template <class T>
std::string tuple_string(const std::vector<T>& t) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < t.size(); ++i) s << (i ? "," : "") << t[i];
  s << ")";
  return s.str();
}

// rnk values print as plain numbers when finite.
std::string rank_string(const Ordinal& o) {
  return o.is_finite() ? std::to_string(o.value()) : o.to_string();
}

std::string level_string(const BfLevel& v) { return to_string(v); }

json level_json(const BfLevel& v) {
  json j;
  j["level"] = v.level ? json(v.level->to_string()) : json(nullptr);
  j["exact"] = v.exact;
  return j;
}

Tuple parse_tuple(const std::string& s) {
  Tuple t;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    try {
      t.push_back(static_cast<Element>(std::stoul(tok)));
    } catch (const std::exception&) {
      throw InputError("bad tuple entry '" + tok + "'");
    }
  }
  return t;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> v;
  for (Element e : parse_tuple(s)) v.push_back(static_cast<int>(e));
  return v;
}

// --- products and posets -------------------------------------------------------

Report classify_product(const RunConfig& cfg) {
  Report r;
  ProductSpec spec = io::parse_product(io::read_file(cfg.inputs.at(0)));
  IStar is = istar(spec, cfg.caps);
  BorelVerdict v = borel_verdict(spec, cfg.caps);
  r.data["verdict"] = to_string(v);
  r.data["prefix_nonfree"] = is.prefix_nonfree;
  r.data["tail_nonfree"] = is.tail_nonfree;
  r.data["istar_finite"] = is.tail_free();
  if (is.tail_free())
    r.line(to_string(v) + ", I_* finite (tail free; I_* = " + tuple_string(is.prefix_nonfree) + ")");
  else
    r.line(to_string(v) + ", I_* infinite (tail non-free)");
  return r;
}

Report classify_poset(const RunConfig& cfg) {
  Report r;
  PosetPresentation p = io::parse_presentation(io::read_file(cfg.inputs.at(0)));
  auto diags = validate(p);
  if (!diags.empty()) throw InputError(diags.front().element + ": " + diags.front().message);
  NbcResult nbc = is_nearly_binary_crosscutting(p);
  r.data["nbc"] = nbc.nbc;
  r.data["reason"] = nbc.reason;
  if (nbc.nbc) {
    r.data["witness_q"] = nbc.witness_q;
    r.line("nearly binary crosscutting; Q={" + join(nbc.witness_q, ",") + "}");
    return r;
  }
  auto w = benchmark_witness(p);
  if (!w) {
    r.violation("not nearly binary crosscutting but no benchmark embeds");
    return r;
  }
  r.data["benchmark"] = {{"index", w->index},
                         {"block", w->block},
                         {"selection", w->selection},
                         {"delta_prime", w->delta_prime},
                         {"description", w->description}};
  r.line("not nearly binary crosscutting; benchmark i=" + std::to_string(w->index));
  r.line("  block " + std::to_string(w->block) + ": " + w->description);
  return r;
}

// --- back and forth --------------------------------------------------------------

BfOptions bf_options(const RunConfig& cfg, std::size_t max_length) {
  BfOptions o;
  o.max_length = max_length;
  o.tuple_cap = cfg.caps.tuples;
  return o;
}

Report scott_rank_cmd(const RunConfig& cfg, std::size_t max_length) {
  Report r;
  FiniteStructure m = io::parse_structure(io::read_file(cfg.inputs.at(0)));
  Ordinal sr = scott_rank(m, bf_options(cfg, max_length));
  r.data["size"] = m.size();
  r.data["scott_rank"] = sr.to_string();
  r.line("sr=" + sr.to_string());
  return r;
}

Report bf_cmd(const RunConfig& cfg, const std::string& a, const std::string& b, std::size_t length,
              std::size_t max_length) {
  Report r;
  FiniteStructure m = io::parse_structure(io::read_file(cfg.inputs.at(0)));
  std::optional<FiniteStructure> n;
  if (cfg.inputs.size() > 1) n = io::parse_structure(io::read_file(cfg.inputs.at(1)));
  const FiniteStructure& right = n ? *n : m;
  BfTable table = n ? BfTable(m, *n, bf_options(cfg, max_length)) : BfTable(m, bf_options(cfg, max_length));
  r.data["levels"] = table.level_count();
  r.data["fixpoint_level"] = table.fixpoint_level();

  if (!a.empty() || !b.empty()) {
    Tuple ta = parse_tuple(a), tb = parse_tuple(b);
    for (Element x : ta)
      if (x >= m.size()) throw InputError("element " + std::to_string(x) + " out of range");
    for (Element x : tb)
      if (x >= right.size()) throw InputError("element " + std::to_string(x) + " out of range");
    BfLevel v = table.level(ta, tb);
    r.data["pair"] = {{"a", ta}, {"b", tb}, {"result", level_json(v)}};
    r.line(tuple_string(ta) + " vs " + tuple_string(tb) + ": " + level_string(v));
    return r;
  }

  // Per level, the pairs of distinct tuples of the given length that are still merged.
  const std::size_t nl = table.tuple_count(Side::Left, length);
  const std::size_t nr = table.tuple_count(Side::Right, length);
  json levels = json::array();
  for (std::size_t k = 0; k < table.level_count(); ++k) {
    json pairs = json::array();
    std::vector<std::string> shown;
    for (std::size_t i = 0; i < nl; ++i) {
      Tuple x = table.tuple_at(Side::Left, length, i);
      for (std::size_t j = n ? 0 : i + 1; j < nr; ++j) {
        Tuple y = table.tuple_at(Side::Right, length, j);
        if (table.class_of(Side::Left, x, k) != table.class_of(Side::Right, y, k)) continue;
        pairs.push_back({x, y});
        shown.push_back(tuple_string(x) + "~" + tuple_string(y));
      }
    }
    levels.push_back({{"level", k}, {"classes", table.class_count(k)}, {"merged", pairs}});
    r.line("level " + std::to_string(k) + ": " + std::to_string(table.class_count(k)) + " classes; merged " +
           (shown.empty() ? "none" : join(shown, " ")));
  }
  r.data["length"] = length;
  r.data["table"] = levels;
  return r;
}

Report base_cmd(const RunConfig& cfg, bool product) {
  Report r;
  const std::string text = io::read_file(cfg.inputs.at(0));
  if (product) {
    ProductSpec spec = io::parse_product(text);
    const std::size_t n = cfg.truncate ? cfg.truncate : 3;
    ConstructedBase b = construct_base(spec, n, cfg.caps);
    r.data["truncate"] = n;
    r.data["base"] = b.tuple;
    r.data["nonfree"] = b.nonfree;
    r.data["verified"] = b.verified ? json(*b.verified) : json(nullptr);
    r.line("constructed base " + tuple_string(b.tuple) + " over N=" + std::to_string(n));
    if (!b.verified)
      r.line("  not verified (product exceeds the universe cap)");
    else if (*b.verified)
      r.line("  verified: no automorphism fixes it");
    else
      r.violation("constructed tuple is not a base");
    return r;
  }
  FiniteStructure m = io::parse_structure(text);
  auto b = find_finite_base(m, m.size(), bf_options(cfg, 0));
  if (!b) {
    r.data["base"] = nullptr;
    r.line("no base");
    return r;
  }
  r.data["base"] = *b;
  r.line("base " + tuple_string(*b) + " of size " + std::to_string(b->size()));
  return r;
}

// --- inverse systems -------------------------------------------------------------

RankQuantifier parse_quantifier(const std::string& q) {
  if (q == "covers") return RankQuantifier::Covers;
  if (q == "all-above") return RankQuantifier::AllAbove;
  throw InputError("unknown quantifier '" + q + "'");
}

Report invsys_rank(const RunConfig& cfg, const std::string& quant) {
  Report r;
  io::InvSystemFile f = io::parse_inv_system(io::read_file(cfg.inputs.at(0)));
  InvSystem sys(f.indices, f.maps, f.z_order, cfg.caps.tuples);
  RankTable table = sys.rank_table(parse_quantifier(quant));
  r.data["quantifier"] = quant;
  r.data["levels"] = table.levels;
  json idx = json::array();
  for (std::size_t p = 0; p < sys.size(); ++p) {
    json elems = json::array();
    r.line("index " + sys.name(p) + ":");
    for (std::size_t i = 0; i < sys.elements(p).size(); ++i) {
      const auto& a = sys.elements(p)[i];
      elems.push_back({{"element", a}, {"rank", table.ranks[p][i].to_string()}});
      r.line("  " + tuple_string(a) + " rank " + table.ranks[p][i].to_string());
    }
    idx.push_back({{"name", sys.name(p)}, {"elements", elems}});
  }
  r.data["indices"] = idx;
  return r;
}

std::string sigma_string(const TreeElement& f) {
  std::vector<std::string> parts;
  for (const auto& [s, v] : f.sigma) parts.push_back(std::to_string(s) + ":" + std::to_string(v));
  return "{" + join(parts, ",") + "}";
}

Report invsys_tree(const RunConfig& cfg) {
  Report r;
  io::TreeFile f = io::parse_tree(io::read_file(cfg.inputs.at(0)));
  TreeSystem ts(f.tree, f.c_order, f.z_order);
  CoordinateSystem m = ts.materialize(cfg.caps.tuples);
  RankTable ranks = m.system.rank_table();
  std::size_t checked = 0, bad = 0;
  json out = json::array();
  for (NodeSet u : f.tree.downward_closed_sets()) {
    r.line("U=" + node_set_name(u) + ":");
    for (const auto& e : ts.elements(u)) {
      auto rep = tree_rank_correspondence(ts, m, ranks, e);
      const bool ok = rep.rank <= rep.strongness;
      ++checked;
      if (!ok) ++bad;
      out.push_back({{"u", node_set_name(u)},
                     {"sigma", sigma_string(e)},
                     {"strongness", rep.strongness.to_string()},
                     {"rank", rep.rank.to_string()},
                     {"ok", ok}});
      r.line("  sigma " + sigma_string(e) + " strongness " + rep.strongness.to_string() + " rank " +
             rep.rank.to_string() + (ok ? "" : "  <- rank above strongness"));
    }
  }
  r.data["modulus"] = ts.modulus();
  r.data["elements"] = out;
  r.data["checked"] = checked;
  r.data["violations"] = bad;
  if (bad) r.violation(std::to_string(bad) + " elements with rank above strongness");
  else r.line("rank <= strongness for all " + std::to_string(checked) + " elements");
  return r;
}

// --- coset systems ---------------------------------------------------------------

Report cosets_build(const RunConfig&, const std::string& kind, std::size_t n, std::size_t m,
                    const std::string& out) {
  Report r;
  FinCosetSystem c;
  if (kind == "base") c = base_system(n, m);
  else if (kind == "zero") c = zero_system(n, m);
  else throw InputError("unknown system kind '" + kind + "'");
  io::write_file(out, io::dump_coset_system(c));
  r.data["kind"] = kind;
  r.data["n"] = n;
  r.data["m"] = m;
  r.data["output"] = out;
  r.line("wrote " + kind + " system (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ") to " + out);
  return r;
}

Report cosets_rank(const RunConfig& cfg) {
  Report r;
  FinCosetSystem c = io::parse_coset_system(io::read_file(cfg.inputs.at(0)));
  CosetRanks ranks(c);
  r.data["n"] = c.n();
  r.data["m"] = c.m();
  r.data["empty_rank"] = ranks.empty_rank().to_string();
  r.data["levels"] = ranks.levels();
  r.line("rnk(∅)=" + rank_string(ranks.empty_rank()));
  return r;
}

Report cosets_successor(const RunConfig& cfg, std::size_t times, bool pad, const std::string& out) {
  Report r;
  FinCosetSystem c = io::parse_coset_system(io::read_file(cfg.inputs.at(0)));
  for (std::size_t i = 0; i < times; ++i) c = successor(c);
  if (pad) c = pad_f(c);
  io::write_file(out, io::dump_coset_system(c));
  r.data["times"] = times;
  r.data["n"] = c.n();
  r.data["m"] = c.m();
  r.data["output"] = out;
  r.line("wrote " + std::to_string(times) + "-fold successor (n=" + std::to_string(c.n()) +
         ", m=" + std::to_string(c.m()) + ") to " + out);
  return r;
}

Report cosets_limit(const RunConfig& cfg, const std::string& out) {
  Report r;
  std::vector<FinCosetSystem> parts = io::parse_limit(io::read_file(cfg.inputs.at(0)));
  LimitSystem l = limit(parts);
  CosetRanks d(l.d);
  TauEvaluator tau(l);
  std::size_t pairs = 0, mismatches = 0;
  for (Word f = 0; f < l.d.domain_size(); ++f)
    for (Word g : l.d.at(f).elements()) {
      ++pairs;
      if (tau.tau(f, g) != d.pair_rank(f, g)) ++mismatches;
    }
  if (!out.empty()) io::write_file(out, io::dump_coset_system(l.d));
  json comps = json::array();
  for (const auto& c : parts) comps.push_back(CosetRanks(c).empty_rank().to_string());
  r.data["component_ranks"] = comps;
  r.data["n"] = l.d.n();
  r.data["m"] = l.d.m();
  r.data["empty_rank"] = d.empty_rank().to_string();
  r.data["pairs"] = pairs;
  r.data["tau_mismatches"] = mismatches;
  r.line("limit domain 2^" + std::to_string(l.d.n()) + " x 2^" + std::to_string(l.d.m()) +
         ", rnk(∅)=" + rank_string(d.empty_rank()));
  if (mismatches)
    r.violation(std::to_string(mismatches) + " of " + std::to_string(pairs) + " pairs have tau != rank");
  else
    r.line("tau equals the singleton rank on all " + std::to_string(pairs) + " pairs");
  return r;
}

// --- reductions ------------------------------------------------------------------

json iso_json(const IsoReport& rep) {
  json ce = json::array();
  for (auto [i, j] : rep.counterexamples) ce.push_back({i, j});
  return {{"pairs", rep.pairs}, {"preserved", rep.preserved}, {"reflected", rep.reflected},
          {"counterexamples", ce}};
}

Report reduce_cmd(const RunConfig& cfg, const std::string& kind, const std::string& poset,
                  const std::string& delta, const std::vector<std::string>& against, const std::string& out) {
  Report r;
  std::vector<ColoredModel> inputs{io::parse_colored_model(io::read_file(cfg.inputs.at(0)))};
  for (const auto& path : against) inputs.push_back(io::parse_colored_model(io::read_file(path)));

  Reduction fn;
  if (kind == "subposet") {
    if (poset.empty()) throw InputError("reduce subposet needs --poset");
    FinitePoset p = io::parse_finite_poset(io::read_file(poset));
    fn = [p, caps = cfg.caps](const ColoredModel& m) { return reduce_subposet(m, p, caps); };
  } else {
    if (delta.empty()) throw InputError("reduce delta needs --delta");
    std::vector<int> d = parse_ints(delta);
    fn = [d, caps = cfg.caps](const ColoredModel& m) { return reduce_delta(m, d, caps); };
  }
  ColoredModel image = fn(inputs[0]);
  io::write_file(out, io::dump_colored_model(image));

  ColoredModel back = kind == "subposet" ? decode_subposet(image, inputs[0].poset)
                                          : decode_delta(image, inputs[0].poset.deltas());
  const bool roundtrip = colored_isomorphic(back, inputs[0], cfg.caps);
  IsoReport rep = iso_harness(fn, inputs, cfg.caps);

  r.data["before"] = cfg.inputs.at(0);
  r.data["after"] = out;
  r.data["points_before"] = inputs[0].points.size();
  r.data["points_after"] = image.points.size();
  r.data["decode_roundtrip"] = roundtrip;
  r.data["report"] = iso_json(rep);
  r.line("reduced " + std::to_string(inputs[0].points.size()) + " points to " +
         std::to_string(image.points.size()) + "; wrote " + out);
  r.line("pairs " + std::to_string(rep.pairs) + ", preserved " + std::to_string(rep.preserved) +
         ", reflected " + std::to_string(rep.reflected) + ", counterexamples " +
         std::to_string(rep.counterexamples.size()));
  if (!roundtrip) r.violation("decoding the image does not recover the input");
  if (!rep.counterexamples.empty()) r.violation("isomorphism not preserved or reflected");
  return r;
}

// --- gadget ----------------------------------------------------------------------

// Level as a number capped at the table horizon; -1 when the qf types differ.
long capped(const BfLevel& v, std::size_t horizon) {
  if (!v.level) return -1;
  if (!v.level->is_finite()) return static_cast<long>(horizon);
  return static_cast<long>(std::min<std::uint64_t>(v.level->value(), horizon));
}

long capped(const Ordinal& o, std::size_t horizon) {
  if (!o.is_finite()) return static_cast<long>(horizon);
  return static_cast<long>(std::min<std::uint64_t>(o.value(), horizon));
}

Report gadget_cmd(const RunConfig& cfg) {
  Report r;
  io::GadgetFile f = io::parse_gadget(io::read_file(cfg.inputs.at(0)));
  const std::size_t n = cfg.truncate ? cfg.truncate : f.truncate;
  RankGadget g = build_rank_gadget(f.product, f.gadget, n, cfg.caps);
  const InvSystem& sys = g.system.system;
  RankTable ranks = sys.rank_table(RankQuantifier::AllAbove);

  // Singletons over the named basepoint; the margin is the number of extra moves.
  BfTable table(g.structure, bf_options(cfg, 1 + cfg.margin));
  const std::size_t horizon = table.horizon(1).value_or(table.level_count());

  struct Row {
    long rank, level;
  };
  std::vector<Row> rows;
  json out = json::array();
  for (std::size_t p = 0; p < sys.size(); ++p) {
    r.line("index " + sys.name(p) + ":");
    for (std::size_t i = 0; i < sys.elements(p).size(); ++i) {
      const auto& a = sys.elements(p)[i];
      Element fx = g.f[p], x = g.translate(p, a);
      Element lt[1] = {fx}, rt[1] = {x};
      BfLevel v = table.level(lt, rt);
      const Ordinal& rk = ranks.ranks[p][i];
      rows.push_back({capped(rk, horizon), capped(v, horizon)});
      out.push_back({{"index", sys.name(p)}, {"a", a}, {"rank", rk.to_string()}, {"bf", level_json(v)}});
      r.line("  a=" + tuple_string(a) + " rnk " + rk.to_string() + " bf " + level_string(v));
      for (std::size_t k = 0; k <= 2 && k <= horizon; ++k)
        if (rows.back().rank >= static_cast<long>(k) && rows.back().level < static_cast<long>(k))
          r.violation("rnk(a) >= " + std::to_string(k) + " but bf level below it at a=" + tuple_string(a));
    }
  }
  std::size_t inversions = 0;
  for (const auto& x : rows)
    for (const auto& y : rows)
      if (x.rank < y.rank && x.level > y.level) ++inversions;
  if (inversions) r.violation(std::to_string(inversions) + " pairs where bf level decreases with rank");
  r.data["universe"] = g.structure.size();
  r.data["horizon"] = horizon;
  r.data["rows"] = out;
  r.data["inversions"] = inversions;
  return r;
}

// --- verify ----------------------------------------------------------------------

Report verify_cmd(const RunConfig& cfg, std::size_t sweep) {
  Report r;
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.sweep = sweep;
  opt.caps = cfg.caps;
  json checks = json::array();
  for (const auto& c : run_verification(opt)) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"instances", c.instances}, {"detail", c.detail}});
    r.line(std::string(c.passed ? "PASS " : "FAIL ") + c.name + " (" + std::to_string(c.instances) + ")" +
           (c.detail.empty() ? "" : ": " + c.detail));
    if (!c.passed) r.status = 1;
  }
  r.data["sweep"] = sweep;
  r.data["checks"] = checks;
  return r;
}

void emit(const RunConfig& cfg, Report& r) {
  if (cfg.format == "json") {
    json j;
    j["schema"] = 1;
    j["command"] = cfg.command;
    j["seed"] = cfg.seed;
    j["status"] = r.status;
    j["result"] = r.data;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& l : r.lines) std::cout << l << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scottlab: back-and-forth ranks, crosscutting products and coset systems"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--cap-universe", cfg.caps.universe, "Largest universe for automorphism search")
      ->check(CLI::PositiveNumber);
  app.add_option("--cap-tuple", cfg.caps.tuples, "Largest tuple space")->check(CLI::PositiveNumber);
  app.add_option("--truncate", cfg.truncate, "Number of product factors")->check(CLI::PositiveNumber);
  app.add_option("--margin", cfg.margin, "Extra tuple length for bounded bf tables");
  app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized sweeps");

  auto input = [&](CLI::App* sub, std::size_t count = 1) {
    sub->fallthrough();
    sub->add_option("input", cfg.inputs, "Input file")->required()->expected(1, static_cast<int>(count));
  };

  auto* cp = app.add_subcommand("classify-product", "I_* and Borel verdict of a crosscutting product");
  input(cp);
  auto* cpo = app.add_subcommand("classify-poset", "Nearly binary crosscutting test and benchmark witness");
  input(cpo);

  std::size_t max_length = 0;
  auto* sr = app.add_subcommand("scott-rank", "Scott rank of a finite structure");
  input(sr);
  sr->add_option("--max-length", max_length, "Tuple length bound (0: universe size)");

  std::string bf_a, bf_b;
  std::size_t bf_len = 1;
  auto* bf = app.add_subcommand("bf", "Back-and-forth levels of tuple pairs");
  input(bf, 2);
  bf->add_option("--a", bf_a, "Left tuple, comma separated");
  bf->add_option("--b", bf_b, "Right tuple, comma separated");
  bf->add_option("--length", bf_len, "Tuple length for the table report");
  bf->add_option("--max-length", max_length, "Tuple length bound (0: universe size)");

  bool base_product = false;
  auto* base = app.add_subcommand("base", "Finite base of a structure or a product");
  input(base);
  base->add_flag("--product", base_product, "Input is a product file; uses --truncate");

  std::string quant = "covers";
  auto* inv = app.add_subcommand("invsys", "Inverse systems of abelian groups");
  inv->fallthrough();
  inv->require_subcommand(1);
  auto* inv_rank = inv->add_subcommand("rank", "Rank of every element");
  input(inv_rank);
  inv_rank->add_option("--quantifier", quant, "covers or all-above");
  auto* inv_tree = inv->add_subcommand("tree", "Tree system: rank against strongness");
  input(inv_tree);

  std::string kind = "base", out = "out.json";
  std::size_t cn = 1, cm = 1, times = 1;
  bool pad = false;
  auto* cos = app.add_subcommand("cosets", "Coset systems");
  cos->fallthrough();
  cos->require_subcommand(1);
  auto* cos_build = cos->add_subcommand("build", "Write a base or zero system");
  cos_build->fallthrough();
  cos_build->add_option("--kind", kind, "base or zero");
  cos_build->add_option("--n", cn, "f dimension")->check(CLI::PositiveNumber);
  cos_build->add_option("--m", cm, "g dimension")->check(CLI::PositiveNumber);
  cos_build->add_option("-o,--output", out, "Output file");
  auto* cos_rank = cos->add_subcommand("rank", "rnk of the empty set");
  input(cos_rank);
  auto* cos_succ = cos->add_subcommand("successor", "Apply the successor construction");
  input(cos_succ);
  cos_succ->add_option("--times", times, "Number of applications");
  cos_succ->add_flag("--pad", pad, "Append one ignored f bit");
  cos_succ->add_option("-o,--output", out, "Output file");
  std::string limit_out;
  auto* cos_lim = cos->add_subcommand("limit", "Limit system and its tau check");
  input(cos_lim);
  cos_lim->add_option("-o,--output", limit_out, "Write the limit system D here");

  std::string poset, delta;
  std::vector<std::string> against;
  auto* red = app.add_subcommand("reduce", "Reductions between colored models");
  red->fallthrough();
  red->require_subcommand(1);
  auto* red_sub = red->add_subcommand("subposet", "Extend from Q to a larger poset P");
  auto* red_delta = red->add_subcommand("delta", "Raise delta");
  for (auto* s : {red_sub, red_delta}) {
    input(s);
    s->add_option("--against", against, "Further models for the isomorphism harness");
    s->add_option("-o,--output", out, "Output file");
  }
  red_sub->add_option("--poset", poset, "Poset file for P");
  red_delta->add_option("--delta", delta, "New delta, comma separated");

  std::size_t sweep = 40;
  auto* ver = app.add_subcommand("verify", "Run the invariant suite");
  ver->fallthrough();
  ver->add_option("--sweep", sweep, "Random instances per check")->check(CLI::PositiveNumber);

  auto* gad = app.add_subcommand("gadget", "Rank gadget: rnk against bf level");
  input(gad);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Report r;
    if (cp->parsed()) cfg.command = "classify-product", r = classify_product(cfg);
    else if (cpo->parsed()) cfg.command = "classify-poset", r = classify_poset(cfg);
    else if (sr->parsed()) cfg.command = "scott-rank", r = scott_rank_cmd(cfg, max_length);
    else if (bf->parsed()) cfg.command = "bf", r = bf_cmd(cfg, bf_a, bf_b, bf_len, max_length);
    else if (base->parsed()) cfg.command = "base", r = base_cmd(cfg, base_product);
    else if (inv_rank->parsed()) cfg.command = "invsys rank", r = invsys_rank(cfg, quant);
    else if (inv_tree->parsed()) cfg.command = "invsys tree", r = invsys_tree(cfg);
    else if (cos_build->parsed()) cfg.command = "cosets build", r = cosets_build(cfg, kind, cn, cm, out);
    else if (cos_rank->parsed()) cfg.command = "cosets rank", r = cosets_rank(cfg);
    else if (cos_succ->parsed()) cfg.command = "cosets successor", r = cosets_successor(cfg, times, pad, out);
    else if (cos_lim->parsed()) cfg.command = "cosets limit", r = cosets_limit(cfg, limit_out);
    else if (red_sub->parsed()) cfg.command = "reduce subposet", r = reduce_cmd(cfg, "subposet", poset, delta, against, out);
    else if (red_delta->parsed()) cfg.command = "reduce delta", r = reduce_cmd(cfg, "delta", poset, delta, against, out);
    else if (ver->parsed()) cfg.command = "verify", r = verify_cmd(cfg, sweep);
    else if (gad->parsed()) cfg.command = "gadget", r = gadget_cmd(cfg);
    emit(cfg, r);
    return r.status;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  }
}
