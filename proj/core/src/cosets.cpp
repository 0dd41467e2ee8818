#include "scottlab/cosets.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_set>

namespace scottlab {

namespace {

Word low_mask(std::size_t k) { return k >= 64 ? ~Word{0} : (Word{1} << k) - 1; }

}  // namespace

// --- BitVec ------------------------------------------------------------------

BitVec BitVec::fin(Word bits, std::size_t length) {
  if (length > 64 || (bits & ~low_mask(length)) != 0) throw InputError("bit vector does not fit its length");
  BitVec v;
  v.bits_ = bits;
  v.length_ = length;
  return v;
}

BitVec BitVec::ev_const(Word prefix, std::size_t length, bool tail) {
  BitVec v = fin(prefix, length);
  v.kind_ = Kind::EvConst;
  v.tail_ = tail;
  while (v.length_ > 0 && ((v.bits_ >> (v.length_ - 1)) & 1) == Word(tail)) {
    --v.length_;
    v.bits_ &= low_mask(v.length_);
  }
  return v;
}

BitVec BitVec::parse(const std::string& s) {
  auto body = s;
  std::optional<bool> tail;
  if (body.size() >= 3 && body.back() == ')' && body[body.size() - 3] == '(') {
    char t = body[body.size() - 2];
    if (t != '0' && t != '1') throw InputError("bad tail bit in '" + s + "'");
    tail = t == '1';
    body.resize(body.size() - 3);
  }
  Word w = bits_from_string(body);
  return tail ? ev_const(w, body.size(), *tail) : fin(w, body.size());
}

bool BitVec::at(std::size_t i) const {
  if (i < length_) return (bits_ >> i) & 1;
  if (kind_ == Kind::EvConst) return tail_;
  throw InputError("bit position out of range");
}

BitVec BitVec::truncate(std::size_t n) const {
  if (n > 64) throw InputError("truncation longer than a word");
  Word w = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (at(i)) w |= Word{1} << i;
  return fin(w, n);
}

std::string BitVec::to_string() const {
  std::string s = bits_to_string(bits_, length_);
  if (kind_ == Kind::EvConst) s += tail_ ? "(1)" : "(0)";
  return s;
}

std::string bits_to_string(Word w, std::size_t length) {
  std::string s(length, '0');
  for (std::size_t i = 0; i < length; ++i)
    if ((w >> i) & 1) s[i] = '1';
  return s;
}

Word bits_from_string(const std::string& s) {
  if (s.size() > 64) throw InputError("bit string longer than 64");
  Word w = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') w |= Word{1} << i;
    else if (s[i] != '0') throw InputError("bad bit string '" + s + "'");
  }
  return w;
}

// --- Coset -------------------------------------------------------------------

Coset::Coset(std::size_t dim, std::vector<Word> generators, Word offset) : dim_(dim) {
  if (dim > 64) throw InputError("coset dimension above 64");
  const Word mask = low_mask(dim);
  if ((offset & ~mask) != 0) throw InputError("offset does not fit the dimension");
  for (Word v : generators) {
    if ((v & ~mask) != 0) throw InputError("basis vector does not fit the dimension");
    v = reduce(v);
    if (v == 0) continue;
    const int p = std::bit_width(v) - 1;
    for (auto& row : basis_)
      if ((row >> p) & 1) row ^= v;
    basis_.push_back(v);
    std::sort(basis_.begin(), basis_.end(), std::greater<>());
  }
  offset_ = reduce(offset);
}

Word Coset::reduce(Word v) const {
  for (Word row : basis_) {
    const int p = std::bit_width(row) - 1;
    if ((v >> p) & 1) v ^= row;
  }
  return v;
}

bool Coset::contains(Word g) const { return (g & ~low_mask(dim_)) == 0 && reduce(g ^ offset_) == 0; }

std::vector<Word> Coset::elements() const {
  std::vector<Word> out;
  out.reserve(size());
  for (std::size_t s = 0; s < size(); ++s) {
    Word v = offset_;
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if ((s >> i) & 1) v ^= basis_[i];
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Coset> union_as_coset(const Coset& a, const Coset& b) {
  if (a.dim() != b.dim()) throw InputError("cosets of different dimensions");
  std::vector<Word> gens = a.basis();
  gens.insert(gens.end(), b.basis().begin(), b.basis().end());
  gens.push_back(a.offset() ^ b.offset());
  Coset cand(a.dim(), gens, a.offset());
  std::size_t extra = 0;
  for (Word g : b.elements())
    if (!a.contains(g)) ++extra;
  if (cand.size() != a.size() + extra) return std::nullopt;
  return cand;
}

// --- FinCosetSystem ----------------------------------------------------------

FinCosetSystem::FinCosetSystem(std::size_t n, std::size_t m, std::vector<Coset> cosets,
                               std::vector<std::size_t> f_pos, std::vector<std::size_t> g_pos)
    : n_(n), m_(m), cosets_(std::move(cosets)), f_pos_(std::move(f_pos)), g_pos_(std::move(g_pos)) {
  if (n > 24) throw InputError("f-dimension above 24");
  if (m > 64) throw InputError("g-dimension above 64");
  if (cosets_.size() != (std::size_t{1} << n))
    throw InputError("need one coset per f in 2^" + std::to_string(n));
  for (const auto& c : cosets_)
    if (c.dim() != m) throw InputError("coset dimension differs from m");
  if (f_pos_.empty() && n > 0)
    for (std::size_t i = 0; i < n; ++i) f_pos_.push_back(i);
  if (g_pos_.empty() && m > 0)
    for (std::size_t i = 0; i < m; ++i) g_pos_.push_back(i);
  if (f_pos_.size() != n || g_pos_.size() != m) throw InputError("position lists have the wrong length");
  auto increasing = [](const std::vector<std::size_t>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  };
  if (!increasing(f_pos_) || !increasing(g_pos_)) throw InputError("positions must be strictly increasing");
  for (std::size_t c = 0; c < n; ++c)
    cut_.push_back(static_cast<std::size_t>(
        std::lower_bound(g_pos_.begin(), g_pos_.end(), f_pos_[c]) - g_pos_.begin()));
}

std::size_t FinCosetSystem::forced_prefix(Word f, Word f2) const {
  if (f == f2) return m_;
  return cut_[std::countr_zero(f ^ f2)];
}

bool FinCosetSystem::coherent(Word f, Word g, Word f2, Word g2) const {
  return ((g ^ g2) & low_mask(forced_prefix(f, f2))) == 0;
}

bool is_coherent(const FinCosetSystem& c, const PairSet& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (!c.coherent(a[i].first, a[i].second, a[j].first, a[j].second)) return false;
  return true;
}

// --- ranks -------------------------------------------------------------------

CosetRanks::CosetRanks(const FinCosetSystem& c) : sys_(c) {
  const std::size_t nf = c.domain_size();
  elems_.resize(nf);
  ranks_.resize(nf);
  std::vector<std::vector<char>> alive(nf);
  for (Word f = 0; f < nf; ++f) {
    elems_[f] = c.at(f).elements();
    ranks_[f].assign(elems_[f].size(), Ordinal::infinity());
    alive[f].assign(elems_[f].size(), 1);
  }
  for (std::size_t k = 0;; ++k) {
    // prefixes[f2][t] = alive g2 in C[f2] cut to their first t bits
    std::vector<std::vector<std::unordered_set<Word>>> prefixes(nf,
                                                                std::vector<std::unordered_set<Word>>(c.m() + 1));
    for (Word f2 = 0; f2 < nf; ++f2)
      for (std::size_t i = 0; i < elems_[f2].size(); ++i)
        if (alive[f2][i])
          for (std::size_t t = 0; t <= c.m(); ++t) prefixes[f2][t].insert(elems_[f2][i] & low_mask(t));
    bool changed = false;
    auto next = alive;
    for (Word f = 0; f < nf; ++f)
      for (std::size_t i = 0; i < elems_[f].size(); ++i) {
        if (!alive[f][i]) continue;
        const Word g = elems_[f][i];
        bool ok = true;
        for (Word f2 = 0; f2 < nf && ok; ++f2) {
          if (f2 == f) continue;
          const std::size_t t = c.forced_prefix(f, f2);
          ok = prefixes[f2][t].count(g & low_mask(t)) > 0;
        }
        if (!ok) {
          next[f][i] = 0;
          ranks_[f][i] = Ordinal::fin(k);
          changed = true;
        }
      }
    if (!changed) {
      levels_ = k;
      break;
    }
    alive.swap(next);
  }
  // rnk(empty) >= k+1 iff every f has some g of rank >= k.
  Ordinal worst = Ordinal::infinity();
  for (Word f = 0; f < nf; ++f) {
    Ordinal best = Ordinal::fin(0);
    for (const auto& r : ranks_[f]) best = std::max(best, r);
    worst = std::min(worst, best);
  }
  empty_ = worst == Ordinal::infinity() ? worst : worst.successor();
}

Ordinal CosetRanks::pair_rank(Word f, Word g) const {
  if (!sys_.contains(f, g)) throw InputError("pair (" + bits_to_string(f, sys_.n()) + ", " +
                                             bits_to_string(g, sys_.m()) + ") is not in C");
  const auto& e = elems_[f];
  return ranks_[f][std::lower_bound(e.begin(), e.end(), g) - e.begin()];
}

Ordinal CosetRanks::rank(const PairSet& a) const {
  for (const auto& [f, g] : a)
    if (!sys_.contains(f, g)) throw InputError("set is not contained in C");
  if (!is_coherent(sys_, a)) throw InputError("set is not coherent");
  Ordinal r = empty_;
  if (!a.empty()) r = Ordinal::infinity();
  for (const auto& [f, g] : a) r = std::min(r, pair_rank(f, g));
  return r;
}

Ordinal rnk_coset(const FinCosetSystem& c, const PairSet& a) { return CosetRanks(c).rank(a); }

// --- constructions -----------------------------------------------------------

FinCosetSystem base_system(std::size_t n, std::size_t m) {
  if (n < 1 || m < 1) throw InputError("base system needs n, m >= 1");
  std::vector<Coset> cs;
  for (Word f = 0; f < (Word{1} << n); ++f)
    cs.push_back(Coset::single(m, f == low_mask(n) ? low_mask(m) : 0));
  return FinCosetSystem(n, m, std::move(cs));
}

FinCosetSystem zero_system(std::size_t n, std::size_t m) {
  return FinCosetSystem(n, m, std::vector<Coset>(std::size_t{1} << n, Coset::single(m, 0)));
}

FinCosetSystem group_part(const FinCosetSystem& c) {
  std::vector<Coset> cs;
  for (const auto& x : c.cosets()) cs.push_back(x.group());
  return FinCosetSystem(c.n(), c.m(), std::move(cs), c.f_pos(), c.g_pos());
}

FinCosetSystem successor(const FinCosetSystem& c) {
  const std::size_t n = c.n() + 2, m = c.m() + 2;
  std::vector<Coset> cs(std::size_t{1} << n);
  for (Word f2 = 0; f2 < cs.size(); ++f2) {
    if ((f2 & 1) == 0) {
      cs[f2] = Coset::single(m, 0);
      continue;
    }
    const Word i = (f2 >> 1) & 1, j = 1 - i, f = f2 >> 2;
    const Coset& cf = c.at(f);
    std::vector<Word> basis;
    for (Word b : cf.basis()) basis.push_back(b << 2);
    Coset a(m, basis, i);                        // i0 G[f]
    Coset b(m, basis, j | (cf.offset() << 2));   // j0 C[f]
    auto u = union_as_coset(a, b);
    if (!u) throw InvariantViolation("successor clause is not a coset");
    cs[f2] = *u;
  }
  std::vector<std::size_t> fp{0, 1}, gp{0, 1};
  for (auto p : c.f_pos()) fp.push_back(p + 2);
  for (auto p : c.g_pos()) gp.push_back(p + 2);
  return FinCosetSystem(n, m, std::move(cs), fp, gp);
}

FinCosetSystem pad_f(const FinCosetSystem& c) {
  std::vector<Coset> cs;
  for (Word f = 0; f < (Word{1} << (c.n() + 1)); ++f) cs.push_back(c.at(f & low_mask(c.n())));
  std::size_t last = 0;
  if (!c.f_pos().empty()) last = c.f_pos().back() + 1;
  if (!c.g_pos().empty()) last = std::max(last, c.g_pos().back() + 1);
  auto fp = c.f_pos();
  fp.push_back(last);
  return FinCosetSystem(c.n() + 1, c.m(), std::move(cs), fp, c.g_pos());
}

PairSet f_map(int i, const PairSet& b) {
  if (i != 0 && i != 1) throw InputError("F_i needs i in {0, 1}");
  const Word wi = static_cast<Word>(i), wj = 1 - wi;
  PairSet out;
  for (const auto& [f, g] : b) out.emplace_back(1 | (wj << 1) | (f << 2), wi | (g << 2));
  return out;
}

PairSet successor_anchor(int i, const FinCosetSystem& c) {
  if (i != 0 && i != 1) throw InputError("A_i needs i in {0, 1}");
  const Word wi = static_cast<Word>(i);
  PairSet out;
  for (Word rest = 0; rest < (Word{1} << (c.n() + 1)); ++rest) out.emplace_back(rest << 1, 0);
  for (Word f = 0; f < (Word{1} << c.n()); ++f) out.emplace_back(1 | (wi << 1) | (f << 2), wi);
  std::sort(out.begin(), out.end());
  return out;
}

// --- limits ------------------------------------------------------------------

Word LimitSystem::f_block(Word f, std::size_t k) const {
  return (f >> blocks.at(k).f_shift) & low_mask(components.at(k).n());
}

Word LimitSystem::g_block(Word g, std::size_t k) const {
  return (g >> (blocks.at(k).g_shift + 1)) & low_mask(components.at(k).m());
}

bool LimitSystem::selector(Word g, std::size_t k) const { return (g >> blocks.at(k).g_shift) & 1; }

LimitSystem limit(std::span<const FinCosetSystem> systems) {
  if (systems.empty()) throw InputError("limit needs at least one system");
  std::optional<Ordinal> prev;
  for (const auto& s : systems) {
    Ordinal r = CosetRanks(s).empty_rank();
    if (!r.is_finite()) throw InputError("component has infinite empty-set rank");
    if (prev && !(*prev < r)) throw InputError("component ranks are not strictly increasing");
    prev = r;
  }
  LimitSystem out;
  out.components.assign(systems.begin(), systems.end());
  std::size_t start = 0, fs = 0, gs = 0;
  std::vector<std::size_t> fp, gp;
  for (const auto& s : systems) {
    out.blocks.push_back({start, fs, gs});
    gp.push_back(start);
    for (auto p : s.f_pos()) fp.push_back(start + 1 + p);
    for (auto p : s.g_pos()) gp.push_back(start + 1 + p);
    std::size_t width = 0;
    if (!s.f_pos().empty()) width = s.f_pos().back() + 1;
    if (!s.g_pos().empty()) width = std::max(width, s.g_pos().back() + 1);
    start += 1 + width;
    fs += s.n();
    gs += 1 + s.m();
  }
  if (fs > 24 || gs > 64) throw CapExceeded("limit layout exceeds the word size");
  const std::size_t last = systems.size() - 1;
  std::vector<Coset> dc, hc;
  for (Word f = 0; f < (Word{1} << fs); ++f) {
    std::vector<Word> basis;
    Word offset = 0;
    for (std::size_t k = 0; k < systems.size(); ++k) {
      const auto& blk = out.blocks[k];
      const Coset& c = systems[k].at(out.f_block(f, k));
      for (Word b : c.basis()) basis.push_back(b << (blk.g_shift + 1));
      const Word with_sel = (Word{1} << blk.g_shift) | (c.offset() << (blk.g_shift + 1));
      if (k == last) offset = with_sel;
      else basis.push_back(with_sel);
    }
    dc.emplace_back(gs, basis, offset);
    hc.emplace_back(gs, basis, 0);
  }
  out.d = FinCosetSystem(fs, gs, std::move(dc), fp, gp);
  out.h = FinCosetSystem(fs, gs, std::move(hc), fp, gp);
  return out;
}

TauEvaluator::TauEvaluator(const LimitSystem& l) : l_(&l) {
  for (const auto& s : l.components) {
    c_.emplace_back(s);
    g_.emplace_back(group_part(s));
  }
}

Ordinal TauEvaluator::tau(Word f, Word g) const {
  if (!l_->d.contains(f, g)) throw InputError("pair is not in D");
  Ordinal r = Ordinal::infinity();
  for (std::size_t k = 0; k < c_.size(); ++k) {
    const auto& eng = l_->selector(g, k) ? c_[k] : g_[k];
    r = std::min(r, eng.pair_rank(l_->f_block(f, k), l_->g_block(g, k)));
  }
  return r;
}

// --- unary structure ---------------------------------------------------------

FiniteStructure to_unary_structure(const FinCosetSystem& c, const Caps& caps) {
  const std::size_t bits = c.n() + c.m();
  if (bits >= 20 || (std::size_t{1} << bits) > caps.tuples)
    throw CapExceeded("unary structure exceeds the universe cap");
  const std::size_t size = std::size_t{1} << bits;
  Signature sig;
  for (std::size_t k = 0; k < c.n(); ++k) sig.add_relation("E_p" + std::to_string(k), 2);
  for (std::size_t k = 0; k < c.m(); ++k) sig.add_relation("E_q" + std::to_string(k), 2);
  sig.add_relation("C", 1);
  FiniteStructure out(sig, size);
  auto split = [&](Element x) { return std::make_pair(Word(x) >> c.m(), Word(x) & low_mask(c.m())); };
  auto add_classes = [&](std::size_t rel, auto key) {
    std::map<Word, std::vector<Element>> classes;
    for (Element x = 0; x < size; ++x) classes[key(x)].push_back(x);
    for (const auto& [k, cls] : classes)
      for (Element x : cls)
        for (Element y : cls) {
          Element t[2] = {x, y};
          out.add(rel, t);
        }
  };
  for (std::size_t k = 0; k < c.n(); ++k)
    add_classes(k, [&](Element x) { return (split(x).first >> k) & 1; });
  for (std::size_t k = 0; k < c.m(); ++k) {
    Word fmask = 0;
    for (std::size_t i = 0; i < c.n(); ++i)
      if (c.f_pos()[i] <= c.g_pos()[k]) fmask |= Word{1} << i;
    add_classes(c.n() + k, [&, fmask](Element x) {
      auto [f, g] = split(x);
      return ((f & fmask) << 1) | ((g >> k) & 1);
    });
  }
  const std::size_t crel = c.n() + c.m();
  for (Element x = 0; x < size; ++x) {
    auto [f, g] = split(x);
    if (c.contains(f, g)) {
      Element t[1] = {x};
      out.add(crel, t);
    }
  }
  return out;
}

}  // namespace scottlab
