#include "scottlab/ordinal.hpp"

#include <charconv>

#include "scottlab/error.hpp"

namespace scottlab {

Ordinal Ordinal::omega(std::uint64_t a, std::uint64_t b) {
  if (a == 0) throw InputError("omega coefficient must be at least 1");
  return Ordinal(Kind::Omega, a, b);
}

std::uint64_t Ordinal::value() const {
  if (!is_finite()) throw InputError("ordinal " + to_string() + " is not finite");
  return b_;
}

Ordinal Ordinal::successor() const {
  if (is_infinite()) return *this;
  return Ordinal(kind_, a_, b_ + 1);
}

Ordinal operator+(const Ordinal& x, const Ordinal& y) {
  if (x.is_infinite() || y.is_infinite()) return Ordinal::infinity();
  if (y.is_finite()) return Ordinal(x.kind_, x.a_, x.b_ + y.b_);
  // y = w*c+d: the finite part of x is absorbed.
  return Ordinal(Ordinal::Kind::Omega, x.a_ + y.a_, y.b_);
}

std::string Ordinal::to_string() const {
  switch (kind_) {
    case Kind::Finite:
      return "Fin " + std::to_string(b_);
    case Kind::Omega:
      return "w*" + std::to_string(a_) + "+" + std::to_string(b_);
    case Kind::Infinite:
      break;
  }
  return "infty";
}

namespace {

std::uint64_t parse_nat(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InputError("cannot parse ordinal '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Ordinal Ordinal::parse(std::string_view text) {
  if (text == "infty") return infinity();
  if (text.starts_with("Fin ")) return fin(parse_nat(text.substr(4), text));
  if (text.starts_with("w*")) {
    auto rest = text.substr(2);
    auto plus = rest.find('+');
    if (plus == std::string_view::npos) return omega(parse_nat(rest, text), 0);
    return omega(parse_nat(rest.substr(0, plus), text), parse_nat(rest.substr(plus + 1), text));
  }
  throw InputError("cannot parse ordinal '" + std::string(text) + "'");
}

std::ostream& operator<<(std::ostream& os, const Ordinal& o) { return os << o.to_string(); }

}  // namespace scottlab
