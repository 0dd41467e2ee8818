#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace scottlab {

// Rank values: naturals, w*a+b with a >= 1, and a top element.
class Ordinal {
 public:
  enum class Kind : std::uint8_t { Finite, Omega, Infinite };

  constexpr Ordinal() = default;

  static constexpr Ordinal fin(std::uint64_t n) { return Ordinal(Kind::Finite, 0, n); }
  static Ordinal omega(std::uint64_t a, std::uint64_t b = 0);
  static constexpr Ordinal infinity() { return Ordinal(Kind::Infinite, 0, 0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  constexpr bool is_infinite() const { return kind_ == Kind::Infinite; }

  // Finite value; throws unless is_finite().
  std::uint64_t value() const;
  constexpr std::uint64_t omega_coefficient() const { return a_; }
  constexpr std::uint64_t offset() const { return b_; }

  Ordinal successor() const;

  // Ordinal sum (left argument first). Infinity absorbs everything.
  friend Ordinal operator+(const Ordinal& x, const Ordinal& y);
  friend Ordinal operator+(const Ordinal& x, std::uint64_t n) { return x + fin(n); }

  friend constexpr bool operator==(const Ordinal&, const Ordinal&) = default;
  friend constexpr std::strong_ordering operator<=>(const Ordinal& x, const Ordinal& y) {
    if (x.kind_ != y.kind_) return x.kind_ <=> y.kind_;
    if (x.a_ != y.a_) return x.a_ <=> y.a_;
    return x.b_ <=> y.b_;
  }

  // "Fin k", "w*a+b" or "infty".
  std::string to_string() const;
  static Ordinal parse(std::string_view text);

 private:
  constexpr Ordinal(Kind k, std::uint64_t a, std::uint64_t b) : kind_(k), a_(a), b_(b) {}

  Kind kind_ = Kind::Finite;
  std::uint64_t a_ = 0;
  std::uint64_t b_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Ordinal& o);

}  // namespace scottlab
