#pragma once

// Binary tower L_0 = F_2 ⊂ L_1 ⊂ ... with L_{m+1} = L_m[y_m]/(y_m^2 + y_m + c_m).
// An element of L_m is stored as 2^m coordinates in the monomial basis
// y_0^{e_0} ... y_{m-1}^{e_{m-1}}; bit k holds the coordinate of the monomial
// whose exponent vector is the binary expansion of k. Embedding L_m into L_{m+1}
// keeps the bits and zero-fills the upper half.
//
// c_m is the smallest basis monomial of L_m with absolute trace 1, which is
// y_0 y_1 ... y_{m-1} (bit 2^m - 1); c_0 = 1, so L_1 = F_4 with w = y_0.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "borelq/errors.hpp"

namespace borelq {

class FieldElement {
 public:
  // Coordinates are packed into one 64-bit word, so L_6 = F_{2^64} is the top.
  static constexpr int kMaxLevel = 6;

  constexpr FieldElement() = default;

  static FieldElement from_bits(std::uint64_t bits, int level) {
    check_level(level);
    if (level < kMaxLevel && (bits >> width(level)) != 0) {
      throw InvalidInput("bit vector wider than level " + std::to_string(level));
    }
    FieldElement e;
    e.bits_ = bits;
    e.level_ = level;
    return e;
  }
  static FieldElement zero(int level = 0) { return from_bits(0, level); }
  static FieldElement one(int level = 0) { return from_bits(1, level); }
  static FieldElement omega() { return from_bits(2, 1); }
  // The generator y_m of L_{m+1} over L_m.
  static FieldElement generator(int m) {
    check_level(m + 1);
    return from_bits(std::uint64_t{1} << width(m), m + 1);
  }

  int level() const { return level_; }
  std::uint64_t bits() const { return bits_; }
  bool is_zero() const { return bits_ == 0; }
  bool is_one() const { return bits_ == 1; }

  // Smallest level whose field contains this element.
  int min_level() const {
    int m = 0;
    while (m < kMaxLevel && (bits_ >> width(m)) != 0) ++m;
    return m;
  }

  static constexpr unsigned width(int level) { return 1u << level; }
  static void check_level(int level) {
    if (level < 0) throw InvalidInput("negative tower level");
    if (level > kMaxLevel) throw LevelCapExceeded(level);
  }

  // Values compare equal across levels because embedding keeps the bits.
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) {
    return !(a == b);
  }

 private:
  std::uint64_t bits_ = 0;
  int level_ = 0;
};

namespace detail {

inline std::uint64_t low_mask(unsigned w) {
  return w >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << w) - 1);
}

template <class Sub>
std::uint64_t karatsuba_step(std::uint64_t a, std::uint64_t b, int level, Sub sub) {
  const unsigned half = FieldElement::width(level - 1);
  const std::uint64_t mask = low_mask(half);
  const std::uint64_t a0 = a & mask, a1 = a >> half;
  const std::uint64_t b0 = b & mask, b1 = b >> half;
  const std::uint64_t lo = sub(a0, b0, level - 1);
  const std::uint64_t hi = sub(a1, b1, level - 1);
  // (a0 + a1 y)(b0 + b1 y) with y^2 = y + c
  const std::uint64_t mid = sub(a0 ^ a1, b0 ^ b1, level - 1) ^ lo;
  const std::uint64_t c = std::uint64_t{1} << (half - 1);
  const std::uint64_t constant = lo ^ sub(hi, c, level - 1);
  return constant | (mid << half);
}

inline std::uint64_t mul_bits_plain(std::uint64_t a, std::uint64_t b, int level) {
  if (level == 0) return a & b & 1;
  return karatsuba_step(a, b, level, mul_bits_plain);
}

struct SmallTable {
  std::array<std::uint8_t, 256 * 256> prod{};
  SmallTable() {
    for (unsigned a = 0; a < 256; ++a)
      for (unsigned b = 0; b < 256; ++b)
        prod[a * 256 + b] = static_cast<std::uint8_t>(mul_bits_plain(a, b, 3));
  }
};

inline const SmallTable& small_table() {
  static const SmallTable table;
  return table;
}

inline std::uint64_t mul_bits(std::uint64_t a, std::uint64_t b, int level) {
  if (a == 0 || b == 0) return 0;
  if (a == 1) return b;
  if (b == 1) return a;
  // Lower levels embed in L_3, so the level-3 table serves them too.
  if (level <= 3) return small_table().prod[a * 256 + b];
  return karatsuba_step(a, b, level, mul_bits);
}

}  // namespace detail

inline FieldElement embed(const FieldElement& a, int target_level) {
  FieldElement::check_level(target_level);
  if (target_level < FieldElement::kMaxLevel &&
      (a.bits() >> FieldElement::width(target_level)) != 0) {
    throw NotInSubfield("element does not lie in level " + std::to_string(target_level));
  }
  return FieldElement::from_bits(a.bits(), target_level);
}

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  // In characteristic 2, addition is XOR.
  return FieldElement::from_bits(a.bits() ^ b.bits(), std::max(a.level(), b.level()));
}
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + b; }

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const int level = std::max(a.level(), b.level());
  return FieldElement::from_bits(detail::mul_bits(a.bits(), b.bits(), level), level);
}

inline FieldElement& operator+=(FieldElement& a, const FieldElement& b) { return a = a + b; }
inline FieldElement& operator*=(FieldElement& a, const FieldElement& b) { return a = a * b; }

inline FieldElement add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement square(const FieldElement& a) { return a * a; }

// a^(2^k)
inline FieldElement frobenius(FieldElement a, unsigned k) {
  for (unsigned s = 0; s < k; ++s) a = a * a;
  return a;
}

// a^(2^N - 2) with N = 2^level, computed as the product of a^(2^k) for k = 1..N-1.
inline FieldElement inv(const FieldElement& a) {
  if (a.is_zero()) throw DivisionByZero();
  const unsigned n = FieldElement::width(a.level());
  FieldElement result = FieldElement::one(a.level());
  FieldElement s = a;
  for (unsigned k = 1; k < n; ++k) {
    s = s * s;
    result = result * s;
  }
  return result;
}

inline FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * inv(b); }

inline FieldElement sqrt(const FieldElement& a) {
  return frobenius(a, FieldElement::width(a.level()) - 1);
}

inline int trace_to_f2(const FieldElement& a) {
  const unsigned n = FieldElement::width(a.level());
  FieldElement s = a;
  FieldElement acc = a;
  for (unsigned k = 1; k < n; ++k) {
    s = s * s;
    acc = acc + s;
  }
  return static_cast<int>(acc.bits() & 1);
}

namespace detail {

// Solve t^2 + t = g inside L_level by elimination over the bit basis.
// Returns false when g is outside the image (absolute trace 1).
inline bool as_solve_at_level(std::uint64_t g, int level, std::uint64_t& out) {
  const unsigned n = FieldElement::width(level);
  std::array<std::uint64_t, 64> basis{};
  std::array<std::uint64_t, 64> comb{};
  std::array<bool, 64> used{};
  for (unsigned k = 0; k < n; ++k) {
    const std::uint64_t e = std::uint64_t{1} << k;
    std::uint64_t v = mul_bits(e, e, level) ^ e;
    std::uint64_t c = e;
    for (int p = 63; p >= 0 && v != 0; --p) {
      if (((v >> p) & 1) == 0) continue;
      if (!used[p]) {
        used[p] = true;
        basis[p] = v;
        comb[p] = c;
        v = 0;
        break;
      }
      v ^= basis[p];
      c ^= comb[p];
    }
  }
  std::uint64_t c = 0;
  for (int p = 63; p >= 0 && g != 0; --p) {
    if (((g >> p) & 1) == 0) continue;
    if (!used[p]) return false;
    g ^= basis[p];
    c ^= comb[p];
  }
  if (g != 0) return false;
  // The two roots differ by 1; pick the one with a zero constant coordinate.
  out = c & ~std::uint64_t{1};
  return true;
}

}  // namespace detail

inline FieldElement artin_schreier_solve(const FieldElement& g) {
  const int m = g.level();
  std::uint64_t t = 0;
  if (detail::as_solve_at_level(g.bits(), m, t)) return FieldElement::from_bits(t, m);
  // One level up: t = y_m + s with s^2 + s = g + c_m, which has trace 0.
  FieldElement::check_level(m + 1);
  const std::uint64_t c = std::uint64_t{1} << (FieldElement::width(m) - 1);
  std::uint64_t s = 0;
  if (!detail::as_solve_at_level(g.bits() ^ c, m, s)) {
    throw std::logic_error("Artin-Schreier fallback failed");
  }
  return FieldElement::generator(m) + FieldElement::from_bits(s, m + 1);
}

// Canonical text: aliases 0, 1, w, otherwise 0b<bits>@m at the smallest level,
// digits little-endian (first digit is the coordinate of 1).
inline std::string bits_text(const FieldElement& a, int level) {
  std::string s = "0b";
  const unsigned n = FieldElement::width(level);
  for (unsigned k = 0; k < n; ++k) s += ((a.bits() >> k) & 1) ? '1' : '0';
  return s + "@" + std::to_string(level);
}

inline std::string to_string(const FieldElement& a) {
  if (a.bits() == 0) return "0";
  if (a.bits() == 1) return "1";
  if (a.bits() == 2) return "w";
  return bits_text(a, a.min_level());
}

// Level-preserving text: aliases only when they denote the stored level exactly.
inline std::string to_string_exact(const FieldElement& a) {
  if (a.level() == 0) return a.is_zero() ? "0" : "1";
  if (a.level() == 1 && a.bits() == 2) return "w";
  return bits_text(a, a.level());
}

inline FieldElement parse_field_element(std::string_view text, std::size_t offset = 0) {
  if (text == "0") return FieldElement::zero();
  if (text == "1") return FieldElement::one();
  if (text == "w") return FieldElement::omega();
  if (text.size() < 2 || text.substr(0, 2) != "0b") {
    throw ParseError("expected field element", offset);
  }
  const auto at = text.find('@');
  if (at == std::string_view::npos) throw ParseError("missing '@level'", offset + text.size());
  const auto digits = text.substr(2, at - 2);
  const auto level_text = text.substr(at + 1);
  if (level_text.empty()) throw ParseError("missing level", offset + at + 1);
  int level = 0;
  for (std::size_t k = 0; k < level_text.size(); ++k) {
    const char ch = level_text[k];
    if (ch < '0' || ch > '9') throw ParseError("bad level digit", offset + at + 1 + k);
    level = level * 10 + (ch - '0');
    if (level > 99) break;
  }
  if (level > FieldElement::kMaxLevel) throw LevelCapExceeded(level);
  if (digits.size() != FieldElement::width(level)) {
    throw ParseError("expected " + std::to_string(FieldElement::width(level)) +
                         " digits for level " + std::to_string(level),
                     offset + 2);
  }
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (digits[k] == '1') {
      bits |= std::uint64_t{1} << k;
    } else if (digits[k] != '0') {
      throw ParseError("bad binary digit", offset + 2 + k);
    }
  }
  return FieldElement::from_bits(bits, level);
}

}  // namespace borelq
