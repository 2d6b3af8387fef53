#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crq {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational arithmetic everywhere; the coherence boundaries this library
// decides (z = x + y - 1 and friends) are knife-edge, so no floating point.
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_probability(const Rational& r) { return r >= 0 && r <= 1; }

// Accepts "n", "n/d", and exact decimal literals ("0.25", "-1.5", ".5").
inline Rational parse_rational(std::string_view s) {
  auto fail = [&] { throw ParseError("invalid rational literal: '" + std::string(s) + "'"); };
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  };
  skip_ws();
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  auto read_digits = [&]() -> std::string {
    std::string out;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') out.push_back(s[i++]);
    return out;
  };
  std::string ip = read_digits();
  Rational value;
  if (i < s.size() && s[i] == '/') {
    ++i;
    if (ip.empty()) fail();
    std::string dp = read_digits();
    if (dp.empty()) fail();
    BigInt den(dp);
    if (den == 0) fail();
    value = Rational(BigInt(ip), den);
  } else if (i < s.size() && s[i] == '.') {
    ++i;
    std::string fp = read_digits();
    if (ip.empty() && fp.empty()) fail();
    BigInt scale = 1;
    for (size_t k = 0; k < fp.size(); ++k) scale *= 10;
    BigInt num = BigInt(ip.empty() ? "0" : ip) * scale + BigInt(fp.empty() ? "0" : fp);
    value = Rational(num, scale);
  } else {
    if (ip.empty()) fail();
    value = Rational(BigInt(ip));
  }
  skip_ws();
  if (i != s.size()) fail();
  return neg ? Rational(-value) : value;
}

// Canonical wire encoding: "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rational_pow2(int e) {
  // 2^e for possibly negative e
  if (e >= 0) {
    BigInt n = BigInt(1) << e;
    return Rational(n);
  }
  BigInt d = BigInt(1) << (-e);
  return Rational(BigInt(1), d);
}

}  // namespace crq
