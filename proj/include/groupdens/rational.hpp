#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace groupdens {

// Exact arbitrary-precision rational. Canonical form (lowest terms,
// positive denominator) is maintained by the backend on every operation.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(long long p, long long q = 1) {
  if (q == 0) throw std::invalid_argument("rational with zero denominator");
  return Rat(p, q);
}

// Serialized form is always "p/q" with q > 0, e.g. "0/1", "-3/2".
inline std::string rat_str(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(s));
    BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rat(p, q);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

inline BigInt rat_ceil(const Rat& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) < numerator(r)) ++q;
  return q;
}

inline BigInt rat_floor(const Rat& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) > numerator(r)) --q;
  return q;
}

inline long long to_ll(const BigInt& v) { return static_cast<long long>(v); }

}  // namespace groupdens
