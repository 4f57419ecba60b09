#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace rtg {

using Rational = mpq_class;

// Accepts "p/q", integers and plain decimals ("0.25"). Decimals are read exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

template <class T>
T from_rational(const Rational& r);
template <>
inline double from_rational<double>(const Rational& r) {
  return r.get_d();
}
template <>
inline Rational from_rational<Rational>(const Rational& r) {
  return r;
}

template <class T>
inline T from_int(long v) {
  return T(v);
}

}  // namespace rtg
