#include "rtg/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "rtg/error.hpp"

namespace rtg {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Rational parse_decimal(const std::string& s) {
  // [-]digits[.digits][e[-]digits]
  size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool any = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any = true;
      if (dot) --scale;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw SpecError("not a number: '" + s + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::string ex = s.substr(i);
    if (ex.empty()) throw SpecError("bad exponent in '" + s + "'");
    size_t used = 0;
    long e = std::stol(ex, &used);
    if (used != ex.size()) throw SpecError("bad exponent in '" + s + "'");
    scale += e;
    i = s.size();
  }
  if (i != s.size()) throw SpecError("trailing characters in '" + s + "'");
  mpz_class num(digits, 10);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale < 0 ? Rational(num, pow10) : Rational(num * pow10);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw SpecError("empty rational");
  auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s);
  Rational p = parse_decimal(s.substr(0, slash));
  Rational q = parse_decimal(s.substr(slash + 1));
  if (q == 0) throw SpecError("zero denominator in '" + s + "'");
  return Rational(p / q);
}

std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace rtg
