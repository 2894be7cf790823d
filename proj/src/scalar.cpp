#include "noise_lattice/scalar.hpp"

#include <charconv>
#include <cstdlib>
#include <system_error>

namespace noise_lattice {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Rational parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  Rational v{boost::multiprecision::mpz_int(std::string(s))};
  return negative ? Rational(-v) : v;
}

Rational pow10(long e) {
  Rational r(1);
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size())
      throw ParseError("bad exponent in '" + std::string(s) + "'");
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot), frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty()))
      throw ParseError("not a number: '" + std::string(s) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw ParseError("not a number: '" + std::string(s) + "'");
    digits = std::string(s);
  }
  Rational v{boost::multiprecision::mpz_int(digits)};
  if (exponent >= 0)
    v *= pow10(exponent);
  else
    v /= pow10(-exponent);
  return negative ? Rational(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_integer(trim(s.substr(0, slash)));
    Rational den = parse_integer(trim(s.substr(slash + 1)));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  return parse_decimal(s);
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw ParseError("non-finite number");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw ParseError("cannot format number");
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

std::string to_string(const Rational& v) { return v.str(); }

Backend parse_backend(std::string_view name) {
  if (name == "rational" || name == "exact") return Backend::rational;
  if (name == "float" || name == "double") return Backend::floating;
  throw ParseError("unknown backend '" + std::string(name) + "' (expected rational|float)");
}

std::string_view backend_name(Backend b) { return b == Backend::rational ? "rational" : "float"; }

Backend backend_from_env() {
  const char* env = std::getenv("NOISE_LATTICE_MODE");
  if (env == nullptr || *env == '\0') return Backend::rational;
  return parse_backend(env);
}

}  // namespace noise_lattice
