#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace noise_lattice {

/// Exact rational scalar. Expression templates are off so the type behaves
/// like a plain value inside Eigen kernels.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Backend { rational, floating };

// ---------------------------------------------------------------------------
// Errors

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Per-backend numeric policy. Every rank or equality decision goes through
// one of these; the two are never mixed inside a computation.

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Backend backend = Backend::rational;
  static bool is_zero(const Rational& v) { return v == 0; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static bool less_equal(const Rational& a, const Rational& b) { return a <= b; }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr Backend backend = Backend::floating;
  static constexpr double tol = 1e-9;
  static bool is_zero(double v) { return std::abs(v) < tol; }
  static bool equal(double a, double b) { return std::abs(a - b) < tol; }
  static bool less_equal(double a, double b) { return a <= b + tol; }
  static double to_double(double v) { return v; }
};

template <class Scalar>
bool is_zero_vec(const Vec<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!ScalarTraits<Scalar>::is_zero(v[i])) return false;
  return true;
}

template <class Scalar>
bool equal_vec(const Vec<Scalar>& a, const Vec<Scalar>& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!ScalarTraits<Scalar>::equal(a[i], b[i])) return false;
  return true;
}

/// Parses "p/q", an integer, or a decimal literal ("0.125", "1e-3") exactly.
Rational parse_rational(std::string_view text);

/// Shortest round-trip decimal of `v`, parsed exactly ("0.1" -> 1/10).
Rational rational_from_double(double v);

std::string to_string(const Rational& v);

template <class Scalar>
Scalar scalar_from_rational(const Rational& r) {
  if constexpr (ScalarTraits<Scalar>::exact)
    return r;
  else
    return r.convert_to<double>();
}

/// Backend named by NOISE_LATTICE_MODE, rational when unset.
Backend backend_from_env();
Backend parse_backend(std::string_view name);
std::string_view backend_name(Backend b);

}  // namespace noise_lattice
