#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace corrlab {

/// Exact rational scalar used by the exact arithmetic mode.
using Rational = mpq_class;

/// Raised on malformed or inconsistent caller input.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a computation would exceed a configured size cap.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) {
    throw InputError("not a rational: '" + text + "'");
  }
  if (q.get_den() == 0) {
    throw InputError("zero denominator: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

// Scalar-mode constants. Exact mode compares with a zero tolerance so the
// same templated comparisons serve both modes.
template <class T>
struct ArithTraits;

template <>
struct ArithTraits<Rational> {
  static constexpr bool exact = true;
  static Rational default_epsilon() { return Rational(0); }
  static Rational pivot_tolerance() { return Rational(0); }
  static Rational feasibility_tolerance() { return Rational(0); }
  static const char* mode_name() { return "exact"; }
};

template <>
struct ArithTraits<double> {
  static constexpr bool exact = false;
  static double default_epsilon() { return 1e-9; }
  static double pivot_tolerance() { return 1e-11; }
  static double feasibility_tolerance() { return 1e-8; }
  static const char* mode_name() { return "float"; }
};

template <class T>
T abs_value(const T& x) {
  if (x < T(0)) {
    T neg(x);
    neg = -neg;
    return neg;
  }
  return x;
}

template <class T>
bool approx_equal(const T& a, const T& b, const T& eps) {
  T diff = a - b;  // materializes gmp expression templates
  return abs_value(diff) <= eps;
}

}  // namespace corrlab
