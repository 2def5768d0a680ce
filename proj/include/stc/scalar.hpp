#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stc {

using Rat = boost::multiprecision::cpp_rational;

// Element of Q(sqrt(3)), used for fixtures whose natural coefficients
// involve sqrt(3) (Cartan's isoparametric cubic, su(3) invariant tensors).
struct Q3 {
  Rat a{0};  // rational part
  Rat b{0};  // coefficient of sqrt(3)

  Q3() = default;
  Q3(int v) : a(v) {}
  Q3(Rat v) : a(std::move(v)) {}
  Q3(Rat ra, Rat rb) : a(std::move(ra)), b(std::move(rb)) {}

  static Q3 sqrt3(Rat coeff = Rat(1)) { return Q3(Rat(0), std::move(coeff)); }

  bool is_zero() const { return a == 0 && b == 0; }

  friend Q3 operator+(const Q3& x, const Q3& y) { return Q3(x.a + y.a, x.b + y.b); }
  friend Q3 operator-(const Q3& x, const Q3& y) { return Q3(x.a - y.a, x.b - y.b); }
  friend Q3 operator-(const Q3& x) { return Q3(-x.a, -x.b); }
  friend Q3 operator*(const Q3& x, const Q3& y) {
    return Q3(x.a * y.a + 3 * x.b * y.b, x.a * y.b + x.b * y.a);
  }
  friend Q3 operator/(const Q3& x, const Q3& y) {
    Rat den = y.a * y.a - 3 * y.b * y.b;
    if (den == 0) throw std::domain_error("division by zero in Q(sqrt3)");
    return Q3((x.a * y.a - 3 * x.b * y.b) / den, (x.b * y.a - x.a * y.b) / den);
  }
  Q3& operator+=(const Q3& y) { *this = *this + y; return *this; }
  Q3& operator-=(const Q3& y) { *this = *this - y; return *this; }
  Q3& operator*=(const Q3& y) { *this = *this * y; return *this; }
  Q3& operator/=(const Q3& y) { *this = *this / y; return *this; }
  friend bool operator==(const Q3& x, const Q3& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const Q3& x, const Q3& y) { return !(x == y); }
};

template <class T> struct scalar_traits;

template <> struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double from_long(long v) { return double(v); }
  static double from_ratio(long p, long q) { return double(p) / double(q); }
  static double to_double(double v) { return v; }
  static bool is_zero(double v) { return v == 0.0; }
};

template <> struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static Rat zero() { return Rat(0); }
  static Rat from_long(long v) { return Rat(v); }
  static Rat from_ratio(long p, long q) { return Rat(p) / Rat(q); }
  static double to_double(const Rat& v) { return v.convert_to<double>(); }
  static bool is_zero(const Rat& v) { return v == 0; }
};

template <> struct scalar_traits<Q3> {
  static constexpr bool exact = true;
  static Q3 zero() { return Q3(); }
  static Q3 from_long(long v) { return Q3(Rat(v)); }
  static Q3 from_ratio(long p, long q) { return Q3(Rat(p) / Rat(q)); }
  static double to_double(const Q3& v) {
    return v.a.convert_to<double>() + 1.7320508075688772935 * v.b.convert_to<double>();
  }
  static bool is_zero(const Q3& v) { return v.is_zero(); }
};

template <class T> double to_double(const T& v) { return scalar_traits<T>::to_double(v); }
template <class T> bool is_zero(const T& v) { return scalar_traits<T>::is_zero(v); }

// Parses "p/q" or a plain integer string into a rational.
inline Rat parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(boost::multiprecision::cpp_int(s));
  boost::multiprecision::cpp_int p(s.substr(0, slash)), q(s.substr(slash + 1));
  if (q == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rat(p) / Rat(q);
}

inline std::string rational_to_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace stc
