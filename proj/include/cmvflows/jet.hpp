#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>
#include <vector>

namespace cmvflows {

// Scalar hooks shared by plain complex numbers and jets.  Generic code calls
// these instead of the std:: names so the same routine runs at complex,
// first-derivative and second-derivative level.
inline std::complex<double> cconj(const std::complex<double>& z) { return std::conj(z); }
inline std::complex<double> csqrt(const std::complex<double>& z) { return std::sqrt(z); }
inline std::complex<double> clog(const std::complex<double>& z) { return std::log(z); }
inline double cabs(const std::complex<double>& z) { return std::abs(z); }
inline std::complex<double> cvalue(const std::complex<double>& z) { return z; }

// Forward-mode derivative carrier over the real coordinates of the state.
// The gradient is stored against a caller-chosen coordinate list; an empty
// gradient means "constant", and binary operations broadcast it.  Nesting
// Jet<Jet<complex>> yields exact second derivatives, which the bracket
// machinery uses for Jacobi-identity checks.
template <class T>
struct Jet {
  T v{};
  std::vector<T> g;

  Jet() = default;
  template <class C>
    requires std::is_constructible_v<T, C>
  Jet(const C& x) : v(x) {}  // NOLINT(google-explicit-constructor)
  Jet(T x, std::vector<T> grad) : v(std::move(x)), g(std::move(grad)) {}

  static Jet constant(const T& x) { return Jet(x); }
};

namespace jet_detail {
template <class T>
std::size_t bdim(const Jet<T>& a, const Jet<T>& b) {
  return a.g.size() > b.g.size() ? a.g.size() : b.g.size();
}
template <class T>
T gat(const Jet<T>& a, std::size_t k) {
  return k < a.g.size() ? a.g[k] : T(0.0);
}
}  // namespace jet_detail

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r(a.v + b.v);
  std::size_t n = jet_detail::bdim(a, b);
  r.g.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.g[k] = jet_detail::gat(a, k) + jet_detail::gat(b, k);
  return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r(a.v - b.v);
  std::size_t n = jet_detail::bdim(a, b);
  r.g.resize(n);
  for (std::size_t k = 0; k < n; ++k) r.g[k] = jet_detail::gat(a, k) - jet_detail::gat(b, k);
  return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a) {
  Jet<T> r(-a.v);
  r.g.resize(a.g.size());
  for (std::size_t k = 0; k < a.g.size(); ++k) r.g[k] = -a.g[k];
  return r;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r(a.v * b.v);
  std::size_t n = jet_detail::bdim(a, b);
  r.g.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    r.g[k] = jet_detail::gat(a, k) * b.v + a.v * jet_detail::gat(b, k);
  return r;
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  Jet<T> r(a.v / b.v);
  std::size_t n = jet_detail::bdim(a, b);
  r.g.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    r.g[k] = (jet_detail::gat(a, k) - r.v * jet_detail::gat(b, k)) / b.v;
  return r;
}

// mixed scalar forms; the scalar is a derivative-free constant
template <class T, class C>
  requires std::is_constructible_v<T, C>
Jet<T> operator+(const Jet<T>& a, const C& c) { return a + Jet<T>(T(c)); }
template <class T, class C>
  requires std::is_constructible_v<T, C>
Jet<T> operator+(const C& c, const Jet<T>& a) { return Jet<T>(T(c)) + a; }
template <class T, class C>
  requires std::is_constructible_v<T, C>
Jet<T> operator-(const Jet<T>& a, const C& c) { return a - Jet<T>(T(c)); }
template <class T, class C>
  requires std::is_constructible_v<T, C>
Jet<T> operator-(const C& c, const Jet<T>& a) { return Jet<T>(T(c)) - a; }
template <class T, class C>
  requires std::is_constructible_v<T, C>
Jet<T> operator*(const Jet<T>& a, const C& c) { return a * Jet<T>(T(c)); }
template <class T, class C>
  requires std::is_constructible_v<T, C>
Jet<T> operator*(const C& c, const Jet<T>& a) { return Jet<T>(T(c)) * a; }
template <class T, class C>
  requires std::is_constructible_v<T, C>
Jet<T> operator/(const Jet<T>& a, const C& c) { return a / Jet<T>(T(c)); }
template <class T, class C>
  requires std::is_constructible_v<T, C>
Jet<T> operator/(const C& c, const Jet<T>& a) { return Jet<T>(T(c)) / a; }

template <class T>
Jet<T> cconj(const Jet<T>& a) {
  Jet<T> r(cconj(a.v));
  r.g.resize(a.g.size());
  for (std::size_t k = 0; k < a.g.size(); ++k) r.g[k] = cconj(a.g[k]);
  return r;
}

template <class T>
Jet<T> csqrt(const Jet<T>& a) {
  Jet<T> r(csqrt(a.v));
  T half_inv = T(0.5) / r.v;
  r.g.resize(a.g.size());
  for (std::size_t k = 0; k < a.g.size(); ++k) r.g[k] = a.g[k] * half_inv;
  return r;
}

template <class T>
Jet<T> clog(const Jet<T>& a) {
  Jet<T> r(clog(a.v));
  r.g.resize(a.g.size());
  for (std::size_t k = 0; k < a.g.size(); ++k) r.g[k] = a.g[k] / a.v;
  return r;
}

template <class T>
double cabs(const Jet<T>& a) { return cabs(a.v); }

template <class T>
std::complex<double> cvalue(const Jet<T>& a) { return cvalue(a.v); }

// real/imag parts as scalars of the same level
template <class S>
S sreal(const S& x) { return (x + cconj(x)) * 0.5; }
template <class S>
S simag(const S& x) { return (x - cconj(x)) * std::complex<double>(0.0, -0.5); }

using Jet1 = Jet<std::complex<double>>;
using Jet2 = Jet<Jet1>;

}  // namespace cmvflows
