#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hkfold/errors.hpp"

namespace hkfold {

using std::atan2;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;

namespace detail {
inline std::string describe(const char* what, const char* cond, double v) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": argument " << v << " " << cond;
  return os.str();
}
}  // namespace detail

/// Second-order forward jet in N variables.
///
/// `order` records how many derivative levels are exact: 2 means value,
/// gradient and Hessian; 1 means value and gradient (the Hessian is NaN);
/// 0 means value only. Taking `derivative(i)` lowers the order by one, and
/// arithmetic keeps the smaller order of its operands. This is what lets
/// a form whose coefficients are first derivatives still be differentiated
/// once more by `d`.
template <int N>
struct Jet {
  static constexpr int dim = N;

  double value = 0.0;
  std::array<double, N> grad{};
  std::array<double, N * N> hess{};
  int order = 2;

  Jet() = default;
  Jet(double v) : value(v) {}  // NOLINT: constants promote implicitly

  static Jet variable(double v, int i) {
    Jet j(v);
    j.grad[i] = 1.0;
    return j;
  }

  double h(int i, int k) const { return hess[i * N + k]; }

  /// Partial derivative as a jet of one lower order.
  Jet derivative(int i) const {
    Jet r;
    r.order = order - 1;
    if (r.order < 0) throw DomainError("derivative of a value-only jet");
    r.value = grad[i];
    if (r.order >= 1) {
      for (int k = 0; k < N; ++k) r.grad[k] = h(i, k);
    } else {
      r.grad.fill(std::numeric_limits<double>::quiet_NaN());
    }
    r.hess.fill(std::numeric_limits<double>::quiet_NaN());
    return r;
  }

  /// Chain rule for a scalar function with f(value), f', f''.
  Jet compose(double f0, double f1, double f2) const {
    Jet r;
    r.order = order;
    r.value = f0;
    for (int i = 0; i < N; ++i) r.grad[i] = f1 * grad[i];
    for (int i = 0; i < N; ++i)
      for (int k = i; k < N; ++k) {
        const double v = f1 * h(i, k) + f2 * grad[i] * grad[k];
        r.hess[i * N + k] = v;
        r.hess[k * N + i] = v;
      }
    return r;
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.order = std::min(a.order, b.order);
    r.value = a.value + b.value;
    for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] + b.grad[i];
    for (int i = 0; i < N * N; ++i) r.hess[i] = a.hess[i] + b.hess[i];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    r.order = std::min(a.order, b.order);
    r.value = a.value - b.value;
    for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] - b.grad[i];
    for (int i = 0; i < N * N; ++i) r.hess[i] = a.hess[i] - b.hess[i];
    return r;
  }
  friend Jet operator-(const Jet& a) {
    Jet r = a;
    r.value = -a.value;
    for (auto& g : r.grad) g = -g;
    for (auto& h : r.hess) h = -h;
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.order = std::min(a.order, b.order);
    r.value = a.value * b.value;
    for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
    for (int i = 0; i < N; ++i)
      for (int k = i; k < N; ++k) {
        const double v = a.h(i, k) * b.value + a.value * b.h(i, k) +
                         a.grad[i] * b.grad[k] + a.grad[k] * b.grad[i];
        r.hess[i * N + k] = v;
        r.hess[k * N + i] = v;
      }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.value == 0.0) throw DomainError("division: denominator is 0");
    const double inv = 1.0 / b.value;
    return a * b.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
};

template <int N> Jet<N> exp(const Jet<N>& a) {
  const double e = std::exp(a.value);
  return a.compose(e, e, e);
}

template <int N> Jet<N> log(const Jet<N>& a) {
  if (!(a.value > 0.0)) throw DomainError(detail::describe("log", "<= 0", a.value));
  const double inv = 1.0 / a.value;
  return a.compose(std::log(a.value), inv, -inv * inv);
}

template <int N> Jet<N> sqrt(const Jet<N>& a) {
  if (!(a.value > 0.0)) throw DomainError(detail::describe("sqrt", "<= 0", a.value));
  const double s = std::sqrt(a.value);
  return a.compose(s, 0.5 / s, -0.25 / (s * a.value));
}

template <int N> Jet<N> sin(const Jet<N>& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return a.compose(s, c, -s);
}

template <int N> Jet<N> cos(const Jet<N>& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return a.compose(c, -s, -c);
}

/// Real power; the base must be positive unless p is a nonnegative integer.
template <int N> Jet<N> pow(const Jet<N>& a, double p) {
  const bool integral = p >= 0.0 && std::floor(p) == p;
  if (!integral && !(a.value > 0.0))
    throw DomainError(detail::describe("pow", "<= 0 with non-integer exponent", a.value));
  const double f0 = std::pow(a.value, p);
  const double f1 = p == 0.0 ? 0.0 : p * std::pow(a.value, p - 1.0);
  const double f2 = (p == 0.0 || p == 1.0) ? 0.0 : p * (p - 1.0) * std::pow(a.value, p - 2.0);
  return a.compose(f0, f1, f2);
}

template <int N> Jet<N> pow(const Jet<N>& a, int p) {
  if (p < 0) return Jet<N>(1.0) / pow(a, -p);
  Jet<N> r(1.0);
  r.order = a.order;
  Jet<N> base = a;
  while (p) {
    if (p & 1) r = r * base;
    base = base * base;
    p >>= 1;
  }
  return r;
}

/// atan2(y, x) with the standard branch cut along y = 0, x < 0.
template <int N> Jet<N> atan2(const Jet<N>& y, const Jet<N>& x) {
  const double r2 = x.value * x.value + y.value * y.value;
  if (!(r2 > 0.0)) throw DomainError("atan2: both arguments are 0");
  const double fy = x.value / r2, fx = -y.value / r2;
  const double r4 = r2 * r2;
  const double fyy = -2.0 * x.value * y.value / r4;
  const double fxx = -fyy;
  const double fxy = (y.value * y.value - x.value * x.value) / r4;
  Jet<N> r;
  r.order = std::min(x.order, y.order);
  r.value = std::atan2(y.value, x.value);
  for (int i = 0; i < N; ++i) r.grad[i] = fy * y.grad[i] + fx * x.grad[i];
  for (int i = 0; i < N; ++i)
    for (int k = i; k < N; ++k) {
      const double v = fy * y.h(i, k) + fx * x.h(i, k) + fyy * y.grad[i] * y.grad[k] +
                       fxx * x.grad[i] * x.grad[k] +
                       fxy * (y.grad[i] * x.grad[k] + x.grad[i] * y.grad[k]);
      r.hess[i * N + k] = v;
      r.hess[k * N + i] = v;
    }
  return r;
}

template <class T> struct scalar_traits {
  static double value(const T& t) { return t; }
};
template <int N> struct scalar_traits<Jet<N>> {
  static double value(const Jet<N>& t) { return t.value; }
};

template <class T> double value_of(const T& t) { return scalar_traits<T>::value(t); }

template <int N> using Point = std::array<double, N>;

/// Seeds the N coordinate variables at p.
template <int N> std::array<Jet<N>, N> variables(const Point<N>& p) {
  std::array<Jet<N>, N> c;
  for (int i = 0; i < N; ++i) c[i] = Jet<N>::variable(p[i], i);
  return c;
}

/// Evaluates a scalar field (a callable on a coordinate array) to a jet at p.
template <int N, class F> Jet<N> eval(F&& f, const Point<N>& p) {
  return f(variables<N>(p));
}

/// Minimal complex type over a real scalar (double or Jet).
template <class T>
struct Complex {
  T re{}, im{};

  Complex() = default;
  Complex(T r) : re(r), im(0.0) {}  // NOLINT
  Complex(T r, T i) : re(r), im(i) {}

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const T& s) { return {a.re * s, a.im * s}; }
  friend Complex operator*(const T& s, const Complex& a) { return {a.re * s, a.im * s}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    const T n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Complex conj() const { return {re, -im}; }
  T norm2() const { return re * re + im * im; }
};

template <class T> Complex<T> cpow(const Complex<T>& z, int n) {
  if (n < 0) throw DomainError("cpow: negative exponent");
  Complex<T> r(T(1.0), T(0.0));
  for (int i = 0; i < n; ++i) r = r * z;
  return r;
}

template <class T> Complex<T> cexp(const Complex<T>& z) {
  const T e = exp(z.re);
  return {e * cos(z.im), e * sin(z.im)};
}

}  // namespace hkfold
