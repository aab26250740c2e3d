#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "hkfold/jet.hpp"

namespace hkfold {

/// Alternating form on an N-dimensional chart (N <= 4), coefficients of
/// type T over strictly increasing index tuples. A tuple is stored as the
/// bitmask of its indices. Degrees above N give the zero form.
template <int N, class T = double>
class Form {
  static_assert(N >= 1 && N <= 4, "charts of dimension 1..4");

 public:
  static constexpr int kMasks = 1 << N;

  Form() : degree_(0) { coeff_.fill(T(0.0)); }
  explicit Form(int degree) : degree_(degree) {
    if (degree < 0) throw std::invalid_argument("negative form degree");
    coeff_.fill(T(0.0));
  }

  static Form scalar(const T& f) {
    Form r(0);
    r.coeff_[0] = f;
    return r;
  }
  static Form basis(int i) {
    Form r(1);
    r.coeff_[1u << i] = T(1.0);
    return r;
  }
  /// Form f dc_{i0} ^ dc_{i1} ^ ..., for any index order.
  static Form monomial(const T& f, std::initializer_list<int> idx) {
    Form r(static_cast<int>(idx.size()));
    int sign = 0;
    unsigned mask = 0;
    if (!permutation_sign(idx, mask, sign)) return r;
    r.coeff_[mask] = sign > 0 ? f : T(-f);
    return r;
  }

  int degree() const { return degree_; }
  bool in_range(unsigned mask) const { return std::popcount(mask) == degree_ && degree_ <= N; }

  T& operator[](unsigned mask) { return coeff_[mask]; }
  const T& operator[](unsigned mask) const { return coeff_[mask]; }

  /// Coefficient of dc_{i0} ^ dc_{i1} ^ ... with the sign of the given order.
  T at(std::initializer_list<int> idx) const {
    int sign = 0;
    unsigned mask = 0;
    if (static_cast<int>(idx.size()) != degree_ || !permutation_sign(idx, mask, sign)) return T(0.0);
    return sign > 0 ? coeff_[mask] : T(-coeff_[mask]);
  }

  /// Coefficient of the volume form dc_0 ^ ... ^ dc_{N-1}.
  T top() const { return coeff_[kMasks - 1]; }

  Form& operator+=(const Form& o) {
    check_degree(o);
    for (int m = 0; m < kMasks; ++m) coeff_[m] = coeff_[m] + o.coeff_[m];
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_degree(o);
    for (int m = 0; m < kMasks; ++m) coeff_[m] = coeff_[m] - o.coeff_[m];
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(Form a) {
    for (auto& c : a.coeff_) c = -c;
    return a;
  }
  friend Form operator*(const T& s, Form a) {
    for (auto& c : a.coeff_) c = s * c;
    return a;
  }
  friend Form operator*(Form a, const T& s) { return s * std::move(a); }

  /// Sign of dc_a ^ dc_b relative to dc_{a|b}: (-1)^(inversions).
  static int wedge_sign(unsigned a, unsigned b) {
    int inv = 0;
    for (unsigned bb = b; bb; bb &= bb - 1) {
      const int j = std::countr_zero(bb);
      inv += std::popcount(a >> (j + 1));
    }
    return (inv & 1) ? -1 : 1;
  }

  friend Form wedge(const Form& a, const Form& b) {
    Form r(a.degree_ + b.degree_);
    if (r.degree_ > N) return r;
    for (unsigned ma = 0; ma < kMasks; ++ma) {
      if (!a.in_range(ma)) continue;
      for (unsigned mb = 0; mb < kMasks; ++mb) {
        if (!b.in_range(mb) || (ma & mb)) continue;
        const T p = a.coeff_[ma] * b.coeff_[mb];
        if (wedge_sign(ma, mb) > 0)
          r.coeff_[ma | mb] = r.coeff_[ma | mb] + p;
        else
          r.coeff_[ma | mb] = r.coeff_[ma | mb] - p;
      }
    }
    return r;
  }

  /// Contraction in the first slot.
  friend Form interior(const std::array<T, N>& X, const Form& w) {
    if (w.degree_ == 0) return Form(0);
    Form r(w.degree_ - 1);
    if (w.degree_ > N) return r;
    for (unsigned m = 0; m < kMasks; ++m) {
      if (!w.in_range(m)) continue;
      int pos = 0;
      for (unsigned mm = m; mm; mm &= mm - 1, ++pos) {
        const int i = std::countr_zero(mm);
        const unsigned rest = m & ~(1u << i);
        const T p = X[i] * w.coeff_[m];
        if (pos & 1)
          r.coeff_[rest] = r.coeff_[rest] - p;
        else
          r.coeff_[rest] = r.coeff_[rest] + p;
      }
    }
    return r;
  }

 private:
  static bool permutation_sign(std::initializer_list<int> idx, unsigned& mask, int& sign) {
    std::vector<int> v(idx);
    sign = 1;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j + 1 < v.size() - i; ++j)
        if (v[j] > v[j + 1]) {
          std::swap(v[j], v[j + 1]);
          sign = -sign;
        }
    mask = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0 || v[i] >= N) throw std::out_of_range("form index outside chart");
      if (i > 0 && v[i] == v[i - 1]) return false;
      mask |= 1u << v[i];
    }
    return true;
  }
  void check_degree(const Form& o) const {
    if (o.degree_ != degree_) throw std::invalid_argument("adding forms of different degree");
  }

  int degree_;
  std::array<T, kMasks> coeff_;
};

/// Complex form as a pair of real forms.
template <int N, class T = double>
struct CForm {
  Form<N, T> re, im;

  CForm() = default;
  explicit CForm(int degree) : re(degree), im(degree) {}
  CForm(Form<N, T> r, Form<N, T> i) : re(std::move(r)), im(std::move(i)) {}

  int degree() const { return re.degree(); }
  friend CForm operator+(const CForm& a, const CForm& b) { return {a.re + b.re, a.im + b.im}; }
  friend CForm operator-(const CForm& a, const CForm& b) { return {a.re - b.re, a.im - b.im}; }
  friend CForm operator*(const Complex<T>& s, const CForm& a) {
    return {s.re * a.re - s.im * a.im, s.re * a.im + s.im * a.re};
  }
  friend CForm wedge(const CForm& a, const CForm& b) {
    return {wedge(a.re, b.re) - wedge(a.im, b.im), wedge(a.re, b.im) + wedge(a.im, b.re)};
  }
  CForm conj() const { return {re, -im}; }
};

template <int N, class T>
CForm<N, T> cscalar(const Complex<T>& f) {
  return {Form<N, T>::scalar(f.re), Form<N, T>::scalar(f.im)};
}

/// Exterior derivative of a form whose coefficients are jets in the chart.
template <int N>
Form<N, Jet<N>> d(const Form<N, Jet<N>>& w) {
  Form<N, Jet<N>> r(w.degree() + 1);
  if (w.degree() + 1 > N) return r;
  for (unsigned m = 0; m < Form<N, Jet<N>>::kMasks; ++m) {
    if (!w.in_range(m)) continue;
    for (int j = 0; j < N; ++j) {
      if (m & (1u << j)) continue;
      const Jet<N> dj = w[m].derivative(j);
      const int s = Form<N, Jet<N>>::wedge_sign(1u << j, m);
      r[m | (1u << j)] = s > 0 ? r[m | (1u << j)] + dj : r[m | (1u << j)] - dj;
    }
  }
  return r;
}

template <int N>
CForm<N, Jet<N>> d(const CForm<N, Jet<N>>& w) {
  return {d(w.re), d(w.im)};
}

/// Differential of a scalar jet as a 1-form.
template <int N>
Form<N, Jet<N>> d(const Jet<N>& f) {
  return d(Form<N, Jet<N>>::scalar(f));
}

template <int N>
CForm<N, Jet<N>> d(const Complex<Jet<N>>& f) {
  return {d(f.re), d(f.im)};
}

/// Pointwise values of a jet-valued form.
template <int N, int M>
Form<N, double> value(const Form<N, Jet<M>>& w) {
  Form<N, double> r(w.degree());
  for (unsigned m = 0; m < Form<N, double>::kMasks; ++m) r[m] = w[m].value;
  return r;
}

template <int N, int M>
CForm<N, double> value(const CForm<N, Jet<M>>& w) {
  return {value(w.re), value(w.im)};
}

template <int N>
double max_abs(const Form<N, double>& w) {
  double r = 0.0;
  for (unsigned m = 0; m < Form<N, double>::kMasks; ++m)
    if (w.in_range(m)) r = std::max(r, std::abs(w[m]));
  return r;
}

template <int N>
double max_abs(const CForm<N, double>& w) {
  return std::max(max_abs(w.re), max_abs(w.im));
}

/// Evaluates a form field at p with jet coefficients. A form field is a
/// callable taking a coordinate array and returning a Form over the same
/// scalar type.
template <int N, class F>
auto eval_form(F&& field, const Point<N>& p) {
  return field(variables<N>(p));
}

/// d of a form field, evaluated at p.
template <int N, class F>
auto exterior_derivative(F&& field, const Point<N>& p) {
  return value(d(eval_form<N>(field, p)));
}

/// Lie derivative by Cartan's formula, L_X w = i_X dw + d(i_X w), on jet
/// data. Each d lowers the jet order, so the result can be differentiated
/// once more only if X and w carry enough orders.
template <int N>
Form<N, Jet<N>> lie_of(const std::array<Jet<N>, N>& X, const Form<N, Jet<N>>& w) {
  return interior(X, d(w)) + d(interior(X, w));
}

/// L_X w at p for a vector field X and a form field w.
template <int N, class VF, class F>
Form<N, double> lie(VF&& X, F&& field, const Point<N>& p) {
  const auto c = variables<N>(p);
  return value(lie_of<N>(X(c), field(c)));
}

template <int N, class VF, class F>
CForm<N, double> lie_complex(VF&& X, F&& field, const Point<N>& p) {
  auto re = [&](const auto& c) { return field(c).re; };
  auto im = [&](const auto& c) { return field(c).im; };
  return {lie<N>(X, re, p), lie<N>(X, im, p)};
}

/// Pullback of a pointwise K-form on R^N along a linear map with Jacobian
/// J[i][j] = d(ambient i)/d(sub j).
template <int K, int N, class T>
Form<K, T> pullback(const Form<N, T>& w, const std::array<std::array<T, K>, N>& J) {
  std::array<Form<K, T>, N> dx;
  for (int i = 0; i < N; ++i) {
    dx[i] = Form<K, T>(1);
    for (int j = 0; j < K; ++j) dx[i][1u << j] = J[i][j];
  }
  Form<K, T> r(w.degree());
  if (w.degree() > K) return r;
  for (unsigned m = 0; m < Form<N, T>::kMasks; ++m) {
    if (!w.in_range(m)) continue;
    Form<K, T> term = Form<K, T>::scalar(w[m]);
    for (unsigned mm = m; mm; mm &= mm - 1) term = wedge(term, dx[std::countr_zero(mm)]);
    r += term;
  }
  return r;
}

/// Restriction of a form field on an N-chart to a K-dimensional submanifold
/// given by an inclusion s -> c(s). Coefficients are jets in s, so the
/// result can itself be differentiated once with d.
template <int K, int N, class Incl, class F>
Form<K, Jet<K>> restrict_form(F&& field, Incl&& inclusion, const Point<K>& s) {
  const std::array<Jet<K>, N> c = inclusion(variables<K>(s));
  const Form<N, Jet<K>> w = field(c);
  std::array<std::array<Jet<K>, K>, N> J;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < K; ++j) J[i][j] = c[i].derivative(j);
  return pullback<K, N, Jet<K>>(w, J);
}

template <int K, int N, class Incl, class F>
CForm<K, Jet<K>> restrict_cform(F&& field, Incl&& inclusion, const Point<K>& s) {
  auto re = [&](const auto& c) { return field(c).re; };
  auto im = [&](const auto& c) { return field(c).im; };
  return {restrict_form<K, N>(re, inclusion, s), restrict_form<K, N>(im, inclusion, s)};
}

/// Jacobian of an inclusion at s, as plain numbers.
template <int K, int N, class Incl>
std::array<std::array<double, K>, N> jacobian(Incl&& inclusion, const Point<K>& s) {
  const std::array<Jet<K>, N> c = inclusion(variables<K>(s));
  std::array<std::array<double, K>, N> J;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < K; ++j) J[i][j] = c[i].grad[j];
  return J;
}

}  // namespace hkfold
