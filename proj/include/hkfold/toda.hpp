#pragma once

// S^1-invariant hyperkahler metrics from the Toda (Boyer-Finley) equation
//   u_xx + u_yy + (e^u)_tt = 0
// on the chart (x, y, t, tau), with the Ansatz
//   g = u_t (e^u (dx^2 + dy^2) + dt^2) + u_t^{-1} (dtau + u_y dx - u_x dy)^2,
//   omega1 = u_t e^u dx^dy + dt^(dtau + u_y dx - u_x dy).
// The x-invariant reduction writes e^u = f (1 - t^2)/y^2, so the canonical
// solution u = log(1 - t^2) - 2 log y is f = 1.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "hkfold/errors.hpp"
#include "hkfold/forms.hpp"
#include "hkfold/jet.hpp"
#include "hkfold/quadrature.hpp"

namespace hkfold::toda {

/// The canonical solution.
struct CanonicalU {
  template <class T>
  T operator()(const std::array<T, 3>& c) const {
    return log(1.0 - c[2] * c[2]) - 2.0 * log(c[1]);
  }
};

/// u_xx + u_yy + (e^u)_tt at (x, y, t).
template <class U>
double toda_residual(U&& u, const Point<3>& p) {
  const Jet<3> j = u(variables<3>(p));
  return j.h(0, 0) + j.h(1, 1) + exp(j).h(2, 2);
}

/// omega1 of the Ansatz as a form field on (x, y, t, tau). Coefficients use
/// first derivatives of u, so d of the field is exact.
template <class U>
struct AnsatzOmega1 {
  U u;

  Form<4, Jet<4>> operator()(const std::array<Jet<4>, 4>& c) const {
    using F = Form<4, Jet<4>>;
    const Jet<4> uj = u(std::array<Jet<4>, 3>{c[0], c[1], c[2]});
    const Jet<4> ux = uj.derivative(0), uy = uj.derivative(1), ut = uj.derivative(2);
    return F::monomial(ut * exp(uj), {0, 1}) + F::monomial(1.0, {2, 3}) + F::monomial(uy, {2, 0}) -
           F::monomial(ux, {2, 1});
  }
};

template <class U>
AnsatzOmega1<std::decay_t<U>> ansatz_omega1(U&& u) {
  return {std::forward<U>(u)};
}

/// omega2 + i omega3 = d(w dz) with w = 2 e^{(u + i tau)/2}; the potential
/// w dz as a complex form field.
template <class U>
struct AnsatzHolomorphicPotential {
  U u;

  template <class T>
  CForm<4, T> operator()(const std::array<T, 4>& c) const {
    const T uj = u(std::array<T, 3>{c[0], c[1], c[2]});
    const Complex<T> w = T(2.0) * cexp(Complex<T>(0.5 * uj, 0.5 * c[3]));
    const CForm<4, T> dz{Form<4, T>::basis(0), Form<4, T>::basis(1)};
    return w * dz;
  }
};

struct AnsatzForms {
  Eigen::Matrix4d metric;
  Form<4, double> omega1;
};

/// Ansatz metric and Kahler form at (x, y, t, tau).
template <class U>
AnsatzForms ansatz_forms(const U& u, const Point<4>& p) {
  const Jet<3> j = u(variables<3>({p[0], p[1], p[2]}));
  const double ux = j.grad[0], uy = j.grad[1], ut = j.grad[2], e = std::exp(j.value);
  if (!(ut > 0.0)) throw DegeneracyError("ansatz_forms: u_t <= 0, the Ansatz metric is not positive-definite");
  const Eigen::Vector4d theta(uy, -ux, 0.0, 1.0);
  AnsatzForms r;
  r.metric = (Eigen::Vector4d(ut * e, ut * e, ut, 0.0)).asDiagonal();
  r.metric += theta * theta.transpose() / ut;
  r.omega1 = value(eval_form<4>(AnsatzOmega1<U>{u}, p));
  return r;
}

/// (omega1, omega2, omega3) at (x, y, t, tau).
template <class U>
std::array<Form<4, double>, 3> ansatz_triple(const U& u, const Point<4>& p) {
  const CForm<4, double> wc = exterior_derivative<4>(AnsatzHolomorphicPotential<U>{u}, p);
  return {value(eval_form<4>(AnsatzOmega1<U>{u}, p)), wc.re, wc.im};
}

/// Coefficient of dx^dy^dt in d omega1.
template <class U>
double closedness_defect(const U& u, const Point<4>& p) {
  return exterior_derivative<4>(AnsatzOmega1<U>{u}, p).at({0, 1, 2});
}

/// i_{d/dtau} omega1; the moment map of tau is -t.
template <class U>
Form<4, double> tau_contraction(const U& u, const Point<4>& p) {
  return interior(std::array<double, 4>{0, 0, 0, 1}, value(eval_form<4>(AnsatzOmega1<U>{u}, p)));
}

/// g_tt - 4 kappa g for g = 2 e^u |dz|^2 at fixed t, kappa its Gaussian
/// curvature. Equals twice the Toda residual.
template <class U>
double geometric_form_residual(U&& u, const Point<3>& p) {
  const Jet<3> j = u(variables<3>(p));
  const double g = 2.0 * std::exp(j.value);
  const double g_tt = 2.0 * exp(j).h(2, 2);
  const double kappa = -(j.h(0, 0) + j.h(1, 1)) / (2.0 * g);
  return g_tt - 4.0 * kappa * g;
}

/// Conformal factor f = e^u y^2/(1 - t^2) of a solution relative to the
/// canonical one.
template <class U>
double conformal_factor(U&& u, double x, double y, double t) {
  if (!(std::abs(t) < 1.0)) throw DomainError("conformal_factor: |t| >= 1");
  return std::exp(u(Point<3>{x, y, t})) * y * y / (1.0 - t * t);
}

// ---- x-invariant reduction ----

/// (1 - t^2) f_tt - 4t f_t - 2f + 2 + y^2 (log f)_yy for f a field on (y, t).
/// At t = +-1 this is the degenerate boundary equation.
template <class F>
double reduced_residual(F&& f, double y, double t) {
  const Jet<2> j = f(variables<2>({y, t}));
  if (!(j.value > 0.0)) throw DomainError("reduced_residual: f <= 0");
  const Jet<2> lf = log(j);
  return (1.0 - t * t) * j.h(1, 1) - 4.0 * t * j.grad[1] - 2.0 * j.value + 2.0 + y * y * lf.h(0, 0);
}

struct ReducedTodaField {
  std::vector<double> y, t;
  std::vector<double> f;  ///< f[j * nt + i] at (y[j], t[i])
  int steps = 0;
  double residual = 0.0;  ///< sup of the discrete residual
  std::vector<double> history;

  int ny() const { return static_cast<int>(y.size()); }
  int nt() const { return static_cast<int>(t.size()); }
  double at(int j, int i) const { return f[j * nt() + i]; }
  double sup_deviation(double target = 1.0) const {
    double r = 0.0;
    for (double v : f) r = std::max(r, std::abs(v - target));
    return r;
  }
};

struct BvpOptions {
  double y0 = 1.0, y1 = 2.0;
  int ny = 64, nt = 65;
  double tol = 1e-9;
  int max_steps = 40;
};

namespace detail {

/// Discrete reduced operator on v = log f, f = 1 on the y-edges. Interior t
/// rows use centred differences; t = +-1 rows use the one-sided
/// second-order f_t and drop the vanishing f_tt term.
class ReducedGrid {
 public:
  explicit ReducedGrid(const BvpOptions& o) : o_(o) {
    hy_ = (o.y1 - o.y0) / (o.ny - 1);
    ht_ = 2.0 / (o.nt - 1);
    y_.resize(o.ny);
    t_.resize(o.nt);
    for (int j = 0; j < o.ny; ++j) y_[j] = o.y0 + j * hy_;
    for (int i = 0; i < o.nt; ++i) t_[i] = -1.0 + i * ht_;
  }

  int unknowns() const { return (o_.ny - 2) * o_.nt; }
  int index(int j, int i) const { return (j - 1) * o_.nt + i; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& t() const { return t_; }

  /// Residual and (optionally) Jacobian with respect to v.
  void evaluate(const Eigen::VectorXd& v, Eigen::VectorXd& F, std::vector<Eigen::Triplet<double>>* jac) const {
    const int nt = o_.nt;
    F.resize(unknowns());
    auto vv = [&](int j, int i) { return (j == 0 || j == o_.ny - 1) ? 0.0 : v[index(j, i)]; };
    for (int j = 1; j < o_.ny - 1; ++j) {
      for (int i = 0; i < nt; ++i) {
        const int row = index(j, i);
        const double t = t_[i], y2 = y_[j] * y_[j];
        // t-part as weights on f at t-neighbours
        std::array<std::pair<int, double>, 3> tw;
        if (i == 0) {
          const double c = -4.0 * t / (2.0 * ht_);
          tw = {{{0, -3.0 * c}, {1, 4.0 * c}, {2, -c}}};
        } else if (i == nt - 1) {
          const double c = -4.0 * t / (2.0 * ht_);
          tw = {{{nt - 1, 3.0 * c}, {nt - 2, -4.0 * c}, {nt - 3, c}}};
        } else {
          const double a = (1.0 - t * t) / (ht_ * ht_), b = -4.0 * t / (2.0 * ht_);
          tw = {{{i - 1, a - b}, {i, -2.0 * a}, {i + 1, a + b}}};
        }
        double r = 2.0;
        const double fi = std::exp(vv(j, i));
        r += -2.0 * fi;
        if (jac) jac->emplace_back(row, row, -2.0 * fi);
        for (auto [k, w] : tw) {
          const double fk = std::exp(vv(j, k));
          r += w * fk;
          if (jac) jac->emplace_back(row, index(j, k), w * fk);
        }
        const double s = y2 / (hy_ * hy_);
        r += s * (vv(j - 1, i) - 2.0 * vv(j, i) + vv(j + 1, i));
        if (jac) {
          jac->emplace_back(row, row, -2.0 * s);
          if (j > 1) jac->emplace_back(row, index(j - 1, i), s);
          if (j < o_.ny - 2) jac->emplace_back(row, index(j + 1, i), s);
        }
        F[row] = r;
      }
    }
  }

 private:
  BvpOptions o_;
  double hy_, ht_;
  std::vector<double> y_, t_;
};

}  // namespace detail

/// Newton on log f for the reduced boundary-value problem on
/// [y0, y1] x [-1, 1] with f = 1 on the y-edges.
template <class Guess>
ReducedTodaField solve_reduced_bvp(const BvpOptions& o, Guess&& guess) {
  if (o.ny < 32 || o.nt < 33) throw std::invalid_argument("solve_reduced_bvp: grid must be at least 32 x 33");
  if (!(o.y1 > o.y0 && o.y0 > 0.0)) throw std::invalid_argument("solve_reduced_bvp: need 0 < y0 < y1");
  const detail::ReducedGrid grid(o);
  Eigen::VectorXd v(grid.unknowns());
  for (int j = 1; j < o.ny - 1; ++j)
    for (int i = 0; i < o.nt; ++i) {
      const double f0 = guess(grid.y()[j], grid.t()[i]);
      if (!(f0 > 0.0)) throw DomainError("solve_reduced_bvp: initial guess is not positive");
      v[grid.index(j, i)] = std::log(f0);
    }

  ReducedTodaField out;
  Eigen::VectorXd F;
  grid.evaluate(v, F, nullptr);
  double res = F.lpNorm<Eigen::Infinity>();
  out.history.push_back(res);
  while (!(res < o.tol)) {
    if (out.steps >= o.max_steps || !std::isfinite(res))
      throw ConvergenceError("solve_reduced_bvp: Newton did not converge", out.history);
    std::vector<Eigen::Triplet<double>> trip;
    grid.evaluate(v, F, &trip);
    Eigen::SparseMatrix<double> J(grid.unknowns(), grid.unknowns());
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw ConvergenceError("solve_reduced_bvp: singular Jacobian", out.history);
    v -= lu.solve(F);
    ++out.steps;
    grid.evaluate(v, F, nullptr);
    res = F.lpNorm<Eigen::Infinity>();
    out.history.push_back(res);
  }
  out.residual = res;
  out.y = grid.y();
  out.t = grid.t();
  out.f.assign(o.ny * o.nt, 1.0);
  for (int j = 1; j < o.ny - 1; ++j)
    for (int i = 0; i < o.nt; ++i) {
      out.f[j * o.nt + i] = std::exp(v[grid.index(j, i)]);
      if (!(out.f[j * o.nt + i] > 0.0)) throw DegeneracyError("solve_reduced_bvp: f lost positivity");
    }
  return out;
}

/// The bump guess 1 + amp sin(pi (y - y0)/(y1 - y0)) (1 - t^2).
inline std::function<double(double, double)> bump_guess(const BvpOptions& o, double amp) {
  return [o, amp](double y, double t) {
    return 1.0 + amp * std::sin(M_PI * (y - o.y0) / (o.y1 - o.y0)) * (1.0 - t * t);
  };
}

// ---- integral and pointwise identities behind uniqueness ----

struct IdentityReport {
  double lhs_i = 0, rhs_i = 0;  ///< int ((1-t^2)^2 f_t)_t f dt and -int (1-t^2)^2 f_t^2 dt
  double err_i = 0;
  double err_ii = 0;       ///< |f Lap_H log f - (Lap_H f - |df|^2_H / f)|
  double err_ii_plus = 0;  ///< same with + on the gradient term
};

/// Checks both identities for a trial f(x, y, t) > 0: (i) at (x, y) by
/// Gauss-Legendre quadrature in t, (ii) pointwise at (x, y, t) with
/// Lap_H = (y^2/2)(d_xx + d_yy) and |df|^2_H = (y^2/2)(f_x^2 + f_y^2).
template <class F>
IdentityReport proof_identities(F&& f, double x, double y, double t, int nodes = 40) {
  IdentityReport r;
  const Rule q = gauss_legendre(nodes, -1.0, 1.0);
  for (std::size_t n = 0; n < q.nodes.size(); ++n) {
    const double s = q.nodes[n];
    const Jet<3> j = f(variables<3>({x, y, s}));
    const double w = (1 - s * s) * (1 - s * s), wt = -4.0 * s * (1 - s * s);
    const double flux_t = wt * j.grad[2] + w * j.h(2, 2);
    r.lhs_i += q.weights[n] * flux_t * j.value;
    r.rhs_i -= q.weights[n] * w * j.grad[2] * j.grad[2];
  }
  r.err_i = std::abs(r.lhs_i - r.rhs_i);

  const Jet<3> j = f(variables<3>({x, y, t}));
  if (!(j.value > 0.0)) throw DomainError("proof_identities: f <= 0");
  const Jet<3> lf = log(j);
  const double c = 0.5 * y * y;
  const double lap_log = c * (lf.h(0, 0) + lf.h(1, 1));
  const double lap_f = c * (j.h(0, 0) + j.h(1, 1));
  const double grad2 = c * (j.grad[0] * j.grad[0] + j.grad[1] * j.grad[1]);
  r.err_ii = std::abs(j.value * lap_log - (lap_f - grad2 / j.value));
  r.err_ii_plus = std::abs(j.value * lap_log - (lap_f + grad2 / j.value));
  return r;
}

}  // namespace hkfold::toda
