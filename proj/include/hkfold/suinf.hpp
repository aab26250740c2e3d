#pragma once

// Residuals of the SU(infinity) Higgs system. Fibre functions are rules on
// ambient (x1, x2, x3), restricted to the unit sphere. The Poisson bracket
// is normalized by {x1, x2} = 2 x3.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "hkfold/errors.hpp"
#include "hkfold/jet.hpp"
#include "hkfold/quadrature.hpp"

namespace hkfold::suinf {

using Sphere = std::array<double, 3>;

inline void check_on_sphere(const Sphere& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (std::abs(r2 - 1.0) > 1e-12) throw DomainError("fibre point is not on the unit sphere");
}

/// {f, g} = 2 x . (grad f x grad g) from ambient gradients in slots
/// off, off+1, off+2.
template <int N>
Jet<N> bracket_jets(const Jet<N>& f, const Jet<N>& g, const std::array<Jet<N>, 3>& x, int off) {
  const Jet<N> fx = f.derivative(off), fy = f.derivative(off + 1), fz = f.derivative(off + 2);
  const Jet<N> gx = g.derivative(off), gy = g.derivative(off + 1), gz = g.derivative(off + 2);
  return 2.0 * (x[0] * (fy * gz - fz * gy) + x[1] * (fz * gx - fx * gz) + x[2] * (fx * gy - fy * gx));
}

template <class F, class G>
double bracket(F&& f, G&& g, const Sphere& x) {
  check_on_sphere(x);
  const auto c = variables<3>(x);
  return bracket_jets<3>(f(c), g(c), c, 0).value;
}

/// Connection (a1, a2) and Higgs field (phi1, phi2) as fibre functions over
/// base coordinates; each rule takes (x, y, x1, x2, x3).
struct SuInfData {
  using Rule = std::function<Jet<5>(const std::array<Jet<5>, 5>&)>;
  Rule a1, a2, phi1, phi2;
};

/// Data a = x3/(2y), phi = (x1 - i x2)/(2y).
inline SuInfData canonical_data() {
  using A = std::array<Jet<5>, 5>;
  return {[](const A& c) { return c[4] / (2.0 * c[1]); },
          [](const A&) { return Jet<5>(0.0); },
          [](const A& c) { return c[2] / (2.0 * c[1]); },
          [](const A& c) { return -c[3] / (2.0 * c[1]); }};
}

struct Residuals {
  double r1 = 0.0;
  double r2_re = 0.0, r2_im = 0.0;
  double max_abs() const { return std::max({std::abs(r1), std::abs(r2_re), std::abs(r2_im)}); }
};

/// r1 = (a2)_x - (a1)_y + {a1, a2} + {phi1, phi2},
/// r2 = 2 d_zbar(phi) + {a, phi} with d_zbar = (d_x + i d_y)/2.
inline Residuals higgs_residuals(const SuInfData& data, double x, double y, const Sphere& f) {
  check_on_sphere(f);
  const auto c = variables<5>({x, y, f[0], f[1], f[2]});
  const std::array<Jet<5>, 3> s{c[2], c[3], c[4]};
  const Jet<5> a1 = data.a1(c), a2 = data.a2(c), p1 = data.phi1(c), p2 = data.phi2(c);
  auto br = [&](const Jet<5>& u, const Jet<5>& v) { return bracket_jets<5>(u, v, s, 2).value; };
  Residuals r;
  r.r1 = a2.grad[0] - a1.grad[1] + br(a1, a2) + br(p1, p2);
  r.r2_re = (p1.grad[0] - p2.grad[1]) + br(a1, p1) - br(a2, p2);
  r.r2_im = (p2.grad[0] + p1.grad[1]) + br(a1, p2) + br(a2, p1);
  return r;
}

struct SphereIntegral {
  double value = 0.0;
  int nodes = 0;  ///< Gauss-Legendre nodes in cos(theta) at convergence
};

/// Product rule: n Gauss-Legendre nodes in cos(theta), 2n trapezoid nodes
/// in longitude.
template <class F>
double sphere_quadrature(F&& f, int n) {
  const Rule gl = gauss_legendre(n);
  const int m = 2 * n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ct = gl.nodes[i], st = std::sqrt(1.0 - ct * ct);
    double ring = 0.0;
    for (int j = 0; j < m; ++j) {
      const double lon = 2.0 * std::numbers::pi * j / m;
      ring += f(std::array<double, 3>{st * std::cos(lon), st * std::sin(lon), ct});
    }
    sum += gl.weights[i] * ring * (2.0 * std::numbers::pi / m);
  }
  return sum;
}

/// Integral of g over the unit sphere against the area form (total 4 pi),
/// doubling the grid until successive values differ by less than tol.
template <class F>
SphereIntegral integrate_sphere(F&& g, double tol = 1e-9, int n0 = 8, int nmax = 512) {
  double prev = sphere_quadrature(g, n0);
  std::vector<double> history{prev};
  for (int n = 2 * n0; n <= nmax; n *= 2) {
    const double cur = sphere_quadrature(g, n);
    history.push_back(cur);
    if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur))) return {cur, n};
    prev = cur;
  }
  throw ConvergenceError("sphere quadrature did not converge", history);
}

/// p_m(f) = integral of f^m over the sphere.
template <class F>
double p_m(F&& f, int m, double tol = 1e-9) {
  if (m < 0) throw std::invalid_argument("p_m: m must be >= 0");
  return integrate_sphere([&](const std::array<double, 3>& x) { return std::pow(f(x), m); }, tol).value;
}

}  // namespace hkfold::suinf
