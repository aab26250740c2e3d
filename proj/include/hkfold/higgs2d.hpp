#pragma once

// Quadratic-differential family on a disc, curvature -4 conventions.
//
// k dz dzbar is the Higgs-equation metric, a(z) dz^2 the holomorphic
// differential. The scalar equation is  Lap log k = lambda (k - |a|^2/k)
// with lambda = 8. The derived metric is
//   hat h = (k + |a|^2/k)|dz|^2 + 2 Re(a dz^2),
// and the fold is an ellipse w^T Q w = 1 in each fibre.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "hkfold/errors.hpp"
#include "hkfold/forms.hpp"
#include "hkfold/jet.hpp"
#include "hkfold/ode.hpp"

namespace hkfold::higgs2d {

inline constexpr double kLambda = 8.0;

/// a(z) = sum c_k z^k.
struct QuadDifferential {
  std::vector<std::complex<double>> coeffs;

  static QuadDifferential monomial(std::complex<double> c, int m) {
    QuadDifferential q;
    q.coeffs.assign(m + 1, 0.0);
    q.coeffs[m] = c;
    return q;
  }

  template <class T>
  Complex<T> operator()(const T& x, const T& y) const {
    const Complex<T> z(x, y);
    Complex<T> r(T(0.0), T(0.0));
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * z + Complex<T>(T(it->real()), T(it->imag()));
    return r;
  }

  std::complex<double> at(std::complex<double> z) const {
    std::complex<double> r = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * z + *it;
    return r;
  }
};

/// Lap log k - lambda (k - |a|^2/k) at (x, y), flat Laplacian.
template <class K>
double higgs_residual(K&& k, const QuadDifferential& a, double x, double y, double lambda = kLambda) {
  const auto c = variables<2>({x, y});
  const Jet<2> kj = k(c);
  if (!(kj.value > 0.0)) throw DomainError("higgs_residual: k <= 0");
  const Jet<2> lk = log(kj);
  const double a2 = std::norm(a.at({x, y}));
  return lk.h(0, 0) + lk.h(1, 1) - lambda * (kj.value - a2 / kj.value);
}

struct HiggsRadialSolution {
  std::vector<double> r, k;
  std::complex<double> c;
  int m = 0;
  int iterations = 0;
  double residual = 0.0;  ///< sup of the relative discrete residual
  std::vector<double> history;

  double R() const { return r.back(); }
  double h() const { return r[1] - r[0]; }
};

namespace detail {

/// Weights for the second and first derivative at offset 0 from samples at
/// the given integer offsets (unit spacing).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> fd_weights(const std::vector<int>& offs) {
  const int n = static_cast<int>(offs.size());
  Eigen::MatrixXd A(n, n);
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j) A(p, j) = std::pow(static_cast<double>(offs[j]), p);
  Eigen::VectorXd b2 = Eigen::VectorXd::Zero(n), b1 = Eigen::VectorXd::Zero(n);
  b2[2] = 2.0;
  b1[1] = 1.0;
  const auto lu = A.fullPivLu();
  return {lu.solve(b2), lu.solve(b1)};
}

}  // namespace detail

/// Newton solve of v'' + v'/r = 8(e^v - |c|^2 r^{2m} e^{-v}) for v = log k
/// on [0, R], with v'(0) = 0 and v(R) = log kR. Fourth-order stencils:
/// centred five-point in the interior, even reflection at r = 0, one-sided
/// six-point next to r = R.
inline HiggsRadialSolution solve_radial(std::complex<double> c, int m, double R, double kR, int N,
                                        double lambda = kLambda, int max_iter = 60) {
  if (m < 0) throw std::invalid_argument("solve_radial: m must be >= 0");
  if (!(R > 0.0 && R < 1.0)) throw std::invalid_argument("solve_radial: R must lie in (0, 1)");
  if (N < 8) throw std::invalid_argument("solve_radial: N must be >= 8");
  if (!(kR > std::abs(c) * std::pow(R, m)))
    throw DegeneracyError("solve_radial: boundary value k_R <= |a(R)|, hat metric degenerate");

  const double h = R / N;
  HiggsRadialSolution sol;
  sol.c = c;
  sol.m = m;
  sol.r.resize(N + 1);
  for (int i = 0; i <= N; ++i) sol.r[i] = i * h;
  std::vector<double> A(N + 1);  // |a|^2 = |c|^2 r^{2m}
  for (int i = 0; i <= N; ++i) A[i] = std::norm(c) * (m == 0 ? 1.0 : std::pow(sol.r[i], 2 * m));

  // Row stencils: (column, weight) for the discrete Laplacian.
  std::vector<std::vector<std::pair<int, double>>> L(N);
  const double h2 = h * h;
  {
    const double c5[5] = {-1, 16, -30, 16, -1}, d5[5] = {1, -8, 0, 8, -1};
    for (int i = 0; i < N; ++i) {
      std::vector<std::pair<int, double>> row;
      if (i == 0) {
        row = {{0, 2 * -30.0 / (12 * h2)}, {1, 2 * 32.0 / (12 * h2)}, {2, 2 * -2.0 / (12 * h2)}};
      } else if (i <= N - 2) {
        for (int o = -2; o <= 2; ++o) {
          const int j = std::abs(i + o);
          row.push_back({j, c5[o + 2] / (12 * h2) + d5[o + 2] / (12 * h * sol.r[i])});
        }
      } else {
        const std::vector<int> offs{-4, -3, -2, -1, 0, 1};
        const auto [w2, w1] = detail::fd_weights(offs);
        for (int q = 0; q < 6; ++q) row.push_back({i + offs[q], w2[q] / h2 + w1[q] / (h * sol.r[i])});
      }
      L[i] = row;
    }
  }

  Eigen::VectorXd v = Eigen::VectorXd::Constant(N + 1, std::log(kR));
  auto residual = [&](const Eigen::VectorXd& vv, Eigen::VectorXd& F, double& rel) {
    F.resize(N);
    rel = 0.0;
    for (int i = 0; i < N; ++i) {
      double lap = 0.0;
      for (auto [j, w] : L[i]) lap += w * vv[j];
      const double src = std::exp(vv[i]) - A[i] * std::exp(-vv[i]);
      F[i] = lap - lambda * src;
      rel = std::max(rel, std::abs(F[i]) / (lambda * (std::exp(vv[i]) + A[i] * std::exp(-vv[i]))));
    }
    if (!std::isfinite(rel)) rel = INFINITY;
  };

  Eigen::VectorXd F;
  double rel = 0.0;
  residual(v, F, rel);
  sol.history.push_back(rel);
  int it = 0;
  while (rel >= 1e-10) {
    if (++it > max_iter) throw ConvergenceError("solve_radial: Newton did not converge", sol.history);
    Eigen::SparseMatrix<double> J(N, N);
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < N; ++i) {
      for (auto [j, w] : L[i])
        if (j < N) trip.emplace_back(i, j, w);
      trip.emplace_back(i, i, -lambda * (std::exp(v[i]) + A[i] * std::exp(-v[i])));
    }
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
    if (lu.info() != Eigen::Success) throw ConvergenceError("solve_radial: singular Jacobian", sol.history);
    const Eigen::VectorXd dv = lu.solve(F);
    double step = 1.0;
    Eigen::VectorXd trial;
    Eigen::VectorXd Ft;
    double relt = INFINITY;
    for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
      trial = v;
      trial.head(N) -= step * dv;
      residual(trial, Ft, relt);
      if (relt < rel || relt < 1e-10) break;
    }
    if (!std::isfinite(relt)) throw ConvergenceError("solve_radial: Newton diverged", sol.history);
    v = trial;
    F = Ft;
    rel = relt;
    sol.history.push_back(rel);
  }
  sol.iterations = it;
  sol.residual = rel;
  sol.k.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    sol.k[i] = std::exp(v[i]);
    if (!(sol.k[i] > std::sqrt(A[i])))
      throw DegeneracyError("solve_radial: k <= |a| at r = " + std::to_string(sol.r[i]));
  }
  return sol;
}

/// Smooth interpolant of log k from a radial solution (quintic B-spline,
/// endpoint derivatives taken from the equation), evaluable with jets.
class RadialProfile {
 public:
  explicit RadialProfile(const HiggsRadialSolution& s, double lambda = kLambda) : R_(s.R()) {
    const int N = static_cast<int>(s.r.size()) - 1;
    const double h = s.h();
    std::vector<double> v(N + 1);
    for (int i = 0; i <= N; ++i) v[i] = std::log(s.k[i]);
    auto A = [&](double r) { return std::norm(s.c) * (s.m == 0 ? 1.0 : std::pow(r, 2 * s.m)); };
    const double src0 = lambda * (s.k[0] - A(0.0) / s.k[0]);
    // v'(R) from a fourth-order one-sided difference, v''(R) from the equation.
    const double vpR = (25 * v[N] - 48 * v[N - 1] + 36 * v[N - 2] - 16 * v[N - 3] + 3 * v[N - 4]) / (12 * h);
    const double vppR = lambda * (s.k[N] - A(R_) / s.k[N]) - vpR / R_;
    spline_ = std::make_shared<boost::math::interpolators::cardinal_quintic_b_spline<double>>(
        v, 0.0, h, std::pair<double, double>{0.0, 0.5 * src0}, std::pair<double, double>{vpR, vppR});
  }

  double R() const { return R_; }

  /// log k and its first two radial derivatives.
  std::array<double, 3> log_k(double r) const {
    if (r < 0.0 || r > R_) throw DomainError("RadialProfile: r outside [0, R]");
    return {(*spline_)(r), spline_->prime(r), spline_->double_prime(r)};
  }

  /// k at (x, y); with jets requires r > 0.
  template <class T>
  T operator()(const T& x, const T& y) const {
    const T r = sqrt(x * x + y * y);
    const auto v = log_k(value_of(r));
    if constexpr (std::is_same_v<T, double>) {
      return std::exp(v[0]);
    } else {
      return exp(r.compose(v[0], v[1], v[2]));
    }
  }

  template <class T>
  T operator()(const std::array<T, 2>& c) const {
    return (*this)(c[0], c[1]);
  }

 private:
  double R_;
  std::shared_ptr<boost::math::interpolators::cardinal_quintic_b_spline<double>> spline_;
};

/// hat h as a matrix in (dx, dy).
inline Eigen::Matrix2d hat_metric(double k, std::complex<double> a) {
  if (!(k > 0.0)) throw DomainError("hat_metric: k <= 0");
  const double K = k + std::norm(a) / k;
  Eigen::Matrix2d M;
  M << K + 2 * a.real(), -2 * a.imag(), -2 * a.imag(), K - 2 * a.real();
  return M;
}

template <int N>
struct MetricJets {
  Jet<N> E, F, G;
};

template <int N>
MetricJets<N> hat_metric_jets(const Jet<N>& k, const Complex<Jet<N>>& a) {
  const Jet<N> K = k + a.norm2() / k;
  return {K + 2.0 * a.re, -2.0 * a.im, K - 2.0 * a.re};
}

/// Gaussian curvature by the Brioschi formula.
inline double gauss_curvature(const Jet<2>& E, const Jet<2>& F, const Jet<2>& G) {
  const double det = E.value * G.value - F.value * F.value;
  if (!(det > 0.0)) throw DegeneracyError("gauss_curvature: metric is not positive-definite");
  const double Eu = E.grad[0], Ev = E.grad[1], Fu = F.grad[0], Fv = F.grad[1], Gu = G.grad[0], Gv = G.grad[1];
  const double Evv = E.h(1, 1), Fuv = F.h(0, 1), Guu = G.h(0, 0);
  Eigen::Matrix3d A, B;
  A << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,  //
      Fv - 0.5 * Gu, E.value, F.value,                         //
      0.5 * Gv, F.value, G.value;
  B << 0.0, 0.5 * Ev, 0.5 * Gu,  //
      0.5 * Ev, E.value, F.value,  //
      0.5 * Gu, F.value, G.value;
  return (A.determinant() - B.determinant()) / (det * det);
}

/// Curvature of hat h at (x, y) for a k-field callable on jets.
template <class K>
double hat_curvature(K&& k, const QuadDifferential& a, double x, double y) {
  const auto c = variables<2>({x, y});
  const MetricJets<2> m = hat_metric_jets<2>(k(c), a(c[0], c[1]));
  return gauss_curvature(m.E, m.F, m.G);
}

/// Ellipse matrix Q of the fold in the fibre over z.
template <class T>
std::array<T, 3> fold_matrix(const T& k, const Complex<T>& a) {
  const T a2 = a.norm2();
  const T D = k - a2 / k, K = k + a2 / k;
  const T s = T(4.0) / (D * D);
  return {s * (K - 2.0 * a.re), s * (-2.0 * a.im), s * (K + 2.0 * a.re)};
}

inline Eigen::Matrix2d fold_locus(double k, std::complex<double> a) {
  if (!(k > std::abs(a))) throw DegeneracyError("fold_locus: k <= |a|");
  const auto q = fold_matrix<double>(k, {a.real(), a.imag()});
  Eigen::Matrix2d Q;
  Q << q[0], q[1], q[1], q[2];
  return Q;
}

/// Point of the fold ellipse in direction theta.
template <class T>
std::array<T, 2> ellipse_point(const std::array<T, 3>& q, const T& theta) {
  const T c = cos(theta), s = sin(theta);
  const T n = sqrt(q[0] * c * c + 2.0 * q[1] * c * s + q[2] * s * s);
  return {c / n, s / n};
}

/// Cometric norm of Re(w dz) = u1 dx - u2 dy with respect to hat h.
inline double cometric_norm(double k, std::complex<double> a, double u1, double u2) {
  const Eigen::Vector2d xi(u1, -u2);
  return xi.dot(hat_metric(k, a).inverse() * xi);
}

/// Fold embedding (x, y, theta) -> (x, y, u1, u2) over a k-field.
template <class K>
struct FoldEmbedding {
  const K* k;
  const QuadDifferential* a;

  template <class T>
  std::array<T, 4> operator()(const std::array<T, 3>& s) const {
    const T kv = (*k)(s[0], s[1]);
    const auto q = fold_matrix<T>(kv, (*a)(s[0], s[1]));
    const auto w = ellipse_point<T>(q, s[2]);
    return {s[0], s[1], w[0], w[1]};
  }
};

/// d(w dz) = (du1 + i du2) ^ (dx + i dy) on (x, y, u1, u2).
struct OmegaC {
  template <class T>
  CForm<4, T> operator()(const std::array<T, 4>&) const {
    const CForm<4, T> dw{Form<4, T>::basis(2), Form<4, T>::basis(3)};
    const CForm<4, T> dz{Form<4, T>::basis(0), Form<4, T>::basis(1)};
    return wedge(dw, dz);
  }
};

struct FoldSample {
  double x, y, theta;
};

/// Characteristic direction of Re d(w dz) on the fold at (x, y, theta),
/// oriented along the cometric gradient and normalized to unit hat-h speed.
template <class K>
std::array<double, 3> characteristic_direction(const K& k, const QuadDifferential& a, const std::array<double, 3>& s) {
  const FoldEmbedding<K> emb{&k, &a};
  const auto beta = value(restrict_cform<3, 4>(OmegaC{}, emb, s).re);
  std::array<double, 3> v{beta[0b110], -beta[0b101], beta[0b011]};
  const double kv = k(s[0], s[1]);
  const std::complex<double> av = a.at({s[0], s[1]});
  const Eigen::Matrix2d M = hat_metric(kv, av);
  const auto w = emb(std::array<double, 3>{s[0], s[1], s[2]});
  const Eigen::Vector2d grad = M.inverse() * Eigen::Vector2d(w[2], -w[3]);
  const Eigen::Vector2d p(v[0], v[1]);
  const double speed = std::sqrt(p.dot(M * p));
  if (!(speed > 0.0)) throw DegeneracyError("characteristic direction is vertical");
  const double sign = p.dot(grad) >= 0.0 ? 1.0 : -1.0;
  for (auto& c : v) c *= sign / speed;
  return v;
}

/// Integrates the characteristic foliation of the fold for the given hat-h
/// length, starting at (x0, y0, theta0).
template <class K>
std::vector<FoldSample> fold_characteristic(const K& k, const QuadDifferential& a, double x0, double y0,
                                            double theta0, double length, int steps) {
  std::array<double, 3> s{x0, y0, theta0};
  std::vector<FoldSample> out{{s[0], s[1], s[2]}};
  auto f = [&](double, const std::array<double, 3>& q) { return characteristic_direction(k, a, q); };
  for (int i = 0; i < steps; ++i) {
    s = rk4_step<3>(f, 0.0, s, length / steps);
    out.push_back({s[0], s[1], s[2]});
  }
  return out;
}

/// Exact solutions with a = 0 used to calibrate lambda.
struct CalibrationResult {
  std::vector<double> candidates;
  std::vector<double> residual;  ///< max |residual| per candidate
  std::vector<double> selected;  ///< candidates with residual below tol
};

inline CalibrationResult calibrate_lambda(const std::vector<double>& candidates, double tol = 1e-10) {
  const QuadDifferential zero{{0.0}};
  auto half_plane = [](const auto& c) { return 0.25 / (c[1] * c[1]); };
  auto disc = [](const auto& c) {
    const auto s = 1.0 - c[0] * c[0] - c[1] * c[1];
    return 1.0 / (s * s);
  };
  const std::array<std::array<double, 2>, 4> hp{{{0.1, 0.5}, {-1.0, 1.0}, {2.0, 3.0}, {0.0, 0.2}}};
  const std::array<std::array<double, 2>, 4> dp{{{0.0, 0.0}, {0.3, -0.2}, {-0.5, 0.4}, {0.1, 0.8}}};
  CalibrationResult r;
  r.candidates = candidates;
  for (double lambda : candidates) {
    double worst = 0.0;
    for (const auto& p : hp) worst = std::max(worst, std::abs(higgs_residual(half_plane, zero, p[0], p[1], lambda)));
    for (const auto& p : dp) worst = std::max(worst, std::abs(higgs_residual(disc, zero, p[0], p[1], lambda)));
    r.residual.push_back(worst);
    if (worst < tol) r.selected.push_back(lambda);
  }
  return r;
}

}  // namespace hkfold::higgs2d
