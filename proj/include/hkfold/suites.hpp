#pragma once

// Verification suites run by the command-line front end. Each suite is a
// deterministic function of its configuration: the seed fixes every random
// sample and reductions are plain maxima.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hkfold/canonical.hpp"
#include "hkfold/deform.hpp"
#include "hkfold/foldlab.hpp"
#include "hkfold/higgs2d.hpp"
#include "hkfold/moments.hpp"
#include "hkfold/report.hpp"
#include "hkfold/suinf.hpp"
#include "hkfold/toda.hpp"

namespace hkfold::suites {

using report::Bound;
using report::Check;
using report::Report;
using cd = std::complex<double>;

struct RunConfig {
  std::string command;
  int samples = 0;                    ///< 0 selects the suite default
  std::uint64_t seed = 42;
  std::optional<double> tol;          ///< overrides every upper tolerance
  std::map<std::string, double> tols; ///< per-check overrides, by check name
  std::vector<int> ell{1, 2, 3};
  int ny = 64, nt = 65;
  double amp = 0.3;
};

namespace detail {

using Rng = std::mt19937_64;

inline double uniform(Rng& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

class Builder {
 public:
  Builder(const RunConfig& cfg, std::string suite) : cfg_(cfg) { report_.suite = std::move(suite); }

  void add(const std::string& name, long n, double residual, double tol, Bound bound = Bound::Upper) {
    if (auto it = cfg_.tols.find(name); it != cfg_.tols.end())
      tol = it->second;
    else if (cfg_.tol && bound == Bound::Upper)
      tol = *cfg_.tol;
    report_.checks.push_back(report::make_check(name, n, residual, tol, bound));
  }

  /// Records a check that failed by throwing, with the residual as +inf.
  template <class F>
  void guarded(const std::string& name, long n, double tol, F&& f) {
    try {
      add(name, n, f(), tol);
    } catch (const std::exception& e) {
      fail(name, n, tol, e);
    }
  }

  void fail(const std::string& name, long n, double tol, const std::exception& e) {
    add(name, n, INFINITY, tol);
    report_.diagnostics.push_back(name + ": " + e.what());
  }

  Report take() { return std::move(report_); }

 private:
  const RunConfig& cfg_;
  Report report_;
};

inline int samples_or(const RunConfig& c, int d) { return c.samples > 0 ? c.samples : d; }

inline canonical::EquatorPoint random_equator(Rng& g) {
  const double x3 = uniform(g, 0.01, 0.99) * (uniform(g, 0, 1) < 0.5 ? -1.0 : 1.0);
  return {uniform(g, -3, 3), uniform(g, 0.2, 5), x3, uniform(g, -std::numbers::pi, std::numbers::pi)};
}

inline Point<4> random_disc(Rng& g) {
  const double y = uniform(g, 0.3, 3), r = uniform(g, 0.05, 0.95) / y, a = uniform(g, 0, 2 * std::numbers::pi);
  return {uniform(g, -1, 1), y, r * std::cos(a), r * std::sin(a)};
}

inline suinf::Sphere random_sphere(Rng& g) {
  std::normal_distribution<double> n(0, 1);
  Eigen::Vector3d v(n(g), n(g), n(g));
  v.normalize();
  return {v[0], v[1], v[2]};
}

inline double disc_k(double r) { return 1.0 / ((1 - r * r) * (1 - r * r)); }

/// Canonical Toda solution plus eps times a fixed quadratic.
struct PerturbedU {
  std::array<double, 10> c;
  double eps;
  template <class T>
  T operator()(const std::array<T, 3>& p) const {
    const T q = c[0] + c[1] * p[0] + c[2] * p[1] + c[3] * p[2] + c[4] * p[0] * p[0] + c[5] * p[1] * p[1] +
                c[6] * p[2] * p[2] + c[7] * p[0] * p[1] + c[8] * p[1] * p[2] + c[9] * p[0] * p[2];
    return toda::CanonicalU{}(p) + eps * q;
  }
};

}  // namespace detail

// ---- suites ----

inline Report verify_canonical(const RunConfig& cfg) {
  detail::Builder b(cfg, "verify-canonical");
  detail::Rng g(cfg.seed);
  const int n = detail::samples_or(cfg, 10000);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, canonical::verify_identities(detail::random_equator(g)).max_residual);
  b.add("equator_identities", n, worst, 1e-9);

  double disc = 0.0;
  const int nd = std::max(1, n / 10);
  for (int i = 0; i < nd; ++i) {
    const Point<4> p = detail::random_disc(g);
    disc = std::max(disc, canonical::verify_identities(canonical::DiscPoint{p[0], p[1], p[2], p[3]}).max_residual);
  }
  b.add("disc_identities", nd, disc, 1e-9);

  double spread = 0.0, limit = 0.0;
  for (double y : {0.5, 1.0, 3.0}) {
    const auto t = canonical::fold_transversality(0.2, y, 0.7);
    spread = std::max(spread, t.spread);
    limit = std::max(limit, std::abs(t.limit + 2.0 / (y * y)) * y * y);
  }
  b.add("fold_linear_vanishing_spread", 3, spread, 1e-6);
  b.add("fold_linear_vanishing_limit", 3, limit, 1e-9);

  b.guarded("fold_geodesic_closed_form", 2001, 1e-6, [] {
    const auto c = canonical::geodesic_flow(2.0, 1.0, 0.0, 1.2);
    double dev = 0.0;
    for (const auto& s : c)
      dev = std::max({dev, std::abs(s.x - (2 * std::sin(s.phi) + 1)), std::abs(s.y - 2 * std::cos(s.phi))});
    return dev;
  });
  return b.take();
}

inline Report suinf_residuals(const RunConfig& cfg) {
  detail::Builder b(cfg, "suinf-residuals");
  detail::Rng g(cfg.seed);
  const int n = detail::samples_or(cfg, 500);
  const auto data = suinf::canonical_data();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = detail::uniform(g, -2, 2), y = detail::uniform(g, 0.2, 3);
    worst = std::max(worst, suinf::higgs_residuals(data, x, y, detail::random_sphere(g)).max_abs());
  }
  b.add("canonical_residuals", n, worst, 1e-10);
  return b.take();
}

inline Report higgs_radial(const RunConfig& cfg) {
  detail::Builder b(cfg, "higgs-radial");
  using namespace higgs2d;
  const double R = 0.8;
  for (cd c : {cd(0.0), cd(0.3), cd(0, 0.5)})
    for (int m : {0, 1}) {
      const std::string tag = "c=" + report::fmt17(c.real()) + "+" + report::fmt17(c.imag()) + "i,m=" + std::to_string(m);
      try {
        const auto s = solve_radial(c, m, R, detail::disc_k(R), 400);
        b.add("newton_residual[" + tag + "]", s.iterations, s.residual, 1e-10);
        const RadialProfile p(s);
        const auto a = QuadDifferential::monomial(c, m);
        double worst = 0.0;
        long count = 0;
        for (std::size_t i = 1; s.r[i] < 0.9 * s.R(); i += 7, ++count) {
          const double t = 0.3 + 0.1 * i;
          worst = std::max(worst, std::abs(hat_curvature(p, a, s.r[i] * std::cos(t), s.r[i] * std::sin(t)) + 4.0));
        }
        b.add("curvature_minus_four[" + tag + "]", count, worst, 1e-3);
      } catch (const std::exception& e) {
        b.fail("newton_residual[" + tag + "]", 0, 1e-10, e);
      }
    }

  const auto cal = calibrate_lambda({2, 4, 8, 16});
  const bool unique = cal.selected.size() == 1 && cal.selected[0] == kLambda;
  b.add("lambda_calibration_unique", 4, unique ? 0.0 : 1.0, 0.0);

  // Cometric norm on the fold ellipse over base points and angles.
  b.guarded("fold_cometric_constant", 500, 1e-6, [&] {
    const cd c(0.2, 0.1);
    const auto s = solve_radial(c, 1, R, detail::disc_k(R), 400);
    const RadialProfile p(s);
    const auto a = QuadDifferential::monomial(c, 1);
    detail::Rng g(cfg.seed);
    double sum = 0, sum2 = 0;
    const int n = 500;
    for (int i = 0; i < n; ++i) {
      const double r = detail::uniform(g, 0.01, 0.75), t = detail::uniform(g, 0, 2 * std::numbers::pi);
      const double x = r * std::cos(t), y = r * std::sin(t);
      const double k = p(x, y);
      const cd av = a.at({x, y});
      const auto w = ellipse_point<double>(fold_matrix<double>(k, {av.real(), av.imag()}),
                                           detail::uniform(g, 0, 2 * std::numbers::pi));
      const double v = cometric_norm(k, av, w[0], w[1]);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / n, sd = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
    return sd / mean;
  });
  return b.take();
}

inline Report toda_residual(const RunConfig& cfg) {
  detail::Builder b(cfg, "toda-residual");
  detail::Rng g(cfg.seed);
  const int n = detail::samples_or(cfg, 500);
  double canon = 0.0, geo = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point<3> p{detail::uniform(g, -3, 3), detail::uniform(g, 0.2, 3), detail::uniform(g, -0.95, 0.95)};
    const double scale = 1 + 1 / (p[1] * p[1]);
    canon = std::max(canon, std::abs(toda::toda_residual(toda::CanonicalU{}, p)) / scale);
    geo = std::max(geo, std::abs(toda::geometric_form_residual(toda::CanonicalU{}, p)) / scale);
  }
  b.add("canonical_residual", n, canon, 1e-13);
  b.add("canonical_curvature_relation", n, geo, 1e-12);

  double corr = 0.0;
  const int np = std::max(1, n / 2);
  for (int i = 0; i < np; ++i) {
    detail::PerturbedU u{{}, detail::uniform(g, 0, 0.3)};
    for (auto& v : u.c) v = detail::uniform(g, -1, 1);
    const Point<4> p{detail::uniform(g, -1, 1), detail::uniform(g, 0.5, 2), detail::uniform(g, -0.9, 0.9),
                     detail::uniform(g, 0, 6)};
    const double res = toda::toda_residual(u, {p[0], p[1], p[2]});
    corr = std::max(corr, std::abs(toda::closedness_defect(u, p) - res) / (1 + std::abs(res)));
  }
  b.add("closedness_equals_residual", np, corr, 1e-10);
  return b.take();
}

inline Report toda_uniqueness(const RunConfig& cfg) {
  detail::Builder b(cfg, "toda-uniqueness");
  toda::BvpOptions o;
  o.ny = cfg.ny;
  o.nt = cfg.nt;
  const long cells = static_cast<long>(o.ny) * o.nt;
  try {
    const auto s = toda::solve_reduced_bvp(o, toda::bump_guess(o, cfg.amp));
    b.add("sup_deviation_from_one", cells, s.sup_deviation(), 1e-6);
    b.add("discrete_residual", cells, s.residual, o.tol);
    b.add("newton_steps", s.steps, s.steps, o.max_steps);
  } catch (const std::exception& e) {
    b.fail("sup_deviation_from_one", cells, 1e-6, e);
  }
  return b.take();
}

inline Report invariants(const RunConfig& cfg) {
  detail::Builder b(cfg, "invariants");
  const cd a(0.4, 0.0);
  double odd = 0.0;
  for (int m : {1, 3, 5, 7}) odd = std::max(odd, std::abs(moments::alpha_m(1.3, cd(0.3, -0.2), m)));
  b.add("alpha_odd_vanish", 4, odd, 1e-10);
  for (int l : cfg.ell) {
    if (l < 0) throw std::invalid_argument("invariants: ell must be >= 0");
    const cd got = moments::alpha_m(1.0, a, 2 * l);
    const cd integral = moments::alpha_exact(a, 2 * l), closed = moments::alpha_closed_form(a, 2 * l);
    b.add("alpha_integral[l=" + std::to_string(l) + "]", 1, std::abs(got - integral) / std::abs(integral), 1e-10);
    b.add("alpha_closed_form[l=" + std::to_string(l) + "]", 1, std::abs(got - closed) / std::abs(closed), 1e-7);
  }
  const cd am(0.7, -0.2);
  double diag = 0.0, off = 0.0;
  for (int k = 1; k <= 4; ++k)
    for (int m = 1; m <= 4; ++m) {
      const cd v = moments::moment_variation(k, m, am, 1.3);
      if (k == m) {
        const cd ref = moments::moment_variation_exact(k, m, am);
        diag = std::max(diag, std::abs(v - ref) / std::abs(ref));
      } else {
        off = std::max(off, std::abs(v));
      }
    }
  b.add("moment_variation_diagonal", 4, diag, 1e-6);
  b.add("moment_variation_off_diagonal", 12, off, 1e-8);
  return b.take();
}

inline Report deform_asd(const RunConfig& cfg) {
  detail::Builder b(cfg, "deform-asd");
  detail::Rng g(cfg.seed);
  const int n = detail::samples_or(cfg, 200);
  double asd = 0.0, lie = 0.0;
  for (int m = 2; m <= 6; ++m) {
    std::vector<cd> coeffs;
    for (int i = 0; i < 3; ++i) coeffs.emplace_back(detail::uniform(g, -1, 1), detail::uniform(g, -1, 1));
    const deform::DeformationField f(m, coeffs);
    for (int i = 0; i < n; ++i) {
      const Point<4> p = detail::random_disc(g);
      asd = std::max(asd, deform::asd_check(f, p).max());
      const auto L = deform::lie_triple(f, p);
      const auto direct = deform::lie_c_direct(f, p), closed = deform::lie_c_closed_form(f, p);
      const double scale = 1 + max_abs(direct);
      lie = std::max({lie, max_abs(direct.re - L[1]) / scale, max_abs(direct.im - L[2]) / scale,
                      max_abs(direct - closed) / scale});
    }
  }
  b.add("asd_residuals", 5L * n, asd, 1e-9);
  b.add("lie_coefficient_match", 5L * n, lie, 1e-10);
  double control = 0.0;
  for (int i = 0; i < 20; ++i) control = std::max(control, deform::asd_check(deform::EulerField{}, detail::random_disc(g)).max());
  b.add("euler_control_violation", 20, control, 1e-3, Bound::Lower);
  return b.take();
}

inline Report foldlab_jump(const RunConfig& cfg) {
  detail::Builder b(cfg, "foldlab-jump");
  b.add("divisible_by_db_at_t0", 3, foldlab::divisibility_defect(foldlab::JumpModel{0.0}), 0.0);
  const double slope = foldlab::jump_slope({-1.0, -0.3, 0.0, 0.7, 2.0});
  b.add("square_slope_equals_one", 5, std::abs(slope - 1.0), 1e-12);
  double wedge10 = 0.0;
  for (double t : {-2.0, -0.5, 0.0, 0.5, 3.0}) {
    const foldlab::JumpModel m{t};
    wedge10 = std::max(wedge10, max_abs(wedge(m.coefficient1(), m.coefficient0())));
  }
  b.add("middle_wedge_first_vanishes", 5, wedge10, 1e-13);

  detail::Rng g(cfg.seed);
  const int n = detail::samples_or(cfg, 100);
  long failures = 0;
  double conj = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto f = canonical::fold_data(detail::uniform(g, -2, 2), detail::uniform(g, 0.2, 3),
                                        detail::uniform(g, 0, 2 * std::numbers::pi));
    const cd z = std::polar(detail::uniform(g, 0.1, 3), detail::uniform(g, 0, 2 * std::numbers::pi));
    try {
      const auto k = foldlab::eta_kernel(f, z), ka = foldlab::eta_kernel(f, -1.0 / std::conj(z));
      conj = std::max(conj, 1.0 - foldlab::line_alignment(ka.direction, k.direction.conjugate()));
    } catch (const foldlab::RankAmbiguityError&) {
      ++failures;
    }
  }
  b.add("eta_kernel_rank_one", n, static_cast<double>(failures), 0.0);
  b.add("eta_kernel_reality", n, conj, 1e-10);
  return b.take();
}

inline Report foldlab_gh(const RunConfig& cfg) {
  detail::Builder b(cfg, "foldlab-gh");
  detail::Rng g(cfg.seed);
  auto off_axis = [&](double box) {
    const double rho = detail::uniform(g, 0.2, box), phi = detail::uniform(g, 0, 2 * std::numbers::pi);
    return Point<4>{rho * std::cos(phi), rho * std::sin(phi), detail::uniform(g, -box, box), detail::uniform(g, -1, 1)};
  };
  const foldlab::GibbonsHawkingData one({0.0}, {1.0});
  const foldlab::GibbonsHawkingData three({-1.0, 0.2, 1.5}, {1.0, -1.0, 0.5});
  const foldlab::GibbonsHawkingData dipole({-0.8, 0.8}, {-1.0, 1.0});
  double mono1 = 0.0, mono3 = 0.0, bad = 0.0;
  for (int i = 0; i < 200; ++i) {
    mono1 = std::max(mono1, foldlab::gh_monopole_check(one, off_axis(3)));
    mono3 = std::max(mono3, foldlab::gh_monopole_check(three, off_axis(3)));
  }
  for (int i = 0; i < 20; ++i) bad = std::max(bad, foldlab::gh_monopole_check(three, off_axis(2), 1));
  b.add("monopole_single", 200, mono1, 1e-10);
  b.add("monopole_three_centres", 200, mono3, 1e-10);
  b.add("monopole_corrupted_control", 20, bad, 1e-2, Bound::Lower);

  const int n = detail::samples_or(cfg, 1000);
  double ident = 0.0, closed = 0.0, prop = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto f = foldlab::gh_forms(dipole, off_axis(2));
    ident = std::max(ident, f.identity_residual / (1 + std::abs(f.V)));
    closed = std::max(closed, f.closedness);
    for (int k = 0; k < 3; ++k)
      prop = std::max(prop, std::abs(foldlab::volume_coefficient(wedge(f.omega[k], f.omega[k])) - 2 * f.V) /
                                (1 + std::abs(f.V)));
  }
  b.add("triple_identities", n, ident, 1e-12);
  b.add("square_proportional_to_V", n, prop, 1e-12);
  b.add("triple_closed", n, closed, 1e-9);

  const auto line = foldlab::gh_line(dipole, {0.5, 0.2, -1.0, 0.0}, {0.5, 0.2, 1.0, 0.0}, 21);
  const bool flips = line.front().omega1_sq < 0.0 && line.back().omega1_sq > 0.0;
  b.add("sign_change_across_fold", 21, flips ? 0.0 : 1.0, 0.0);
  b.add("potential_zero_on_bisector", 1, std::abs(line[10].V), 1e-14);

  double eh = INFINITY;
  const foldlab::GibbonsHawkingData pair({-1.0, 1.0}, {1.0, 1.0});
  for (int i = 0; i < 200; ++i) eh = std::min(eh, pair.potential(off_axis(4)));
  b.add("eguchi_hanson_positive_potential", 200, eh, 0.0, Bound::Lower);
  return b.take();
}

// ---- dispatch ----

using SuiteFn = Report (*)(const RunConfig&);

inline const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"verify-canonical", verify_canonical}, {"suinf-residuals", suinf_residuals},
      {"higgs-radial", higgs_radial},         {"toda-residual", toda_residual},
      {"toda-uniqueness", toda_uniqueness},   {"invariants", invariants},
      {"deform-asd", deform_asd},             {"foldlab-jump", foldlab_jump},
      {"foldlab-gh", foldlab_gh}};
  return r;
}

/// Every suite, with check names prefixed by the suite name.
inline Report all(const RunConfig& cfg) {
  Report out;
  out.suite = "all";
  for (const auto& [name, fn] : registry()) {
    Report r = fn(cfg);
    for (auto c : r.checks) {
      c.name = name + "/" + c.name;
      out.checks.push_back(std::move(c));
    }
    for (const auto& d : r.diagnostics) out.diagnostics.push_back(name + "/" + d);
  }
  return out;
}

/// Runs cfg.command; unknown names throw std::invalid_argument.
inline Report run(const RunConfig& cfg, bool timing = false) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  if (cfg.command == "all") {
    r = all(cfg);
  } else {
    SuiteFn fn = nullptr;
    for (const auto& [name, f] : registry())
      if (name == cfg.command) fn = f;
    if (!fn) throw std::invalid_argument("unknown suite: " + cfg.command);
    r = fn(cfg);
  }
  if (timing) r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace hkfold::suites
