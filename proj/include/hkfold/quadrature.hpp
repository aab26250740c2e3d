#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hkfold {

struct Rule {
  std::vector<double> nodes, weights;
};

/// Gauss-Legendre rule on [-1, 1]; Newton iteration on std::legendre.
inline Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const unsigned un = static_cast<unsigned>(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(un, x);
      const double pm = n > 1 ? std::legendre(un - 1, x) : 1.0;
      dp = n * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = std::legendre(un, x), pm = n > 1 ? std::legendre(un - 1, x) : 1.0;
    dp = n * (x * p - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2) r.nodes[n / 2] = 0.0;
  return r;
}

/// Gauss-Legendre rule mapped to [a, b].
inline Rule gauss_legendre(int n, double a, double b) {
  Rule r = gauss_legendre(n);
  const double h = 0.5 * (b - a), m = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = m + h * r.nodes[i];
    r.weights[i] *= h;
  }
  return r;
}

}  // namespace hkfold
