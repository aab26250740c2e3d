#pragma once

#include <array>
#include <cmath>
#include <random>

namespace testing_support {

using Rng = std::mt19937_64;

inline double uniform(Rng& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

template <int N>
std::array<double, N> uniform_point(Rng& g, double lo, double hi) {
  std::array<double, N> p;
  for (auto& v : p) v = uniform(g, lo, hi);
  return p;
}

/// Random quadratic polynomial field in N variables, usable with jets.
template <int N>
struct RandomQuadratic {
  double c0 = 0;
  std::array<double, N> c1{};
  std::array<std::array<double, N>, N> c2{};

  static RandomQuadratic draw(Rng& g) {
    RandomQuadratic q;
    q.c0 = uniform(g, -1, 1);
    for (auto& v : q.c1) v = uniform(g, -1, 1);
    for (auto& row : q.c2)
      for (auto& v : row) v = uniform(g, -1, 1);
    return q;
  }

  template <class T>
  T operator()(const std::array<T, N>& c) const {
    T r(c0);
    for (int i = 0; i < N; ++i) {
      r = r + c1[i] * c[i];
      for (int j = 0; j < N; ++j) r = r + c2[i][j] * c[i] * c[j];
    }
    return r;
  }
};

/// Random cubic-in-one-variable times quadratic field, enough for d^2 = 0
/// and Leibniz checks with nonzero third derivatives.
template <int N>
struct RandomCubic {
  RandomQuadratic<N> q;
  std::array<double, N> lin{};

  static RandomCubic draw(Rng& g) {
    RandomCubic r;
    r.q = RandomQuadratic<N>::draw(g);
    for (auto& v : r.lin) v = uniform(g, -1, 1);
    return r;
  }
  template <class T>
  T operator()(const std::array<T, N>& c) const {
    T l(0.0);
    for (int i = 0; i < N; ++i) l = l + lin[i] * c[i];
    return q(c) * l;
  }
};

}  // namespace testing_support
