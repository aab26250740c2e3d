#pragma once

#include <array>
#include <cstddef>

namespace hkfold {

/// One classical Runge-Kutta step for y' = f(t, y). T may be a jet type,
/// which carries the derivative of the step with respect to initial data.
template <std::size_t K, class F, class T>
std::array<T, K> rk4_step(F&& f, double t, const std::array<T, K>& y, double h) {
  auto axpy = [](const std::array<T, K>& a, double s, const std::array<T, K>& b) {
    std::array<T, K> r;
    for (std::size_t i = 0; i < K; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const auto k1 = f(t, y);
  const auto k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const auto k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const auto k4 = f(t + h, axpy(y, h, k3));
  std::array<T, K> r;
  for (std::size_t i = 0; i < K; ++i) r[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return r;
}

}  // namespace hkfold
