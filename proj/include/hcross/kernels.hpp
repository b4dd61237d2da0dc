#pragma once

// Fejer, de la Vallee Poussin and dyadic band kernels, plus the Bernoulli-type
// smoothing multiplier. Multivariate kernels are tensor products; the per-axis
// coefficient profiles are the primary objects.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "hcross/spectral.hpp"

namespace hcross::kernels {

/// Fejer profile (1 - |k|/j)_+.
inline double fejer_coef(int j, int k) {
  if (j < 1) throw std::invalid_argument("fejer order must be >= 1");
  const double v = 1.0 - static_cast<double>(std::abs(k)) / j;
  return v > 0.0 ? v : 0.0;
}

/// de la Vallee Poussin profile of V_m = 2 K_{2m} - K_m: 1 on |k| <= m, linear to 0 at |k| = 2m.
inline double vdp_coef(int m, int k) {
  if (m < 1) throw std::invalid_argument("de la Vallee Poussin order must be >= 1");
  return 2.0 * fejer_coef(2 * m, k) - fejer_coef(m, k);
}

/// Profile of the univariate band kernel A_s.
inline double a_coef(int s, int k) {
  if (s < 0) throw std::invalid_argument("band level must be >= 0");
  if (s == 0) return k == 0 ? 1.0 : 0.0;
  if (s == 1) return vdp_coef(1, k) - (k == 0 ? 1.0 : 0.0);
  return vdp_coef(1 << (s - 1), k) - vdp_coef(1 << (s - 2), k);
}

/// Largest |k| with a_coef(s, k) != 0.
inline int a_degree(int s) { return s == 0 ? 0 : (1 << s) - 1; }

inline double a_coef(const MultiIndex& s, const MultiIndex& k) {
  double v = 1.0;
  for (std::size_t j = 0; j < s.size() && v != 0.0; ++j) v *= a_coef(s[j], k[j]);
  return v;
}

namespace detail {

template <class Profile>
TrigPoly tensor_kernel(const MultiIndex& deg, Profile profile) {
  const std::size_t d = deg.size();
  std::vector<std::vector<int>> axes(d);
  for (std::size_t j = 0; j < d; ++j)
    for (int k = -deg[j]; k <= deg[j]; ++k)
      if (profile(j, k) != 0.0) axes[j].push_back(k);
  TrigPoly out(d);
  for (const auto& k : hcross::detail::cartesian(axes)) {
    double c = 1.0;
    for (std::size_t j = 0; j < d; ++j) c *= profile(j, k[j]);
    out.set(k, c);
  }
  return out.hermitian_symmetrized();
}

}  // namespace detail

/// Tensor Fejer kernel with per-axis orders js.
inline TrigPoly fejer(const MultiIndex& js) {
  MultiIndex deg(js.size());
  for (std::size_t j = 0; j < js.size(); ++j) {
    if (js[j] < 1) throw std::invalid_argument("fejer order must be >= 1");
    deg[j] = js[j] - 1;
  }
  return detail::tensor_kernel(deg, [&](std::size_t j, int k) { return fejer_coef(js[j], k); });
}

inline TrigPoly fejer(int j, std::size_t d = 1) { return fejer(MultiIndex::filled(d, j)); }

/// Closed form K_j(x) = sin^2(jx/2) / (j sin^2(x/2)); within 1e-6 of the
/// singular points the coefficient sum is used instead.
inline double fejer_closed(int j, double x) {
  if (j < 1) throw std::invalid_argument("fejer order must be >= 1");
  const double half = 0.5 * wrap_angle(x);
  const double sh = std::sin(half);
  if (std::abs(sh) < 0.5e-6) {
    double acc = 1.0;
    for (int k = 1; k < j; ++k) acc += 2.0 * (1.0 - static_cast<double>(k) / j) * std::cos(k * x);
    return acc;
  }
  const double num = std::sin(j * half);
  return num * num / (j * sh * sh);
}

inline TrigPoly vdp(const MultiIndex& ms) {
  MultiIndex deg(ms.size());
  for (std::size_t j = 0; j < ms.size(); ++j) {
    if (ms[j] < 1) throw std::invalid_argument("de la Vallee Poussin order must be >= 1");
    deg[j] = 2 * ms[j] - 1;
  }
  return detail::tensor_kernel(deg, [&](std::size_t j, int k) { return vdp_coef(ms[j], k); });
}

inline TrigPoly vdp(int m, std::size_t d = 1) { return vdp(MultiIndex::filled(d, m)); }

/// A_s(x) = prod_j A_{s_j}(x_j).
inline TrigPoly a_kernel(const MultiIndex& s) {
  hcross::detail::check_level(s);
  MultiIndex deg(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) deg[j] = a_degree(s[j]);
  return detail::tensor_kernel(deg, [&](std::size_t j, int k) { return a_coef(s[j], k); });
}

/// Univariate factor of the Fourier multiplier of F_r:
/// 1 at k = 0, |k|^{-r} e^{-i sign(k) r pi / 2} otherwise.
inline Complex bernoulli_factor(double r, int k) {
  if (!(r > 0.0)) throw std::invalid_argument("smoothness r must be positive");
  if (k == 0) return 1.0;
  const double sign = k > 0 ? 1.0 : -1.0;
  return std::polar(std::pow(std::abs(static_cast<double>(k)), -r), -sign * r * std::numbers::pi / 2.0);
}

inline Complex bernoulli_multiplier(double r, const MultiIndex& k) {
  Complex v = 1.0;
  for (int kj : k) v *= bernoulli_factor(r, kj);
  return v;
}

}  // namespace hcross::kernels
