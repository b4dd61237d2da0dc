#pragma once

// Dyadic decompositions (delta_s, A_s, layers f_j), norms and quasi-norms,
// spectral mixed differences, and the explicit block-comparison sums.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "hcross/kernels.hpp"
#include "hcross/spectral.hpp"

namespace hcross {

/// Nonnegative weights eps_s indexed by dyadic level.
using BlockArray = std::map<MultiIndex, double>;

// ---------------------------------------------------------------------------
// Block decompositions
// ---------------------------------------------------------------------------

inline TrigPoly delta_block(const TrigPoly& f, const MultiIndex& s) {
  if (s.size() != f.dim()) throw std::invalid_argument("delta_block: dimension mismatch");
  return f.filtered([&](const MultiIndex& k) { return dyadic_level(k) == s; });
}

/// All nonzero delta_s(f), keyed by s.
inline std::map<MultiIndex, TrigPoly> delta_decomposition(const TrigPoly& f) {
  std::map<MultiIndex, TrigPoly> out;
  for (const auto& [k, c] : f) {
    auto [it, fresh] = out.try_emplace(dyadic_level(k), f.dim());
    it->second.set(k, c);
  }
  return out;
}

/// A_s(f): coefficientwise multiplication by the band profile of A_s.
inline TrigPoly a_block(const TrigPoly& f, const MultiIndex& s) {
  if (s.size() != f.dim()) throw std::invalid_argument("a_block: dimension mismatch");
  detail::check_level(s);
  return f.transformed([&](const MultiIndex& k, Complex c) { return c * kernels::a_coef(s, k); });
}

/// All nonzero A_u(f), keyed by u. Each frequency of level l feeds at most the
/// bands l and l + 1 on each axis.
inline std::map<MultiIndex, TrigPoly> a_decomposition(const TrigPoly& f) {
  std::map<MultiIndex, TrigPoly> out;
  const std::size_t d = f.dim();
  for (const auto& [k, c] : f) {
    std::array<std::array<std::pair<int, double>, 2>, kMaxDim> opts{};
    std::array<int, kMaxDim> nopt{};
    for (std::size_t j = 0; j < d; ++j) {
      const int l = dyadic_level(k[j]);
      for (int u : {l, l + 1}) {
        const double w = kernels::a_coef(u, k[j]);
        if (w != 0.0) opts[j][nopt[j]++] = {u, w};
      }
    }
    std::array<int, kMaxDim> pick{};
    while (true) {
      MultiIndex u(d);
      double w = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        u[j] = opts[j][pick[j]].first;
        w *= opts[j][pick[j]].second;
      }
      auto [it, fresh] = out.try_emplace(u, d);
      it->second.add(k, c * w);
      std::size_t j = 0;
      for (; j < d; ++j) {
        if (++pick[j] < nopt[j]) break;
        pick[j] = 0;
      }
      if (j == d) break;
    }
  }
  return out;
}

/// f_j = sum over ||s||_1 = j of delta_s(f).
inline TrigPoly layer(const TrigPoly& f, int j) {
  if (j < 0) throw std::invalid_argument("layer index must be nonnegative");
  return f.filtered([&](const MultiIndex& k) { return dyadic_level(k).sum() == j; });
}

inline std::map<int, TrigPoly> layer_decomposition(const TrigPoly& f) {
  std::map<int, TrigPoly> out;
  for (const auto& [k, c] : f) {
    auto [it, fresh] = out.try_emplace(dyadic_level(k).sum(), f.dim());
    it->second.set(k, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

enum class NormKind { lp, sup, wiener, abeta };

struct NormRequest {
  NormKind kind = NormKind::lp;
  double p = 2.0;
  double beta = 1.0;
  /// Grid points per axis relative to the Nyquist count 2 deg + 1 (rounded up to a power of two).
  double oversample = 8.0;

  static NormRequest lp(double p, double oversample = 8.0) { return {NormKind::lp, p, 1.0, oversample}; }
  static NormRequest sup(double oversample = 8.0) { return {NormKind::sup, 0.0, 1.0, oversample}; }
  static NormRequest wiener() { return {NormKind::wiener, 0.0, 1.0, 0.0}; }
  static NormRequest abeta(double beta) { return {NormKind::abeta, 0.0, beta, 0.0}; }
};

/// ||f||_A = sum |c_k|.
inline double wiener_norm(const TrigPoly& f) {
  double acc = 0.0;
  for (const auto& [k, c] : f) acc += std::abs(c);
  return acc;
}

/// |f|_{A_beta} = (sum |c_k|^beta)^{1/beta}, 0 < beta <= 1.
inline double abeta_norm(const TrigPoly& f, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("A_beta requires 0 < beta <= 1");
  if (beta == 1.0) return wiener_norm(f);
  double acc = 0.0;
  for (const auto& [k, c] : f) acc += std::pow(std::abs(c), beta);
  return std::pow(acc, 1.0 / beta);
}

/// Exact L_2 norm via Parseval.
inline double l2_norm(const TrigPoly& f) {
  double acc = 0.0;
  for (const auto& [k, c] : f) acc += std::norm(c);
  return std::sqrt(acc);
}

struct NormEstimate {
  double value = 0.0;
  /// |value - value on the half-resolution grid|; zero when the rule is exact.
  double refinement_delta = 0.0;
  bool exact = false;
};

inline double grid_lp(const GridFn& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L_p requires p >= 1; use A_beta for quasi-norms");
  if (g.values.empty()) return 0.0;
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& v : g.values) acc += std::norm(v);
    return std::sqrt(acc / static_cast<double>(g.values.size()));
  }
  for (const auto& v : g.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc / static_cast<double>(g.values.size()), 1.0 / p);
}

inline double grid_sup(const GridFn& g) {
  double best = 0.0;
  for (const auto& v : g.values) best = std::max(best, std::abs(v));
  return best;
}

/// L_p norm, normalized so that ||1||_p = 1. p = 2 uses Parseval; other p use the
/// rectangle rule on an oversampled grid, which is exact for even integer p once
/// the grid resolves p times the degree.
inline NormEstimate lp_norm(const TrigPoly& f, double p, double oversample = 8.0) {
  if (!(p >= 1.0)) throw std::invalid_argument("L_p requires p >= 1; use A_beta for quasi-norms");
  if (f.empty()) return {0.0, 0.0, true};
  if (p == 2.0) return {l2_norm(f), 0.0, true};
  const MultiIndex deg = f.degree();
  const auto sizes = oversampled_sizes(deg, oversample);
  const double value = grid_lp(synthesize(f, sizes), p);
  const bool even = std::floor(p / 2.0) == p / 2.0;
  bool exact = even;
  for (std::size_t j = 0; j < sizes.size() && exact; ++j)
    exact = static_cast<double>(sizes[j]) > p * deg[j];
  if (exact) return {value, 0.0, true};
  double delta = 0.0;
  if (oversample >= 2.0) {
    const double coarse = grid_lp(synthesize(f, oversampled_sizes(deg, oversample / 2.0)), p);
    delta = std::abs(value - coarse);
  }
  return {value, delta, false};
}

struct SupEstimate {
  /// Grid maximum: a certified lower bound on the true sup.
  double grid_max = 0.0;
  /// Grid maximum after a local golden-section polish (still a lower bound, usually sharper).
  double refined = 0.0;
  std::array<double, kMaxDim> argmax{};
};

namespace detail {

inline double golden_max(auto&& fn, double a, double b, int iters = 40) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = fn(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace detail

/// Grid argmax (first in row-major order on ties) followed by one coordinatewise
/// golden-section polish within one grid step.
inline SupEstimate sup_norm(const TrigPoly& f, double oversample = 8.0) {
  SupEstimate est;
  if (f.empty()) return est;
  const std::size_t d = f.dim();
  const auto sizes = oversampled_sizes(f.degree(), oversample);
  const GridFn g = synthesize(f, sizes);
  std::size_t best = 0;
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (std::abs(g.values[i]) > std::abs(g.values[best])) best = i;
  est.grid_max = std::abs(g.values[best]);
  est.argmax = g.point(best);
  est.refined = est.grid_max;

  std::array<double, kMaxDim> x = est.argmax;
  for (std::size_t j = 0; j < d; ++j) {
    const double h = kTwoPi / static_cast<double>(sizes[j]);
    auto along = [&](double t) {
      auto y = x;
      y[j] = t;
      return std::abs(evaluate(f, std::span<const double>(y.data(), d)));
    };
    const double t = detail::golden_max(along, x[j] - h, x[j] + h);
    const double v = along(t);
    if (v > est.refined) {
      x[j] = wrap_angle(t);
      est.refined = v;
    }
  }
  est.argmax = x;
  return est;
}

/// Dispatch on the requested norm. Sup returns the refined estimate.
inline double norm(const TrigPoly& f, const NormRequest& req) {
  switch (req.kind) {
    case NormKind::lp:
      return lp_norm(f, req.p, req.oversample).value;
    case NormKind::sup:
      return sup_norm(f, req.oversample).refined;
    case NormKind::wiener:
      return wiener_norm(f);
    case NormKind::abeta:
      return abeta_norm(f, req.beta);
  }
  throw std::logic_error("unknown norm kind");
}

inline double norm(const GridFn& g, const NormRequest& req) {
  switch (req.kind) {
    case NormKind::lp:
      return grid_lp(g, req.p);
    case NormKind::sup:
      return grid_sup(g);
    case NormKind::wiener:
      return wiener_norm(analyze(g));
    case NormKind::abeta:
      return abeta_norm(analyze(g), req.beta);
  }
  throw std::logic_error("unknown norm kind");
}

// ---------------------------------------------------------------------------
// Mixed differences
// ---------------------------------------------------------------------------

/// Forward mixed difference prod_{j in axes} Delta^l_{t_j, j}, applied spectrally:
/// c_k -> c_k prod_{j in axes} (e^{i k_j t_j} - 1)^l. An empty axis set is the identity.
inline TrigPoly mixed_difference(const TrigPoly& f, std::span<const std::size_t> axes, std::span<const double> steps,
                                 int order) {
  if (order < 1) throw std::invalid_argument("difference order must be >= 1");
  if (steps.size() != f.dim()) throw std::invalid_argument("mixed_difference: step dimension mismatch");
  for (auto j : axes)
    if (j >= f.dim()) throw std::invalid_argument("mixed_difference: axis out of range");
  if (axes.empty()) return f;
  return f.transformed([&](const MultiIndex& k, Complex c) {
    for (auto j : axes) {
      const Complex base = std::polar(1.0, k[j] * steps[j]) - 1.0;
      Complex m = 1.0;
      for (int i = 0; i < order; ++i) m *= base;
      c *= m;
    }
    return c;
  });
}

inline GridFn mixed_difference(const GridFn& g, std::span<const std::size_t> axes, std::span<const double> steps,
                               int order) {
  const TrigPoly diff = mixed_difference(analyze(g), axes, steps, order);
  GridFn out = synthesize(diff, g.sizes);
  out.aliased = out.aliased || g.aliased;
  return out;
}

// ---------------------------------------------------------------------------
// Block comparison sums
// ---------------------------------------------------------------------------

/// (sum_s eps_s^u 2^{||s||_1 (u/v - 1)})^{1/u}; v may be +infinity.
inline double comparison_sum(const BlockArray& eps, double u, double v) {
  if (!(u >= 1.0) || std::isinf(u)) throw std::invalid_argument("comparison_sum: need 1 <= u < inf");
  if (!(v >= 1.0)) throw std::invalid_argument("comparison_sum: need v >= 1");
  const double ratio = std::isinf(v) ? 0.0 : u / v;
  double acc = 0.0;
  for (const auto& [s, e] : eps) {
    if (e < 0.0) throw std::invalid_argument("comparison_sum: negative weight");
    if (e == 0.0) continue;
    acc += std::pow(e, u) * std::exp2(s.sum() * (ratio - 1.0));
  }
  return std::pow(acc, 1.0 / u);
}

}  // namespace hcross
