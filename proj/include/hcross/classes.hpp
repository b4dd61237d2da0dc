#pragma once

// Membership normalizers: for a trigonometric polynomial f and a named
// smoothness class, the largest lambda with lambda * f inside the class.
// Every class constant is normalized to 1; the reported scales are exact for
// the normalized definitions and are "up to a constant" for the classical ones.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "hcross/kernels.hpp"
#include "hcross/norms.hpp"
#include "hcross/spectral.hpp"

namespace hcross {

/// W^r_q: f = phi * F_r with ||phi||_q <= 1.
struct ClassW {
  double r = 1.0;
  double q = 2.0;
};

/// H^r_q with l = [r] + 1.
struct ClassH {
  double r = 1.0;
  double q = 2.0;
};

/// The polynomial ball H(Q)_q: max_s ||A_s(f)||_q <= 1.
struct ClassHQ {
  double q = 2.0;
};

/// W^{a,b}_{A_beta}: |f_j|_{A_beta} <= 2^{-aj} jbar^{(d-1)b} per layer.
struct ClassWA {
  double a = 1.0;
  double b = 0.0;
  double beta = 1.0;
};

/// H^{a,b}_{A_beta}: |delta_s(f)|_{A_beta} <= 2^{-aj} jbar^{(d-1)b} per block, j = ||s||_1.
struct ClassHA {
  double a = 1.0;
  double b = 0.0;
  double beta = 1.0;
};

using ClassSpec = std::variant<ClassW, ClassH, ClassHQ, ClassWA, ClassHA>;

/// Uniformly bounded orthonormal system descriptor. Only the trigonometric system ships.
struct TrigonometricSystem {
  static constexpr double uniform_bound = 1.0;
  static constexpr const char* name = "trigonometric";
};

enum class Criterion { exact, proxy, direct };
enum class HMode { proxy, direct };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::exact:
      return "exact";
    case Criterion::proxy:
      return "proxy";
    case Criterion::direct:
      return "direct";
  }
  return "?";
}

struct BindingEntry {
  std::string label;
  double gauge = 0.0;      // measured quantity
  double allowance = 0.0;  // what the class permits
  double ratio() const { return allowance > 0.0 ? gauge / allowance : std::numeric_limits<double>::infinity(); }
};

struct MembershipReport {
  /// Largest admissible scale; +inf when f = 0.
  double lambda = std::numeric_limits<double>::infinity();
  Criterion criterion = Criterion::exact;
  std::vector<BindingEntry> entries;
  std::size_t binding = 0;
  /// Direct H mode: every difference vanished, only the e = {} term limits lambda.
  bool unbounded_by_differences = false;
  /// Direct H mode with q = inf: some step product fell below 1e-12.
  bool unstable = false;
  std::string note;
};

struct ClassOptions {
  /// Oversampling for grid L_q norms (q != 2) and sup norms.
  double oversample = 4.0;
  HMode h_mode = HMode::proxy;
  /// Dyadic ladder depth for the direct H mode: steps 2 pi 2^{-i}, i = 0..ladder_levels.
  int ladder_levels = 8;
};

inline constexpr const char* kConstantNote = "up to the class's unspecified constant";

namespace detail {

inline double gauge_q(const TrigPoly& f, double q, double oversample) {
  if (std::isinf(q)) return sup_norm(f, oversample).refined;
  return lp_norm(f, q, oversample).value;
}

inline void finish(MembershipReport& rep) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const double r = rep.entries[i].ratio();
    if (r > worst) {
      worst = r;
      rep.binding = i;
    }
  }
  rep.lambda = worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

inline double jbar_weight(int j, std::size_t d, double a, double b) {
  const double jbar = std::max(j, 1);
  return std::exp2(-a * j) * std::pow(jbar, (static_cast<double>(d) - 1.0) * b);
}

}  // namespace detail

/// phi with phi-hat(k) = f-hat(k) / F_r-hat(k), so that f = phi * F_r.
inline TrigPoly bernoulli_preimage(const TrigPoly& f, double r) {
  return f.transformed([&](const MultiIndex& k, Complex c) { return c / kernels::bernoulli_multiplier(r, k); });
}

/// phi * F_r, coefficientwise.
inline TrigPoly bernoulli_apply(const TrigPoly& phi, double r) {
  return phi.transformed([&](const MultiIndex& k, Complex c) { return c * kernels::bernoulli_multiplier(r, k); });
}

inline MembershipReport scale_into_Wrq(const TrigPoly& f, double r, double q, const ClassOptions& opt = {}) {
  if (!(r > 0.0)) throw std::invalid_argument("W^r_q requires r > 0");
  if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("W^r_q normalizer requires 1 <= q < inf");
  MembershipReport rep;
  rep.criterion = Criterion::exact;
  rep.entries.push_back({"phi", detail::gauge_q(bernoulli_preimage(f, r), q, opt.oversample), 1.0});
  detail::finish(rep);
  return rep;
}

inline MembershipReport scale_into_Hrq_proxy(const TrigPoly& f, double r, double q, const ClassOptions& opt = {}) {
  if (!(r >= 0.0)) throw std::invalid_argument("H^r_q requires r >= 0");
  if (!(q >= 1.0)) throw std::invalid_argument("H^r_q requires q >= 1");
  MembershipReport rep;
  rep.criterion = Criterion::proxy;
  rep.note = kConstantNote;
  for (const auto& [u, part] : a_decomposition(f))
    rep.entries.push_back({"A" + u.str(), detail::gauge_q(part, q, opt.oversample), std::exp2(-r * u.sum())});
  detail::finish(rep);
  return rep;
}

inline MembershipReport scale_into_Hrq_direct(const TrigPoly& f, double r, double q, const ClassOptions& opt = {}) {
  if (!(r > 0.0)) throw std::invalid_argument("H^r_q requires r > 0");
  if (!(q >= 1.0)) throw std::invalid_argument("H^r_q requires q >= 1");
  MembershipReport rep;
  rep.criterion = Criterion::direct;
  rep.note = kConstantNote;
  const std::size_t d = f.dim();
  const int order = static_cast<int>(std::floor(r)) + 1;
  const int levels = opt.ladder_levels;

  rep.entries.push_back({"e={}", detail::gauge_q(f, q, opt.oversample), 1.0});
  bool any_difference = false;
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    std::vector<std::size_t> axes;
    for (std::size_t j = 0; j < d; ++j)
      if (mask & (1u << j)) axes.push_back(j);
    std::vector<int> pick(axes.size(), 0);
    while (true) {
      std::vector<double> steps(d, 0.0);
      double denom = 1.0;
      std::string label = "e=" + std::to_string(mask) + " i=";
      for (std::size_t a = 0; a < axes.size(); ++a) {
        steps[axes[a]] = kTwoPi * std::exp2(-pick[a]);
        denom *= std::pow(steps[axes[a]], r);
        label += std::to_string(pick[a]) + (a + 1 < axes.size() ? "," : "");
      }
      const TrigPoly diff = mixed_difference(f, axes, steps, order);
      const double g = diff.empty() ? 0.0 : detail::gauge_q(diff, q, opt.oversample);
      if (g > 0.0) any_difference = true;
      if (std::isinf(q) && denom < 1e-12) rep.unstable = true;
      rep.entries.push_back({label, g, denom});
      std::size_t a = 0;
      for (; a < axes.size(); ++a) {
        if (++pick[a] <= levels) break;
        pick[a] = 0;
      }
      if (a == axes.size()) break;
    }
  }
  rep.unbounded_by_differences = !any_difference;
  detail::finish(rep);
  return rep;
}

inline MembershipReport scale_into_Hrq(const TrigPoly& f, double r, double q, const ClassOptions& opt = {}) {
  return opt.h_mode == HMode::proxy ? scale_into_Hrq_proxy(f, r, q, opt) : scale_into_Hrq_direct(f, r, q, opt);
}

inline MembershipReport scale_into_structural(const TrigPoly& f, const ClassWA& c) {
  if (!(c.beta > 0.0 && c.beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
  MembershipReport rep;
  rep.criterion = Criterion::exact;
  for (const auto& [j, part] : layer_decomposition(f))
    rep.entries.push_back(
        {"layer " + std::to_string(j), abeta_norm(part, c.beta), detail::jbar_weight(j, f.dim(), c.a, c.b)});
  detail::finish(rep);
  return rep;
}

inline MembershipReport scale_into_structural(const TrigPoly& f, const ClassHA& c) {
  if (!(c.beta > 0.0 && c.beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
  MembershipReport rep;
  rep.criterion = Criterion::exact;
  for (const auto& [s, part] : delta_decomposition(f))
    rep.entries.push_back({"delta" + s.str(), abeta_norm(part, c.beta), detail::jbar_weight(s.sum(), f.dim(), c.a, c.b)});
  detail::finish(rep);
  return rep;
}

/// Dispatch over the class variant.
inline MembershipReport scale_into(const TrigPoly& f, const ClassSpec& spec, const ClassOptions& opt = {}) {
  return std::visit(
      [&](const auto& c) -> MembershipReport {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ClassW>) return scale_into_Wrq(f, c.r, c.q, opt);
        if constexpr (std::is_same_v<T, ClassH>) return scale_into_Hrq(f, c.r, c.q, opt);
        if constexpr (std::is_same_v<T, ClassHQ>) return scale_into_Hrq_proxy(f, 0.0, c.q, opt);
        if constexpr (std::is_same_v<T, ClassWA>) return scale_into_structural(f, c);
        if constexpr (std::is_same_v<T, ClassHA>) return scale_into_structural(f, c);
      },
      spec);
}

inline std::string describe(const ClassSpec& spec) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ClassW>) return "W^r_q(r=" + std::to_string(c.r) + ",q=" + std::to_string(c.q) + ")";
        if constexpr (std::is_same_v<T, ClassH>) return "H^r_q(r=" + std::to_string(c.r) + ",q=" + std::to_string(c.q) + ")";
        if constexpr (std::is_same_v<T, ClassHQ>) return "H(Q)_q(q=" + std::to_string(c.q) + ")";
        if constexpr (std::is_same_v<T, ClassWA>)
          return "W^{a,b}_{A_beta}(a=" + std::to_string(c.a) + ",b=" + std::to_string(c.b) +
                 ",beta=" + std::to_string(c.beta) + ")";
        if constexpr (std::is_same_v<T, ClassHA>)
          return "H^{a,b}_{A_beta}(a=" + std::to_string(c.a) + ",b=" + std::to_string(c.b) +
                 ",beta=" + std::to_string(c.beta) + ")";
      },
      spec);
}

// ---------------------------------------------------------------------------
// Embedding checks
// ---------------------------------------------------------------------------

/// Parameters outside the range where an embedding is known to hold.
class unsupported_range : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class SourceClass { W, H };

struct EmbeddingReport {
  double lambda = 0.0;  // scale placing f in the source class
  double a = 0.0;
  double b = 0.0;
  /// Per layer j: ||(lambda f)_j||_A / (2^{-aj} jbar^{(d-1)b}).
  std::map<int, double> layer_ratios;
  double max_ratio = 0.0;
};

/// Scales f into W^r_q (or H^r_q via the A_s proxy) and measures the layer
/// A-norms against 2^{-(r-1/q)j} jbar^{(d-1)b}, b = 1 - 1/q for W and 1 for H.
inline EmbeddingReport check_embedding(const TrigPoly& f, double r, double q, SourceClass src,
                                       const ClassOptions& opt = {}) {
  if (!(r > 1.0 / q)) throw unsupported_range("embedding requires r > 1/q");
  if (src == SourceClass::W && !(q > 1.0 && q <= 2.0)) throw unsupported_range("W embedding requires 1 < q <= 2");
  if (src == SourceClass::H && !(q >= 1.0 && q <= 2.0)) throw unsupported_range("H embedding requires 1 <= q <= 2");
  EmbeddingReport rep;
  rep.a = r - 1.0 / q;
  rep.b = src == SourceClass::W ? 1.0 - 1.0 / q : 1.0;
  if (f.empty()) return rep;
  const MembershipReport m = src == SourceClass::W ? scale_into_Wrq(f, r, q, opt) : scale_into_Hrq_proxy(f, r, q, opt);
  rep.lambda = m.lambda;
  for (const auto& [j, part] : layer_decomposition(f)) {
    const double v = m.lambda * wiener_norm(part) / detail::jbar_weight(j, f.dim(), rep.a, rep.b);
    rep.layer_ratios[j] = v;
    rep.max_ratio = std::max(rep.max_ratio, v);
  }
  return rep;
}

/// Per-layer check of |f_j|_{A_beta}^beta <= sum_{||s||_1 = j} |delta_s(f)|_{A_beta}^beta;
/// returns the largest relative excess (<= 0 when the inequality holds everywhere).
inline double structural_layer_excess(const TrigPoly& f, double beta) {
  std::map<int, double> block_sums;
  for (const auto& [s, part] : delta_decomposition(f)) block_sums[s.sum()] += std::pow(abeta_norm(part, beta), beta);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [j, part] : layer_decomposition(f)) {
    const double lhs = std::pow(abeta_norm(part, beta), beta);
    worst = std::max(worst, (lhs - block_sums[j]) / std::max(block_sums[j], 1e-300));
  }
  return worst;
}

}  // namespace hcross
