#pragma once

// Fooling-function constructions: polynomials on a frequency set that vanish on
// a given point set yet have large sup norm, the multi-block fooler built from
// them, a single-box analogue, the real integration fooler obtained by linear
// programming, and the evaluation of any such function as a lower-bound witness.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcross/classes.hpp"
#include "hcross/kernels.hpp"
#include "hcross/lp.hpp"
#include "hcross/norms.hpp"
#include "hcross/parallel.hpp"
#include "hcross/spectral.hpp"

namespace hcross {

/// The candidate does not vanish on the point set it is supposed to fool.
class invalid_witness : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random stream keyed by the global seed and a list of integer tags.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::initializer_list<std::int64_t> tags = {}) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (auto t : tags) {
    words.push_back(static_cast<std::uint32_t>(static_cast<std::uint64_t>(t)));
    words.push_back(static_cast<std::uint32_t>(static_cast<std::uint64_t>(t) >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

inline std::uint64_t block_seed(std::uint64_t seed, const MultiIndex& s) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (int v : s) words.push_back(static_cast<std::uint32_t>(v + 1));
  std::seed_seq seq(words.begin(), words.end());
  std::mt19937_64 rng(seq);
  return rng();
}

// ---------------------------------------------------------------------------
// Vanishing polynomials
// ---------------------------------------------------------------------------

struct VanishingOptions {
  std::uint64_t seed = 0;
  int random_candidates = 32;
  /// Projections of point evaluations at seeded random locations.
  int peak_candidates = 8;
  double select_oversample = 4.0;
  double certify_oversample = 16.0;
};

struct VanishingPoly {
  TrigPoly g{1};
  PointSet points{1};
  /// Refined sup estimate after normalization (1 up to rounding).
  double sup = 0.0;
  /// Grid maximum at the certification oversampling; sup - grid_max is the recorded slack.
  double grid_max = 0.0;
  std::array<double, kMaxDim> argmax{};
  /// max_nu |g(xi_nu)|.
  double residual = 0.0;
  std::size_t null_dimension = 0;
  bool ill_conditioned = false;
  double gram_rcond = 1.0;
  std::string selected;
};

/// Per-axis frequency sets as unions of closed integer intervals.
using AxisIntervals = std::vector<std::pair<int, int>>;

namespace detail {

inline std::vector<AxisIntervals> rho_intervals(const MultiIndex& s) {
  std::vector<AxisIntervals> out;
  for (int v : s) {
    if (v == 0) {
      out.push_back({{0, 0}});
    } else {
      const int lo = 1 << (v - 1), hi = (1 << v) - 1;
      out.push_back({{-hi, -lo}, {lo, hi}});
    }
  }
  return out;
}

inline std::vector<AxisIntervals> box_intervals(const MultiIndex& N) {
  std::vector<AxisIntervals> out;
  for (int v : N) out.push_back({{-v, v}});
  return out;
}

/// sum_{k in [lo, hi]} e^{i k theta}.
inline Complex interval_exp_sum(int lo, int hi, double theta) {
  const double h = 0.5 * theta;
  const double sh = std::sin(h);
  if (std::abs(sh) < 1e-4) {
    Complex acc{};
    for (int k = lo; k <= hi; ++k) acc += std::polar(1.0, k * theta);
    return acc;
  }
  return std::polar(1.0, (lo + hi) * h) * (std::sin((hi - lo + 1) * h) / sh);
}

inline Complex axis_exp_sum(const AxisIntervals& axis, double theta) {
  Complex acc{};
  for (const auto& [lo, hi] : axis) acc += interval_exp_sum(lo, hi, theta);
  return acc;
}

inline MultiIndex support_degree(const FreqSet& support) {
  MultiIndex deg(support.dim());
  for (const auto& k : support)
    for (std::size_t j = 0; j < deg.size(); ++j) deg[j] = std::max(deg[j], std::abs(k[j]));
  return deg;
}

/// Rows e^{i(k, x)} for every frequency of `support`, one row per point.
inline Eigen::MatrixXcd evaluation_matrix(const PointSet& pts, const FreqSet& support) {
  const std::size_t d = support.dim(), K = support.size();
  const MultiIndex deg = support_degree(support);
  Eigen::MatrixXcd E(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(K));
  std::vector<std::vector<Complex>> tables(d);
  for (std::size_t nu = 0; nu < pts.size(); ++nu) {
    for (std::size_t j = 0; j < d; ++j) fill_phase_table(tables[j], deg[j], pts[nu][j]);
    for (std::size_t c = 0; c < K; ++c) {
      Complex v = 1.0;
      for (std::size_t j = 0; j < d; ++j) v *= tables[j][static_cast<std::size_t>(support[c][j] + deg[j])];
      E(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return E;
}

inline TrigPoly to_poly(const FreqSet& support, const Eigen::Ref<const Eigen::VectorXcd>& v) {
  TrigPoly f(support.dim());
  for (std::size_t c = 0; c < support.size(); ++c) f.set(support[c], v[static_cast<Eigen::Index>(c)]);
  return f;
}

/// Largest oversampling <= factor whose grid stays below 2^24 values.
inline double capped_factor(const MultiIndex& deg, double factor) {
  while (factor > 1.0) {
    const auto sizes = oversampled_sizes(deg, factor);
    std::size_t total = 1;
    for (auto m : sizes) total *= m;
    if (total <= (std::size_t{1} << 24)) break;
    factor /= 2.0;
  }
  return factor;
}

inline VanishingPoly vanishing_on(const PointSet& xi, const FreqSet& support, const std::vector<AxisIntervals>& axes,
                                  const VanishingOptions& opt) {
  const std::size_t d = support.dim();
  if (xi.dim() != d) throw std::invalid_argument("vanishing polynomial: point dimension mismatch");
  const auto m = static_cast<Eigen::Index>(xi.size());
  const auto K = static_cast<Eigen::Index>(support.size());
  if (m >= K)
    throw infeasible_error("vanishing polynomial: " + std::to_string(m) + " points leave no room in a set of " +
                           std::to_string(K) + " frequencies");

  VanishingPoly out;
  out.points = xi;
  out.null_dimension = static_cast<std::size_t>(K - m);

  // Gram matrix of the evaluation rows, in closed form per axis.
  Eigen::MatrixXcd E = evaluation_matrix(xi, support);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt;
  if (m > 0) {
    Eigen::MatrixXcd G(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b <= a; ++b) {
        Complex v = 1.0;
        for (std::size_t j = 0; j < d; ++j) v *= axis_exp_sum(axes[j], xi[a][j] - xi[b][j]);
        G(a, b) = v;
        G(b, a) = std::conj(v);
      }
    }
    ldlt.compute(G);
    out.gram_rcond = ldlt.rcond();
    if (!(std::sqrt(out.gram_rcond) >= 1e-10)) {
      out.ill_conditioned = true;
      G.diagonal().array() += 1e-12 * G.diagonal().real().maxCoeff();
      ldlt.compute(G);
    }
  }

  // Candidates: random combinations and projected point evaluations.
  auto rng = seeded_rng(opt.seed, {static_cast<std::int64_t>(K), static_cast<std::int64_t>(m)});
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const int R = std::max(0, opt.random_candidates), P = std::max(0, opt.peak_candidates);
  Eigen::MatrixXcd V(K, R + P);
  for (int c = 0; c < R; ++c)
    for (Eigen::Index i = 0; i < K; ++i) V(i, c) = Complex(gauss(rng), gauss(rng));
  for (int c = 0; c < P; ++c) {
    PointSet at(d);
    std::array<double, kMaxDim> x{};
    for (std::size_t j = 0; j < d; ++j) x[j] = angle(rng);
    at.push_back(std::span<const double>(x.data(), d));
    V.col(R + c) = evaluation_matrix(at, support).row(0).adjoint();
  }
  if (m > 0) {
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::MatrixXcd res = E * V;
      V -= E.adjoint() * ldlt.solve(res);
    }
  }

  const MultiIndex deg = support_degree(support);
  const auto select_sizes = oversampled_sizes(deg, capped_factor(deg, opt.select_oversample));
  double best = -1.0;
  Eigen::Index best_col = 0;
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    const double l2 = V.col(c).norm();
    if (!(l2 > 0.0)) continue;
    const double ratio = grid_sup(synthesize(to_poly(support, V.col(c)), select_sizes)) / l2;
    if (ratio > best) {
      best = ratio;
      best_col = c;
    }
  }
  if (best <= 0.0) throw infeasible_error("vanishing polynomial: every candidate collapsed to zero");
  out.selected = best_col < R ? "random #" + std::to_string(best_col) : "peak #" + std::to_string(best_col - R);

  TrigPoly g = to_poly(support, V.col(best_col) / V.col(best_col).norm());
  const SupEstimate est = sup_norm(g, capped_factor(deg, opt.certify_oversample));
  g *= Complex(1.0 / est.refined);
  out.g = std::move(g);
  out.sup = 1.0;
  out.grid_max = est.grid_max / est.refined;
  out.argmax = est.argmax;
  if (m > 0) out.residual = (E * V.col(best_col)).cwiseAbs().maxCoeff() / (V.col(best_col).norm() * est.refined);
  return out;
}

}  // namespace detail

/// Element of T(rho(s)) vanishing on xi with large sup norm, normalized so the
/// refined sup estimate equals 1.
inline VanishingPoly vanishing_poly(const PointSet& xi, const MultiIndex& s, const VanishingOptions& opt = {}) {
  return detail::vanishing_on(xi, build_rho(s), detail::rho_intervals(s), opt);
}

/// Same on the box |k_j| <= N_j.
inline VanishingPoly vanishing_poly_box(const PointSet& xi, const MultiIndex& N, const VanishingOptions& opt = {}) {
  return detail::vanishing_on(xi, build_box(N), detail::box_intervals(N), opt);
}

// ---------------------------------------------------------------------------
// Witness reports
// ---------------------------------------------------------------------------

struct WitnessReport {
  std::string construction;
  std::size_t d = 0;
  int n = 0;
  std::size_t m = 0;
  std::string class_name;
  double q = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double a = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  /// ||f||_p of the unscaled function.
  double norm_p = 0.0;
  /// Class scale lambda; the witness is h = lambda f.
  double lambda = 0.0;
  /// ||h||_p: the certified lower-bound value for the given points.
  double value = 0.0;
  double predicted = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  /// max_nu |f(xi_nu)| / ||f||_2.
  double vanishing = 0.0;
  std::vector<std::pair<std::string, double>> table;
  std::vector<std::string> notes;

  std::string to_text() const {
    std::ostringstream os;
    os.precision(12);
    os << "construction: " << construction << "\n"
       << "class: " << class_name << "\n"
       << "d: " << d << "\nn: " << n << "\nm: " << m << "\n"
       << "q: " << q << "\np: " << p << "\n"
       << "norm_p: " << norm_p << "\nlambda: " << lambda << "\nvalue: " << value << "\n"
       << "predicted_term: " << predicted << "\nratio: " << ratio << "\n"
       << "vanishing_residual: " << vanishing << "\n";
    for (const auto& [k, v] : table) os << "  " << k << ": " << v << "\n";
    for (const auto& note : notes) os << "note: " << note << "\n";
    return os.str();
  }
};

struct WitnessOptions {
  /// Oversampling for ||f||_p when p != 2.
  double norm_oversample = 2.0;
  ClassOptions class_options{2.0, HMode::proxy, 8};
  double vanishing_tolerance = 1e-9;
};

/// Growth term attached to a witness value for the given class and sizes.
inline double predicted_term(const ClassSpec& spec, double p, int n, std::size_t m, std::size_t d) {
  const double dm1 = static_cast<double>(d) - 1.0;
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ClassHQ>)
          return std::exp2(n * (1.0 / c.q - 1.0 / p)) * std::pow(n, dm1 / p);
        if constexpr (std::is_same_v<T, ClassH>)
          return std::exp2(n * (-c.r + 1.0 / c.q - 1.0 / p)) * std::pow(n, dm1 / p);
        if constexpr (std::is_same_v<T, ClassWA> || std::is_same_v<T, ClassHA>) {
          if (m < 2) return std::numeric_limits<double>::quiet_NaN();
          const double mm = static_cast<double>(m);
          return std::pow(mm, 1.0 - 1.0 / p - 1.0 / c.beta - c.a) * std::pow(std::log2(mm), dm1 * (c.b + 1.0 / p));
        }
        return std::numeric_limits<double>::quiet_NaN();
      },
      spec);
}

inline double max_abs_on(const TrigPoly& f, const PointSet& xi) {
  double worst = 0.0;
  if (f.empty()) return 0.0;
  for (const auto& v : evaluate(f, xi)) worst = std::max(worst, std::abs(v));
  return worst;
}

/// Scales f into the class and reports ||lambda f||_p. Throws invalid_witness
/// when f does not vanish on xi (checked against ||f||_2 <= ||f||_inf).
inline WitnessReport evaluate_witness(const TrigPoly& f, const PointSet& xi, const ClassSpec& spec, double p, int n,
                                      const WitnessOptions& opt = {}) {
  WitnessReport rep;
  rep.construction = "external";
  rep.d = f.dim();
  rep.n = n;
  rep.m = xi.size();
  rep.p = p;
  rep.class_name = describe(spec);
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ClassW> || std::is_same_v<T, ClassH>) {
          rep.r = c.r;
          rep.q = c.q;
        } else if constexpr (std::is_same_v<T, ClassHQ>) {
          rep.q = c.q;
        } else {
          rep.a = c.a;
          rep.b = c.b;
          rep.beta = c.beta;
        }
      },
      spec);
  rep.predicted = predicted_term(spec, p, n, rep.m, rep.d);
  if (f.empty()) {
    rep.ratio = std::isnan(rep.predicted) ? rep.predicted : 0.0;
    rep.notes.push_back("zero function: witness value 0");
    return rep;
  }
  if (xi.dim() != f.dim()) throw std::invalid_argument("evaluate_witness: point dimension mismatch");
  const double l2 = l2_norm(f);
  rep.vanishing = max_abs_on(f, xi) / l2;
  if (rep.vanishing > opt.vanishing_tolerance)
    throw invalid_witness("function does not vanish on the point set: max |f(xi)| / ||f||_2 = " +
                          std::to_string(rep.vanishing));

  rep.norm_p = std::isinf(p) ? sup_norm(f, opt.norm_oversample).refined : lp_norm(f, p, opt.norm_oversample).value;
  const MembershipReport mem = scale_into(f, spec, opt.class_options);
  rep.lambda = mem.lambda;
  rep.value = rep.lambda * rep.norm_p;
  rep.ratio = rep.value / rep.predicted;
  for (const auto& e : mem.entries) rep.table.emplace_back(e.label, e.ratio());
  if (!mem.note.empty()) rep.notes.push_back("class scale " + mem.note);
  return rep;
}

// ---------------------------------------------------------------------------
// Multi-block fooling function
// ---------------------------------------------------------------------------

struct FoolingOptions {
  VanishingOptions vanishing;
  unsigned threads = 0;
  double sup_oversample = 4.0;
  /// Tabulate max_u ||delta_u(t_s)||_inf / ||t_s||_inf per term.
  bool delta_table = true;
};

struct FoolingTerm {
  MultiIndex s{1};
  VanishingPoly g;
  TrigPoly t{1};
  /// |t_s(x*)| and its ratio to 2^n.
  double peak = 0.0;
  double peak_ratio = 0.0;
  double sup = 0.0;
  double delta_ratio = 0.0;
  MultiIndex delta_argmax{1};
  std::vector<MultiIndex> blocks;
};

struct FoolingResult {
  int n = 0;
  std::size_t d = 0;
  TrigPoly f{1};
  PointSet points{1};
  std::vector<FoolingTerm> terms;
  /// max_s |f(x*_s)|, a lower bound on ||f||_inf.
  double sup_lower = 0.0;
  /// max_nu |f(xi_nu)| / sup_lower.
  double vanishing = 0.0;
  bool support_in_cross = false;
  bool a_cutoff = false;
  bool blocks_unique = false;
  std::vector<std::string> warnings;
};

/// f = sum over s in Y_{n,3} of g_s(x) K_{2^{s-2}}(x - x*_s), with g_s vanishing
/// on xi and |g_s(x*_s)| = ||g_s||_inf = 1.
inline FoolingResult fooling_function(const PointSet& xi, int n, const FoolingOptions& opt = {}) {
  const std::size_t d = xi.dim();
  if (n % 3 != 0) throw infeasible_error("fooling function: n = " + std::to_string(n) + " is not divisible by 3");
  if (n < 3 * static_cast<int>(d))
    throw infeasible_error("fooling function: n = " + std::to_string(n) + " is below 3d = " + std::to_string(3 * d));
  if (n > 30) throw std::length_error("fooling function: level sum above 30");
  if (2 * xi.size() > (std::size_t{1} << n))
    throw infeasible_error("fooling function: m = " + std::to_string(xi.size()) + " exceeds 2^n / 2 = " +
                           std::to_string((std::size_t{1} << n) / 2));

  FoolingResult out;
  out.n = n;
  out.d = d;
  out.points = xi;
  const auto Y = build_Y(n, d).levels;
  out.terms.resize(Y.size());

  parallel_for(
      Y.size(),
      [&](std::size_t i) {
        const MultiIndex& s = Y[i];
        FoolingTerm term;
        term.s = s;
        VanishingOptions vo = opt.vanishing;
        vo.seed = block_seed(opt.vanishing.seed, s);
        term.g = vanishing_poly(xi, s, vo);
        MultiIndex js(d);
        for (std::size_t j = 0; j < d; ++j) js[j] = 1 << (s[j] - 2);
        const auto& xs = term.g.argmax;
        const TrigPoly K = kernels::fejer(js).shifted(std::span<const double>(xs.data(), d));
        term.t = multiply(term.g.g, K).filtered([&](const MultiIndex& k) {
          for (std::size_t j = 0; j < d; ++j) {
            const int a = std::abs(k[j]), q = 1 << (s[j] - 2);
            if (!(q < a && a < (1 << s[j]) + q)) return false;
          }
          return true;
        });
        term.peak = std::abs(evaluate(term.t, std::span<const double>(xs.data(), d)));
        term.peak_ratio = term.peak / std::exp2(n);
        term.sup = std::max(term.peak, sup_norm(term.t, opt.sup_oversample).refined);
        for (const auto& [u, part] : delta_decomposition(term.t)) {
          term.blocks.push_back(u);
          if (opt.delta_table) {
            const double v = sup_norm(part, opt.sup_oversample).refined / term.sup;
            if (v > term.delta_ratio) {
              term.delta_ratio = v;
              term.delta_argmax = u;
            }
          }
        }
        out.terms[i] = std::move(term);
      },
      opt.threads);

  out.f = TrigPoly(d);
  for (const auto& term : out.terms) {
    out.f += term.t;
    if (term.g.ill_conditioned)
      out.warnings.push_back("ill-conditioned point evaluations on block " + term.s.str());
  }

  // Support and block bookkeeping, exact on the coefficient map.
  out.support_in_cross = true;
  out.a_cutoff = true;
  for (const auto& [k, c] : out.f) {
    const int lev = dyadic_level(k).sum();
    out.support_in_cross = out.support_in_cross && lev <= n + static_cast<int>(d);
    // A frequency of level l feeds the A-bands l and l+1 on each axis.
    out.a_cutoff = out.a_cutoff && lev + static_cast<int>(d) <= n + 3 * static_cast<int>(d);
  }
  std::set<MultiIndex> seen;
  out.blocks_unique = true;
  for (const auto& term : out.terms)
    for (const auto& u : term.blocks) out.blocks_unique = seen.insert(u).second && out.blocks_unique;

  for (const auto& term : out.terms)
    out.sup_lower = std::max(out.sup_lower,
                             std::abs(evaluate(out.f, std::span<const double>(term.g.argmax.data(), d))));
  out.vanishing = out.sup_lower > 0.0 ? max_abs_on(out.f, xi) / out.sup_lower : 0.0;
  return out;
}

/// Runs fooling_function and evaluates it against a class.
inline WitnessReport fooling_witness(const FoolingResult& fr, const ClassSpec& spec, double p,
                                     const WitnessOptions& opt = {}) {
  WitnessReport rep = evaluate_witness(fr.f, fr.points, spec, p, fr.n, opt);
  rep.construction = "multi-block";
  for (const auto& term : fr.terms) {
    rep.table.emplace_back("peak_ratio" + term.s.str(), term.peak_ratio);
    rep.table.emplace_back("delta_ratio" + term.s.str(), term.delta_ratio);
  }
  for (const auto& w : fr.warnings) rep.notes.push_back(w);
  return rep;
}

// ---------------------------------------------------------------------------
// Single-box witness
// ---------------------------------------------------------------------------

struct BoxWitness {
  TrigPoly h{1};
  VanishingPoly g;
  WitnessReport report;
};

/// g vanishing on xi in T(N) times K_{N+1}(x - x*), landing in T(2N), scaled
/// to the unit L_q ball.
inline BoxWitness box_witness(const PointSet& xi, const MultiIndex& N, double q, double p,
                              const VanishingOptions& vopt = {}, double oversample = 4.0) {
  const std::size_t d = N.size();
  const double theta = box_cardinality(N);
  if (2.0 * static_cast<double>(xi.size()) > theta)
    throw infeasible_error("box witness: m = " + std::to_string(xi.size()) + " exceeds half the box size " +
                           std::to_string(theta));
  BoxWitness out;
  out.g = vanishing_poly_box(xi, N, vopt);
  MultiIndex js(d);
  for (std::size_t j = 0; j < d; ++j) js[j] = N[j] + 1;
  const TrigPoly K = kernels::fejer(js).shifted(std::span<const double>(out.g.argmax.data(), d));
  const TrigPoly t = multiply(out.g.g, K);
  const double lq = lp_norm(t, q, oversample).value;
  out.h = t * Complex(1.0 / lq);

  auto& rep = out.report;
  rep.construction = "box";
  rep.class_name = "unit L_q ball of T(2N)";
  rep.d = d;
  rep.m = xi.size();
  rep.q = q;
  rep.p = p;
  rep.lambda = 1.0 / lq;
  rep.norm_p = std::isinf(p) ? sup_norm(t, oversample).refined : lp_norm(t, p, oversample).value;
  rep.value = rep.lambda * rep.norm_p;
  rep.predicted = std::pow(theta, 1.0 / q - 1.0 / p);
  rep.ratio = rep.value / rep.predicted;
  rep.vanishing = max_abs_on(out.h, xi) / l2_norm(out.h);
  rep.table.emplace_back("box_size", theta);
  return out;
}

// ---------------------------------------------------------------------------
// Integration fooler
// ---------------------------------------------------------------------------

struct IntegrationOptions {
  double constraint_oversample = 4.0;
  double audit_oversample = 8.0;
  int max_rounds = 30;
  /// Violated grid points added per round; 0 means twice the number of unknowns.
  std::size_t max_cuts = 0;
  lp::Options lp;
  unsigned threads = 0;
};

struct FoolerBlock {
  MultiIndex s{1};
  MultiIndex N{1};
  /// Rescaled real-valued block, ||t_s||_inf <= 1 on the audit grid.
  TrigPoly t{1};
  double mean = 0.0;
  double lp_objective = 0.0;
  /// Grid sup at the audit oversampling, before rescaling.
  double audit_sup = 0.0;
  double residual = 0.0;
  lp::Status status = lp::Status::optimal;
  int rounds = 0;
  int iterations = 0;
  std::size_t unknowns = 0;
  std::size_t null_dimension = 0;
  std::size_t working_rows = 0;
};

struct IntegrationResult {
  int n = 0;
  std::size_t d = 0;
  TrigPoly t{1};
  std::vector<FoolerBlock> blocks;
  /// Integral (mean) of t.
  double mean = 0.0;
  /// mean / n^{d-1}.
  double growth_ratio = 0.0;
  double max_audit = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

/// Real trigonometric basis on the box: 1, then cos(k.x) and sin(k.x) over the
/// half box (first nonzero coordinate positive).
struct RealBasis {
  std::size_t d = 0;
  MultiIndex N{1};
  std::vector<MultiIndex> half;

  explicit RealBasis(const MultiIndex& box) : d(box.size()), N(box) {
    for (const auto& k : build_box(box)) {
      for (int v : k) {
        if (v == 0) continue;
        if (v > 0) half.push_back(k);
        break;
      }
    }
  }
  std::size_t size() const { return 1 + 2 * half.size(); }

  void row(std::span<const double> x, Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> out) const {
    std::vector<std::vector<Complex>> tables(d);
    for (std::size_t j = 0; j < d; ++j) fill_phase_table(tables[j], N[j], x[j]);
    out[0] = 1.0;
    const auto H = static_cast<Eigen::Index>(half.size());
    for (Eigen::Index c = 0; c < H; ++c) {
      Complex e = 1.0;
      for (std::size_t j = 0; j < d; ++j) e *= tables[j][static_cast<std::size_t>(half[c][j] + N[j])];
      out[1 + c] = e.real();
      out[1 + H + c] = e.imag();
    }
  }

  TrigPoly to_poly(const Eigen::VectorXd& y) const {
    TrigPoly t(d);
    t.set(MultiIndex(d), y[0]);
    const auto H = static_cast<Eigen::Index>(half.size());
    for (Eigen::Index c = 0; c < H; ++c) {
      const double a = y[1 + c], b = y[1 + H + c];
      t.set(half[c], Complex(a, -b) / 2.0);
      t.set(-half[c], Complex(a, b) / 2.0);
    }
    return t.hermitian_symmetrized();
  }
};

inline FoolerBlock solve_fooler_block(const PointSet& xi, const MultiIndex& s, const IntegrationOptions& opt) {
  const std::size_t d = s.size();
  FoolerBlock blk;
  blk.s = s;
  blk.N = MultiIndex(d);
  for (std::size_t j = 0; j < d; ++j) blk.N[j] = s[j] == 0 ? 0 : 1 << (s[j] - 1);
  const RealBasis basis(blk.N);
  const auto nv = static_cast<Eigen::Index>(basis.size());
  blk.unknowns = basis.size();

  // Null space of the point constraints t(xi) = 0.
  Eigen::MatrixXd Z;
  if (xi.empty()) {
    Z = Eigen::MatrixXd::Identity(nv, nv);
  } else {
    Eigen::MatrixXd C(static_cast<Eigen::Index>(xi.size()), nv);
    for (std::size_t nu = 0; nu < xi.size(); ++nu) basis.row(xi[nu], C.row(static_cast<Eigen::Index>(nu)));
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(C.transpose());
    const Eigen::Index rank = qr.rank();
    const Eigen::MatrixXd Q = qr.householderQ();
    Z = Q.rightCols(nv - rank);
  }
  blk.null_dimension = static_cast<std::size_t>(Z.cols());
  const Eigen::VectorXd objective = Z.row(0).transpose();

  // Working set: the critically sampled grid, then violated points of the constraint grid.
  std::vector<std::size_t> nyquist(d);
  for (std::size_t j = 0; j < d; ++j) nyquist[j] = std::bit_ceil(static_cast<std::size_t>(2 * blk.N[j] + 1));
  const std::size_t base_rows = grid_total(nyquist);
  Eigen::MatrixXd B(static_cast<Eigen::Index>(base_rows), nv);
  {
    GridFn shape;
    shape.sizes = nyquist;
    shape.values.resize(base_rows);
    for (std::size_t i = 0; i < base_rows; ++i) {
      const auto x = shape.point(i);
      basis.row(std::span<const double>(x.data(), d), B.row(static_cast<Eigen::Index>(i)));
    }
  }
  const auto cons_sizes = oversampled_sizes(blk.N, opt.constraint_oversample);
  const std::size_t max_cuts = opt.max_cuts ? opt.max_cuts : 2 * basis.size();

  Eigen::VectorXd y = Eigen::VectorXd::Zero(nv);
  for (int round = 0; round < opt.max_rounds; ++round) {
    blk.rounds = round + 1;
    const Eigen::MatrixXd A = B * Z;
    const lp::Result res = lp::solve_box(A, Eigen::VectorXd::Ones(A.rows()), objective, opt.lp);
    blk.status = res.status;
    blk.iterations += res.iterations;
    y = Z * res.w;
    blk.lp_objective = y[0];

    const GridFn g = synthesize(basis.to_poly(y), cons_sizes);
    std::vector<std::pair<double, std::size_t>> viol;
    for (std::size_t i = 0; i < g.total(); ++i) {
      const double v = std::abs(g.values[i].real());
      if (v > 1.0 + 1e-7) viol.emplace_back(v, i);
    }
    if (viol.empty()) break;
    std::sort(viol.begin(), viol.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    viol.resize(std::min(viol.size(), max_cuts));
    const Eigen::Index old = B.rows();
    B.conservativeResize(old + static_cast<Eigen::Index>(viol.size()), nv);
    for (std::size_t c = 0; c < viol.size(); ++c) {
      const auto x = g.point(viol[c].second);
      basis.row(std::span<const double>(x.data(), d), B.row(old + static_cast<Eigen::Index>(c)));
    }
  }
  blk.working_rows = static_cast<std::size_t>(B.rows());

  TrigPoly t = basis.to_poly(y);
  blk.audit_sup = grid_sup(synthesize(t, oversampled_sizes(blk.N, opt.audit_oversample)));
  const double scale = std::max(1.0, blk.audit_sup);
  t *= Complex(1.0 / scale);
  blk.mean = y[0] / scale;
  blk.residual = max_abs_on(t, xi);
  blk.t = std::move(t);
  return blk;
}

}  // namespace detail

/// For every s with ||s||_1 = n, the real t_s in T(2^{s-1}) of largest mean with
/// t_s(xi) = 0 and |t_s| <= 1; returns t = sum_s t_s.
inline IntegrationResult integration_fooler(const PointSet& xi, int n, const IntegrationOptions& opt = {}) {
  const std::size_t d = xi.dim();
  if (n < 0) throw std::invalid_argument("integration fooler: n must be nonnegative");
  if (n > 20) throw std::length_error("integration fooler: level sum above 20 is beyond desk scale");
  const std::size_t cap = n == 0 ? 0 : std::size_t{1} << (n - 1);
  if (xi.size() > cap)
    throw infeasible_error("integration fooler: " + std::to_string(xi.size()) + " points exceed 2^{n-1} = " +
                           std::to_string(cap));
  IntegrationResult out;
  out.n = n;
  out.d = d;
  const auto S = compositions(n, d);
  out.blocks.resize(S.size());
  parallel_for(
      S.size(), [&](std::size_t i) { out.blocks[i] = detail::solve_fooler_block(xi, S[i], opt); }, opt.threads);

  out.t = TrigPoly(d);
  for (const auto& blk : out.blocks) {
    out.t += blk.t;
    out.mean += blk.mean;
    out.max_audit = std::max(out.max_audit, blk.audit_sup);
    if (blk.status != lp::Status::optimal)
      out.warnings.push_back("block " + blk.s.str() + ": LP " + lp::to_string(blk.status));
    if (blk.mean <= 1e-12) out.warnings.push_back("block " + blk.s.str() + ": degenerate solution t_s = 0");
  }
  out.t = out.t.hermitian_symmetrized();
  out.growth_ratio = out.mean / std::pow(std::max(n, 1), static_cast<double>(d) - 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Block analyses
// ---------------------------------------------------------------------------

struct HInfReport {
  std::map<MultiIndex, double> block_sup;
  double max_weighted = 0.0;
  MultiIndex argmax{1};
  bool support_exact = true;
  std::size_t zero_blocks = 0;
  /// lambda 2^{rn} with lambda the proxy scale of t into H^r_inf.
  double scale = 0.0;
};

namespace detail {

/// Smallest |k| on which the A-band of level u can be nonzero.
inline int a_band_floor(int u) { return u == 0 ? 0 : u == 1 ? 1 : (1 << (u - 2)) + 1; }

}  // namespace detail

/// Tabulates ||A_u(t)||_inf over ||u||_1 <= n + d and verifies that every band
/// the block boxes cannot reach is exactly zero.
inline HInfReport h_infinity_check(const IntegrationResult& ir, double r, double oversample = 4.0) {
  HInfReport rep;
  const std::size_t d = ir.d;
  const int n = ir.n;
  auto reachable = [&](const MultiIndex& u) {
    for (const auto& blk : ir.blocks) {
      bool ok = true;
      for (std::size_t j = 0; j < d && ok; ++j) ok = blk.N[j] >= detail::a_band_floor(u[j]);
      if (ok) return true;
    }
    return false;
  };
  double lambda = std::numeric_limits<double>::infinity();
  for (const auto& u : levels_up_to(n + static_cast<int>(d), d)) {
    const TrigPoly part = a_block(ir.t, u);
    if (!reachable(u)) {
      ++rep.zero_blocks;
      rep.support_exact = rep.support_exact && part.empty();
      continue;
    }
    const double v = part.empty() ? 0.0 : sup_norm(part, oversample).refined;
    rep.block_sup[u] = v;
    const double w = v / std::pow(n - u.sum() + static_cast<double>(d), static_cast<double>(d) - 1.0);
    if (w > rep.max_weighted) {
      rep.max_weighted = w;
      rep.argmax = u;
    }
    if (v > 0.0) lambda = std::min(lambda, std::exp2(-r * u.sum()) / v);
  }
  for (const auto& [u, part] : a_decomposition(ir.t))
    if (!reachable(u)) rep.support_exact = false;
  rep.scale = std::isinf(lambda) ? 0.0 : lambda * std::exp2(r * n);
  return rep;
}

/// |f|_A / (B^{2/q-1} theta(N)^{1/q} ||f||_q) for f in T(N); at most 1 for q = 2.
template <class System = TrigonometricSystem>
double sp1_ratio(const TrigPoly& f, const MultiIndex& N, double q, double oversample = 4.0) {
  if (f.empty()) return 0.0;
  const double B = System::uniform_bound;
  const double lq = lp_norm(f, q, oversample).value;
  return wiener_norm(f) / (std::pow(B, 2.0 / q - 1.0) * std::pow(box_cardinality(N), 1.0 / q) * lq);
}

struct ABetaReport {
  double beta = 1.0;
  std::map<MultiIndex, double> block_ratio;
  double max_ratio = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::map<MultiIndex, double> sp1;
  double max_sp1 = 0.0;
};

/// |t_s|_{A_beta} / 2^{n/beta} per term and the q = 2 box inequality on each g_s.
inline ABetaReport abeta_block_check(const FoolingResult& fr, double beta) {
  ABetaReport rep;
  rep.beta = beta;
  for (const auto& term : fr.terms) {
    const double v = abeta_norm(term.t, beta) / std::exp2(fr.n / beta);
    rep.block_ratio[term.s] = v;
    rep.max_ratio = std::max(rep.max_ratio, v);
    rep.min_ratio = std::min(rep.min_ratio, v);
    MultiIndex box(fr.d);
    for (std::size_t j = 0; j < fr.d; ++j) box[j] = (1 << term.s[j]) - 1;
    const double sp = sp1_ratio(term.g.g, box, 2.0);
    rep.sp1[term.s] = sp;
    rep.max_sp1 = std::max(rep.max_sp1, sp);
  }
  return rep;
}

}  // namespace hcross
