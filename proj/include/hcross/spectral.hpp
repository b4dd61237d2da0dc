#pragma once

// Frequency-set combinatorics and the two representations of trigonometric
// polynomials on the torus [0, 2pi)^d: sparse coefficient maps (TrigPoly) and
// dense uniform-grid samples (GridFn), with FFT-based transforms between them.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hcross/fft.hpp"

namespace hcross {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 4;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Largest number of grid values any single transform may allocate.
inline constexpr std::size_t kGridValueCap = std::size_t{1} << 28;

/// Thrown when a construction's preconditions make it impossible (too many points, etc).
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// MultiIndex
// ---------------------------------------------------------------------------

/// Integer vector of dimension 1..kMaxDim. Used both for frequencies k in Z^d
/// and for dyadic levels s in N_0^d. Ordering is lexicographic.
class MultiIndex {
 public:
  MultiIndex() = default;

  explicit MultiIndex(std::size_t d) : d_(checked_dim(d)) {}

  MultiIndex(std::initializer_list<int> entries) : d_(checked_dim(entries.size())) {
    std::copy(entries.begin(), entries.end(), v_.begin());
  }

  explicit MultiIndex(std::span<const int> entries) : d_(checked_dim(entries.size())) {
    std::copy(entries.begin(), entries.end(), v_.begin());
  }

  static MultiIndex filled(std::size_t d, int value) {
    MultiIndex m(d);
    for (std::size_t j = 0; j < d; ++j) m.v_[j] = value;
    return m;
  }

  std::size_t size() const { return d_; }
  int operator[](std::size_t j) const { return v_[j]; }
  int& operator[](std::size_t j) { return v_[j]; }

  const int* begin() const { return v_.data(); }
  const int* end() const { return v_.data() + d_; }

  /// Sum of entries; equals ||s||_1 for a level vector.
  int sum() const {
    int acc = 0;
    for (std::size_t j = 0; j < d_; ++j) acc += v_[j];
    return acc;
  }

  int norm1() const {
    int acc = 0;
    for (std::size_t j = 0; j < d_; ++j) acc += std::abs(v_[j]);
    return acc;
  }

  MultiIndex operator-() const {
    MultiIndex r(*this);
    for (std::size_t j = 0; j < d_; ++j) r.v_[j] = -r.v_[j];
    return r;
  }

  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) {
    for (std::size_t j = 0; j < a.d_; ++j) a.v_[j] += b.v_[j];
    return a;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (auto c = a.d_ <=> b.d_; c != 0) return c;
    for (std::size_t j = 0; j < a.d_; ++j)
      if (auto c = a.v_[j] <=> b.v_[j]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t j = 0; j < d_; ++j) {
      if (j) s += ",";
      s += std::to_string(v_[j]);
    }
    return s + ")";
  }

 private:
  static std::size_t checked_dim(std::size_t d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension must be in 1.." + std::to_string(kMaxDim));
    return d;
  }

  std::array<int, kMaxDim> v_{};
  std::size_t d_ = 0;
};

/// Dyadic level of a single frequency: 0 for k = 0, else the s with 2^{s-1} <= |k| < 2^s.
inline int dyadic_level(int k) {
  const auto a = static_cast<unsigned>(std::abs(k));
  return a == 0 ? 0 : static_cast<int>(std::bit_width(a));
}

inline MultiIndex dyadic_level(const MultiIndex& k) {
  MultiIndex s(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) s[j] = dyadic_level(k[j]);
  return s;
}

/// All s in N_0^d with ||s||_1 == n, lexicographic.
inline std::vector<MultiIndex> compositions(int n, std::size_t d) {
  std::vector<MultiIndex> out;
  if (n < 0) return out;
  MultiIndex cur(d);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j + 1 == d) {
      cur[j] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[j] = v;
      rec(j + 1, left - v);
    }
  };
  rec(0, n);
  return out;
}

/// All s in N_0^d with ||s||_1 <= n, lexicographic.
inline std::vector<MultiIndex> levels_up_to(int n, std::size_t d) {
  std::vector<MultiIndex> out;
  for (int j = 0; j <= n; ++j) {
    auto c = compositions(j, d);
    out.insert(out.end(), c.begin(), c.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// FreqSet
// ---------------------------------------------------------------------------

enum class FreqTag { rho, hyperbolic_cross, box, custom };

class FreqSet {
 public:
  FreqSet(std::size_t d, std::vector<MultiIndex> freqs, FreqTag tag = FreqTag::custom)
      : d_(d), freqs_(std::move(freqs)), tag_(tag) {
    for (const auto& k : freqs_)
      if (k.size() != d_) throw std::invalid_argument("FreqSet: dimension mismatch");
    std::sort(freqs_.begin(), freqs_.end());
    freqs_.erase(std::unique(freqs_.begin(), freqs_.end()), freqs_.end());
  }

  std::size_t dim() const { return d_; }
  std::size_t size() const { return freqs_.size(); }
  bool empty() const { return freqs_.empty(); }
  FreqTag tag() const { return tag_; }
  const std::vector<MultiIndex>& frequencies() const { return freqs_; }
  auto begin() const { return freqs_.begin(); }
  auto end() const { return freqs_.end(); }
  const MultiIndex& operator[](std::size_t i) const { return freqs_[i]; }

  bool contains(const MultiIndex& k) const { return std::binary_search(freqs_.begin(), freqs_.end(), k); }

 private:
  std::size_t d_;
  std::vector<MultiIndex> freqs_;
  FreqTag tag_;
};

namespace detail {

inline std::vector<MultiIndex> cartesian(const std::vector<std::vector<int>>& axes) {
  std::vector<MultiIndex> out;
  const std::size_t d = axes.size();
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  out.reserve(total);
  MultiIndex cur(d);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == d) {
      out.push_back(cur);
      return;
    }
    for (int v : axes[j]) {
      cur[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

/// Frequencies of the univariate dyadic block of level s, ascending.
inline std::vector<int> rho_axis(int s) {
  if (s == 0) return {0};
  const int lo = 1 << (s - 1);
  const int hi = 1 << s;
  std::vector<int> v;
  for (int k = -hi + 1; k <= -lo; ++k) v.push_back(k);
  for (int k = lo; k < hi; ++k) v.push_back(k);
  return v;
}

inline void check_level(const MultiIndex& s) {
  for (int v : s) {
    if (v < 0) throw std::invalid_argument("dyadic level entries must be nonnegative: " + s.str());
    if (v > 30) throw std::invalid_argument("dyadic level too large: " + s.str());
  }
}

}  // namespace detail

/// The dyadic block rho(s) = {k : [2^{s_j-1}] <= |k_j| < 2^{s_j}}.
inline FreqSet build_rho(const MultiIndex& s) {
  detail::check_level(s);
  std::vector<std::vector<int>> axes;
  for (int v : s) axes.push_back(detail::rho_axis(v));
  return FreqSet(s.size(), detail::cartesian(axes), FreqTag::rho);
}

/// Step hyperbolic cross Q_n: union of rho(s) over ||s||_1 <= n.
inline FreqSet build_Qn(int n, std::size_t d) {
  if (n < 0) throw std::invalid_argument("build_Qn: n must be nonnegative");
  std::vector<MultiIndex> all;
  for (const auto& s : levels_up_to(n, d)) {
    auto block = build_rho(s);
    all.insert(all.end(), block.begin(), block.end());
  }
  return FreqSet(d, std::move(all), FreqTag::hyperbolic_cross);
}

/// The box Pi(N, d) = {k : |k_j| <= N_j}; its cardinality is theta(N) = prod (2N_j + 1).
inline FreqSet build_box(const MultiIndex& N) {
  std::vector<std::vector<int>> axes;
  for (int v : N) {
    if (v < 0) throw std::invalid_argument("build_box: negative half-width");
    std::vector<int> a;
    for (int k = -v; k <= v; ++k) a.push_back(k);
    axes.push_back(std::move(a));
  }
  return FreqSet(N.size(), detail::cartesian(axes), FreqTag::box);
}

inline double box_cardinality(const MultiIndex& N) {
  double t = 1.0;
  for (int v : N) t *= 2.0 * v + 1.0;
  return t;
}

/// Levels with all coordinates positive multiples of 3 summing to n.
struct LevelSet {
  std::vector<MultiIndex> levels;
  std::optional<std::string> warning;
};

inline LevelSet build_Y(int n, std::size_t d) {
  LevelSet out;
  if (n % 3 != 0 || n < 3 * static_cast<int>(d)) {
    out.warning = "Y(n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                  ") is empty: n must be divisible by 3 and at least 3d";
    return out;
  }
  // s_j = 3 (1 + w_j) with w a composition of n/3 - d.
  for (const auto& w : compositions(n / 3 - static_cast<int>(d), d)) {
    MultiIndex s(d);
    for (std::size_t j = 0; j < d; ++j) s[j] = 3 * (1 + w[j]);
    out.levels.push_back(s);
  }
  std::sort(out.levels.begin(), out.levels.end());
  return out;
}

/// min over ||s||_1 = n of |rho(s)|, by enumeration.
inline std::size_t min_block_size(int n, std::size_t d) {
  std::size_t best = 0;
  bool first = true;
  for (const auto& s : compositions(n, d)) {
    std::size_t c = 1;
    for (int v : s) c *= detail::rho_axis(v).size();
    if (first || c < best) best = c;
    first = false;
  }
  return best;
}

// ---------------------------------------------------------------------------
// PointSet
// ---------------------------------------------------------------------------

inline double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// m points of [0, 2pi)^d stored row-major; coordinates are reduced mod 2pi.
class PointSet {
 public:
  explicit PointSet(std::size_t d) : d_(d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("PointSet: bad dimension");
  }
  PointSet(std::size_t d, std::vector<double> coords) : PointSet(d) {
    if (coords.size() % d != 0) throw std::invalid_argument("PointSet: coordinate count not a multiple of d");
    coords_ = std::move(coords);
    for (auto& x : coords_) x = wrap_angle(x);
  }

  std::size_t dim() const { return d_; }
  std::size_t size() const { return coords_.size() / d_; }
  bool empty() const { return coords_.empty(); }
  std::span<const double> operator[](std::size_t i) const { return {coords_.data() + i * d_, d_}; }
  const std::vector<double>& coordinates() const { return coords_; }

  void push_back(std::span<const double> x) {
    if (x.size() != d_) throw std::invalid_argument("PointSet: dimension mismatch");
    for (double v : x) coords_.push_back(wrap_angle(v));
  }

 private:
  std::size_t d_;
  std::vector<double> coords_;
};

// ---------------------------------------------------------------------------
// TrigPoly
// ---------------------------------------------------------------------------

/// Finitely supported map frequency -> coefficient, representing
/// t(x) = sum_k c_k e^{i(k,x)}.
class TrigPoly {
 public:
  using Map = std::map<MultiIndex, Complex>;

  explicit TrigPoly(std::size_t d) : d_(d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("TrigPoly: bad dimension");
  }

  TrigPoly(std::size_t d, std::initializer_list<std::pair<MultiIndex, Complex>> terms) : TrigPoly(d) {
    for (const auto& [k, c] : terms) add(k, c);
  }

  std::size_t dim() const { return d_; }
  std::size_t size() const { return coef_.size(); }
  bool empty() const { return coef_.empty(); }
  const Map& coefficients() const { return coef_; }
  auto begin() const { return coef_.begin(); }
  auto end() const { return coef_.end(); }

  Complex operator[](const MultiIndex& k) const {
    auto it = coef_.find(k);
    return it == coef_.end() ? Complex{} : it->second;
  }

  void add(const MultiIndex& k, Complex c) {
    if (k.size() != d_) throw std::invalid_argument("TrigPoly: frequency dimension mismatch");
    coef_[k] += c;
  }
  void set(const MultiIndex& k, Complex c) {
    if (k.size() != d_) throw std::invalid_argument("TrigPoly: frequency dimension mismatch");
    coef_[k] = c;
  }

  /// Per-axis max |k_j| over the support (zeros when empty).
  MultiIndex degree() const {
    MultiIndex deg(d_);
    for (const auto& [k, c] : coef_)
      for (std::size_t j = 0; j < d_; ++j) deg[j] = std::max(deg[j], std::abs(k[j]));
    return deg;
  }

  bool real_valued() const { return real_; }
  bool aliased() const { return aliased_; }
  void mark_aliased(bool v = true) { aliased_ = aliased_ || v; }

  /// Enforces c(-k) = conj(c(k)) and sets the real-valued flag. Throws if the
  /// input violates the symmetry by more than tol * max|c|.
  TrigPoly hermitian_symmetrized(double tol = 1e-10) const {
    double scale = 0.0;
    for (const auto& [k, c] : coef_) scale = std::max(scale, std::abs(c));
    TrigPoly out(d_);
    out.aliased_ = aliased_;
    for (const auto& [k, c] : coef_) {
      const Complex partner = std::conj((*this)[-k]);
      if (std::abs(c - partner) > tol * std::max(scale, 1e-300))
        throw std::invalid_argument("TrigPoly: Hermitian symmetry violated at " + k.str());
      out.coef_[k] = 0.5 * (c + partner);
      out.coef_[-k] = std::conj(out.coef_[k]);
    }
    out.real_ = true;
    return out;
  }

  /// Keeps only frequencies satisfying pred.
  template <class Pred>
  TrigPoly filtered(Pred pred) const {
    TrigPoly out(d_);
    out.aliased_ = aliased_;
    for (const auto& [k, c] : coef_)
      if (pred(k)) out.coef_.emplace_hint(out.coef_.end(), k, c);
    return out;
  }

  /// Drops coefficients with |c| <= tol.
  TrigPoly pruned(double tol) const {
    return filtered([&](const MultiIndex& k) { return std::abs((*this)[k]) > tol; });
  }

  /// Coefficientwise map c_k -> op(k, c_k), dropping exact zeros.
  template <class Op>
  TrigPoly transformed(Op op) const {
    TrigPoly out(d_);
    out.aliased_ = aliased_;
    for (const auto& [k, c] : coef_) {
      const Complex v = op(k, c);
      if (v != Complex{}) out.coef_.emplace_hint(out.coef_.end(), k, v);
    }
    return out;
  }

  TrigPoly& operator+=(const TrigPoly& o) {
    if (o.d_ != d_) throw std::invalid_argument("TrigPoly: dimension mismatch");
    for (const auto& [k, c] : o.coef_) coef_[k] += c;
    aliased_ = aliased_ || o.aliased_;
    real_ = real_ && o.real_;
    return *this;
  }
  TrigPoly& operator-=(const TrigPoly& o) { return *this += o * Complex(-1.0); }
  TrigPoly& operator*=(Complex a) {
    for (auto& [k, c] : coef_) c *= a;
    if (a.imag() != 0.0) real_ = false;
    return *this;
  }
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(TrigPoly a, Complex s) { return a *= s; }
  friend TrigPoly operator*(Complex s, TrigPoly a) { return a *= s; }

  /// Multiplication by e^{-i(k,x0)}: the polynomial x -> t(x - x0).
  TrigPoly shifted(std::span<const double> x0) const {
    if (x0.size() != d_) throw std::invalid_argument("TrigPoly::shifted: dimension mismatch");
    return transformed([&](const MultiIndex& k, Complex c) {
      double phase = 0.0;
      for (std::size_t j = 0; j < d_; ++j) phase += k[j] * x0[j];
      return c * std::polar(1.0, -phase);
    });
  }

 private:
  std::size_t d_;
  Map coef_;
  bool real_ = false;
  bool aliased_ = false;
};

namespace detail {

/// e^{i k x} for k in [-deg, deg], indexed k + deg.
inline void fill_phase_table(std::vector<Complex>& table, int deg, double x) {
  table.resize(2 * static_cast<std::size_t>(deg) + 1);
  for (int k = -deg; k <= deg; ++k) table[k + deg] = std::polar(1.0, k * x);
}

}  // namespace detail

/// t(x) = sum_k c_k e^{i(k,x)}.
inline Complex evaluate(const TrigPoly& f, std::span<const double> x) {
  if (x.size() != f.dim()) throw std::invalid_argument("evaluate: dimension mismatch");
  const std::size_t d = f.dim();
  const MultiIndex deg = f.degree();
  std::array<std::vector<Complex>, kMaxDim> tables;
  for (std::size_t j = 0; j < d; ++j) detail::fill_phase_table(tables[j], deg[j], x[j]);
  Complex acc{};
  for (const auto& [k, c] : f) {
    Complex e = c;
    for (std::size_t j = 0; j < d; ++j) e *= tables[j][k[j] + deg[j]];
    acc += e;
  }
  return acc;
}

inline Complex evaluate(const TrigPoly& f, std::initializer_list<double> x) {
  return evaluate(f, std::span<const double>(x.begin(), x.size()));
}

inline std::vector<Complex> evaluate(const TrigPoly& f, const PointSet& pts) {
  if (pts.dim() != f.dim()) throw std::invalid_argument("evaluate: dimension mismatch");
  std::vector<Complex> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = evaluate(f, pts[i]);
  return out;
}

// ---------------------------------------------------------------------------
// GridFn and transforms
// ---------------------------------------------------------------------------

/// Values on the uniform tensor grid x_m = (2 pi m_j / M_j), row-major with axis 0 slowest.
struct GridFn {
  std::vector<std::size_t> sizes;
  std::vector<Complex> values;
  bool aliased = false;

  std::size_t dim() const { return sizes.size(); }
  std::size_t total() const { return values.size(); }

  /// Grid coordinates of flat index i.
  std::array<double, kMaxDim> point(std::size_t i) const {
    std::array<double, kMaxDim> x{};
    for (std::size_t j = dim(); j-- > 0;) {
      const std::size_t m = i % sizes[j];
      i /= sizes[j];
      x[j] = kTwoPi * static_cast<double>(m) / static_cast<double>(sizes[j]);
    }
    return x;
  }
};

inline std::size_t grid_total(std::span<const std::size_t> sizes) {
  std::size_t total = 1;
  for (auto m : sizes) {
    if (m == 0) throw std::invalid_argument("grid size must be positive");
    if (total > kGridValueCap / m)
      throw std::length_error("grid exceeds the memory cap of 2^28 values; lower the oversampling or the level");
    total *= m;
  }
  if (total > kGridValueCap)
    throw std::length_error("grid exceeds the memory cap of 2^28 values; lower the oversampling or the level");
  return total;
}

/// Smallest power-of-two grid with at least factor * (2 deg_j + 1) points per axis.
inline std::vector<std::size_t> oversampled_sizes(const MultiIndex& deg, double factor) {
  std::vector<std::size_t> sizes(deg.size());
  for (std::size_t j = 0; j < deg.size(); ++j) {
    const double want = std::max(1.0, factor * (2.0 * deg[j] + 1.0));
    sizes[j] = std::bit_ceil(static_cast<std::size_t>(std::ceil(want)));
  }
  return sizes;
}

inline bool grid_resolves(std::span<const std::size_t> sizes, const MultiIndex& deg) {
  for (std::size_t j = 0; j < sizes.size(); ++j)
    if (static_cast<long long>(sizes[j]) <= 2LL * deg[j]) return false;
  return true;
}

/// Samples f on the grid with the given per-axis sizes. The result is flagged
/// aliased when some M_j <= 2 deg_j.
inline GridFn synthesize(const TrigPoly& f, std::span<const std::size_t> sizes) {
  if (sizes.size() != f.dim()) throw std::invalid_argument("synthesize: dimension mismatch");
  GridFn g;
  g.sizes.assign(sizes.begin(), sizes.end());
  g.values.assign(grid_total(sizes), Complex{});
  g.aliased = f.aliased() || !grid_resolves(sizes, f.degree());
  const std::size_t d = f.dim();
  for (const auto& [k, c] : f) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const auto M = static_cast<long long>(sizes[j]);
      long long m = k[j] % M;
      if (m < 0) m += M;
      idx = idx * sizes[j] + static_cast<std::size_t>(m);
    }
    g.values[idx] += c;
  }
  detail::fft_inplace(g.values, g.sizes, detail::FftDirection::backward);
  return g;
}

inline GridFn synthesize(const TrigPoly& f, std::initializer_list<std::size_t> sizes) {
  return synthesize(f, std::span<const std::size_t>(sizes.begin(), sizes.size()));
}

namespace detail {

template <class Keep>
TrigPoly analyze_filtered(const GridFn& g, Keep keep) {
  const std::size_t d = g.dim();
  TrigPoly out(d);
  std::vector<Complex> buf = g.values;
  detail::fft_inplace(buf, g.sizes, detail::FftDirection::forward);
  const double scale = 1.0 / static_cast<double>(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const Complex c = buf[i] * scale;
    MultiIndex k(d);
    std::size_t rem = i;
    for (std::size_t j = d; j-- > 0;) {
      const auto M = static_cast<long long>(g.sizes[j]);
      const auto m = static_cast<long long>(rem % g.sizes[j]);
      rem /= g.sizes[j];
      k[j] = static_cast<int>(2 * m < M ? m : m - M);
    }
    if (keep(k, c)) out.set(k, c);
  }
  out.mark_aliased(g.aliased);
  return out;
}

}  // namespace detail

/// Discrete Fourier coefficients on the grid's natural frequency box
/// (-M/2, M/2] per axis, with the even-M Nyquist bin mapped to -M/2.
/// Coefficients with |c| <= drop_below are omitted.
inline TrigPoly analyze(const GridFn& g, double drop_below = -1.0) {
  return detail::analyze_filtered(g, [&](const MultiIndex&, Complex c) { return std::abs(c) > drop_below; });
}

/// Coefficients of a grid function restricted to the frequency box |k_j| <= deg_j.
inline TrigPoly analyze_box(const GridFn& g, const MultiIndex& deg) {
  return detail::analyze_filtered(g, [&](const MultiIndex& k, Complex) {
    for (std::size_t j = 0; j < k.size(); ++j)
      if (std::abs(k[j]) > deg[j]) return false;
    return true;
  });
}

/// Product of two trigonometric polynomials, formed on a grid fine enough that
/// no aliasing occurs and re-analyzed to coefficients.
inline TrigPoly multiply(const TrigPoly& a, const TrigPoly& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("multiply: dimension mismatch");
  if (a.empty() || b.empty()) return TrigPoly(a.dim());
  const MultiIndex deg = a.degree() + b.degree();
  const auto sizes = oversampled_sizes(deg, 1.0);
  GridFn ga = synthesize(a, sizes);
  const GridFn gb = synthesize(b, sizes);
  for (std::size_t i = 0; i < ga.values.size(); ++i) ga.values[i] *= gb.values[i];
  return analyze_box(ga, deg);
}

}  // namespace hcross
