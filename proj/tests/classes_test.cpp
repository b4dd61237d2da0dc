#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hcross/classes.hpp"

using namespace hcross;

namespace {

TrigPoly random_on(const FreqSet& support, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  TrigPoly f(support.dim());
  for (const auto& k : support) f.set(k, {g(rng), g(rng)});
  return f;
}

}  // namespace

TEST(ScaleIntoW, Examples) {
  TrigPoly e1(1, {{{1}, 1.0}});
  EXPECT_NEAR(scale_into_Wrq(e1, 2.0, 2.0).lambda, 1.0, 1e-14);
  TrigPoly e2(1, {{{2}, 1.0}});
  EXPECT_NEAR(scale_into_Wrq(e2, 2.0, 2.0).lambda, 0.25, 1e-14);

  // f = F_r truncated to a box: phi has unit coefficients there.
  const double r = 1.5;
  TrigPoly fr(2);
  for (const auto& k : build_box({3, 2})) fr.set(k, kernels::bernoulli_multiplier(r, k));
  auto phi = bernoulli_preimage(fr, r);
  for (const auto& [k, c] : phi) EXPECT_NEAR(std::abs(c - Complex(1.0)), 0.0, 1e-13);
  EXPECT_NEAR(scale_into_Wrq(fr, r, 2.0).lambda, 1.0 / std::sqrt(35.0), 1e-13);

  EXPECT_THROW(scale_into_Wrq(e1, 1.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(ScaleIntoW, MultiplierRoundTripIsExact) {
  std::mt19937_64 rng(21);
  for (double r : {0.5, 1.0, 2.7}) {
    auto f = random_on(build_Qn(6, 2), rng);
    auto back = bernoulli_apply(bernoulli_preimage(f, r), r);
    for (const auto& [k, c] : f) EXPECT_LE(std::abs(back[k] - c), 1e-12 * std::abs(c));
  }
}

TEST(ScaleIntoH, ProxyExamples) {
  TrigPoly e1(1, {{{1}, 1.0}});
  for (double q : {1.0, 2.0, 3.0}) {
    auto rep = scale_into_Hrq_proxy(e1, 1.5, q);
    ASSERT_EQ(rep.entries.size(), 1u);
    const double a1 = lp_norm(a_block(e1, {1}), q, 8.0).value;
    EXPECT_NEAR(rep.lambda, std::exp2(-1.5) / a1, 1e-10);
    EXPECT_EQ(rep.criterion, Criterion::proxy);
  }

  // Two separated blocks: the binding one maximizes 2^{r||s||} ||A_s f||_q.
  TrigPoly two(1, {{{1}, 1.0}, {{40}, 0.01}});
  auto rep = scale_into_Hrq_proxy(two, 2.0, 2.0);
  double worst = 0.0;
  std::string label;
  for (const auto& [u, part] : a_decomposition(two)) {
    const double v = std::exp2(2.0 * u.sum()) * l2_norm(part);
    if (v > worst) {
      worst = v;
      label = "A" + u.str();
    }
  }
  EXPECT_NEAR(rep.lambda, 1.0 / worst, 1e-12 / worst);
  EXPECT_EQ(rep.entries[rep.binding].label, label);
}

TEST(ScaleIntoH, DirectConstantIsCappedByIdentityTerm) {
  TrigPoly c(2, {{{0, 0}, 3.0}});
  auto rep = scale_into_Hrq_direct(c, 1.5, 2.0);
  EXPECT_TRUE(rep.unbounded_by_differences);
  EXPECT_NEAR(rep.lambda, 1.0 / 3.0, 1e-14);
  EXPECT_EQ(rep.entries[rep.binding].label, "e={}");
  EXPECT_EQ(rep.entries.size(), 1u + 9u + 9u + 81u);
}

TEST(ScaleIntoH, DirectFlagsTinyStepsInSupNorm) {
  TrigPoly e1(1, {{{1}, 1.0}});
  ClassOptions opt;
  opt.ladder_levels = 8;
  // r = 9: (2 pi 2^{-8})^9 < 1e-12.
  EXPECT_TRUE(scale_into_Hrq_direct(e1, 9.0, std::numeric_limits<double>::infinity(), opt).unstable);
  EXPECT_FALSE(scale_into_Hrq_direct(e1, 1.0, std::numeric_limits<double>::infinity(), opt).unstable);
}

TEST(ScaleIntoH, ProxyAndDirectAgreeUpToBoundedFactor) {
  std::mt19937_64 rng(22);
  double lo = 1e300, hi = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    auto f = random_on(build_Qn(6, 2), rng);
    const double p = scale_into_Hrq_proxy(f, 1.5, 2.0).lambda;
    const double d = scale_into_Hrq_direct(f, 1.5, 2.0).lambda;
    lo = std::min(lo, p / d);
    hi = std::max(hi, p / d);
  }
  RecordProperty("proxy_over_direct_min", std::to_string(lo));
  RecordProperty("proxy_over_direct_max", std::to_string(hi));
  EXPECT_GT(lo, 1e-3);
  EXPECT_LT(hi, 1e3);
  EXPECT_LT(hi / lo, 10.0);
}

TEST(ScaleIntoStructural, Examples) {
  TrigPoly e1(2, {{{1, 0}, 1.0}});
  for (double a : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(scale_into_structural(e1, ClassWA{a, 0.7, 0.5}).lambda, std::exp2(-a), 1e-15);
    EXPECT_NEAR(scale_into_structural(e1, ClassHA{a, 0.7, 0.5}).lambda, std::exp2(-a), 1e-15);
  }

  // |f_j|_A = 2^{-aj} on every layer gives lambda = 1.
  const double a = 1.25;
  TrigPoly f(1);
  for (int j = 0; j <= 6; ++j) f.set({j == 0 ? 0 : (1 << (j - 1))}, std::exp2(-a * j));
  EXPECT_NEAR(scale_into_structural(f, ClassWA{a, 0.0, 1.0}).lambda, 1.0, 1e-14);
  EXPECT_THROW(scale_into_structural(f, ClassWA{a, 0.0, 1.5}), std::invalid_argument);
}

TEST(ScaleInto, HomogeneousOfDegreeMinusOne) {
  std::mt19937_64 rng(23);
  auto f = random_on(build_Qn(5, 2), rng);
  const std::vector<ClassSpec> specs{ClassW{1.5, 2.0}, ClassW{1.0, 3.0}, ClassH{1.5, 2.0}, ClassHQ{1.5},
                                     ClassWA{1.0, 0.5, 0.5}, ClassHA{1.0, 0.5, 1.0}};
  for (const auto& spec : specs) {
    const double base = scale_into(f, spec).lambda;
    for (Complex c : {Complex(2.0), Complex(-0.125), Complex(0.0, 3.0), Complex(1.7, -0.4)}) {
      TrigPoly g = f * c;
      EXPECT_NEAR(scale_into(g, spec).lambda, base / std::abs(c), 1e-12 * base / std::abs(c)) << describe(spec);
    }
  }
  EXPECT_TRUE(std::isinf(scale_into(TrigPoly(2), ClassW{1.0, 2.0}).lambda));
}

TEST(Embedding, BlockQuasiNormInequalityPerLayer) {
  std::mt19937_64 rng(24);
  for (double beta : {0.3, 0.5, 1.0}) {
    auto f = random_on(build_Qn(6, 2), rng);
    EXPECT_LE(structural_layer_excess(f, beta), 1e-12);
    // The H report therefore certifies the W report with b' = b + 1/beta, up to the block count.
    const double b = 0.4;
    const double lh = scale_into_structural(f, ClassHA{1.0, b, beta}).lambda;
    const double lw = scale_into_structural(f, ClassWA{1.0, b + 1.0 / beta, beta}).lambda;
    // Layer j holds j+1 blocks and jbar >= (j+1)/2, so the constant is 2^{1/beta}.
    EXPECT_LE(lh, lw * std::pow(2.0, 1.0 / beta) * (1 + 1e-12));
  }
}

TEST(Embedding, SobolevAndHolderIntoWiener) {
  TrigPoly e1(2, {{{1, 0}, 1.0}});
  auto rep = check_embedding(e1, 2.0, 2.0, SourceClass::W);
  ASSERT_EQ(rep.layer_ratios.size(), 1u);
  EXPECT_NEAR(rep.max_ratio, std::exp2(1.5), 1e-12);

  // Single block: reduces to ||A||_A <= C 2^{j/q} ||.||_q via the class scaling.
  std::mt19937_64 rng(25);
  for (double q : {1.5, 2.0}) {
    double worst = 0.0;
    for (const auto& s : std::vector<MultiIndex>{{2, 3}, {5, 0}, {3, 3}}) {
      auto f = random_on(build_rho(s), rng);
      worst = std::max(worst, check_embedding(f, 1.0, q, SourceClass::H).max_ratio);
      worst = std::max(worst, check_embedding(f, 1.0, q, SourceClass::W).max_ratio);
    }
    RecordProperty("embedding_constant_q" + std::to_string(q), std::to_string(worst));
    EXPECT_LT(worst, 64.0);
  }

  EXPECT_EQ(check_embedding(TrigPoly(2), 2.0, 2.0, SourceClass::W).max_ratio, 0.0);
  EXPECT_THROW(check_embedding(e1, 2.0, 1.0, SourceClass::W), unsupported_range);
  EXPECT_THROW(check_embedding(e1, 2.0, 3.0, SourceClass::H), unsupported_range);
  EXPECT_THROW(check_embedding(e1, 0.4, 2.0, SourceClass::H), unsupported_range);
  EXPECT_NO_THROW(check_embedding(e1, 2.0, 1.0, SourceClass::H));
}
