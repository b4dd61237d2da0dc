#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hcross/witness.hpp"

using namespace hcross;

namespace {

PointSet uniform_points(std::size_t d, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<double> c(d * m);
  for (auto& v : c) v = u(rng);
  return PointSet(d, c);
}

double max_abs_direct(const TrigPoly& f, const PointSet& xi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) worst = std::max(worst, std::abs(evaluate(f, xi[i])));
  return worst;
}

bool support_within(const TrigPoly& f, const FreqSet& set) {
  for (const auto& [k, c] : f)
    if (!set.contains(k)) return false;
  return true;
}

}  // namespace

TEST(VanishingPoly, SineOnFirstBlock) {
  PointSet xi(1, {0.0});
  auto v = vanishing_poly(xi, {1});
  ASSERT_EQ(v.g.size(), 2u);
  // Null space of [1 1] is span(1, -1): g = c (e^{ix} - e^{-ix}) with |c| = 1/2.
  EXPECT_NEAR(std::abs(v.g[{1}] + v.g[{-1}]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(v.g[{1}]), 0.5, 1e-10);
  EXPECT_NEAR(std::abs(std::sin(v.argmax[0])), 1.0, 1e-8);
  EXPECT_LT(v.residual, 1e-14);
  EXPECT_EQ(v.null_dimension, 1u);
}

TEST(VanishingPoly, Examples) {
  auto free = vanishing_poly(PointSet(2), {2, 1});
  EXPECT_TRUE(support_within(free.g, build_rho({2, 1})));
  EXPECT_EQ(free.residual, 0.0);
  EXPECT_NEAR(sup_norm(free.g, 32.0).refined, 1.0, 1e-6);

  PointSet two(1, {0.0, std::numbers::pi});
  auto v = vanishing_poly(two, {2});
  EXPECT_TRUE(support_within(v.g, build_rho({2})));
  EXPECT_LE(max_abs_direct(v.g, two), 1e-9);

  EXPECT_THROW(vanishing_poly(uniform_points(1, 4, 1), {2}), infeasible_error);
  EXPECT_THROW(vanishing_poly(uniform_points(2, 4, 1), {2}), std::invalid_argument);
}

TEST(VanishingPoly, RandomPointsAreAnnihilatedAndSupIsNormalized) {
  for (std::uint64_t seed : {3u, 4u}) {
    const auto xi = uniform_points(2, 60, seed);
    VanishingOptions opt;
    opt.seed = seed;
    auto v = vanishing_poly(xi, {3, 4}, opt);
    EXPECT_TRUE(support_within(v.g, build_rho({3, 4})));
    EXPECT_LE(max_abs_direct(v.g, xi), 1e-9);
    const double fine = sup_norm(v.g, 32.0).refined;
    EXPECT_NEAR(fine, 1.0, 1e-4);
    EXPECT_LE(v.grid_max, 1.0 + 1e-12);
    EXPECT_NEAR(std::abs(evaluate(v.g, std::span<const double>(v.argmax.data(), 2))), 1.0, 1e-12);

    auto again = vanishing_poly(xi, {3, 4}, opt);
    EXPECT_EQ(again.g.coefficients(), v.g.coefficients());
  }
}

TEST(VanishingPoly, BoxVariant) {
  PointSet xi(1, {0.0});
  auto v = vanishing_poly_box(xi, {1});
  EXPECT_TRUE(support_within(v.g, build_box({1})));
  EXPECT_LE(std::abs(evaluate(v.g, {0.0})), 1e-12);
  EXPECT_EQ(v.null_dimension, 2u);
}

TEST(FoolingFunction, SingleBlockMatchesDirectProduct) {
  const auto xi = uniform_points(1, 3, 5);
  auto fr = fooling_function(xi, 3);
  ASSERT_EQ(fr.terms.size(), 1u);
  const auto& term = fr.terms[0];
  EXPECT_EQ(term.s, MultiIndex{3});
  // Independent oracle: convolve the coefficient sequences directly.
  TrigPoly K = kernels::fejer(2).shifted(std::span<const double>(term.g.argmax.data(), 1));
  TrigPoly direct(1);
  for (const auto& [k1, c1] : term.g.g)
    for (const auto& [k2, c2] : K) direct.add(k1 + k2, c1 * c2);
  for (const auto& [k, c] : direct) EXPECT_NEAR(std::abs(fr.f[k] - c), 0.0, 1e-13) << k.str();
  EXPECT_LE(fr.vanishing, 1e-9);
}

TEST(FoolingFunction, PeakWithoutPointsIsFejerPeak) {
  auto fr = fooling_function(PointSet(1), 3);
  // |f(x*)| = |g(x*)| K_2(0) = 2.
  EXPECT_NEAR(fr.terms[0].peak, 2.0, 1e-10);
  EXPECT_NEAR(fr.terms[0].peak_ratio, 0.25, 1e-10);
}

TEST(FoolingFunction, TwoDimensionalSixLevelInvariants) {
  const auto xi = uniform_points(2, 8, 6);
  auto fr = fooling_function(xi, 6);
  EXPECT_EQ(fr.terms.size(), 1u);
  EXPECT_TRUE(fr.support_in_cross);
  EXPECT_TRUE(support_within(fr.f, build_Qn(8, 2)));
  EXPECT_LE(max_abs_direct(fr.f, xi), 1e-9 * fr.sup_lower);
  EXPECT_TRUE(fr.blocks_unique);
  EXPECT_TRUE(fr.a_cutoff);
  for (const auto& [u, part] : a_decomposition(fr.f)) EXPECT_LE(u.sum(), 6 + 3 * 2);
}

TEST(FoolingFunction, BlocksOfDistinctTermsAreDisjoint) {
  const auto xi = uniform_points(2, 100, 7);
  auto fr = fooling_function(xi, 9);
  ASSERT_EQ(fr.terms.size(), 2u);
  // Oracle: recompute the touched dyadic blocks from each term's coefficients.
  std::vector<std::set<MultiIndex>> touched;
  for (const auto& term : fr.terms) {
    std::set<MultiIndex> blocks;
    for (const auto& [k, c] : term.t) blocks.insert(dyadic_level(k));
    touched.push_back(blocks);
  }
  for (const auto& u : touched[0]) EXPECT_FALSE(touched[1].count(u)) << u.str();
  EXPECT_TRUE(fr.blocks_unique);
  EXPECT_LE(fr.vanishing, 1e-9);
}

TEST(FoolingFunction, Preconditions) {
  EXPECT_THROW(fooling_function(PointSet(2), 7), infeasible_error);
  EXPECT_THROW(fooling_function(PointSet(2), 3), infeasible_error);
  EXPECT_THROW(fooling_function(uniform_points(2, 33, 1), 6), infeasible_error);
}

TEST(EvaluateWitness, ZeroAndInvalidInputs) {
  PointSet xi(2, {0.1, 0.2});
  auto zero = evaluate_witness(TrigPoly(2), xi, ClassHQ{1.0}, 2.0, 6);
  EXPECT_EQ(zero.value, 0.0);

  TrigPoly one(2, {{{0, 0}, 1.0}});
  EXPECT_THROW(evaluate_witness(one, xi, ClassHQ{1.0}, 2.0, 6), invalid_witness);
}

TEST(EvaluateWitness, PipelineAndHomogeneity) {
  const auto xi = uniform_points(2, 32, 8);
  auto fr = fooling_function(xi, 6);
  auto rep = fooling_witness(fr, ClassHQ{1.0}, 2.0);
  EXPECT_GT(rep.value, 0.0);
  EXPECT_NEAR(rep.predicted, std::exp2(3.0) * std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(rep.ratio, rep.value / rep.predicted, 1e-15);
  EXPECT_LE(rep.vanishing, 1e-9);

  for (Complex c : {Complex(3.0), Complex(0.0, -0.25)}) {
    auto scaled = evaluate_witness(fr.f * c, xi, ClassHQ{1.0}, 2.0, 6);
    EXPECT_NEAR(scaled.value, rep.value, 1e-12 * rep.value);
    EXPECT_NEAR(scaled.ratio, rep.ratio, 1e-12 * rep.ratio);
  }

  // p = q: the power part cancels and only the log term remains.
  auto same = fooling_witness(fr, ClassHQ{2.0}, 2.0);
  EXPECT_NEAR(same.predicted, std::sqrt(6.0), 1e-12);
  EXPECT_GT(same.value, 0.1);
  EXPECT_LT(same.value, 10.0);

  auto st = fooling_witness(fr, ClassHA{1.0, 0.5, 0.5}, 2.0);
  EXPECT_NEAR(st.predicted, std::pow(32.0, 1.0 - 0.5 - 2.0 - 1.0) * std::pow(5.0, 1.0), 1e-12);
}

TEST(BoxWitness, Examples) {
  PointSet xi(1, {0.0});
  auto bw = box_witness(xi, {1}, 2.0, 2.0);
  EXPECT_TRUE(support_within(bw.h, build_box({2})));
  EXPECT_LE(std::abs(evaluate(bw.h, {0.0})), 1e-12);
  EXPECT_NEAR(l2_norm(bw.h), 1.0, 1e-12);
  EXPECT_NEAR(bw.report.predicted, 1.0, 1e-15);
  EXPECT_NEAR(bw.report.value, 1.0, 1e-12);

  const auto pts = uniform_points(2, 20, 9);
  auto big = box_witness(pts, {3, 3}, 1.0, 2.0);
  EXPECT_TRUE(support_within(big.h, build_box({6, 6})));
  EXPECT_LE(big.report.vanishing, 1e-9);
  EXPECT_NEAR(lp_norm(big.h, 1.0, 4.0).value, 1.0, 1e-12);
  EXPECT_NEAR(big.report.predicted, std::sqrt(49.0), 1e-12);
  EXPECT_GT(big.report.ratio, 0.0);

  EXPECT_THROW(box_witness(uniform_points(2, 25, 1), {3, 3}, 1.0, 2.0), infeasible_error);
}

TEST(IntegrationFooler, NoPointsGivesConstantBlocks) {
  for (int n : {2, 4}) {
    auto ir = integration_fooler(PointSet(2), n);
    EXPECT_NEAR(ir.mean, n + 1.0, 1e-7);
    for (const auto& blk : ir.blocks) {
      EXPECT_NEAR(blk.t[MultiIndex(2)].real(), 1.0, 1e-7);
      EXPECT_NEAR(blk.audit_sup, 1.0, 1e-7);
    }
  }
}

TEST(IntegrationFooler, SinglePointOneDimension) {
  PointSet xi(1, {0.0});
  auto ir = integration_fooler(xi, 2);
  ASSERT_EQ(ir.blocks.size(), 1u);
  const auto& blk = ir.blocks[0];
  EXPECT_EQ(blk.N, MultiIndex{2});
  EXPECT_GT(blk.mean, 0.1);
  EXPECT_LT(blk.mean, 1.0);
  EXPECT_LE(std::abs(evaluate(ir.t, {0.0})), 1e-12);
  EXPECT_TRUE(ir.t.real_valued());
  // Rescaling uses the factor-8 grid, so the true sup may exceed 1 slightly.
  EXPECT_LE(sup_norm(ir.t, 64.0).refined, 1.01);
  EXPECT_EQ(blk.status, lp::Status::optimal);
}

TEST(IntegrationFooler, RandomPointsTwoDimensions) {
  const auto xi = uniform_points(2, 16, 10);
  auto ir = integration_fooler(xi, 5);
  EXPECT_EQ(ir.blocks.size(), 6u);
  EXPECT_GT(ir.mean, 0.0);
  EXPECT_LE(max_abs_direct(ir.t, xi), 1e-10);
  for (const auto& blk : ir.blocks) {
    EXPECT_LE(blk.audit_sup, 1.05);
    EXPECT_LE(sup_norm(blk.t, 16.0).grid_max, 1.01);
  }
  EXPECT_THROW(integration_fooler(uniform_points(2, 17, 1), 5), infeasible_error);
}

TEST(HInfinityCheck, SupportRegionAndZeroFunction) {
  const auto xi = uniform_points(2, 8, 11);
  auto ir = integration_fooler(xi, 4);
  auto rep = h_infinity_check(ir, 1.0);
  EXPECT_TRUE(rep.support_exact);
  EXPECT_GT(rep.zero_blocks, 0u);
  EXPECT_GT(rep.max_weighted, 0.0);
  // Bands above level sum n + d never appear.
  for (const auto& [u, part] : a_decomposition(ir.t)) EXPECT_LE(u.sum(), 4 + 2);

  IntegrationResult zero;
  zero.n = 3;
  zero.d = 2;
  zero.t = TrigPoly(2);
  auto z = h_infinity_check(zero, 1.0);
  for (const auto& [u, v] : z.block_sup) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(z.support_exact);
}

TEST(HInfinityCheck, SingleBlockOnlyReachesItsOwnBands) {
  auto ir = integration_fooler(PointSet(2), 3);
  IntegrationResult single = ir;
  single.blocks = {ir.blocks[1]};
  single.t = ir.blocks[1].t;
  const MultiIndex s = ir.blocks[1].s;
  auto rep = h_infinity_check(single, 1.0);
  EXPECT_TRUE(rep.support_exact);
  for (const auto& [u, v] : rep.block_sup)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(u[j], s[j] + 1) << u.str();
}

TEST(ABetaCheck, Examples) {
  TrigPoly c(1, {{{0}, Complex(0.0, -3.0)}});
  EXPECT_NEAR(abeta_norm(c, 0.5), 3.0, 1e-14);
  EXPECT_NEAR(sp1_ratio(c, {0}, 2.0), 1.0, 1e-14);

  // Unit coefficients on the full box: |g|_A = M, ||g||_2 = sqrt(M) = theta^{1/2}.
  TrigPoly full(2);
  for (const auto& k : build_box({2, 3})) full.set(k, 1.0);
  EXPECT_NEAR(sp1_ratio(full, {2, 3}, 2.0), 1.0, 1e-12);
  TrigPoly part(2);
  for (const auto& k : build_box({1, 1})) part.set(k, 1.0);
  EXPECT_NEAR(sp1_ratio(part, {2, 3}, 2.0), std::sqrt(9.0 / 35.0), 1e-12);

  const auto xi = uniform_points(2, 32, 12);
  auto fr = fooling_function(xi, 6);
  for (double beta : {1.0, 0.5}) {
    auto rep = abeta_block_check(fr, beta);
    EXPECT_GT(rep.max_ratio, 0.0);
    EXPECT_LE(rep.max_sp1, 1.0 + 1e-9);
  }
}
