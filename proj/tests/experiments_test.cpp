#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hcross/hcross.hpp"

using namespace hcross;

TEST(Config, ParsesFlatDocument) {
  std::istringstream in(
      "# rates run\n"
      "experiment = q1P2\n"
      "d = 2\n"
      "n = 4..6, 8\n"
      "points = lattice   # structured\n"
      "seed = 7\n"
      "timestamp = false\n");
  const auto cfg = parse_config(in);
  EXPECT_EQ(cfg.kind, ExperimentKind::q1P2);
  EXPECT_EQ(cfg.n_values(), (std::vector<int>{4, 5, 6, 8}));
  EXPECT_EQ(cfg.points, PointFamily::lattice);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_FALSE(cfg.timestamp);
}

TEST(Config, DiagnosticsCarryLineNumbers) {
  auto line_of = [](const std::string& doc) -> std::size_t {
    std::istringstream in(doc);
    try {
      parse_config(in);
    } catch (const config_error& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("d = 2\n\nbogus = 1\n"), 3u);
  EXPECT_EQ(line_of("d = 2\nq 2\n"), 2u);
  EXPECT_EQ(line_of("q = x\n"), 1u);
  EXPECT_EQ(line_of("d = 2\nd = 3\n"), 2u);
  EXPECT_EQ(line_of("n = 5..3\n"), 1u);

  std::istringstream in("seed = 1\nexperiment = nope\n");
  try {
    parse_config(in);
    FAIL();
  } catch (const config_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Config, HypothesisRangesAndCaps) {
  ExperimentConfig cfg;
  cfg.q = 2.0;
  cfg.p = 1.5;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg.p = 2.0;
  cfg.r = 0.4;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg.r = 1.0;
  EXPECT_NO_THROW(validate(cfg));
  cfg.n = std::vector<int>{15};
  EXPECT_THROW(validate(cfg), std::length_error);
  cfg.n.reset();
  cfg.d = 4;
  EXPECT_THROW(validate(cfg), std::length_error);

  ExperimentConfig st;
  st.kind = ExperimentKind::ST1;
  st.beta = 1.5;
  EXPECT_THROW(validate(st), std::invalid_argument);
  st.beta = 0.5;
  st.p = 1.5;
  EXPECT_THROW(validate(st), std::invalid_argument);
}

TEST(Points, Families) {
  const auto u = make_points(PointFamily::uniform, 2, 40, 3, 1);
  EXPECT_EQ(u.size(), 40u);
  for (double x : u.coordinates()) {
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, kTwoPi);
  }
  EXPECT_EQ(make_points(PointFamily::uniform, 2, 40, 3, 1).coordinates(), u.coordinates());
  EXPECT_NE(make_points(PointFamily::uniform, 2, 40, 4, 1).coordinates(), u.coordinates());

  const auto l = make_points(PointFamily::lattice, 3, 31, 0, 1);
  EXPECT_EQ(l.size(), 31u);
  EXPECT_EQ(make_points(PointFamily::lattice, 3, 31, 0, 1).coordinates(), l.coordinates());

  EXPECT_EQ(make_points(PointFamily::grid, 2, 40, 0).size(), 36u);
  EXPECT_EQ(make_points(PointFamily::grid, 3, 27, 0).size(), 27u);
  EXPECT_EQ(make_points(PointFamily::grid, 2, 0, 0).size(), 0u);
}

TEST(RateFitTest, RecoversExactExponents) {
  const std::vector<int> ns{4, 5, 6, 7, 8, 9};
  std::vector<double> v;
  for (int n : ns) v.push_back(3.0 * std::exp2(0.5 * n) * std::pow(n, 1.25));
  const auto j = fit_rate(ns, v);
  EXPECT_NEAR(j.alpha, 0.5, 1e-9);
  EXPECT_NEAR(j.gamma, 1.25, 1e-9);
  EXPECT_NEAR(std::exp(j.intercept), 3.0, 1e-8);
  EXPECT_LT(j.residual, 1e-10);
  EXPECT_TRUE(j.warning.empty());
  EXPECT_EQ(j.samples, 6u);

  const auto fa = fit_rate(ns, v, FitMode::fixed_alpha, 0.5);
  EXPECT_NEAR(fa.gamma, 1.25, 1e-9);
  const auto fg = fit_rate(ns, v, FitMode::fixed_gamma, 1.25);
  EXPECT_NEAR(fg.alpha, 0.5, 1e-9);

  const auto three = fit_rate({6, 9, 12}, {1.0, 2.0, 3.0});
  EXPECT_FALSE(three.warning.empty());
  EXPECT_THROW(fit_rate({6, 9}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(fit_rate({6, 9, 12}, {1.0, 0.0, 2.0}), std::invalid_argument);
}

TEST(Csv, SchemaAndEmptyRange) {
  ExperimentConfig cfg;
  cfg.n = std::vector<int>{};
  const auto res = run_qpT1(cfg);
  EXPECT_TRUE(res.rows.empty());
  std::ostringstream os;
  write_csv(os, res.rows);
  EXPECT_EQ(os.str(), std::string(kCsvHeader) + "\n");

  std::ostringstream ts;
  write_csv(ts, res.rows, true);
  EXPECT_EQ(ts.str().rfind("# generated ", 0), 0u);

  CsvRow r;
  r.experiment = "x";
  r.d = 2;
  r.value = 0.5;
  r.status = "a,b";
  std::ostringstream one;
  write_csv(one, {r});
  EXPECT_EQ(one.str(), std::string(kCsvHeader) + "\nx,2,,,,,,,,,0.5,,,\"a,b\"\n");
}

TEST(Runners, QpT1SmallRunIsDeterministic) {
  ExperimentConfig cfg;
  cfg.n = std::vector<int>{6, 7};
  cfg.q = 1.0;
  cfg.p = 2.0;
  cfg.r = 1.5;
  const auto a = run_qpT1(cfg);
  const auto b = run_qpT1(cfg);
  std::ostringstream sa, sb;
  write_csv(sa, a.rows);
  write_csv(sb, b.rows);
  EXPECT_EQ(sa.str(), sb.str());
  ASSERT_EQ(a.rows.size(), 5u);
  EXPECT_EQ(a.rows[0].experiment, "qpT1:HQ");
  EXPECT_EQ(a.rows[0].status, "ok");
  EXPECT_GT(a.rows[0].value, 0.0);
  EXPECT_EQ(a.rows[4].status.rfind("skipped", 0), 0u);
  // Two usable points: every fit records why it is missing.
  for (const auto& f : a.fits) EXPECT_FALSE(f.warning.empty());
}

TEST(Runners, IntegrationWithoutPointsCountsCompositions) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::q1P2;
  cfg.n = std::vector<int>{3, 4};
  cfg.m = 0;
  const auto res = run_q1P2(cfg);
  ASSERT_EQ(res.rows.size(), 6u);
  EXPECT_EQ(res.rows[0].experiment, "q1P2:mean");
  EXPECT_NEAR(res.rows[0].value, 4.0, 1e-6);
  EXPECT_NEAR(res.rows[3].value, 5.0, 1e-6);
  EXPECT_EQ(res.rows[1].status.rfind("support-exact", 0), 0u);

  cfg.d = 1;
  cfg.n = std::vector<int>{4, 5, 6};
  cfg.m.reset();
  const auto one = run_q1P2(cfg);
  for (const auto& r : one.rows) {
    if (r.experiment == "q1P2:mean") {
      EXPECT_LE(r.value, 1.0 + 1e-6);
    }
  }
}

TEST(Runners, BoxWitnessRows) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::qpL1;
  cfg.n = std::vector<int>{1, 2};
  cfg.q = 2.0;
  cfg.p = 2.0;
  const auto res = run_qpL1(cfg);
  ASSERT_EQ(res.rows.size(), 2u);
  for (const auto& r : res.rows) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_DOUBLE_EQ(r.predicted, 1.0);
    EXPECT_NEAR(r.value, 1.0, 1e-9);
  }
}

TEST(Audits, ConstantFreeFamiliesHaveNoViolations) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::inequalities;
  cfg.trials = 100;
  const auto res = run_inequalities(cfg);
  EXPECT_EQ(res.violations, 0u);
  bool saw_table = false;
  for (const auto& r : res.rows) {
    EXPECT_EQ(r.status.find("FAIL"), std::string::npos) << r.experiment;
    saw_table = saw_table || r.experiment == "audit:cross-wiener";
  }
  EXPECT_TRUE(saw_table);
}

TEST(Audits, HolderEqualityAtBetaOne) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::inequalities;
  cfg.trials = 10;
  cfg.families = {"holder"};
  const auto res = run_inequalities(cfg);
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_LE(res.rows[0].value, 1.0 + 1e-12);
}

TEST(CoefficientFile, RoundTripAndErrors) {
  TrigPoly f(2, {{{1, -2}, {0.5, 0.25}}, {{0, 0}, {1.0, 0.0}}});
  std::ostringstream os;
  write_coefficients(os, f);
  std::istringstream in(os.str());
  const TrigPoly g = read_coefficients(in);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(g[(MultiIndex{1, -2})], Complex(0.5, 0.25));

  auto line_of = [](const std::string& doc) -> std::size_t {
    std::istringstream is(doc);
    try {
      read_coefficients(is);
    } catch (const config_error& e) {
      return e.line();
    }
    return 99;
  };
  EXPECT_EQ(line_of("0 0 1 0\n"), 1u);
  EXPECT_EQ(line_of("d=2\n0 0 1 0\n1 1 x 0\n"), 3u);
  EXPECT_EQ(line_of("d=2\n# c\n0 1 0\n"), 3u);
  EXPECT_EQ(line_of(""), 0u);
}
