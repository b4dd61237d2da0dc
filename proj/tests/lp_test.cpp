#include <gtest/gtest.h>

#include <random>

#include "hcross/lp.hpp"

using namespace hcross;

namespace {

// Brute-force oracle in two variables: best objective over all vertices formed
// by pairs of active constraint boundaries.
double vertex_oracle(const Eigen::MatrixXd& A, const Eigen::VectorXd& u, const Eigen::VectorXd& c) {
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.rows(); ++j)
      for (double si : {-1.0, 1.0})
        for (double sj : {-1.0, 1.0}) {
          Eigen::Matrix2d M;
          M << A.row(i), A.row(j);
          if (std::abs(M.determinant()) < 1e-12) continue;
          const Eigen::Vector2d x = M.inverse() * (Eigen::Vector2d(si * u[i], sj * u[j]));
          if (((A * x).cwiseAbs() - u).maxCoeff() > 1e-9) continue;
          best = std::max(best, c.dot(x));
        }
  return best;
}

}  // namespace

TEST(BoxLp, Examples) {
  Eigen::MatrixXd A(1, 1);
  A << 1.0;
  auto r = lp::solve_box(A, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1));
  EXPECT_EQ(r.status, lp::Status::optimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-9);

  Eigen::MatrixXd B(3, 2);
  B << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd u(3);
  u << 1, 1, 1.5;
  auto s = lp::solve_box(B, u, Eigen::Vector2d(1, 1));
  EXPECT_EQ(s.status, lp::Status::optimal);
  EXPECT_NEAR(s.objective, 1.5, 1e-9);

  EXPECT_THROW(lp::solve_box(B, -u, Eigen::Vector2d(1, 1)), std::invalid_argument);
}

TEST(BoxLp, MatchesVertexEnumeration) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 3 + trial % 12;
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd u(m);
    for (int i = 0; i < m; ++i) {
      A(i, 0) = g(rng);
      A(i, 1) = g(rng);
      u[i] = pos(rng);
    }
    // Two coordinate rows keep the feasible set bounded.
    A.row(0) << 1, 0;
    A.row(1) << 0, 1;
    const Eigen::Vector2d c(g(rng), g(rng));
    auto r = lp::solve_box(A, u, c);
    ASSERT_EQ(r.status, lp::Status::optimal) << trial;
    EXPECT_NEAR(r.objective, vertex_oracle(A, u, c), 1e-7 * (1 + std::abs(r.objective))) << trial;
    EXPECT_LE(((A * r.w).cwiseAbs() - u).maxCoeff(), 1e-8);
  }
}
