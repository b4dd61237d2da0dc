#pragma once

// Dense primal-dual interior-point solver for
//   maximize c^T w  subject to  -u <= A w <= u,  w free,
// with u > 0 so that w = 0 is strictly feasible. Mehrotra predictor-corrector
// on the two-sided slack form; the Newton system reduces to A^T D A.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hcross::lp {

enum class Status { optimal, iteration_limit, numerical_failure };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::optimal:
      return "optimal";
    case Status::iteration_limit:
      return "iteration-limit";
    case Status::numerical_failure:
      return "numerical-failure";
  }
  return "?";
}

struct Options {
  int max_iterations = 80;
  double tolerance = 1e-10;
};

struct Result {
  Eigen::VectorXd w;
  double objective = 0.0;
  double gap = 0.0;
  int iterations = 0;
  Status status = Status::optimal;
};

namespace detail {

inline double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  return a;
}

}  // namespace detail

inline Result solve_box(const Eigen::MatrixXd& A, const Eigen::VectorXd& u, const Eigen::VectorXd& c,
                        const Options& opt = {}) {
  const Eigen::Index m = A.rows(), n = A.cols();
  if (u.size() != m || c.size() != n) throw std::invalid_argument("lp::solve_box: dimension mismatch");
  if ((u.array() <= 0.0).any()) throw std::invalid_argument("lp::solve_box: bounds must be positive");

  Result res;
  res.w = Eigen::VectorXd::Zero(n);
  if (n == 0) return res;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s1 = u, s2 = u;
  Eigen::VectorXd z1 = Eigen::VectorXd::Ones(m), z2 = Eigen::VectorXd::Ones(m);
  const double scale = 1.0 + c.lpNorm<Eigen::Infinity>();
  z1 *= scale;
  z2 *= scale;

  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  for (int it = 0; it < opt.max_iterations; ++it) {
    res.iterations = it;
    const Eigen::VectorXd Aw = A * w;
    const Eigen::VectorXd rd = c - A.transpose() * (z1 - z2);
    const Eigen::VectorXd r1 = u - Aw - s1;
    const Eigen::VectorXd r2 = u + Aw - s2;
    const double mu = (s1.dot(z1) + s2.dot(z2)) / (2.0 * m);
    const double primal = c.dot(w), dual = u.dot(z1 + z2);
    res.gap = dual - primal;

    const bool feasible = rd.lpNorm<Eigen::Infinity>() <= opt.tolerance * scale &&
                          std::max(r1.lpNorm<Eigen::Infinity>(), r2.lpNorm<Eigen::Infinity>()) <=
                              opt.tolerance * (1.0 + u.lpNorm<Eigen::Infinity>());
    if (feasible && std::abs(res.gap) <= opt.tolerance * (1.0 + std::abs(primal))) {
      res.w = w;
      res.objective = primal;
      res.status = Status::optimal;
      return res;
    }

    const Eigen::VectorXd D = z1.cwiseQuotient(s1) + z2.cwiseQuotient(s2);
    Eigen::MatrixXd N = A.transpose() * D.asDiagonal() * A;
    N.diagonal().array() += 1e-14 * (1.0 + N.diagonal().maxCoeff());
    ldlt.compute(N);
    if (ldlt.info() != Eigen::Success) {
      res.status = Status::numerical_failure;
      break;
    }

    // Solves the Newton system for complementarity targets rc1, rc2.
    auto newton = [&](const Eigen::VectorXd& rc1, const Eigen::VectorXd& rc2, Eigen::VectorXd& dw,
                      Eigen::VectorXd& ds1, Eigen::VectorXd& ds2, Eigen::VectorXd& dz1, Eigen::VectorXd& dz2) {
      const Eigen::VectorXd t1 = (rc1 - z1.cwiseProduct(r1)).cwiseQuotient(s1);
      const Eigen::VectorXd t2 = (rc2 - z2.cwiseProduct(r2)).cwiseQuotient(s2);
      dw = ldlt.solve(rd - A.transpose() * (t1 - t2));
      const Eigen::VectorXd Adw = A * dw;
      ds1 = r1 - Adw;
      ds2 = r2 + Adw;
      dz1 = (rc1 - z1.cwiseProduct(ds1)).cwiseQuotient(s1);
      dz2 = (rc2 - z2.cwiseProduct(ds2)).cwiseQuotient(s2);
    };

    Eigen::VectorXd dw, ds1, ds2, dz1, dz2;
    newton(-s1.cwiseProduct(z1), -s2.cwiseProduct(z2), dw, ds1, ds2, dz1, dz2);
    const double ap_aff = std::min(detail::max_step(s1, ds1), detail::max_step(s2, ds2));
    const double ad_aff = std::min(detail::max_step(z1, dz1), detail::max_step(z2, dz2));
    const double mu_aff = ((s1 + ap_aff * ds1).dot(z1 + ad_aff * dz1) + (s2 + ap_aff * ds2).dot(z2 + ad_aff * dz2)) /
                          (2.0 * m);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    const Eigen::VectorXd rc1 = (sigma * mu - (s1.cwiseProduct(z1) + ds1.cwiseProduct(dz1)).array()).matrix();
    const Eigen::VectorXd rc2 = (sigma * mu - (s2.cwiseProduct(z2) + ds2.cwiseProduct(dz2)).array()).matrix();
    newton(rc1, rc2, dw, ds1, ds2, dz1, dz2);

    const double ap = std::min(1.0, 0.995 * std::min(detail::max_step(s1, ds1), detail::max_step(s2, ds2)));
    const double ad = std::min(1.0, 0.995 * std::min(detail::max_step(z1, dz1), detail::max_step(z2, dz2)));
    const Eigen::VectorXd last = w;
    w += ap * dw;
    s1 += ap * ds1;
    s2 += ap * ds2;
    z1 += ad * dz1;
    z2 += ad * dz2;
    if (!w.allFinite() || !z1.allFinite() || !z2.allFinite()) {
      w = last;
      res.status = Status::numerical_failure;
      break;
    }
    res.status = Status::iteration_limit;
  }
  res.w = w;
  res.objective = c.dot(w);
  return res;
}

}  // namespace hcross::lp
