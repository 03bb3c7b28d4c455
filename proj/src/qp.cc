// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "infogather/qp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "infogather/errors.h"

namespace infogather {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Quantities of the equality-constrained subproblem on the active set, in
// the ">= form" n_j^T u >= b_j with n_j = -g_j, b_j = -h_j.
struct ActiveSystem {
  Eigen::MatrixXd n;           // n x q
  Eigen::MatrixXd pinv_n;      // P^-1 N
  Eigen::LDLT<Eigen::MatrixXd> schur;  // N^T P^-1 N
};

ActiveSystem BuildActive(const Eigen::MatrixXd& pinv, const Eigen::MatrixXd& g,
                         const std::vector<int>& active) {
  ActiveSystem sys;
  const int dim = static_cast<int>(pinv.rows());
  sys.n.resize(dim, static_cast<int>(active.size()));
  for (size_t k = 0; k < active.size(); ++k) {
    sys.n.col(k) = -g.row(active[k]).transpose();
  }
  sys.pinv_n = pinv * sys.n;
  if (!active.empty()) sys.schur.compute(sys.n.transpose() * sys.pinv_n);
  return sys;
}

}  // namespace

double KktResidual(const QpInstance& qp, const Eigen::VectorXd& u,
                   const Eigen::VectorXd& multipliers) {
  Eigen::VectorXd stationarity = qp.p * u + qp.q;
  double residual = 0.0;
  if (qp.g.rows() > 0) {
    stationarity += qp.g.transpose() * multipliers;
    const Eigen::VectorXd slack = qp.g * u - qp.h;
    for (int j = 0; j < slack.size(); ++j) {
      residual = std::max(residual, slack(j));
      residual = std::max(residual, std::abs(multipliers(j) * slack(j)));
      residual = std::max(residual, -multipliers(j));
    }
  }
  return std::max(residual, stationarity.cwiseAbs().maxCoeff());
}

QpSolution SolveQp(const QpInstance& qp, std::span<const int> warm_active) {
  const int dim = static_cast<int>(qp.p.rows());
  const int m = static_cast<int>(qp.g.rows());
  if (qp.p.cols() != dim || qp.q.size() != dim ||
      (m > 0 && qp.g.cols() != dim) || qp.h.size() != m) {
    throw std::invalid_argument("QP dimensions are inconsistent");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (qp.p + qp.p.transpose()), Eigen::EigenvaluesOnly);
  if (dim == 0 || eig.eigenvalues().minCoeff() <= QpTolerances::kMinEigenvalue) {
    throw NumericalError("QP Hessian is not positive definite");
  }
  Eigen::LLT<Eigen::MatrixXd> p_llt(qp.p);
  const Eigen::MatrixXd pinv =
      p_llt.solve(Eigen::MatrixXd::Identity(dim, dim));

  QpSolution sol;
  sol.multipliers = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd x = -p_llt.solve(qp.q);
  std::vector<int> active;
  Eigen::VectorXd lambda(0);
  const int max_iterations = 100 * (dim + m);
  std::vector<char> preferred(m, 0);
  for (int j : warm_active) {
    if (j >= 0 && j < m) preferred[j] = 1;
  }

  auto slack_of = [&](int j) { return qp.h(j) - qp.g.row(j).dot(x); };
  auto finish = [&](QpStatus status) {
    sol.status = status;
    sol.active_set = active;
    std::sort(sol.active_set.begin(), sol.active_set.end());
    sol.multipliers.setZero();
    for (size_t k = 0; k < active.size(); ++k) {
      sol.multipliers(active[k]) = lambda(k);
    }
    sol.u = x;
    sol.kkt_residual = KktResidual(qp, x, sol.multipliers);
    return sol;
  };

  int iterations = 0;
  while (true) {
    // Choose the violated constraint to add, preferring warm rows.
    int p = -1;
    double worst = -QpTolerances::kPrimal * 0.01;
    for (int pass = 0; pass < 2 && p < 0; ++pass) {
      for (int j = 0; j < m; ++j) {
        if (pass == 0 && !preferred[j]) continue;
        if (std::find(active.begin(), active.end(), j) != active.end()) {
          continue;
        }
        const double s = slack_of(j) / std::max(1.0, qp.g.row(j).norm());
        if (s < worst) {
          worst = s;
          p = j;
        }
      }
    }
    if (p < 0) break;
    if (preferred[p]) preferred[p] = 0;

    double lambda_p = 0.0;
    const Eigen::VectorXd np = -qp.g.row(p).transpose();
    while (true) {
      if (++iterations > max_iterations) {
        sol.iterations = iterations;
        return finish(QpStatus::kMaxIterations);
      }
      const ActiveSystem sys = BuildActive(pinv, qp.g, active);
      Eigen::VectorXd z = pinv * np;
      Eigen::VectorXd r(active.size());
      if (!active.empty()) {
        r = sys.schur.solve(sys.pinv_n.transpose() * np);
        z -= sys.pinv_n * r;
      }
      const double curvature = z.dot(np);
      const double scale = np.dot(pinv * np);
      const bool dependent = !(curvature > 1e-12 * scale);

      double t1 = kInf;
      int drop = -1;
      for (int k = 0; k < static_cast<int>(active.size()); ++k) {
        if (r(k) > 0.0) {
          const double ratio = lambda(k) / r(k);
          if (ratio < t1) {
            t1 = ratio;
            drop = k;
          }
        }
      }
      const double sp = slack_of(p);  // n_p^T x - b_p
      const double t2 = dependent ? kInf : -sp / curvature;
      const double t = std::min(t1, t2);
      if (t == kInf) {
        sol.iterations = iterations;
        return finish(QpStatus::kInfeasible);
      }
      if (!dependent) x += t * z;
      if (!active.empty()) lambda -= t * r;
      lambda_p += t;
      if (t2 <= t1) {
        active.push_back(p);
        lambda.conservativeResize(lambda.size() + 1);
        lambda(lambda.size() - 1) = lambda_p;
        break;
      }
      active.erase(active.begin() + drop);
      Eigen::VectorXd kept(lambda.size() - 1);
      for (int k = 0, w = 0; k < lambda.size(); ++k) {
        if (k != drop) kept(w++) = lambda(k);
      }
      lambda = kept;
    }
  }

  // Re-solve the active-set KKT system to shed accumulated rounding.
  if (!active.empty()) {
    const ActiveSystem sys = BuildActive(pinv, qp.g, active);
    Eigen::VectorXd b(active.size());
    for (size_t k = 0; k < active.size(); ++k) b(k) = -qp.h(active[k]);
    const Eigen::VectorXd pinv_q = pinv * qp.q;
    const Eigen::VectorXd lam =
        sys.schur.solve(b + sys.n.transpose() * pinv_q);
    const Eigen::VectorXd polished = sys.pinv_n * lam - pinv_q;
    Eigen::VectorXd mult = Eigen::VectorXd::Zero(m);
    for (size_t k = 0; k < active.size(); ++k) mult(active[k]) = lam(k);
    Eigen::VectorXd current = Eigen::VectorXd::Zero(m);
    for (size_t k = 0; k < active.size(); ++k) current(active[k]) = lambda(k);
    if (lam.minCoeff() >= QpTolerances::kDual &&
        KktResidual(qp, polished, mult) <= KktResidual(qp, x, current)) {
      x = polished;
      lambda = lam;
    }
  }
  sol.iterations = iterations;
  return finish(QpStatus::kOptimal);
}

}  // namespace infogather
