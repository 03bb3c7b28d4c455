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


// Dense strictly convex QP: min 1/2 u^T P u + q^T u  s.t.  G u <= h, solved
// with the Goldfarb-Idnani dual active-set method.

#ifndef INFOGATHER_QP_H_
#define INFOGATHER_QP_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace infogather {

struct QpInstance {
  Eigen::MatrixXd p;  // n x n, symmetric PD
  Eigen::VectorXd q;  // n
  Eigen::MatrixXd g;  // m x n (m may be 0)
  Eigen::VectorXd h;  // m
};

enum class QpStatus { kOptimal, kInfeasible, kMaxIterations };

struct QpSolution {
  Eigen::VectorXd u;
  QpStatus status = QpStatus::kInfeasible;
  std::vector<int> active_set;  // sorted row indices
  Eigen::VectorXd multipliers;  // m, zero off the active set
  double kkt_residual = 0.0;
  int iterations = 0;
};

struct QpTolerances {
  static constexpr double kPrimal = 1e-8;
  static constexpr double kKkt = 1e-8;
  static constexpr double kDual = -1e-10;
  static constexpr double kMinEigenvalue = 1e-12;
};

// max of stationarity, primal violation, complementarity and dual violation.
double KktResidual(const QpInstance& qp, const Eigen::VectorXd& u,
                   const Eigen::VectorXd& multipliers);

// `warm_active` rows are preferred when choosing the next violated
// constraint; the solution does not depend on it. Throws NumericalError when
// P is not PD and std::invalid_argument on inconsistent dimensions.
QpSolution SolveQp(const QpInstance& qp, std::span<const int> warm_active = {});

}  // namespace infogather

#endif  // INFOGATHER_QP_H_
