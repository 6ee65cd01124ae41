// Copyright 2026 The Setpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "setpred/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>
#include <nlohmann/json.hpp>

namespace setpred {

KernelSpec KernelSpec::exponential(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential kernel: alpha must be positive");
  KernelSpec s;
  s.family = Family::kExponential;
  s.alpha = alpha;
  return s;
}

KernelSpec KernelSpec::polynomial(double alpha, int degree) {
  if (!(alpha > 0.0)) throw std::invalid_argument("polynomial kernel: alpha must be positive");
  if (degree < 1) throw std::invalid_argument("polynomial kernel: degree must be >= 1");
  KernelSpec s;
  s.family = Family::kPolynomial;
  s.alpha = alpha;
  s.degree = degree;
  return s;
}

KernelSpec KernelSpec::negative_distance(double shift) {
  if (shift < 0.0) throw std::invalid_argument("negative_distance kernel: shift must be >= 0");
  KernelSpec s;
  s.family = Family::kNegativeDistance;
  s.shift = shift;
  return s;
}

KernelSpec KernelSpec::spline() {
  KernelSpec s;
  s.family = Family::kNegativeDistance;
  s.shift = -1.0;  // sentinel: derive from the training inputs
  return s;
}

double KernelSpec::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  switch (family) {
    case Family::kExponential:
      return std::exp(-alpha * (x - y).norm());
    case Family::kPolynomial:
      return std::pow(1.0 + alpha * x.dot(y), degree);
    case Family::kNegativeDistance:
      return -(x - y).norm() + shift;
  }
  return 0.0;
}

std::string KernelSpec::name() const {
  switch (family) {
    case Family::kExponential:
      return "exponential";
    case Family::kPolynomial:
      return "polynomial";
    case Family::kNegativeDistance:
      return "negative_distance";
  }
  return "?";
}

nlohmann::json KernelSpec::to_json() const {
  nlohmann::json j;
  j["family"] = name();
  j["alpha"] = alpha;
  if (family == Family::kPolynomial) j["degree"] = degree;
  if (family == Family::kNegativeDistance) j["shift"] = shift;
  return j;
}

KernelSpec KernelSpec::from_json(const nlohmann::json& j) {
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "exponential") return exponential(j.value("alpha", 1.0));
  if (fam == "polynomial") return polynomial(j.value("alpha", 1.0), j.value("degree", 1));
  if (fam == "negative_distance" || fam == "spline") {
    // shift < 0 (or missing) means: derive it from the training data
    KernelSpec s;
    s.family = Family::kNegativeDistance;
    s.shift = j.value("shift", -1.0);
    return s;
  }
  throw std::invalid_argument("KernelSpec::from_json: unknown family '" + fam + "'");
}

double negative_distance_shift(const Eigen::MatrixXd& X) {
  // Exact threshold -1 / (1' K^+ 1) for K the unshifted matrix; any larger
  // shift keeps the Gram matrix positive semidefinite. The closed-form
  // radius bound (2R/sqrt(pi)) sqrt(d/2) is not sufficient in low dimension
  // (two points at distance 2R already need s >= R), so it is only used as
  // a lower clamp here.
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      k(i, j) = -(X.row(i) - X.row(j)).norm();
      k(j, i) = k(i, j);
    }
  }
  const Eigen::RowVectorXd center = X.colwise().mean();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) radius = std::max(radius, (X.row(i) - center).norm());
  const double d = static_cast<double>(X.cols());
  const double closed_form = 2.0 * radius / std::sqrt(M_PI) * std::sqrt(d / 2.0);

  const Eigen::VectorXd z = k.partialPivLu().solve(Eigen::VectorXd::Ones(n));
  const double denom = z.sum();
  if (!z.allFinite() || denom >= -1e-300) return std::max(closed_form, radius * 4.0);
  const double exact = -1.0 / denom;
  return std::max({exact * (1.0 + 1e-9) + 1e-12, closed_form, 0.0});
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xp) {
  if (X.cols() != Xp.cols()) throw std::invalid_argument("gram: input dimension mismatch");
  Eigen::MatrixXd K(X.rows(), Xp.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < Xp.rows(); ++j) K(i, j) = spec.eval(X.row(i), Xp.row(j));
  return K;
}

}  // namespace setpred
