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

#include "setpred/generators.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "setpred/errors.hpp"

namespace setpred {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

void check_probability(const Eigen::VectorXd& p, const char* what) {
  if ((p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) + " must form a probability vector");
}

struct RegressionConditional {
  double m1, s1, m2, s2, w;
  double z1, z2;  // truncation masses of each component on [lo, hi]
  double lo, hi;
};

RegressionConditional regression_conditional(const Regression1DSpec& spec, double x) {
  RegressionConditional c;
  c.m1 = spec.m1_base + spec.m1_amp * std::sin(2.0 * M_PI * x);
  c.s1 = spec.s1_base + spec.s1_slope * x;
  c.m2 = spec.m2_base + spec.m2_slope * x;
  c.s2 = spec.s2;
  c.w = spec.w_base + spec.w_slope * x;
  c.lo = spec.cells.lo;
  c.hi = spec.cells.hi;
  c.z1 = normal_cdf((c.hi - c.m1) / c.s1) - normal_cdf((c.lo - c.m1) / c.s1);
  c.z2 = normal_cdf((c.hi - c.m2) / c.s2) - normal_cdf((c.lo - c.m2) / c.s2);
  return c;
}

}  // namespace

Generator Generator::gauss1d(Gauss1DSpec spec, std::uint64_t seed) {
  if (spec.means.size() != spec.stds.size() || spec.means.size() != spec.priors.size())
    throw std::invalid_argument("gauss1d: means/stds/priors size mismatch");
  if ((spec.stds.array() <= 0.0).any()) throw std::invalid_argument("gauss1d: stds must be positive");
  check_probability(spec.priors, "gauss1d priors");
  Generator g;
  g.kind_ = Kind::kGauss1D;
  g.seed_ = seed;
  g.gauss_ = std::move(spec);
  return g;
}

Generator Generator::mixture(MixtureSpec spec, std::uint64_t seed) {
  if (spec.k < 2 || spec.d < 1) throw std::invalid_argument("mixture: need k >= 2, d >= 1");
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("mixture: sigma must be positive");
  if (spec.means_a.rows() != spec.k || spec.means_a.cols() != spec.d ||
      spec.means_b.rows() != spec.k || spec.means_b.cols() != spec.d)
    throw std::invalid_argument("mixture: means must be k x d");
  Generator g;
  g.kind_ = Kind::kMixture;
  g.seed_ = seed;
  g.mix_ = std::move(spec);
  return g;
}

Generator Generator::regression1d(Regression1DSpec spec, std::uint64_t seed) {
  if (spec.cells.k < 2 || !(spec.cells.hi > spec.cells.lo))
    throw std::invalid_argument("regression1d: bad cell grid");
  if (!(spec.s1_base > 0.0) || !(spec.s2 > 0.0) || spec.s1_slope < 0.0)
    throw std::invalid_argument("regression1d: scales must be positive");
  if (spec.w_base < 0.0 || spec.w_base + spec.w_slope > 1.0)
    throw std::invalid_argument("regression1d: component weight must stay in [0,1] on x in [0,1]");
  Generator g;
  g.kind_ = Kind::kRegression1D;
  g.seed_ = seed;
  g.reg_ = std::move(spec);
  return g;
}

int Generator::k() const {
  switch (kind_) {
    case Kind::kGauss1D:
      return static_cast<int>(gauss_.priors.size());
    case Kind::kMixture:
      return mix_.k;
    case Kind::kRegression1D:
      return reg_.cells.k;
  }
  return 0;
}

int Generator::xdim() const { return kind_ == Kind::kMixture ? mix_.d : 1; }

Dataset Generator::sample(int n, std::uint64_t stream) const {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  Philox rng(seed_, stream);
  Dataset data;
  data.X.resize(n, xdim());
  data.labels.resize(n);
  data.y_real.resize(n);
  switch (kind_) {
    case Kind::kGauss1D: {
      for (int i = 0; i < n; ++i) {
        const int y = rng.categorical(gauss_.priors);
        data.X(i, 0) = gauss_.means[y] + gauss_.stds[y] * rng.normal();
        data.labels[i] = y;
        data.y_real[i] = y;
      }
      break;
    }
    case Kind::kMixture: {
      for (int i = 0; i < n; ++i) {
        const int y = static_cast<int>(rng.uniform_index(mix_.k));
        const bool first = rng.uniform() < 0.5;
        const Eigen::RowVectorXd center = first ? mix_.means_a.row(y) : mix_.means_b.row(y);
        for (int c = 0; c < mix_.d; ++c) data.X(i, c) = center[c] + mix_.sigma * rng.normal();
        data.labels[i] = y;
        data.y_real[i] = y;
      }
      break;
    }
    case Kind::kRegression1D: {
      data.regression = true;
      for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(reg_.cells.lo, reg_.cells.hi);
        const RegressionConditional c = regression_conditional(reg_, x);
        const bool first = rng.uniform() < c.w;
        const double m = first ? c.m1 : c.m2;
        const double s = first ? c.s1 : c.s2;
        // inverse-CDF draw from the truncated component
        const double fa = normal_cdf((c.lo - m) / s);
        const double fb = normal_cdf((c.hi - m) / s);
        const double u = rng.uniform();
        const double p = std::min(std::max(fa + u * (fb - fa), 1e-15), 1.0 - 1e-15);
        const double y = m + s * normal_quantile(p);
        data.X(i, 0) = x;
        data.y_real[i] = y;
        data.labels[i] = reg_.cells.cell_of(y);
      }
      break;
    }
  }
  return data;
}

Eigen::VectorXd Generator::true_conditional(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case Kind::kGauss1D: {
      if (x.size() != 1) throw std::invalid_argument("true_conditional: expected 1D input");
      const int kk = k();
      Eigen::VectorXd logp(kk);
      for (int j = 0; j < kk; ++j) {
        const double z = (x[0] - gauss_.means[j]) / gauss_.stds[j];
        logp[j] = std::log(gauss_.priors[j]) - std::log(gauss_.stds[j]) - 0.5 * z * z;
      }
      const double mx = logp.maxCoeff();
      Eigen::VectorXd p = (logp.array() - mx).exp();
      return p / p.sum();
    }
    case Kind::kMixture: {
      if (x.size() != mix_.d) throw std::invalid_argument("true_conditional: dimension mismatch");
      const int kk = mix_.k;
      Eigen::VectorXd logp(kk);
      const double inv2s2 = 1.0 / (2.0 * mix_.sigma * mix_.sigma);
      for (int j = 0; j < kk; ++j) {
        const double da = (x.transpose() - mix_.means_a.row(j)).squaredNorm();
        const double db = (x.transpose() - mix_.means_b.row(j)).squaredNorm();
        const double la = -da * inv2s2;
        const double lb = -db * inv2s2;
        const double mab = std::max(la, lb);
        logp[j] = mab + std::log(0.5 * std::exp(la - mab) + 0.5 * std::exp(lb - mab));
      }
      const double mx = logp.maxCoeff();
      Eigen::VectorXd p = (logp.array() - mx).exp();
      return p / p.sum();
    }
    case Kind::kRegression1D: {
      if (x.size() != 1) throw std::invalid_argument("true_conditional: expected 1D input");
      const RegressionConditional c = regression_conditional(reg_, x[0]);
      const int kk = reg_.cells.k;
      Eigen::VectorXd p(kk);
      for (int i = 0; i < kk; ++i) {
        const double a = reg_.cells.lo + i * reg_.cells.width();
        const double b = a + reg_.cells.width();
        const double mass1 =
            (normal_cdf((b - c.m1) / c.s1) - normal_cdf((a - c.m1) / c.s1)) / c.z1;
        const double mass2 =
            (normal_cdf((b - c.m2) / c.s2) - normal_cdf((a - c.m2) / c.s2)) / c.z2;
        p[i] = c.w * mass1 + (1.0 - c.w) * mass2;
      }
      return p / p.sum();
    }
  }
  throw std::logic_error("true_conditional: unreachable");
}

Eigen::VectorXd Generator::true_conditional(double x) const {
  Eigen::VectorXd v(1);
  v[0] = x;
  return true_conditional(v);
}

double Generator::x_density(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case Kind::kGauss1D: {
      double p = 0.0;
      for (int j = 0; j < k(); ++j)
        p += gauss_.priors[j] * normal_pdf((x[0] - gauss_.means[j]) / gauss_.stds[j]) /
             gauss_.stds[j];
      return p;
    }
    case Kind::kMixture: {
      const double norm =
          std::pow(2.0 * M_PI * mix_.sigma * mix_.sigma, -0.5 * static_cast<double>(mix_.d));
      const double inv2s2 = 1.0 / (2.0 * mix_.sigma * mix_.sigma);
      double p = 0.0;
      for (int j = 0; j < mix_.k; ++j) {
        const double da = (x.transpose() - mix_.means_a.row(j)).squaredNorm();
        const double db = (x.transpose() - mix_.means_b.row(j)).squaredNorm();
        p += 0.5 * (std::exp(-da * inv2s2) + std::exp(-db * inv2s2));
      }
      return p * norm / mix_.k;
    }
    case Kind::kRegression1D:
      return (x[0] >= reg_.cells.lo && x[0] <= reg_.cells.hi)
                 ? 1.0 / (reg_.cells.hi - reg_.cells.lo)
                 : 0.0;
  }
  return 0.0;
}

Eigen::MatrixXd Generator::x_grid(int n) const {
  switch (kind_) {
    case Kind::kGauss1D: {
      const double lo = gauss_.means.minCoeff() - 2.0 * gauss_.stds.maxCoeff();
      const double hi = gauss_.means.maxCoeff() + 2.0 * gauss_.stds.maxCoeff();
      Eigen::MatrixXd g(n, 1);
      g.col(0) = Eigen::VectorXd::LinSpaced(n, lo, hi);
      return g;
    }
    case Kind::kRegression1D: {
      Eigen::MatrixXd g(n, 1);
      g.col(0) = Eigen::VectorXd::LinSpaced(n, reg_.cells.lo, reg_.cells.hi);
      return g;
    }
    case Kind::kMixture:
      return sample(n, streams::kGrid).X;
  }
  throw std::logic_error("x_grid: unreachable");
}

void assign_cells(Dataset& data, const CellGrid& grid) {
  for (Eigen::Index i = 0; i < data.size(); ++i) data.labels[i] = grid.cell_of(data.y_real[i]);
}

nlohmann::json Generator::to_json() const {
  nlohmann::json j;
  j["seed"] = seed_;
  switch (kind_) {
    case Kind::kGauss1D: {
      j["type"] = "gauss1d";
      j["means"] = std::vector<double>(gauss_.means.data(), gauss_.means.data() + gauss_.means.size());
      j["stds"] = std::vector<double>(gauss_.stds.data(), gauss_.stds.data() + gauss_.stds.size());
      j["priors"] =
          std::vector<double>(gauss_.priors.data(), gauss_.priors.data() + gauss_.priors.size());
      break;
    }
    case Kind::kMixture: {
      j["type"] = "mixture";
      j["k"] = mix_.k;
      j["d"] = mix_.d;
      j["sigma"] = mix_.sigma;
      std::vector<std::vector<double>> ma, mb;
      for (int r = 0; r < mix_.k; ++r) {
        std::vector<double> rowa(mix_.d), rowb(mix_.d);
        for (int c = 0; c < mix_.d; ++c) {
          rowa[c] = mix_.means_a(r, c);
          rowb[c] = mix_.means_b(r, c);
        }
        ma.push_back(rowa);
        mb.push_back(rowb);
      }
      j["means_a"] = ma;
      j["means_b"] = mb;
      break;
    }
    case Kind::kRegression1D: {
      j["type"] = "regression1d";
      j["cells"] = {{"lo", reg_.cells.lo}, {"hi", reg_.cells.hi}, {"k", reg_.cells.k}};
      j["m1_base"] = reg_.m1_base;
      j["m1_amp"] = reg_.m1_amp;
      j["m2_base"] = reg_.m2_base;
      j["m2_slope"] = reg_.m2_slope;
      j["s1_base"] = reg_.s1_base;
      j["s1_slope"] = reg_.s1_slope;
      j["s2"] = reg_.s2;
      j["w_base"] = reg_.w_base;
      j["w_slope"] = reg_.w_slope;
      break;
    }
  }
  return j;
}

Generator Generator::from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  const std::uint64_t seed = j.value("seed", 0ull);
  if (type == "gauss1d") {
    Gauss1DSpec spec;
    const auto m = j.at("means").get<std::vector<double>>();
    const auto s = j.at("stds").get<std::vector<double>>();
    const auto p = j.at("priors").get<std::vector<double>>();
    spec.means = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    spec.stds = Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
    spec.priors = Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
    return gauss1d(std::move(spec), seed);
  }
  if (type == "mixture") {
    MixtureSpec spec;
    spec.k = j.at("k").get<int>();
    spec.d = j.at("d").get<int>();
    spec.sigma = j.at("sigma").get<double>();
    if (j.contains("means_a")) {
      const auto ma = j.at("means_a").get<std::vector<std::vector<double>>>();
      const auto mb = j.at("means_b").get<std::vector<std::vector<double>>>();
      if (static_cast<int>(ma.size()) != spec.k || static_cast<int>(mb.size()) != spec.k)
        throw ConfigError("mixture generator: means_a/means_b must have k rows");
      spec.means_a.resize(spec.k, spec.d);
      spec.means_b.resize(spec.k, spec.d);
      for (int r = 0; r < spec.k; ++r)
        for (int c = 0; c < spec.d; ++c) {
          spec.means_a(r, c) = ma[r].at(c);
          spec.means_b(r, c) = mb[r].at(c);
        }
    } else {
      // Derive frozen centers from a named stream so configs can stay short.
      const std::uint64_t mseed = j.at("means_seed").get<std::uint64_t>();
      Philox rng(mseed, streams::kInit);
      spec.means_a.resize(spec.k, spec.d);
      spec.means_b.resize(spec.k, spec.d);
      for (int r = 0; r < spec.k; ++r)
        for (int c = 0; c < spec.d; ++c) spec.means_a(r, c) = rng.normal();
      for (int r = 0; r < spec.k; ++r)
        for (int c = 0; c < spec.d; ++c) spec.means_b(r, c) = rng.normal();
    }
    return mixture(std::move(spec), seed);
  }
  if (type == "regression1d") {
    Regression1DSpec spec;
    if (j.contains("cells")) {
      spec.cells.lo = j.at("cells").value("lo", 0.0);
      spec.cells.hi = j.at("cells").value("hi", 1.0);
      spec.cells.k = j.at("cells").value("k", 40);
    }
    spec.m1_base = j.value("m1_base", spec.m1_base);
    spec.m1_amp = j.value("m1_amp", spec.m1_amp);
    spec.m2_base = j.value("m2_base", spec.m2_base);
    spec.m2_slope = j.value("m2_slope", spec.m2_slope);
    spec.s1_base = j.value("s1_base", spec.s1_base);
    spec.s1_slope = j.value("s1_slope", spec.s1_slope);
    spec.s2 = j.value("s2", spec.s2);
    spec.w_base = j.value("w_base", spec.w_base);
    spec.w_slope = j.value("w_slope", spec.w_slope);
    return regression1d(std::move(spec), seed);
  }
  throw ConfigError("generator: unknown type '" + type + "'");
}

}  // namespace setpred
