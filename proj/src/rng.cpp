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

#include "setpred/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace setpred {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr[0] = hi1 ^ ctr[1] ^ key[0];
  ctr[1] = lo1;
  ctr[2] = hi0 ^ ctr[3] ^ key[1];
  ctr[3] = lo0;
}

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream) : idx_(4) {
  key_[0] = static_cast<std::uint32_t>(seed);
  key_[1] = static_cast<std::uint32_t>(seed >> 32);
  // The stream id occupies the top half of the 128-bit counter; the bottom
  // half counts blocks within the stream.
  ctr_[0] = 0;
  ctr_[1] = 0;
  ctr_[2] = static_cast<std::uint32_t>(stream);
  ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
}

void Philox::refill() {
  std::uint32_t work[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
  std::uint32_t key[2] = {key_[0], key_[1]};
  for (int round = 0; round < 10; ++round) {
    philox_round(work, key);
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  out_[0] = work[0];
  out_[1] = work[1];
  out_[2] = work[2];
  out_[3] = work[3];
  // 64-bit block counter in the low half.
  if (++ctr_[0] == 0) ++ctr_[1];
  idx_ = 0;
}

std::uint32_t Philox::next_u32() {
  if (idx_ >= 4) refill();
  return out_[idx_++];
}

std::uint64_t Philox::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Philox::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Philox::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0,1], keeps log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(a);
  have_cached_normal_ = true;
  return r * std::cos(a);
}

Eigen::VectorXd Philox::normal_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

int Philox::categorical(const Eigen::VectorXd& w) {
  const double total = w.sum();
  if (!(total > 0.0)) throw std::invalid_argument("categorical: weights must have positive sum");
  double u = uniform() * total;
  for (int i = 0; i < w.size(); ++i) {
    u -= w[i];
    if (u < 0.0) return i;
  }
  return static_cast<int>(w.size()) - 1;  // round-off fallthrough
}

std::uint64_t Philox::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t u;
  do {
    u = next_u64();
  } while (u >= limit);
  return u % n;
}

}  // namespace setpred
