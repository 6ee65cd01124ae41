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

#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace setpred {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// A stream is addressed by (seed, stream); draws are bit-reproducible across
// platforms and runs. Replications, data splits and worker threads each get
// their own stream id, so sampling order does not depend on scheduling.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0,1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (second value cached).
  double normal();
  Eigen::VectorXd normal_vector(int n);

  // Index in [0, n) with probability proportional to w[i]; w >= 0, sum > 0.
  int categorical(const Eigen::VectorXd& w);

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  void refill();

  std::uint32_t key_[2];
  std::uint32_t ctr_[4];
  std::uint32_t out_[4];
  int idx_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Fixed stream ids for the pipeline stages, documented here so that file
// outputs can name the stream that produced them.
namespace streams {
inline constexpr std::uint64_t kTrain = 1;
inline constexpr std::uint64_t kTest = 2;
inline constexpr std::uint64_t kCalibration = 3;
inline constexpr std::uint64_t kInit = 4;
inline constexpr std::uint64_t kSgd = 5;
inline constexpr std::uint64_t kGrid = 6;

// One sub-stream per (stage, replication) pair.
inline constexpr std::uint64_t per_replication(std::uint64_t stage, std::uint64_t replication) {
  return (replication << 8) | stage;
}
}  // namespace streams

}  // namespace setpred
