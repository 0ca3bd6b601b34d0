//
// Copyright 2026 The mixdp Authors
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
//

#ifndef MIXDP_RANDOM_STREAM_H_
#define MIXDP_RANDOM_STREAM_H_

#include <cstdint>
#include <random>

namespace mixdp {

// Seedable source of randomness identified by (seed, stream id).
//
// Two streams constructed from the same pair produce the same sequence of
// draws. Substreams are derived deterministically from the parent's identity
// (not its current position), so a trial can hand out independent per-group
// streams regardless of how many draws were consumed before.
//
// A RandomStream is single-owner mutable state and is not thread-safe.
class RandomStream {
 public:
  RandomStream(uint64_t seed, uint64_t stream_id);

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

  // Child stream keyed by `index`. Distinct indices give distinct streams.
  RandomStream Substream(uint64_t index) const;

  // Uniform draw on the open interval (0, 1).
  double Uniform();

  // Normal(mean, stddev^2) draw. stddev == 0 returns `mean`.
  double Normal(double mean, double stddev);

  // True with probability p (p is clamped to [0, 1]).
  bool Bernoulli(double p);

  // Uniform index in [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);

 private:
  uint64_t seed_;
  uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// Mixes a list of keys into one 64-bit stream id (SplitMix64 finalizer chain).
uint64_t StreamKey(std::initializer_list<uint64_t> parts);

}  // namespace mixdp

#endif  // MIXDP_RANDOM_STREAM_H_
