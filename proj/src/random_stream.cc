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

#include "mixdp/random_stream.h"

#include <algorithm>
#include <initializer_list>

namespace mixdp {
namespace {

constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 MakeEngine(uint64_t seed, uint64_t stream_id) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream_id),
                    static_cast<uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

uint64_t StreamKey(std::initializer_list<uint64_t> parts) {
  uint64_t h = 0x6a09e667f3bcc909ULL;
  for (uint64_t part : parts) h = Mix64(h ^ Mix64(part));
  return h;
}

RandomStream::RandomStream(uint64_t seed, uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(MakeEngine(seed, stream_id)) {}

RandomStream RandomStream::Substream(uint64_t index) const {
  return RandomStream(seed_, StreamKey({stream_id_, index}));
}

double RandomStream::Uniform() {
  // 53 random mantissa bits, offset by half a step so 0 and 1 are excluded.
  const uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::Normal(double mean, double stddev) {
  if (stddev == 0.0) return mean;
  return normal_(engine_, std::normal_distribution<double>::param_type(mean, stddev));
}

bool RandomStream::Bernoulli(double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return Uniform() < p;
}

uint64_t RandomStream::UniformIndex(uint64_t n) {
  return std::uniform_int_distribution<uint64_t>(0, n - 1)(engine_);
}

}  // namespace mixdp
