// Copyright 2026 The Splitpriv Authors
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

#ifndef SPLITPRIV_RNG_H_
#define SPLITPRIV_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace splitpriv {

// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return MixSeed(seed ^ MixSeed(stream + 0x632be59bd9b4e019ULL));
}

// Seeded generator with platform-independent output. std::mt19937_64 is fully
// specified by the standard; the distributions in <random> are not, so the
// conversions to uniform and normal variates are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  std::size_t UniformIndex(std::size_t n);

  // Standard normal via the Box-Muller transform.
  double Normal();

  template <typename Container>
  void Shuffle(Container& c) {
    for (std::size_t i = c.size(); i > 1; --i) {
      std::size_t j = UniformIndex(i);
      using std::swap;
      swap(c[i - 1], c[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace splitpriv

#endif  // SPLITPRIV_RNG_H_
