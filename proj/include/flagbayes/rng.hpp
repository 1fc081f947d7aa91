// Copyright 2026 The flagbayes Authors
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

#ifndef FLAGBAYES_RNG_HPP
#define FLAGBAYES_RNG_HPP

#include <cstdint>
#include <random>

namespace flagbayes {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Purposes get disjoint substreams of one user seed.
enum class StreamTag : std::uint64_t {
    Prior = 1,
    Drift = 2,
    Shot = 3,
    Test = 4,
};

/// Independent generator for (seed, purpose, index). Shot k of a run always
/// sees the same stream, whatever order or thread executes it.
inline Rng substream(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(tag) * 0xd1b54a32d192ed03ULL));
    h = splitmix64(h ^ index);
    return Rng(h);
}

}  // namespace flagbayes

#endif
