// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace decest {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Stream keyed by (seed, trial, purpose). Independent of how trials are
/// scheduled across workers.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ trial);
    k = splitmix64(k ^ purpose);
    return Rng{k};
}

inline Rng derive_stream(std::uint64_t seed, std::uint64_t trial, std::string_view purpose) {
    return derive_stream(seed, trial, fnv1a(purpose));
}

} // namespace decest
