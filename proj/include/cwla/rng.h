/*
 * Copyright 2026 The cwla-eval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Portable, seedable random streams.
//
// Every randomized procedure draws from std::mt19937_64, whose output
// sequence is fixed by the C++ standard. Each trial gets its own engine,
// seeded with
//
//   substream_seed(seed, domain, index)
//     = mix64(mix64(seed ^ domain_tag(domain)) + (index + 1) * 0x9E3779B97F4A7C15)
//
// where mix64 is the SplitMix64 finalizer. Because a trial's stream depends
// only on (seed, domain, index), results do not depend on how trials are
// spread over worker threads. Bounded draws and shuffles are implemented
// here instead of using std::uniform_int_distribution / std::shuffle, whose
// algorithms differ between standard libraries.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace cwla::rng {

using Engine = std::mt19937_64;

enum class Domain : std::uint64_t {
  kTopicSplit = 0x73706c6974ULL,  // "split"
  kTukeyHsd = 0x7268736400ULL,    // "rhsd"
  kSynthetic = 0x73796e7468ULL,   // "synth"
};

constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, Domain domain,
                                       std::uint64_t index) {
  return mix64(mix64(seed ^ static_cast<std::uint64_t>(domain)) +
               (index + 1) * 0x9E3779B97F4A7C15ULL);
}

inline Engine substream(std::uint64_t seed, Domain domain,
                        std::uint64_t index) {
  return Engine(substream_seed(seed, domain, index));
}

// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
inline std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine();
    if (x >= threshold) return x % bound;
  }
}

// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Fisher-Yates, highest index first.
template <class T>
void shuffle(std::span<T> values, Engine& engine) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = uniform_below(engine, i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace cwla::rng
