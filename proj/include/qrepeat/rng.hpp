// Copyright 2026 The qrepeat Authors
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

#include <complex>
#include <cstdint>
#include <random>

namespace qrepeat {

/// Seeded generator with bit-reproducible output on every conforming
/// standard library.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the C++
/// standard). Distributions are implemented here rather than taken from
/// <random>, whose distribution algorithms are implementation-defined:
///   uniform01()  = (next() >> 11) * 2^-53
///   below(n)     = floor(uniform01() * n)
///   gaussian()   = Box-Muller on two uniforms, cosine branch
/// Independent streams come from `Rng::derive(seed, index)`, which is
/// splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15).
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {
    }

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next() {
        return engine_();
    }
    double uniform01();
    std::uint64_t below(std::uint64_t n);
    double gaussian();
    std::complex<double> complex_gaussian();

   private:
    std::mt19937_64 engine_;
};

}  // namespace qrepeat
