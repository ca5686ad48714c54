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

#include <cstdint>
#include <optional>
#include <tuple>

namespace qrepeat::arith {

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
std::tuple<std::int64_t, std::int64_t, std::int64_t> gcdx(std::int64_t a, std::int64_t b);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// lcm(a, b), throwing PeriodCapExceeded when the result passes `cap`.
std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap);

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t ceil_div(std::int64_t a, std::int64_t b);
/// Mathematical modulus, always in [0, m).
std::int64_t mod(std::int64_t a, std::int64_t m);

/// The set {offset + stride * t : t >= 0}.
struct Progression {
    std::uint64_t stride = 1;
    std::uint64_t offset = 0;

    bool contains(std::uint64_t x) const {
        return x >= offset && (x - offset) % stride == 0;
    }
    /// t such that offset + stride * t == x, if any.
    std::optional<std::uint64_t> step_of(std::uint64_t x) const {
        if (!contains(x)) {
            return std::nullopt;
        }
        return (x - offset) / stride;
    }
    bool operator==(const Progression &) const = default;
};

/// Intersection of two progressions, which is again a progression (with
/// stride lcm(a.stride, b.stride)) or empty.
std::optional<Progression> intersect(const Progression &a, const Progression &b, std::uint64_t cap);

}  // namespace qrepeat::arith
