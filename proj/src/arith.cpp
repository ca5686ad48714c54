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

#include "qrepeat/arith.hpp"

#include <algorithm>
#include <numeric>

#include "qrepeat/errors.hpp"

namespace qrepeat::arith {

std::tuple<std::int64_t, std::int64_t, std::int64_t> gcdx(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b;
    std::int64_t old_s = 1, s = 0;
    std::int64_t old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        old_r -= q * r;
        old_s -= q * s;
        old_t -= q * t;
        std::swap(r, old_r);
        std::swap(s, old_s);
        std::swap(t, old_t);
    }
    if (old_r < 0) {
        return {-old_r, -old_s, -old_t};
    }
    return {old_r, old_s, old_t};
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    return std::gcd(a, b);
}

std::uint64_t lcm_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    if (a == 0 || b == 0) {
        return 0;
    }
    unsigned __int128 l = static_cast<unsigned __int128>(a / std::gcd(a, b)) * b;
    if (l > cap) {
        throw PeriodCapExceeded(
            "period " + std::to_string(static_cast<unsigned long long>(std::min<unsigned __int128>(l, UINT64_MAX))) +
            " exceeds cap " + std::to_string(cap));
    }
    return static_cast<std::uint64_t>(l);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return -floor_div(-a, b);
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::optional<Progression> intersect(const Progression &a, const Progression &b, std::uint64_t cap) {
    // x = a.offset + a.stride * s  with  a.stride * s == b.offset - a.offset (mod b.stride).
    auto sa = static_cast<std::int64_t>(a.stride);
    auto sb = static_cast<std::int64_t>(b.stride);
    auto [g, x, y] = gcdx(sa, sb);
    (void)y;
    std::int64_t delta = static_cast<std::int64_t>(b.offset) - static_cast<std::int64_t>(a.offset);
    if (delta % g != 0) {
        return std::nullopt;
    }
    std::uint64_t l = lcm_capped(a.stride, b.stride, cap);
    std::int64_t m = sb / g;
    __int128 s = static_cast<__int128>(delta / g) * x;
    s %= m;
    if (s < 0) {
        s += m;
    }
    __int128 x0 = static_cast<__int128>(a.offset) + static_cast<__int128>(sa) * s;
    __int128 lo = std::max(a.offset, b.offset);
    if (x0 < lo) {
        __int128 k = (lo - x0 + l - 1) / l;
        x0 += k * l;
    }
    return Progression{l, static_cast<std::uint64_t>(x0)};
}

}  // namespace qrepeat::arith
