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

namespace qrepeat {

using BasisIndex = std::uint64_t;
using Coefficient = std::complex<double>;

/// Process-wide numerical knobs. The CLI overrides them from flags; library
/// code only reads them.
struct Settings {
    /// Amplitude tolerance used by every equality and zero test.
    double tolerance = 1e-12;
    /// Largest period an IndexSet or a stride product may reach.
    std::uint64_t period_cap = 1'000'000;
};

Settings &settings();

/// Restores the previous settings on scope exit.
class ScopedSettings {
   public:
    explicit ScopedSettings(Settings replacement) : saved_(settings()) {
        settings() = replacement;
    }
    ~ScopedSettings() {
        settings() = saved_;
    }
    ScopedSettings(const ScopedSettings &) = delete;
    ScopedSettings &operator=(const ScopedSettings &) = delete;

   private:
    Settings saved_;
};

inline bool is_negligible(Coefficient c) {
    return std::abs(c) <= settings().tolerance;
}

inline bool nearly_equal(Coefficient a, Coefficient b) {
    return std::abs(a - b) <= settings().tolerance;
}

}  // namespace qrepeat
