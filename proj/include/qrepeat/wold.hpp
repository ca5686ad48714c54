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

#include <map>
#include <optional>
#include <vector>

#include "qrepeat/instrument.hpp"

namespace qrepeat {

/// M = V + W with Supp(V) = Rng(M) and Supp(W) the rest of Supp(M).
struct SplitParts {
    StructuredOperator v;
    StructuredOperator w;
};

/// Splits a monomial operator by columns: columns inside Rng(M) go to V, the
/// remaining support columns to W. Throws UnsupportedForm for non-monomial
/// input and SplitInvariantViolation when V^dag V is not a projector or the
/// cross terms V^dag W, W^dag V do not vanish (a non-repeatable input).
SplitParts split(const StructuredOperator &m);

/// One unilateral shift summand of V: the forward orbit g, V g, V^2 g, ...
/// of a generator g in Supp(V) \ Rng(V).
struct ShiftOrbit {
    std::size_t id = 0;
    BasisIndex generator = 0;
    IndexSet members;
};

/// V = U + S with U unitary on its support and S a direct sum of
/// unilateral shifts.
///
/// Depth labeling: within a shift orbit the generator has depth 0 and every
/// application of V adds one.
class WoldDecomposition {
   public:
    const StructuredOperator &v() const {
        return v_;
    }
    const StructuredOperator &unitary() const {
        return unitary_;
    }
    const StructuredOperator &shift() const {
        return shift_;
    }
    const std::vector<ShiftOrbit> &shift_orbits() const {
        return orbits_;
    }
    const IndexSet &unitary_support() const {
        return unitary_support_;
    }
    const IndexSet &shift_support() const {
        return shift_support_;
    }
    /// Finite cycles of the index map meeting indices below the structural
    /// window of V. Infinitely many cycles are possible (e.g. V = I); the
    /// rest repeat periodically.
    const std::vector<std::vector<BasisIndex>> &cycles() const {
        return cycles_;
    }

    /// (orbit id, depth) of basis index i, or nullopt outside the shift part.
    std::optional<std::pair<std::size_t, std::uint64_t>> locate(BasisIndex i) const;

    std::optional<BasisIndex> image(BasisIndex i) const;
    std::optional<BasisIndex> preimage(BasisIndex i) const;

   private:
    friend WoldDecomposition wold_decompose(const StructuredOperator &v);

    StructuredOperator v_;
    StructuredOperator normal_;
    StructuredOperator unitary_;
    StructuredOperator shift_;
    std::vector<ShiftOrbit> orbits_;
    IndexSet generators_;
    IndexSet unitary_support_;
    IndexSet shift_support_;
    std::vector<std::vector<BasisIndex>> cycles_;
};

/// Wold decomposition of a monomial partial isometry V whose range lies in
/// its support. Families must move indices by a fixed offset (equal in and
/// out strides); other shapes are rejected as UnsupportedForm. Throws
/// NotIsometricOnSupport when a column amplitude is not unimodular or two
/// columns share a row.
WoldDecomposition wold_decompose(const StructuredOperator &v);

/// Outcome of reading the repetition counter of a state.
struct MemoryReading {
    std::optional<Outcome> outcome;
    std::size_t orbit_id = 0;
    BasisIndex generator = 0;
    /// depth -> probability.
    std::map<std::uint64_t, double> depths;

    /// The depth when the state sits at a single depth.
    std::optional<std::uint64_t> depth() const {
        if (depths.size() == 1) {
            return depths.begin()->first;
        }
        return std::nullopt;
    }
};

/// Reads the shift-orbit depth of psi. nullopt (undefined) when the support
/// touches the unitary part, lies outside Supp(V), or spans several orbits.
std::optional<MemoryReading> read_memory(const WoldDecomposition &decomp, const StateVector &psi);

/// Split plus Wold decomposition of every outcome of an instrument.
/// Outcomes whose operator does not admit the decomposition are absent.
struct MemoryModel {
    std::map<Outcome, SplitParts> parts;
    std::map<Outcome, WoldDecomposition> decompositions;
};

MemoryModel build_memory_model(const Instrument &inst);

}  // namespace qrepeat
