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
#include <string>
#include <utility>
#include <vector>

#include "qrepeat/instrument.hpp"
#include "qrepeat/rng.hpp"

namespace qrepeat {

using OutcomePair = std::pair<Outcome, Outcome>;

struct OutcomeDiagnostics {
    /// M^dag M M = M, i.e. M^dag M acts as the identity on Rng(M).
    bool isometric_on_range = false;
    /// Rng(M) inside Supp(M); only decided for monomial operators.
    std::optional<bool> range_in_support;
};

struct PairDiagnostics {
    /// M_f M_e = 0. Keyed (e, f): e measured first.
    bool product_vanishes = false;
    /// M_f^dag M_e = 0.
    bool ranges_orthogonal = false;
};

struct CertificationWitness {
    std::string condition;
    EntryWitness entry;

    double deviation() const {
        return entry.deviation();
    }
};

struct CertificationReport {
    bool complete = false;
    bool repeatable = false;
    bool orthogonal = false;
    std::map<Outcome, OutcomeDiagnostics> per_outcome;
    std::map<OutcomePair, PairDiagnostics> per_pair;
    std::vector<CertificationWitness> witnesses;
};

/// Structural repeatability verdict. An instrument is repeatable iff it is
/// complete, M_e^dag M_e M_e = M_e for every e, and M_f M_e = 0 for e != f.
/// Range/support inclusion and range orthogonality are reported as
/// diagnostics only; they are necessary, not sufficient.
CertificationReport certify_repeatable(const Instrument &inst);

/// Normalized random state: support of 1..8 distinct indices below
/// max_index, complex Gaussian amplitudes.
StateVector random_state(Rng &rng, BasisIndex max_index);

/// p(f|e) = |M_f M_e psi|^2 / |M_e psi|^2, or nullopt when |M_e psi|^2 is
/// below the tolerance.
std::optional<double> conditional_probability(const Instrument &inst, const StateVector &psi, const Outcome &e,
                                              const Outcome &f);

/// Worst |p(f|e) - delta_ef| over `trials` random states below max_index plus
/// every state in `extra_states`. Deterministic in `seed`.
std::map<OutcomePair, double> check_repeatability_numerical(const Instrument &inst, std::size_t trials,
                                                            BasisIndex max_index, std::uint64_t seed,
                                                            const std::vector<StateVector> &extra_states = {});

/// Largest entry of the deviation map.
double worst_deviation(const std::map<OutcomePair, double> &deviations);

/// P_e P_f = delta_ef P_f for every pair.
bool check_orthogonal(const Povm &povm);

struct FiniteDimSuiteResult {
    bool passed = true;
    std::size_t projective_checked = 0;
    std::size_t square_root_checked = 0;
    /// Largest |P_e P_f - delta_ef P_f| entry seen over instruments that
    /// certified repeatable.
    double max_orthogonality_deviation = 0;
    std::vector<std::string> failures;
};

/// Randomized check that, on a `dim`-dimensional block, repeatable
/// instruments are exactly the orthogonal ones:
///   (a) random projective instruments (and unitarily rotated ones that keep
///       each range) certify repeatable and orthogonal;
///   (b) square-root instruments M_e = sqrt(P_e) of random non-projective
///       POVMs certify non-repeatable;
///   (c) every instrument certifying repeatable passes check_orthogonal.
/// The block is embedded in the infinite basis with the identity on indices
/// >= dim attached to outcome 1. Throws if dim exceeds `dim_cap`.
FiniteDimSuiteResult finite_dim_corollary_suite(std::uint32_t dim, std::uint64_t seed, std::uint32_t dim_cap = 16);

struct EffectParts {
    StructuredOperator z;
    StructuredOperator t;
};

struct PovmClassification {
    bool admits_repeatable_form = false;
    std::map<Outcome, EffectParts> per_outcome;
    StructuredOperator z_omega;
    /// Index sets behind the projectors Z_e and Z_omega.
    std::map<Outcome, IndexSet> z_sets;
    IndexSet omega_set;
    /// Names of any general-form invariants that failed re-verification.
    std::vector<std::string> failed_invariants;
};

/// Splits each diagonal effect as P_e = Z_e + T_e. Basis index i belongs to
/// Z_e when (<i|P_e|i>)_e is the indicator of e, otherwise to Z_omega with
/// <i|P_e|i> contributing to T_e. Throws UnsupportedForm for non-diagonal
/// effects and InvalidPovm when the effects do not sum to I.
PovmClassification classify_povm(const Povm &povm);

}  // namespace qrepeat
