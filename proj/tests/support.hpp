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

// Test-only oracles and generators. Nothing here calls the library's
// apply/compose/adjoint; dense matrices are built by placing terms directly.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "qrepeat/certify.hpp"
#include "qrepeat/instrument.hpp"
#include "qrepeat/rng.hpp"

namespace qrepeat::testing {

/// Entry (r, c) for r, c < dim, summing every term that lands there.
Eigen::MatrixXcd densify(const StructuredOperator &op, std::size_t dim);
Eigen::VectorXcd densify(const StateVector &psi, std::size_t dim);

/// Largest |a - b| over the top-left `block` x `block` corner.
double block_deviation(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b, std::size_t block);

/// Membership by brute force over [0, limit).
std::vector<bool> enumerate(const std::function<bool(BasisIndex)> &pred, BasisIndex limit);
std::vector<bool> enumerate(const IndexSet &s, BasisIndex limit);

/// Random eventually periodic set with small bound and period.
IndexSet random_index_set(Rng &rng);

/// Random operator with dyads below `max_index` and families with strides in
/// [1, max_stride] and offsets below `max_offset`.
StructuredOperator random_operator(Rng &rng, BasisIndex max_index = 32, std::uint64_t max_stride = 2,
                                   std::uint64_t max_offset = 8);

/// Random normalized probability vector with n entries.
std::vector<double> random_probabilities(Rng &rng, std::size_t n);

/// Unitary from the QR factorization of a complex Gaussian matrix.
Eigen::MatrixXcd random_unitary(Rng &rng, std::size_t n);

/// Repeatable instrument assembled from random (V, W) parts: n outcomes,
/// k intake columns [0, k) spread over the outcomes' generators through the
/// first k columns of a random n x n unitary, shift families with random
/// phases on the indices >= k.
std::map<Outcome, InstrumentParts> random_parts(Rng &rng, std::uint32_t n, std::uint32_t k);

struct CorpusEntry {
    std::string name;
    Instrument instrument;
    /// Extra states fed to the numerical check, e.g. |0>.
    std::vector<StateVector> probes;
};

/// Built examples, orthogonal builds, random (V, W) constructions and
/// mutated variants (some still repeatable, some broken). Deterministic.
std::vector<CorpusEntry> repeatability_corpus(std::uint64_t seed);

/// |a><b| + |b><a| + identity elsewhere.
StructuredOperator swap_permutation(BasisIndex a, BasisIndex b);

}  // namespace qrepeat::testing
