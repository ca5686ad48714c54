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

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "qrepeat/certify.hpp"
#include "qrepeat/rng.hpp"
#include "qrepeat/wold.hpp"

namespace qrepeat {

struct MeasurementResult {
    Outcome outcome;
    double probability = 0;
    StateVector post_state;
};

/// Born probabilities p(e) = |M_e psi|^2 in label order.
std::map<Outcome, double> outcome_probabilities(const Instrument &inst, const StateVector &psi);

/// Samples an outcome by inverse CDF over the outcomes in label order and
/// returns the reduced state M_e psi / |M_e psi|. Throws DegenerateState when
/// every probability is negligible.
MeasurementResult measure_once(const Instrument &inst, const StateVector &psi, Rng &rng);
MeasurementResult measure_once(const Instrument &inst, const StateVector &psi, std::uint64_t seed);

struct TrajectoryStep {
    Outcome outcome;
    double probability = 0;
    StateVector post_state;
    std::optional<MemoryReading> memory;
};

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    StateVector initial_state;
    std::vector<TrajectoryStep> steps;
};

/// Repeated measurement. When `model` is null a memory model is built from
/// the instrument; each step carries the depth reading of its post state.
TrajectoryRecord run_trajectory(const Instrument &inst, const StateVector &psi, std::size_t steps,
                                std::uint64_t seed, const MemoryModel *model = nullptr);

using StateSampler = std::function<StateVector(Rng &)>;

struct ConditionalStats {
    std::uint64_t trajectories = 0;
    std::map<Outcome, std::uint64_t> first_counts;
    /// (first, second) -> count
    std::map<OutcomePair, std::uint64_t> pair_counts;

    /// Empirical p(second | first); 0 when `first` never occurred.
    double frequency(const Outcome &first, const Outcome &second) const;
};

/// Two-step trajectories from sampled initial states. Trajectory t uses the
/// stream Rng(Rng::derive(seed, t)) for both sampling and measurement, so
/// results do not depend on evaluation order.
ConditionalStats empirical_conditionals(const Instrument &inst, const StateSampler &sampler,
                                        std::size_t trajectories, std::uint64_t seed);

/// Dense block [0, dim) x [0, dim). Exact for columns below valid_input_dim
/// when no term maps those columns past dim.
struct TruncationWindow {
    std::uint64_t dim = 1;
    std::uint64_t valid_input_dim = 1;
};

/// Places every term of `op` into the window. Throws WindowInvalid when
/// columns below valid_input_dim reach rows >= dim.
Eigen::MatrixXcd dense_oracle(const StructuredOperator &op, const TruncationWindow &window);

Eigen::VectorXcd dense_state(const StateVector &psi, std::uint64_t dim);

}  // namespace qrepeat
