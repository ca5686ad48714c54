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

#include "qrepeat/simulate.hpp"

namespace qrepeat {

std::map<Outcome, double> outcome_probabilities(const Instrument &inst, const StateVector &psi) {
    std::map<Outcome, double> out;
    for (const auto &[e, m] : inst.operators()) {
        out[e] = norm_sq(apply(m, psi));
    }
    return out;
}

MeasurementResult measure_once(const Instrument &inst, const StateVector &psi, Rng &rng) {
    std::vector<std::pair<Outcome, StateVector>> images;
    std::vector<double> probs;
    double total = 0;
    for (const auto &[e, m] : inst.operators()) {
        images.emplace_back(e, apply(m, psi));
        probs.push_back(norm_sq(images.back().second));
        total += probs.back();
    }
    if (total <= settings().tolerance) {
        throw DegenerateState("all outcome probabilities vanish for state " + psi.str());
    }
    double u = rng.uniform01();
    double cumulative = 0;
    std::size_t chosen = images.size();
    for (std::size_t k = 0; k < images.size(); ++k) {
        cumulative += probs[k];
        if (u < cumulative) {
            chosen = k;
            break;
        }
    }
    if (chosen == images.size()) {
        // Rounding left u above the last partial sum; take the last
        // outcome that can occur.
        for (std::size_t k = images.size(); k-- > 0;) {
            if (probs[k] > settings().tolerance) {
                chosen = k;
                break;
            }
        }
    }
    return {images[chosen].first, probs[chosen], images[chosen].second.normalized()};
}

MeasurementResult measure_once(const Instrument &inst, const StateVector &psi, std::uint64_t seed) {
    Rng rng(seed);
    return measure_once(inst, psi, rng);
}

TrajectoryRecord run_trajectory(const Instrument &inst, const StateVector &psi, std::size_t steps,
                                std::uint64_t seed, const MemoryModel *model) {
    if (steps == 0) {
        throw Error("a trajectory needs at least one step");
    }
    MemoryModel owned;
    if (model == nullptr) {
        owned = build_memory_model(inst);
        model = &owned;
    }
    TrajectoryRecord record;
    record.seed = seed;
    record.initial_state = psi;
    Rng rng(seed);
    StateVector state = psi;
    for (std::size_t k = 0; k < steps; ++k) {
        MeasurementResult r = measure_once(inst, state, rng);
        TrajectoryStep step{r.outcome, r.probability, r.post_state, std::nullopt};
        auto it = model->decompositions.find(r.outcome);
        if (it != model->decompositions.end()) {
            step.memory = read_memory(it->second, r.post_state);
            if (step.memory) {
                step.memory->outcome = r.outcome;
            }
        }
        state = r.post_state;
        record.steps.push_back(std::move(step));
    }
    return record;
}

double ConditionalStats::frequency(const Outcome &first, const Outcome &second) const {
    auto it = first_counts.find(first);
    if (it == first_counts.end() || it->second == 0) {
        return 0.0;
    }
    auto jt = pair_counts.find({first, second});
    std::uint64_t hits = jt == pair_counts.end() ? 0 : jt->second;
    return static_cast<double>(hits) / static_cast<double>(it->second);
}

ConditionalStats empirical_conditionals(const Instrument &inst, const StateSampler &sampler,
                                        std::size_t trajectories, std::uint64_t seed) {
    if (trajectories == 0) {
        throw Error("empirical_conditionals needs at least one trajectory");
    }
    ConditionalStats stats;
    for (const auto &e : inst.outcomes()) {
        stats.first_counts[e] = 0;
        for (const auto &f : inst.outcomes()) {
            stats.pair_counts[{e, f}] = 0;
        }
    }
    for (std::size_t t = 0; t < trajectories; ++t) {
        Rng rng(Rng::derive(seed, t));
        StateVector psi = sampler(rng);
        MeasurementResult first = measure_once(inst, psi, rng);
        MeasurementResult second = measure_once(inst, first.post_state, rng);
        ++stats.trajectories;
        ++stats.first_counts[first.outcome];
        ++stats.pair_counts[{first.outcome, second.outcome}];
    }
    return stats;
}

Eigen::MatrixXcd dense_oracle(const StructuredOperator &op, const TruncationWindow &window) {
    if (window.valid_input_dim > window.dim || window.dim == 0) {
        throw WindowInvalid("valid_input_dim must lie in [0, dim]");
    }
    BasisIndex reach = output_extent(op, window.valid_input_dim);
    if (reach > window.dim) {
        throw WindowInvalid("columns below " + std::to_string(window.valid_input_dim) + " reach row " +
                            std::to_string(reach - 1) + " outside dim " + std::to_string(window.dim));
    }
    const auto n = static_cast<Eigen::Index>(window.dim);
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
    for (const auto &d : op.dyads()) {
        if (d.out < window.dim && d.in < window.dim) {
            dense(static_cast<Eigen::Index>(d.out), static_cast<Eigen::Index>(d.in)) += d.coeff;
        }
    }
    for (const auto &f : op.families()) {
        for (std::uint64_t j = f.j_start; f.in_at(j) < window.dim; ++j) {
            if (f.out_at(j) < window.dim) {
                dense(static_cast<Eigen::Index>(f.out_at(j)), static_cast<Eigen::Index>(f.in_at(j))) += f.coeff;
            }
        }
    }
    return dense;
}

Eigen::VectorXcd dense_state(const StateVector &psi, std::uint64_t dim) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (const auto &[i, a] : psi.entries()) {
        if (i < dim) {
            v(static_cast<Eigen::Index>(i)) = a;
        }
    }
    return v;
}

}  // namespace qrepeat
