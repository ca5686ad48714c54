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

#include <gtest/gtest.h>

#include <cmath>

#include "qrepeat/simulate.hpp"
#include "support.hpp"

using namespace qrepeat;

namespace {

Instrument example() {
    return build_example_family(2, {0.5, 0.5});
}

Instrument identity_instrument() {
    return build_orthogonal({IndexSet::all()});
}

}  // namespace

TEST(Rng, EngineMatchesStandardSequence) {
    // The C++ standard fixes the 10000th output of a default-seeded mt19937_64.
    Rng rng(5489u);
    std::uint64_t x = 0;
    for (int k = 0; k < 10000; ++k) {
        x = rng.next();
    }
    EXPECT_EQ(x, 9981545732273789042ull);
}

TEST(Rng, DistributionsStayInRange) {
    Rng rng(1);
    for (int k = 0; k < 10000; ++k) {
        double u = rng.uniform01();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_LT(rng.below(7), 7u);
        EXPECT_TRUE(std::isfinite(rng.gaussian()));
    }
    EXPECT_NE(Rng::derive(1, 0), Rng::derive(1, 1));
    EXPECT_NE(Rng::derive(1, 0), Rng::derive(2, 0));
}

TEST(Simulate, MeasureOnceExamples) {
    Instrument inst = example();
    auto probs = outcome_probabilities(inst, StateVector::basis(0));
    EXPECT_NEAR(probs.at(1), 0.5, 1e-15);
    EXPECT_NEAR(probs.at(2), 0.5, 1e-15);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        MeasurementResult r = measure_once(inst, StateVector::basis(0), seed);
        EXPECT_NEAR(r.probability, 0.5, 1e-15);
        EXPECT_TRUE(r.post_state.nearly_equals(StateVector::basis(r.outcome.label)));
    }

    StateVector psi = StateVector::from_entries({{0, 0.6}, {4, {0.0, 0.8}}});
    MeasurementResult same = measure_once(identity_instrument(), psi, 3);
    EXPECT_NEAR(same.probability, 1.0, 1e-15);
    EXPECT_TRUE(same.post_state.nearly_equals(psi));

    MeasurementResult one = measure_once(inst, StateVector::basis(1), 3);
    EXPECT_EQ(one.outcome, Outcome(1));
    EXPECT_NEAR(one.probability, 1.0, 1e-15);
    EXPECT_TRUE(one.post_state.nearly_equals(StateVector::basis(3)));
}

TEST(Simulate, MeasureOnceIsDeterministic) {
    Instrument inst = build_example_family(3, {0.2, 0.3, 0.5});
    StateVector psi = StateVector::basis(0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_EQ(measure_once(inst, psi, seed).outcome, measure_once(inst, psi, seed).outcome);
    }
}

TEST(Simulate, DegenerateStateTrap) {
    OperatorMap partial{{Outcome(1), StructuredOperator::dyad(1, 0, 0)}};
    Instrument inst = make_instrument(partial, false);
    EXPECT_THROW(measure_once(inst, StateVector::basis(3), 1), DegenerateState);
}

TEST(Simulate, TrajectoryOfExample) {
    Instrument inst = example();
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        TrajectoryRecord rec = run_trajectory(inst, StateVector::basis(0), 4, seed);
        ASSERT_EQ(rec.steps.size(), 4u);
        const std::uint32_t l = rec.steps[0].outcome.label;
        for (std::size_t k = 0; k < 4; ++k) {
            EXPECT_EQ(rec.steps[k].outcome.label, l);
            EXPECT_TRUE(rec.steps[k].post_state.nearly_equals(StateVector::basis(l + 2 * k)));
            ASSERT_TRUE(rec.steps[k].memory.has_value());
            EXPECT_EQ(rec.steps[k].memory->depth(), k);
            EXPECT_EQ(rec.steps[k].memory->outcome, Outcome(l));
        }
    }
    EXPECT_THROW(run_trajectory(inst, StateVector::basis(0), 0, 1), Error);
}

TEST(Simulate, SiblingSecondOutcomeVaries) {
    Instrument sib = build_nonrepeatable_sibling(2, {0.5, 0.5});
    int changed = 0;
    const int runs = 400;
    for (int seed = 0; seed < runs; ++seed) {
        TrajectoryRecord rec = run_trajectory(sib, StateVector::basis(0), 2, seed);
        changed += rec.steps[0].outcome != rec.steps[1].outcome ? 1 : 0;
    }
    // Expected 1 - p_first = 1/2.
    EXPECT_NEAR(changed / double(runs), 0.5, 3 * std::sqrt(0.25 / runs));
}

TEST(Simulate, ParityKeepsTheState) {
    Instrument parity = build_orthogonal({IndexSet::progression(2, 0), IndexSet::progression(2, 1)});
    TrajectoryRecord rec = run_trajectory(parity, StateVector::basis(0), 6, 17);
    for (const auto &step : rec.steps) {
        EXPECT_EQ(step.outcome, Outcome(1));
        EXPECT_TRUE(step.post_state.nearly_equals(StateVector::basis(0)));
    }
}

TEST(Simulate, EmpiricalConditionals) {
    auto sampler = [](Rng &rng) { return random_state(rng, 32); };
    ConditionalStats ex = empirical_conditionals(example(), sampler, 10000, 3);
    EXPECT_EQ(ex.trajectories, 10000u);
    EXPECT_EQ(ex.frequency(1, 2), 0.0);
    EXPECT_EQ(ex.frequency(2, 1), 0.0);
    EXPECT_EQ(ex.pair_counts.at({Outcome(1), Outcome(2)}), 0u);

    auto origin = [](Rng &) { return StateVector::basis(0); };
    ConditionalStats sib = empirical_conditionals(build_nonrepeatable_sibling(2, {0.5, 0.5}), origin, 10000, 4);
    const double n1 = static_cast<double>(sib.first_counts.at(1));
    EXPECT_NEAR(sib.frequency(1, 2), 0.5, 3 * std::sqrt(0.25 / n1));

    ConditionalStats id = empirical_conditionals(identity_instrument(), sampler, 100, 5);
    EXPECT_EQ(id.frequency(1, 1), 1.0);

    EXPECT_EQ(empirical_conditionals(example(), sampler, 500, 9).pair_counts,
              empirical_conditionals(example(), sampler, 500, 9).pair_counts);
}

TEST(Simulate, DenseOracleExamples) {
    Eigen::MatrixXcd id = dense_oracle(StructuredOperator::identity(), {4, 4});
    EXPECT_TRUE(id.isApprox(Eigen::MatrixXcd::Identity(4, 4)));

    Eigen::MatrixXcd m1 = dense_oracle(example().at(1), {8, 4});
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
    expected(1, 0) = std::sqrt(0.5);
    expected(3, 1) = 1;
    expected(5, 3) = 1;
    expected(7, 5) = 1;
    EXPECT_LT((m1 - expected).cwiseAbs().maxCoeff(), 1e-15);

    EXPECT_EQ(dense_oracle(StructuredOperator::zero(), {5, 5}).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(dense_oracle(example().at(1), {5, 4}), WindowInvalid);
    EXPECT_THROW(dense_oracle(StructuredOperator::identity(), {4, 5}), WindowInvalid);
}

TEST(SimulateProperty, ProbabilityConservation) {
    auto corpus = qrepeat::testing::repeatability_corpus(99);
    Rng rng(8);
    for (const auto &entry : corpus) {
        for (int t = 0; t < 20; ++t) {
            StateVector psi = random_state(rng, 32);
            double total = 0;
            for (const auto &[e, p] : outcome_probabilities(entry.instrument, psi)) {
                total += p;
            }
            ASSERT_NEAR(total, 1.0, 1e-12) << entry.name;
        }
    }
}

TEST(SimulateProperty, RepeatableTrajectoriesKeepTheirOutcome) {
    auto corpus = qrepeat::testing::repeatability_corpus(98);
    Rng rng(9);
    for (const auto &entry : corpus) {
        if (!certify_repeatable(entry.instrument).repeatable) {
            continue;
        }
        MemoryModel model = build_memory_model(entry.instrument);
        for (int t = 0; t < 10; ++t) {
            TrajectoryRecord rec =
                run_trajectory(entry.instrument, random_state(rng, 32), 6, Rng::derive(11, t), &model);
            for (const auto &step : rec.steps) {
                ASSERT_EQ(step.outcome, rec.steps.front().outcome) << entry.name;
                ASSERT_GT(step.probability, 0.0);
                ASSERT_LE(step.probability, 1.0 + 1e-12);
                ASSERT_NEAR(norm_sq(step.post_state), 1.0, 1e-12);
            }
        }
    }
}

TEST(SimulateProperty, DenseOracleAgreesWithApply) {
    Rng rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        StructuredOperator op = qrepeat::testing::random_operator(rng);
        BasisIndex valid = 32;
        BasisIndex dim = std::max<BasisIndex>(valid, output_extent(op, valid));
        Eigen::MatrixXcd dense = dense_oracle(op, {dim, valid});
        StateVector psi = random_state(rng, valid);
        Eigen::VectorXcd expected = dense * dense_state(psi, dim);
        Eigen::VectorXcd actual = dense_state(apply(op, psi), dim);
        ASSERT_LT((expected - actual).cwiseAbs().maxCoeff(), 1e-12);
    }
}
