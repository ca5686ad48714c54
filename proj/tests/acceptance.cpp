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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "qrepeat/serialize.hpp"
#include "support.hpp"

using namespace qrepeat;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond && pass) {
            pass = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(3);
    s << x;
    return s.str();
}

Verdict example_reproduction() {
    Verdict v;
    Rng rng(1001);
    double slowest = 0;
    int cases = 0;
    for (std::uint32_t n : {1u, 2u, 3u, 5u}) {
        for (int trial = 0; trial < 5; ++trial) {
            auto p = n == 1 ? std::vector<double>{1.0} : qrepeat::testing::random_probabilities(rng, n);
            auto start = Clock::now();
            Instrument inst = build_example_family(n, p);
            CertificationReport report = certify_repeatable(inst);
            Povm effects = povm(inst);
            bool orthogonal = check_orthogonal(effects);
            bool display = true;
            for (std::uint32_t l = 1; l <= n; ++l) {
                StructuredOperator expected =
                    StructuredOperator::dyad(p[l - 1], 0, 0) + StructuredOperator::family(1, n, l, n, l);
                display = display && equals(effects.effects.at(l), expected);
            }
            double elapsed = seconds_since(start);
            slowest = std::max(slowest, elapsed);
            bool mixed = false;
            for (double x : p) {
                mixed = mixed || (x > 0 && x < 1);
            }
            const std::string tag = "n=" + std::to_string(n) + " trial " + std::to_string(trial);
            v.require(report.repeatable, tag + ": not certified repeatable");
            v.require(!mixed || !orthogonal, tag + ": POVM reported orthogonal");
            v.require(display, tag + ": POVM differs from P_l = p_l|0><0| + sum |nj+l><nj+l|");
            v.require(elapsed < 1.0, tag + ": took " + fmt(elapsed) + " s");
            ++cases;
        }
    }
    if (v.pass) {
        v.detail = std::to_string(cases) + " cases, slowest " + fmt(slowest) + " s";
    }
    return v;
}

Verdict sibling() {
    Verdict v;
    Instrument m = build_example_family(2, {0.5, 0.5});
    Instrument n = build_nonrepeatable_sibling(2, {0.5, 0.5});
    Povm pm = povm(m), pn = povm(n);
    for (std::uint32_t l = 1; l <= 2; ++l) {
        v.require(equals(pm.effects.at(l), pn.effects.at(l)), "POVMs differ at outcome " + std::to_string(l));
    }
    v.require(!certify_repeatable(n).repeatable, "sibling certified repeatable");
    auto cond = conditional_probability(n, StateVector::basis(0), 1, 2);
    v.require(cond && std::abs(*cond - 0.5) <= 1e-12, "p(2|1) on |0> is not 1/2");
    auto dev = check_repeatability_numerical(n, 100, 32, 7, {StateVector::basis(0)});
    double d12 = dev.at({Outcome(1), Outcome(2)});
    v.require(std::abs(d12 - 0.5) <= 1e-12, "numerical deviation at (1,2) is " + fmt(d12));
    if (v.pass) {
        v.detail = "p(2|1) = " + format_double(*cond);
    }
    return v;
}

Verdict binary_identities() {
    Verdict v;
    Rng rng(1003);
    const StructuredOperator pk = StructuredOperator::dyad(1, 0, 0) + StructuredOperator::dyad(1, 1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const double p1 = rng.uniform01(), p2 = rng.uniform01();
        Instrument inst = build_binary_example(p1, p2);
        SplitParts s1 = split(inst.at(1)), s2 = split(inst.at(2));
        StructuredOperator w1 = compose(adjoint(s1.w), s1.w);
        StructuredOperator w2 = compose(adjoint(s2.w), s2.w);
        const std::string tag = "(" + format_double(p1) + ", " + format_double(p2) + ")";
        v.require(equals(w1, StructuredOperator::dyad(p1, 0, 0) + StructuredOperator::dyad(p2, 1, 1)),
                  tag + ": W1^dag W1 mismatch");
        v.require(equals(w2, StructuredOperator::dyad(1 - p1, 0, 0) + StructuredOperator::dyad(1 - p2, 1, 1)),
                  tag + ": W2^dag W2 mismatch");
        v.require(equals(add(w1, w2), pk), tag + ": sum differs from |0><0| + |1><1|");
    }
    if (v.pass) {
        v.detail = "20 random (p1, p2)";
    }
    return v;
}

Verdict finite_dimension() {
    Verdict v;
    auto start = Clock::now();
    double worst = 0;
    std::size_t projective = 0, square_root = 0;
    for (std::uint32_t dim = 2; dim <= 16; ++dim) {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            FiniteDimSuiteResult r = finite_dim_corollary_suite(dim, seed);
            worst = std::max(worst, r.max_orthogonality_deviation);
            projective += r.projective_checked;
            square_root += r.square_root_checked;
            v.require(r.passed, "dim " + std::to_string(dim) + " seed " + std::to_string(seed) + ": " +
                                    (r.failures.empty() ? "" : r.failures.front()));
        }
    }
    double elapsed = seconds_since(start);
    v.require(worst <= 1e-10, "orthogonality deviation " + fmt(worst));
    v.require(elapsed < 30.0, "took " + fmt(elapsed) + " s");
    if (v.pass) {
        v.detail = std::to_string(projective) + " projective, " + std::to_string(square_root) +
                   " square-root instruments; max deviation " + fmt(worst) + "; " + fmt(elapsed) + " s";
    }
    return v;
}

Verdict lemma_equivalence() {
    Verdict v;
    auto corpus = qrepeat::testing::repeatability_corpus(2024);
    v.require(corpus.size() >= 50, "corpus has only " + std::to_string(corpus.size()) + " instruments");
    std::size_t repeatable = 0;
    for (const auto &entry : corpus) {
        bool structural = certify_repeatable(entry.instrument).repeatable;
        double worst = worst_deviation(check_repeatability_numerical(entry.instrument, 100, 32, 4242, entry.probes));
        bool numerical = worst <= 1e-10;
        v.require(structural == numerical,
                  entry.name + ": structural " + (structural ? "repeatable" : "not repeatable") +
                      ", numerical deviation " + fmt(worst));
        repeatable += structural ? 1 : 0;
    }
    if (v.pass) {
        v.detail = std::to_string(corpus.size()) + " instruments, " + std::to_string(repeatable) + " repeatable";
    }
    return v;
}

Verdict memory_effect() {
    Verdict v;
    Instrument ex = build_example_family(2, {0.5, 0.5});
    MemoryModel ex_model = build_memory_model(ex);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        TrajectoryRecord rec = run_trajectory(ex, StateVector::basis(0), 10, seed, &ex_model);
        for (std::size_t k = 0; k < rec.steps.size(); ++k) {
            const auto &step = rec.steps[k];
            const std::string tag = "seed " + std::to_string(seed) + " step " + std::to_string(k + 1);
            v.require(step.outcome == rec.steps[0].outcome, tag + ": outcome changed");
            v.require(step.memory && step.memory->depth() == k, tag + ": depth is not k-1");
        }
    }

    Instrument bin = build_binary_example(0.3, 0.7);
    MemoryModel bin_model = build_memory_model(bin);
    const double h = std::sqrt(0.5);
    std::vector<StateVector> starts{StateVector::basis(0), StateVector::basis(1),
                                    StateVector::from_entries({{2, h}, {6, h}}), StateVector::basis(7)};
    std::size_t checked = 0;
    for (const auto &psi : starts) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            TrajectoryRecord rec = run_trajectory(bin, psi, 10, seed, &bin_model);
            std::optional<std::size_t> entered;
            for (std::size_t k = 0; k < rec.steps.size(); ++k) {
                const auto &step = rec.steps[k];
                v.require(step.outcome == rec.steps[0].outcome, "binary: outcome changed");
                if (!entered && step.memory) {
                    entered = k;
                }
                if (entered && k > *entered) {
                    const auto &prev = rec.steps[k - 1].memory;
                    bool shifted = step.memory && prev && step.memory->depths.size() == prev->depths.size();
                    if (shifted) {
                        for (const auto &[d, prob] : prev->depths) {
                            auto it = step.memory->depths.find(d + 1);
                            shifted = shifted && it != step.memory->depths.end() && std::abs(it->second - prob) < 1e-12;
                        }
                    }
                    v.require(shifted, "binary: depth did not advance by one");
                }
            }
            v.require(entered.has_value(), "binary: trajectory never entered a shift orbit");
            ++checked;
        }
    }
    if (v.pass) {
        v.detail = "100 example trajectories, " + std::to_string(checked) + " binary trajectories";
    }
    return v;
}

Verdict oracle_equivalence() {
    using qrepeat::testing::block_deviation;
    using qrepeat::testing::densify;
    constexpr std::size_t dim = 160, block = 32;
    Verdict v;
    Rng rng(1007);
    double worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        StructuredOperator sym = StructuredOperator::identity();
        Eigen::MatrixXcd dense = Eigen::MatrixXcd::Identity(dim, dim);
        const std::uint64_t factors = 1 + rng.below(3);
        for (std::uint64_t k = 0; k < factors; ++k) {
            StructuredOperator leaf = qrepeat::testing::random_operator(rng);
            Eigen::MatrixXcd leaf_dense = densify(leaf, dim);
            if (rng.below(2) == 1) {
                leaf = adjoint(leaf);
                leaf_dense.adjointInPlace();
            }
            sym = compose(sym, leaf);
            dense = dense * leaf_dense;
        }
        if (rng.below(2) == 1) {
            StructuredOperator extra = qrepeat::testing::random_operator(rng);
            sym = add(sym, extra);
            dense += densify(extra, dim);
        }
        double dev = block_deviation(densify(sym, dim), dense, block);
        StateVector psi = random_state(rng, block);
        Eigen::VectorXcd applied = densify(apply(sym, psi), dim) - dense * densify(psi, dim);
        dev = std::max(dev, applied.head(block).cwiseAbs().maxCoeff());
        worst = std::max(worst, dev);
        v.require(dev <= 1e-12, "trial " + std::to_string(trial) + ": deviation " + fmt(dev));
    }
    if (v.pass) {
        v.detail = "1000 chains, max deviation " + fmt(worst);
    }
    return v;
}

Verdict born_statistics() {
    Verdict v;
    const std::vector<double> p{0.3, 0.7};
    Instrument inst = build_example_family(2, p);
    const std::size_t samples = 100000;
    ConditionalStats stats =
        empirical_conditionals(inst, [](Rng &) { return StateVector::basis(0); }, samples, 1008);
    std::ostringstream detail;
    for (std::uint32_t l = 1; l <= 2; ++l) {
        const double freq = static_cast<double>(stats.first_counts.at(l)) / samples;
        const double sigma = std::sqrt(p[l - 1] * (1 - p[l - 1]) / samples);
        v.require(std::abs(freq - p[l - 1]) <= 4 * sigma,
                  "outcome " + std::to_string(l) + " frequency " + fmt(freq) + " outside 4 sigma");
        detail << "f(" << l << ") = " << freq << " ";
    }
    v.require(stats.pair_counts.at({Outcome(1), Outcome(2)}) == 0, "observed 1 then 2");
    v.require(stats.pair_counts.at({Outcome(2), Outcome(1)}) == 0, "observed 2 then 1");
    if (v.pass) {
        v.detail = detail.str() + "off-diagonal counts 0";
    }
    return v;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict cli_contract() {
    Verdict v;
    const fs::path root = fs::temp_directory_path() / "qrepeat_acceptance";
    fs::remove_all(root);
    struct Demo {
        std::vector<std::string> args;
        Instrument expected;
    };
    std::vector<Demo> demos{
        {{"demo", "ex1", "--n", "2", "--p", "0.5,0.5"}, build_example_family(2, {0.5, 0.5})},
        {{"demo", "binary", "--p1", "0.3", "--p2", "0.7"}, build_binary_example(0.3, 0.7)},
        {{"demo", "ex1", "--n", "1", "--p", "1.0"}, build_example_family(1, {1.0})},
        {{"demo", "ex1", "--n", "3", "--p", "0.2,0.3,0.5", "--seed", "5"}, build_example_family(3, {0.2, 0.3, 0.5})},
    };
    std::size_t files = 0;
    for (std::size_t k = 0; k < demos.size(); ++k) {
        std::vector<fs::path> dirs{root / ("run" + std::to_string(k) + "a"), root / ("run" + std::to_string(k) + "b")};
        for (const auto &dir : dirs) {
            auto args = demos[k].args;
            args.push_back("--out");
            args.push_back(dir.string());
            std::ostringstream out, err;
            v.require(cli::run(args, out, err) == 0, "demo " + std::to_string(k) + " failed: " + err.str());
        }
        for (const auto &entry : fs::directory_iterator(dirs[0])) {
            const fs::path other = dirs[1] / entry.path().filename();
            v.require(slurp(entry.path()) == slurp(other), entry.path().filename().string() + " differs between runs");
            ++files;
        }
        const std::string text = slurp(dirs[0] / "instrument.json");
        Instrument parsed = parse_instrument(text);
        v.require(parsed.size() == demos[k].expected.size(), "demo " + std::to_string(k) + ": outcome count");
        for (const auto &[e, m] : demos[k].expected.operators()) {
            v.require(equals(parsed.at(e), m), "demo " + std::to_string(k) + ": outcome " + e.str() + " changed");
        }
        v.require(serialize_instrument(parsed) == text, "demo " + std::to_string(k) + ": serialize(parse) differs");
    }
    fs::remove_all(root);
    if (v.pass) {
        v.detail = std::to_string(demos.size()) + " demos, " + std::to_string(files) + " files identical";
    }
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"example family reproduction", example_reproduction},
        {"non-repeatable sibling", sibling},
        {"binary example identities", binary_identities},
        {"finite-dimensional repeatable implies orthogonal", finite_dimension},
        {"structural vs numerical repeatability", lemma_equivalence},
        {"memory effect", memory_effect},
        {"oracle equivalence", oracle_equivalence},
        {"empirical Born statistics", born_statistics},
        {"CLI contract", cli_contract},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        auto start = Clock::now();
        try {
            v = criteria[k].second();
        } catch (const std::exception &e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " [" << k + 1 << "] " << criteria[k].first << " ("
                  << fmt(seconds_since(start)) << " s): " << v.detail << std::endl;
        failed += v.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
