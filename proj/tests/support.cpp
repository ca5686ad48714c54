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

#include "support.hpp"

#include <cmath>

namespace qrepeat::testing {

Eigen::MatrixXcd densify(const StructuredOperator &op, std::size_t dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &d : op.dyads()) {
        if (d.out < dim && d.in < dim) {
            m(d.out, d.in) += d.coeff;
        }
    }
    for (const auto &f : op.families()) {
        for (std::uint64_t j = f.j_start;; ++j) {
            BasisIndex in = f.in_stride * j + f.in_offset;
            BasisIndex out = f.out_stride * j + f.out_offset;
            if (in >= dim || out >= dim) {
                break;
            }
            m(out, in) += f.coeff;
        }
    }
    return m;
}

Eigen::VectorXcd densify(const StateVector &psi, std::size_t dim) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (const auto &[i, a] : psi.entries()) {
        if (i < dim) {
            v(i) = a;
        }
    }
    return v;
}

double block_deviation(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b, std::size_t block) {
    double worst = 0;
    for (std::size_t c = 0; c < block; ++c) {
        for (std::size_t r = 0; r < block; ++r) {
            worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
        }
    }
    return worst;
}

std::vector<bool> enumerate(const std::function<bool(BasisIndex)> &pred, BasisIndex limit) {
    std::vector<bool> out(limit);
    for (BasisIndex i = 0; i < limit; ++i) {
        out[i] = pred(i);
    }
    return out;
}

std::vector<bool> enumerate(const IndexSet &s, BasisIndex limit) {
    return enumerate([&](BasisIndex i) { return s.contains(i); }, limit);
}

IndexSet random_index_set(Rng &rng) {
    std::vector<bool> transient(rng.below(9));
    for (std::size_t i = 0; i < transient.size(); ++i) {
        transient[i] = rng.below(2) == 1;
    }
    std::vector<bool> residues(1 + rng.below(6));
    for (std::size_t r = 0; r < residues.size(); ++r) {
        residues[r] = rng.below(3) != 0;
    }
    return IndexSet::from_parts(transient, residues);
}

namespace {

Coefficient random_coefficient(Rng &rng) {
    return {2 * rng.uniform01() - 1, 2 * rng.uniform01() - 1};
}

}  // namespace

StructuredOperator random_operator(Rng &rng, BasisIndex max_index, std::uint64_t max_stride,
                                   std::uint64_t max_offset) {
    std::vector<DyadTerm> dyads;
    std::vector<FamilyTerm> families;
    std::uint64_t nd = rng.below(4);
    for (std::uint64_t k = 0; k < nd; ++k) {
        dyads.push_back({random_coefficient(rng), rng.below(max_index), rng.below(max_index)});
    }
    std::uint64_t nf = rng.below(3);
    for (std::uint64_t k = 0; k < nf; ++k) {
        FamilyTerm f;
        f.coeff = random_coefficient(rng);
        f.out_stride = 1 + rng.below(max_stride);
        f.out_offset = rng.below(max_offset);
        f.in_stride = 1 + rng.below(max_stride);
        f.in_offset = rng.below(max_offset);
        f.j_start = rng.below(3);
        families.push_back(f);
    }
    return StructuredOperator(std::move(dyads), std::move(families));
}

std::vector<double> random_probabilities(Rng &rng, std::size_t n) {
    std::vector<double> p(n);
    double total = 0;
    for (auto &x : p) {
        x = -std::log(1.0 - rng.uniform01());
        total += x;
    }
    for (auto &x : p) {
        x /= total;
    }
    return p;
}

Eigen::MatrixXcd random_unitary(Rng &rng, std::size_t n) {
    Eigen::MatrixXcd g(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            g(r, c) = rng.complex_gaussian();
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

std::map<Outcome, InstrumentParts> random_parts(Rng &rng, std::uint32_t n, std::uint32_t k) {
    Eigen::MatrixXcd u = random_unitary(rng, n);
    std::map<Outcome, InstrumentParts> parts;
    for (std::uint32_t l = 0; l < n; ++l) {
        BasisIndex landing = k + l;
        double phase = 2 * M_PI * rng.uniform01();
        StructuredOperator v = StructuredOperator::family(std::polar(1.0, phase), n, k + n + l, n, k + l);
        std::vector<DyadTerm> w;
        for (std::uint32_t i = 0; i < k; ++i) {
            w.push_back({u(l, i), landing, i});
        }
        parts[Outcome(l + 1)] = {v, StructuredOperator(std::move(w), {})};
    }
    return parts;
}

StructuredOperator swap_permutation(BasisIndex a, BasisIndex b) {
    return StructuredOperator::identity() + StructuredOperator::dyad(-1, a, a) + StructuredOperator::dyad(-1, b, b) +
           StructuredOperator::dyad(1, a, b) + StructuredOperator::dyad(1, b, a);
}

namespace {

Instrument mix_first_two(const Instrument &inst, double theta, double phi) {
    OperatorMap ops = inst.operators();
    auto it = ops.begin();
    const Outcome e = it->first;
    const Outcome f = std::next(it)->first;
    const StructuredOperator m1 = ops.at(e);
    const StructuredOperator m2 = ops.at(f);
    const double c = std::cos(theta);
    const Coefficient s = std::polar(std::sin(theta), phi);
    ops[e] = Coefficient(c) * m1 + s * m2;
    ops[f] = -std::conj(s) * m1 + Coefficient(c) * m2;
    return make_instrument(std::move(ops));
}

Instrument left_multiply(const Instrument &inst, const StructuredOperator &u) {
    OperatorMap ops;
    for (const auto &[e, m] : inst.operators()) {
        ops[e] = u * m;
    }
    return make_instrument(std::move(ops));
}

Instrument right_multiply(const Instrument &inst, const StructuredOperator &u) {
    OperatorMap ops;
    for (const auto &[e, m] : inst.operators()) {
        ops[e] = m * u;
    }
    return make_instrument(std::move(ops));
}

// Diagonal unitary: phases on a few low indices and on every even index.
StructuredOperator diagonal_phases(Rng &rng) {
    StructuredOperator d = StructuredOperator::identity();
    for (BasisIndex i = 0; i < 6; ++i) {
        d = d + StructuredOperator::dyad(std::polar(1.0, 2 * M_PI * rng.uniform01()) - 1.0, i, i);
    }
    Coefficient even = std::polar(1.0, 2 * M_PI * rng.uniform01()) - 1.0;
    return d + StructuredOperator::family(even, 2, 6, 2, 6);
}

}  // namespace

std::vector<CorpusEntry> repeatability_corpus(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CorpusEntry> corpus;
    const std::vector<StateVector> origin{StateVector::basis(0)};
    auto push = [&](std::string name, Instrument inst) {
        corpus.push_back({std::move(name), std::move(inst), origin});
    };

    std::vector<std::pair<std::string, Instrument>> repeatable_bases;
    push("example n=1", build_example_family(1, {1.0}));
    for (std::uint32_t n = 2; n <= 5; ++n) {
        for (int variant = 0; variant < 2; ++variant) {
            auto p = variant == 0 ? std::vector<double>(n, 1.0 / n) : random_probabilities(rng, n);
            std::string tag = "n=" + std::to_string(n) + (variant == 0 ? " uniform" : " random");
            push("example " + tag, build_example_family(n, p));
            push("sibling " + tag, build_nonrepeatable_sibling(n, p));
            if (variant == 1 && n <= 3) {
                repeatable_bases.emplace_back("example " + tag, corpus[corpus.size() - 2].instrument);
            }
        }
    }
    push("sibling n=1", build_nonrepeatable_sibling(1, {1.0}));
    for (int k = 0; k < 4; ++k) {
        double p1 = rng.uniform01();
        double p2 = rng.uniform01();
        push("binary " + std::to_string(k), build_binary_example(p1, p2));
        if (k < 2) {
            repeatable_bases.emplace_back("binary " + std::to_string(k), corpus.back().instrument);
        }
    }
    push("binary (1,1)", build_binary_example(1.0, 1.0));

    push("orthogonal parity", build_orthogonal({IndexSet::progression(2, 0), IndexSet::progression(2, 1)}));
    push("orthogonal identity", build_orthogonal({IndexSet::all()}));
    push("orthogonal {0} / rest", build_orthogonal({IndexSet::finite({0}), IndexSet::from(1)}));
    push("orthogonal mod 3",
         build_orthogonal({IndexSet::progression(3, 0), IndexSet::progression(3, 1), IndexSet::progression(3, 2)}));
    push("orthogonal mixed", build_orthogonal({set_union(IndexSet::finite({1, 4}), IndexSet::progression(4, 3)),
                                               set_difference(set_complement(IndexSet::progression(4, 3)),
                                                              IndexSet::finite({1, 4}))}));
    repeatable_bases.emplace_back("orthogonal parity", corpus[corpus.size() - 5].instrument);

    for (int k = 0; k < 10; ++k) {
        std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(3));
        std::uint32_t intake = 1 + static_cast<std::uint32_t>(rng.below(n));
        push("parts " + std::to_string(k), build_from_parts(random_parts(rng, n, intake)));
        if (k < 3) {
            repeatable_bases.emplace_back("parts " + std::to_string(k), corpus.back().instrument);
        }
    }

    for (const auto &[name, base] : repeatable_bases) {
        double theta = 0.2 + 1.2 * rng.uniform01();
        push(name + " / mixed", mix_first_two(base, theta, 2 * M_PI * rng.uniform01()));
        push(name + " / rows 1<->2", left_multiply(base, swap_permutation(1, 2)));
        push(name + " / phases", left_multiply(base, diagonal_phases(rng)));
        push(name + " / cols 0<->1", right_multiply(base, swap_permutation(0, 1)));
    }
    return corpus;
}

}  // namespace qrepeat::testing
