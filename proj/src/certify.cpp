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

#include "qrepeat/certify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace qrepeat {

namespace {

std::string op_name(const Outcome &e) {
    return "M_" + e.str();
}

}  // namespace

CertificationReport certify_repeatable(const Instrument &inst) {
    CertificationReport report;
    const auto zero = StructuredOperator::zero();
    auto check = [&](const std::string &condition, const StructuredOperator &lhs, const StructuredOperator &rhs) {
        auto witness = first_discrepancy(lhs, rhs);
        if (witness) {
            report.witnesses.push_back({condition, *witness});
        }
        return !witness.has_value();
    };

    const Povm effects = povm(inst);
    StructuredOperator total;
    for (const auto &[e, p] : effects.effects) {
        total = add(total, p);
    }
    report.complete = check("sum_e M_e^dag M_e = I", total, StructuredOperator::identity());

    bool all_isometric = true;
    for (const auto &[e, m] : inst.operators()) {
        OutcomeDiagnostics diag;
        diag.isometric_on_range =
            check(op_name(e) + "^dag " + op_name(e) + " " + op_name(e) + " = " + op_name(e),
                  compose(effects.effects.at(e), m), m);
        all_isometric = all_isometric && diag.isometric_on_range;
        report.per_outcome[e] = diag;
    }

    bool all_products_vanish = true;
    for (const auto &[e, me] : inst.operators()) {
        for (const auto &[f, mf] : inst.operators()) {
            if (e == f) {
                continue;
            }
            PairDiagnostics pair;
            pair.product_vanishes = check(op_name(f) + " " + op_name(e) + " = 0", compose(mf, me), zero);
            all_products_vanish = all_products_vanish && pair.product_vanishes;
            report.per_pair[{e, f}] = pair;
        }
    }

    // Necessary-only conditions, kept out of the verdict.
    for (const auto &[e, m] : inst.operators()) {
        if (is_monomial(m)) {
            bool inside = row_support(m).is_subset_of(column_support(m));
            report.per_outcome[e].range_in_support = inside;
        }
    }
    for (const auto &[e, me] : inst.operators()) {
        for (const auto &[f, mf] : inst.operators()) {
            if (e == f) {
                continue;
            }
            report.per_pair[{e, f}].ranges_orthogonal =
                check("diagnostic: " + op_name(f) + "^dag " + op_name(e) + " = 0", compose(adjoint(mf), me), zero);
        }
    }

    report.repeatable = report.complete && all_isometric && all_products_vanish;
    report.orthogonal = check_orthogonal(effects);
    return report;
}

StateVector random_state(Rng &rng, BasisIndex max_index) {
    if (max_index == 0) {
        throw Error("random_state needs max_index >= 1");
    }
    std::uint64_t size = 1 + rng.below(std::min<BasisIndex>(8, max_index));
    std::vector<BasisIndex> chosen;
    while (chosen.size() < size) {
        BasisIndex i = rng.below(max_index);
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
            chosen.push_back(i);
        }
    }
    StateVector psi;
    for (BasisIndex i : chosen) {
        psi.add(i, rng.complex_gaussian());
    }
    return psi.normalized();
}

std::optional<double> conditional_probability(const Instrument &inst, const StateVector &psi, const Outcome &e,
                                              const Outcome &f) {
    StateVector after = apply(inst.at(e), psi);
    double pe = norm_sq(after);
    if (pe <= settings().tolerance) {
        return std::nullopt;
    }
    return norm_sq(apply(inst.at(f), after)) / pe;
}

std::map<OutcomePair, double> check_repeatability_numerical(const Instrument &inst, std::size_t trials,
                                                            BasisIndex max_index, std::uint64_t seed,
                                                            const std::vector<StateVector> &extra_states) {
    if (trials == 0) {
        throw Error("check_repeatability_numerical needs at least one trial");
    }
    std::map<OutcomePair, double> worst;
    for (const auto &e : inst.outcomes()) {
        for (const auto &f : inst.outcomes()) {
            worst[{e, f}] = 0.0;
        }
    }
    auto probe = [&](const StateVector &psi) {
        for (const auto &[e, me] : inst.operators()) {
            StateVector after = apply(me, psi);
            double pe = norm_sq(after);
            if (pe <= settings().tolerance) {
                continue;
            }
            for (const auto &[f, mf] : inst.operators()) {
                double ratio = norm_sq(apply(mf, after)) / pe;
                double dev = std::abs(ratio - (e == f ? 1.0 : 0.0));
                auto &slot = worst[{e, f}];
                slot = std::max(slot, dev);
            }
        }
    };
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(Rng::derive(seed, t));
        probe(random_state(rng, max_index));
    }
    for (const auto &psi : extra_states) {
        probe(psi);
    }
    return worst;
}

double worst_deviation(const std::map<OutcomePair, double> &deviations) {
    double w = 0;
    for (const auto &[k, v] : deviations) {
        w = std::max(w, v);
    }
    return w;
}

bool check_orthogonal(const Povm &povm) {
    for (const auto &[e, pe] : povm.effects) {
        for (const auto &[f, pf] : povm.effects) {
            const StructuredOperator expected = e == f ? pf : StructuredOperator::zero();
            if (!equals(compose(pe, pf), expected)) {
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Finite-dimensional suite

namespace {

using Dense = Eigen::MatrixXcd;

Dense random_gaussian(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
    Dense g(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            g(r, c) = rng.complex_gaussian();
        }
    }
    return g;
}

Dense random_unitary(Rng &rng, Eigen::Index n) {
    Eigen::HouseholderQR<Dense> qr(random_gaussian(rng, n, n));
    return qr.householderQ() * Dense::Identity(n, n);
}

StructuredOperator from_dense(const Dense &m) {
    std::vector<DyadTerm> dyads;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (m(r, c) != Coefficient{}) {
                dyads.push_back({m(r, c), static_cast<BasisIndex>(r), static_cast<BasisIndex>(c)});
            }
        }
    }
    return StructuredOperator(std::move(dyads), {});
}

/// Embeds dense blocks as an instrument; indices >= dim go to outcome 1.
Instrument embed(const std::vector<Dense> &blocks, std::uint32_t dim) {
    OperatorMap ops;
    for (std::size_t e = 0; e < blocks.size(); ++e) {
        StructuredOperator m = from_dense(blocks[e]);
        if (e == 0) {
            m = add(m, StructuredOperator::family(1.0, 1, dim, 1, dim));
        }
        ops[Outcome(static_cast<std::uint32_t>(e + 1))] = m;
    }
    return make_instrument(std::move(ops));
}

Dense hermitian_function(const Dense &h, double (*fn)(double)) {
    Eigen::SelfAdjointEigenSolver<Dense> es(h);
    Eigen::VectorXd vals = es.eigenvalues().unaryExpr([fn](double x) { return fn(std::max(x, 0.0)); });
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

double inv_sqrt(double x) {
    return 1.0 / std::sqrt(x);
}

double plain_sqrt(double x) {
    return std::sqrt(x);
}

double dense_orthogonality_deviation(const std::vector<Dense> &effects) {
    double worst = 0;
    for (std::size_t e = 0; e < effects.size(); ++e) {
        for (std::size_t f = 0; f < effects.size(); ++f) {
            Dense target = e == f ? effects[f] : Dense::Zero(effects[f].rows(), effects[f].cols());
            worst = std::max(worst, (effects[e] * effects[f] - target).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

}  // namespace

FiniteDimSuiteResult finite_dim_corollary_suite(std::uint32_t dim, std::uint64_t seed, std::uint32_t dim_cap) {
    if (dim == 0 || dim > dim_cap) {
        throw Error("finite_dim_corollary_suite: dim must lie in [1, " + std::to_string(dim_cap) + "]");
    }
    FiniteDimSuiteResult result;
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(dim);

    auto fail = [&](const std::string &why) {
        result.passed = false;
        result.failures.push_back("dim " + std::to_string(dim) + " seed " + std::to_string(seed) + ": " + why);
    };

    // Every instrument that certifies repeatable must have an orthogonal POVM.
    auto check_instrument = [&](const Instrument &inst, const std::vector<Dense> &blocks, const char *kind) {
        CertificationReport report = certify_repeatable(inst);
        if (!report.repeatable) {
            return false;
        }
        if (!report.orthogonal) {
            fail(std::string(kind) + ": repeatable but POVM not orthogonal");
        }
        std::vector<Dense> effects;
        for (const auto &b : blocks) {
            effects.push_back(b.adjoint() * b);
        }
        result.max_orthogonality_deviation =
            std::max(result.max_orthogonality_deviation, dense_orthogonality_deviation(effects));
        return true;
    };

    // (a) projective instruments, plain and rotated within each range.
    for (int round = 0; round < 2; ++round) {
        Dense u = random_unitary(rng, n);
        Eigen::Index k = std::min<Eigen::Index>(n, 2 + static_cast<Eigen::Index>(rng.below(3)));
        std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(k));
        for (Eigen::Index i = 0; i < n; ++i) {
            std::size_t g = i < k ? static_cast<std::size_t>(i) : static_cast<std::size_t>(rng.below(k));
            groups[g].push_back(i);
        }
        std::vector<Dense> plain, rotated;
        for (const auto &g : groups) {
            Dense q(n, static_cast<Eigen::Index>(g.size()));
            for (std::size_t c = 0; c < g.size(); ++c) {
                q.col(static_cast<Eigen::Index>(c)) = u.col(g[c]);
            }
            plain.push_back(q * q.adjoint());
            rotated.push_back(q * random_unitary(rng, q.cols()) * q.adjoint());
        }
        for (const auto *blocks : {&plain, &rotated}) {
            Instrument inst = embed(*blocks, dim);
            ++result.projective_checked;
            if (!check_instrument(inst, *blocks, "projective")) {
                fail("projective instrument did not certify repeatable");
            }
        }
    }

    // (b) square-root instruments of random POVMs.
    for (int round = 0; round < 2; ++round) {
        Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.below(3));
        std::vector<Dense> grams;
        Dense total = Dense::Zero(n, n);
        for (Eigen::Index e = 0; e < k; ++e) {
            Dense a = random_gaussian(rng, n, n);
            grams.push_back(a.adjoint() * a);
            total += grams.back();
        }
        Dense whiten = hermitian_function(total, inv_sqrt);
        std::vector<Dense> roots;
        bool projective = true;
        for (const auto &g : grams) {
            Dense p = whiten * g * whiten;
            p = (p + p.adjoint()) / 2.0;
            projective = projective && (p * p - p).cwiseAbs().maxCoeff() < 1e-9;
            roots.push_back(hermitian_function(p, plain_sqrt));
        }
        if (projective) {
            continue;
        }
        Instrument inst = embed(roots, dim);
        ++result.square_root_checked;
        if (check_instrument(inst, roots, "square-root")) {
            fail("square-root instrument of a non-projective POVM certified repeatable");
        }
    }

    if (result.max_orthogonality_deviation > 1e-10) {
        fail("P_e P_f deviates from delta_ef P_f by " + std::to_string(result.max_orthogonality_deviation));
    }
    return result;
}

// ---------------------------------------------------------------------------
// POVM classification

PovmClassification classify_povm(const Povm &povm) {
    if (povm.effects.empty()) {
        throw InvalidPovm("POVM has no effects");
    }
    const StructuredOperator identity = StructuredOperator::identity();
    StructuredOperator total;
    std::vector<const StructuredOperator *> ops{&identity};
    for (const auto &[e, p] : povm.effects) {
        ops.push_back(&p);
        total = add(total, p);
    }
    if (auto witness = first_discrepancy(total, identity)) {
        throw InvalidPovm("effects do not sum to I at " + witness->str());
    }

    // Including the identity line pushes the bound past any place where an
    // off-diagonal family crosses the diagonal.
    ColumnWindow w = column_window(ops);
    const std::uint64_t bound = w.bound;
    const std::uint64_t period = w.period;

    // Sample points: every index below the bound, then one per residue class.
    std::vector<BasisIndex> samples;
    for (BasisIndex i = 0; i < bound; ++i) {
        samples.push_back(i);
    }
    for (std::uint64_t r = 0; r < period; ++r) {
        samples.push_back(w.representative(r));
    }
    auto flags_to_set = [&](const std::vector<bool> &flags) {
        std::vector<bool> transient(flags.begin(), flags.begin() + static_cast<std::ptrdiff_t>(bound));
        std::vector<bool> residues(period);
        for (std::uint64_t r = 0; r < period; ++r) {
            residues[w.representative(r) % period] = flags[bound + r];
        }
        return IndexSet::from_parts(std::move(transient), std::move(residues));
    };
    auto diagonal_operator = [&](const std::vector<Coefficient> &values) {
        std::vector<DyadTerm> dyads;
        std::vector<FamilyTerm> families;
        for (BasisIndex i = 0; i < bound; ++i) {
            dyads.push_back({values[i], i, i});
        }
        for (std::uint64_t r = 0; r < period; ++r) {
            BasisIndex c = w.representative(r);
            families.push_back({values[bound + r], period, c, period, c, 0});
        }
        return StructuredOperator(std::move(dyads), std::move(families));
    };

    std::map<Outcome, std::vector<Coefficient>> diag;
    for (const auto &[e, p] : povm.effects) {
        auto &values = diag[e];
        for (BasisIndex i : samples) {
            values.push_back(p.entry(i, i));
        }
        if (auto witness = first_discrepancy(p, diagonal_operator(values))) {
            throw UnsupportedForm("effect " + e.str() + " is not diagonal in the canonical basis (" +
                                  witness->str() + ")");
        }
    }

    PovmClassification out;
    std::map<Outcome, std::vector<bool>> z_flags;
    std::map<Outcome, std::vector<Coefficient>> t_values;
    std::vector<bool> omega_flags(samples.size(), false);
    for (const auto &[e, values] : diag) {
        z_flags[e].assign(samples.size(), false);
        t_values[e].assign(samples.size(), Coefficient{});
    }
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Outcome *owner = nullptr;
        bool indicator = true;
        for (const auto &[e, values] : diag) {
            Coefficient v = values[s];
            if (nearly_equal(v, 1.0)) {
                if (owner != nullptr) {
                    indicator = false;
                }
                owner = &e;
            } else if (!is_negligible(v)) {
                indicator = false;
            }
        }
        if (indicator && owner != nullptr) {
            z_flags[*owner][s] = true;
        } else {
            omega_flags[s] = true;
            for (const auto &[e, values] : diag) {
                t_values[e][s] = values[s];
            }
        }
    }

    for (const auto &[e, values] : diag) {
        out.z_sets[e] = flags_to_set(z_flags[e]);
        out.per_outcome[e] = {diagonal_projector(out.z_sets[e]), diagonal_operator(t_values[e])};
    }
    out.omega_set = flags_to_set(omega_flags);
    out.z_omega = diagonal_projector(out.omega_set);

    // Re-verify the general form.
    const auto zero = StructuredOperator::zero();
    auto verify = [&](const std::string &name, const StructuredOperator &lhs, const StructuredOperator &rhs) {
        if (!equals(lhs, rhs)) {
            out.failed_invariants.push_back(name);
        }
    };
    StructuredOperator t_sum;
    StructuredOperator z_sum = out.z_omega;
    std::map<std::string, const StructuredOperator *> projectors{{"Z_omega", &out.z_omega}};
    for (const auto &[e, parts] : out.per_outcome) {
        verify("P_" + e.str() + " = Z_" + e.str() + " + T_" + e.str(), povm.effects.at(e), add(parts.z, parts.t));
        for (const auto &[f, other] : out.per_outcome) {
            verify("Z_" + e.str() + " T_" + f.str() + " = 0", compose(parts.z, other.t), zero);
            verify("T_" + f.str() + " Z_" + e.str() + " = 0", compose(other.t, parts.z), zero);
        }
        for (const auto &term : parts.t.dyads()) {
            if (term.coeff.real() < -settings().tolerance || std::abs(term.coeff.imag()) > settings().tolerance) {
                out.failed_invariants.push_back("T_" + e.str() + " >= 0");
                break;
            }
        }
        for (const auto &term : parts.t.families()) {
            if (term.coeff.real() < -settings().tolerance || std::abs(term.coeff.imag()) > settings().tolerance) {
                out.failed_invariants.push_back("T_" + e.str() + " >= 0");
                break;
            }
        }
        t_sum = add(t_sum, parts.t);
        z_sum = add(z_sum, parts.z);
        projectors["Z_" + e.str()] = &parts.z;
    }
    verify("sum_e T_e = Z_omega", t_sum, out.z_omega);
    for (const auto &[a, za] : projectors) {
        for (const auto &[b, zb] : projectors) {
            verify(a + " " + b + " = delta " + a, compose(*za, *zb), a == b ? *za : zero);
        }
    }
    verify("Z_omega + sum_e Z_e = I", z_sum, identity);
    out.admits_repeatable_form = out.failed_invariants.empty();
    return out;
}

}  // namespace qrepeat
