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

#include "qrepeat/instrument.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "qrepeat/certify.hpp"

namespace qrepeat {

namespace {

std::vector<double> validated_probabilities(std::uint32_t n, const std::vector<double> &p) {
    if (n == 0) {
        throw BadProbabilityVector("number of outcomes must be positive");
    }
    if (p.size() != n) {
        throw BadProbabilityVector("expected " + std::to_string(n) + " probabilities, got " +
                                   std::to_string(p.size()));
    }
    double total = 0;
    std::vector<double> out;
    for (double x : p) {
        if (!std::isfinite(x) || x < -settings().tolerance) {
            throw BadProbabilityVector("probabilities must be finite and nonnegative");
        }
        out.push_back(std::max(x, 0.0));
        total += x;
    }
    if (std::abs(total - 1.0) > std::max(settings().tolerance, 1e-12)) {
        throw BadProbabilityVector("probabilities sum to " + std::to_string(total) + ", not 1");
    }
    return out;
}

void require_unit_interval(double x, const char *name) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
        throw BadProbabilityVector(std::string(name) + " must lie in [0, 1]");
    }
}

}  // namespace

const StructuredOperator &Instrument::at(const Outcome &e) const {
    auto it = ops_.find(e);
    if (it == ops_.end()) {
        throw Error("instrument has no outcome " + e.str());
    }
    return it->second;
}

std::vector<Outcome> Instrument::outcomes() const {
    std::vector<Outcome> out;
    for (const auto &[e, m] : ops_) {
        out.push_back(e);
    }
    return out;
}

NormEstimate operator_norm(const StructuredOperator &op) {
    if (op.has_no_terms()) {
        return {};
    }
    if (auto nf = monomial_normal_form(op)) {
        NormEstimate best{0, 0, true};
        for (const auto &d : nf->dyads()) {
            if (std::abs(d.coeff) > best.norm) {
                best = {std::abs(d.coeff), d.in, true};
            }
        }
        for (const auto &f : nf->families()) {
            if (std::abs(f.coeff) > best.norm) {
                best = {std::abs(f.coeff), f.in_offset, true};
            }
        }
        return best;
    }
    ColumnWindow w = column_window({&op});
    BasisIndex cols = w.decision_limit();
    BasisIndex rows = std::max<BasisIndex>(output_extent(op, cols), 1);
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    NormEstimate est{0, 0, false};
    double heaviest = -1;
    for (BasisIndex c = 0; c < cols; ++c) {
        StateVector col = op.column(c);
        double weight = norm_sq(col);
        if (weight > heaviest) {
            heaviest = weight;
            est.column = c;
        }
        for (const auto &[r, a] : col.entries()) {
            dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a;
        }
    }
    // Largest singular value from the Gram matrix; only eigenvalues are needed.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense.adjoint() * dense, Eigen::EigenvaluesOnly);
    est.norm = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    return est;
}

StructuredOperator effect_sum(const OperatorMap &ops) {
    StructuredOperator total;
    for (const auto &[e, m] : ops) {
        total = add(total, compose(adjoint(m), m));
    }
    return total;
}

Instrument make_instrument(OperatorMap entries, bool check_completeness) {
    if (entries.empty()) {
        throw Error("an instrument needs at least one outcome");
    }
    for (const auto &[e, m] : entries) {
        NormEstimate n = operator_norm(m);
        double slack = n.exact ? settings().tolerance : std::max(settings().tolerance, 1e-10);
        if (n.norm > 1.0 + slack) {
            throw ContractionViolation("operator for outcome " + e.str() + " has norm " + std::to_string(n.norm) +
                                           " > 1 (column " + std::to_string(n.column) + ")",
                                       n.column, n.norm);
        }
    }
    Instrument inst;
    inst.ops_ = std::move(entries);
    if (check_completeness) {
        if (auto witness = first_discrepancy(effect_sum(inst.ops_), StructuredOperator::identity())) {
            throw CompletenessViolation("sum_e M_e^dag M_e != I", witness);
        }
        inst.verified_ = true;
    }
    return inst;
}

Instrument build_example_family(std::uint32_t n, const std::vector<double> &p) {
    auto probs = validated_probabilities(n, p);
    OperatorMap ops;
    for (std::uint32_t l = 1; l <= n; ++l) {
        ops[Outcome(l)] = StructuredOperator({DyadTerm{std::sqrt(probs[l - 1]), l, 0}},
                                             {FamilyTerm{1.0, n, n + l, n, l, 0}});
    }
    return make_instrument(std::move(ops));
}

Instrument build_nonrepeatable_sibling(std::uint32_t n, const std::vector<double> &p) {
    auto probs = validated_probabilities(n, p);
    OperatorMap ops;
    for (std::uint32_t l = 1; l <= n; ++l) {
        ops[Outcome(l)] = StructuredOperator({DyadTerm{std::sqrt(probs[l - 1]), 0, 0}},
                                             {FamilyTerm{1.0, n, l, n, l, 0}});
    }
    return make_instrument(std::move(ops));
}

Instrument build_binary_example(double p1, double p2) {
    require_unit_interval(p1, "p1");
    require_unit_interval(p2, "p2");
    OperatorMap ops;
    // sum_{n>=1} |2(n+2)><2n|  is  stride 2, out offset 6, in offset 2.
    ops[Outcome(1)] = StructuredOperator({{std::sqrt(p1), 2, 0}, {std::sqrt(p2), 4, 1}}, {{1.0, 2, 6, 2, 2, 0}});
    ops[Outcome(2)] =
        StructuredOperator({{std::sqrt(1 - p1), 3, 0}, {std::sqrt(1 - p2), 5, 1}}, {{1.0, 2, 7, 2, 3, 0}});
    return make_instrument(std::move(ops));
}

Instrument build_orthogonal(const std::vector<IndexSet> &sets) {
    if (sets.empty()) {
        throw CoverageViolation("no projector sets given");
    }
    IndexSet covered;
    for (std::size_t a = 0; a < sets.size(); ++a) {
        for (std::size_t b = a + 1; b < sets.size(); ++b) {
            IndexSet overlap = set_intersection(sets[a], sets[b]);
            if (!overlap.is_empty()) {
                throw CoverageViolation("sets " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                                        " overlap on " + overlap.str());
            }
        }
        covered = set_union(covered, sets[a]);
    }
    IndexSet missing = set_complement(covered);
    if (!missing.is_empty()) {
        throw CoverageViolation("sets miss " + missing.str());
    }
    OperatorMap ops;
    for (std::size_t a = 0; a < sets.size(); ++a) {
        ops[Outcome(static_cast<std::uint32_t>(a + 1))] = diagonal_projector(sets[a]);
    }
    return make_instrument(std::move(ops));
}

Instrument build_from_parts(const std::map<Outcome, InstrumentParts> &parts) {
    if (parts.empty()) {
        throw Error("an instrument needs at least one outcome");
    }
    const auto zero = StructuredOperator::zero();
    auto require = [](const std::string &condition, const StructuredOperator &lhs, const StructuredOperator &rhs) {
        if (auto witness = first_discrepancy(lhs, rhs)) {
            throw PartsViolation(condition, witness);
        }
    };
    StructuredOperator total;
    for (const auto &[e, part] : parts) {
        const std::string tag = " (outcome " + e.str() + ")";
        StructuredOperator vv = compose(adjoint(part.v), part.v);
        StructuredOperator ww = compose(adjoint(part.w), part.w);
        require("V^dag V is a projector" + tag, compose(vv, vv), vv);
        require("W^dag V = 0" + tag, compose(adjoint(part.w), part.v), zero);
        require("V^dag W = 0" + tag, compose(adjoint(part.v), part.w), zero);
        StructuredOperator m = add(part.v, part.w);
        require("Rng(M) inside Supp(V)" + tag, compose(vv, m), m);
        total = add(total, add(vv, ww));
    }
    for (const auto &[e, pe] : parts) {
        for (const auto &[f, pf] : parts) {
            if (e == f) {
                continue;
            }
            const std::string tag = " (outcomes " + f.str() + ", " + e.str() + ")";
            require("V_f^dag V_e = 0" + tag, compose(adjoint(pf.v), pe.v), zero);
            require("W_f^dag W_e = 0" + tag, compose(adjoint(pf.w), pe.w), zero);
        }
    }
    require("sum_e (V_e^dag V_e + W_e^dag W_e) = I", total, StructuredOperator::identity());

    OperatorMap ops;
    for (const auto &[e, part] : parts) {
        ops[e] = add(part.v, part.w);
    }
    Instrument inst = make_instrument(std::move(ops));
    CertificationReport report = certify_repeatable(inst);
    if (!report.repeatable) {
        throw PartsViolation("repeatability", report.witnesses.empty()
                                                  ? std::nullopt
                                                  : std::optional<EntryWitness>(report.witnesses.front().entry));
    }
    return inst;
}

Povm povm(const Instrument &inst) {
    Povm out;
    for (const auto &[e, m] : inst.operators()) {
        out.effects[e] = compose(adjoint(m), m);
    }
    return out;
}

}  // namespace qrepeat
