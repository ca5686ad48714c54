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

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "qrepeat/operator.hpp"

namespace qrepeat {

/// Measurement outcome. Ordered and identified by `label`; `alias` is a
/// display name only.
struct Outcome {
    std::uint32_t label = 0;
    std::string alias;

    Outcome() = default;
    Outcome(std::uint32_t l) : label(l) {
    }
    Outcome(std::uint32_t l, std::string a) : label(l), alias(std::move(a)) {
    }

    std::string str() const {
        return alias.empty() ? std::to_string(label) : alias;
    }
    bool operator==(const Outcome &o) const {
        return label == o.label;
    }
    std::strong_ordering operator<=>(const Outcome &o) const {
        return label <=> o.label;
    }
};

using OperatorMap = std::map<Outcome, StructuredOperator>;

/// Outcome-labeled family of contractions {M_e}.
class Instrument {
   public:
    const OperatorMap &operators() const {
        return ops_;
    }
    const StructuredOperator &at(const Outcome &e) const;
    std::vector<Outcome> outcomes() const;
    std::size_t size() const {
        return ops_.size();
    }
    /// True when sum_e M_e^dag M_e = I was checked at construction.
    bool completeness_verified() const {
        return verified_;
    }

   private:
    friend Instrument make_instrument(OperatorMap, bool);
    OperatorMap ops_;
    bool verified_ = false;
};

/// Effects P_e = M_e^dag M_e.
struct Povm {
    OperatorMap effects;
};

struct NormEstimate {
    double norm = 0;
    /// Column attaining the norm (monomial case) or the heaviest column.
    BasisIndex column = 0;
    /// Exact for monomial operators; a dense-window singular value otherwise.
    bool exact = false;
};

NormEstimate operator_norm(const StructuredOperator &op);

/// sum_e M_e^dag M_e.
StructuredOperator effect_sum(const OperatorMap &ops);

/// Validates contraction of every entry and, when `check_completeness`,
/// sum_e M_e^dag M_e = I. Throws ContractionViolation or
/// CompletenessViolation.
Instrument make_instrument(OperatorMap entries, bool check_completeness = true);

/// M_l = sqrt(p_l)|l><0| + sum_{j>=0} |n(j+1)+l><nj+l|, l = 1..n.
Instrument build_example_family(std::uint32_t n, const std::vector<double> &p);

/// N_l = sqrt(p_l)|0><0| + sum_{j>=0} |nj+l><nj+l|, l = 1..n. Same POVM as
/// build_example_family(n, p) but not repeatable.
Instrument build_nonrepeatable_sibling(std::uint32_t n, const std::vector<double> &p);

/// Two-outcome instrument:
///   M_1 = sqrt(p1)|2><0| + sqrt(p2)|4><1| + sum_{n>=1} |2(n+2)><2n|
///   M_2 = sqrt(1-p1)|3><0| + sqrt(1-p2)|5><1| + sum_{n>=1} |2(n+2)+1><2n+1|
Instrument build_binary_example(double p1, double p2);

/// Projective instrument with M_e the diagonal projector onto sets[e-1].
/// Sets must be pairwise disjoint and cover the nonnegative integers.
Instrument build_orthogonal(const std::vector<IndexSet> &sets);

struct InstrumentParts {
    StructuredOperator v;
    StructuredOperator w;
};

/// Assembles M_e = V_e + W_e after checking every decomposition condition:
/// V_e^dag V_e is a projector, the cross terms W_e^dag V_e and V_e^dag W_e
/// vanish, Rng(M_e) lies inside Supp(V_e), V_f^dag V_e = W_f^dag W_e = 0 for
/// e != f, and sum_e (V_e^dag V_e + W_e^dag W_e) = I. The result is then
/// certified repeatable. Throws PartsViolation naming the failed condition.
Instrument build_from_parts(const std::map<Outcome, InstrumentParts> &parts);

Povm povm(const Instrument &inst);

}  // namespace qrepeat
