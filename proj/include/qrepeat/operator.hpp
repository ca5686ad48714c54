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
#include <vector>

#include "qrepeat/arith.hpp"
#include "qrepeat/core.hpp"
#include "qrepeat/errors.hpp"
#include "qrepeat/index_set.hpp"

namespace qrepeat {

/// coeff * |out><in|
struct DyadTerm {
    Coefficient coeff{};
    BasisIndex out = 0;
    BasisIndex in = 0;
};

/// coeff * sum_{j >= j_start} |out_stride*j + out_offset><in_stride*j + in_offset|
///
/// Both strides are >= 1. Canonical operators always carry j_start == 0 (the
/// start is folded into the offsets).
struct FamilyTerm {
    Coefficient coeff{};
    std::uint64_t out_stride = 1;
    std::uint64_t out_offset = 0;
    std::uint64_t in_stride = 1;
    std::uint64_t in_offset = 0;
    std::uint64_t j_start = 0;

    BasisIndex out_at(std::uint64_t j) const {
        return out_stride * j + out_offset;
    }
    BasisIndex in_at(std::uint64_t j) const {
        return in_stride * j + in_offset;
    }
    arith::Progression inputs() const {
        return {in_stride, in_stride * j_start + in_offset};
    }
    arith::Progression outputs() const {
        return {out_stride, out_stride * j_start + out_offset};
    }
    bool same_shape(const FamilyTerm &o) const {
        return out_stride == o.out_stride && out_offset == o.out_offset && in_stride == o.in_stride &&
               in_offset == o.in_offset && j_start == o.j_start;
    }
};

/// Finitely supported vector on the countable basis.
class StateVector {
   public:
    StateVector() = default;
    static StateVector basis(BasisIndex i);
    static StateVector from_entries(const std::map<BasisIndex, Coefficient> &entries);

    const std::map<BasisIndex, Coefficient> &entries() const {
        return entries_;
    }
    Coefficient at(BasisIndex i) const;
    void add(BasisIndex i, Coefficient c);
    bool empty() const {
        return entries_.empty();
    }
    std::vector<BasisIndex> support() const;
    StateVector scaled(Coefficient c) const;
    /// Copy scaled to unit norm. Throws DegenerateState on a zero vector.
    StateVector normalized() const;
    bool nearly_equals(const StateVector &other) const;
    std::string str() const;

   private:
    std::map<BasisIndex, Coefficient> entries_;
};

double norm_sq(const StateVector &psi);
Coefficient inner(const StateVector &a, const StateVector &b);

/// Finite sum of dyads and affine shift families, held in canonical form.
///
/// The empty term list is the zero operator. Canonical form merges dyads with
/// equal (out, in), merges families of equal shape, drops negligible
/// coefficients and folds a dyad sitting one step before a family's start
/// into that family when the coefficients match.
class StructuredOperator {
   public:
    StructuredOperator() = default;
    StructuredOperator(std::vector<DyadTerm> dyads, std::vector<FamilyTerm> families);

    static StructuredOperator zero() {
        return {};
    }
    static StructuredOperator identity();
    static StructuredOperator dyad(Coefficient coeff, BasisIndex out, BasisIndex in);
    static StructuredOperator family(Coefficient coeff, std::uint64_t out_stride, std::uint64_t out_offset,
                                     std::uint64_t in_stride, std::uint64_t in_offset, std::uint64_t j_start = 0);

    const std::vector<DyadTerm> &dyads() const {
        return dyads_;
    }
    const std::vector<FamilyTerm> &families() const {
        return families_;
    }
    bool has_no_terms() const {
        return dyads_.empty() && families_.empty();
    }
    std::size_t term_count() const {
        return dyads_.size() + families_.size();
    }

    /// Column `c`, i.e. the image of |c>.
    StateVector column(BasisIndex c) const;
    Coefficient entry(BasisIndex row, BasisIndex col) const;

    std::string str() const;

   private:
    void canonicalize();

    std::vector<DyadTerm> dyads_;
    std::vector<FamilyTerm> families_;
};

StateVector apply(const StructuredOperator &op, const StateVector &psi);
StructuredOperator adjoint(const StructuredOperator &op);
StructuredOperator compose(const StructuredOperator &a, const StructuredOperator &b);
StructuredOperator add(const StructuredOperator &a, const StructuredOperator &b);
StructuredOperator scale(const StructuredOperator &a, Coefficient c);
StructuredOperator subtract(const StructuredOperator &a, const StructuredOperator &b);

StructuredOperator operator+(const StructuredOperator &a, const StructuredOperator &b);
StructuredOperator operator-(const StructuredOperator &a, const StructuredOperator &b);
StructuredOperator operator*(const StructuredOperator &a, const StructuredOperator &b);
StructuredOperator operator*(Coefficient c, const StructuredOperator &a);

/// Columns at or above `bound` have a structure that repeats with `period`:
/// the same families hit every column of a residue class, and no two distinct
/// family lines meet there. Checking the columns below bound + period
/// therefore decides any column-wise property.
struct ColumnWindow {
    BasisIndex bound = 0;
    std::uint64_t period = 1;

    BasisIndex decision_limit() const {
        return bound + 2 * period;
    }
    /// Smallest column >= bound in residue class r.
    BasisIndex representative(std::uint64_t r) const {
        return bound + (r + period - bound % period) % period;
    }
};

ColumnWindow column_window(const std::vector<const StructuredOperator *> &ops);

/// First entry where `actual` and `expected` differ by more than the
/// tolerance, scanning columns of the joint decision window in order.
std::optional<EntryWitness> first_discrepancy(const StructuredOperator &actual, const StructuredOperator &expected);
bool equals(const StructuredOperator &a, const StructuredOperator &b);
bool is_zero(const StructuredOperator &op);

/// Columns carrying a nonzero entry (the support for monomial operators).
IndexSet column_support(const StructuredOperator &op);
/// Rows carrying a nonzero entry (the range for monomial operators).
IndexSet row_support(const StructuredOperator &op);

/// At most one nonzero entry per column.
bool is_monomial(const StructuredOperator &op);

/// Monomial operator rewritten as terms with pairwise disjoint input sets:
/// one dyad per nonzero column below the window bound, one family per
/// nonzero residue class above it. nullopt if `op` is not monomial.
std::optional<StructuredOperator> monomial_normal_form(const StructuredOperator &op);

/// Orthogonal projector onto span{|i> : i in s}.
StructuredOperator diagonal_projector(const IndexSet &s);

/// op restricted to the columns in s (op composed with the projector onto s).
StructuredOperator restrict_columns(const StructuredOperator &op, const IndexSet &s);

/// One past the largest row reachable from columns below `input_limit`
/// (0 if none), read off the term structure. Used for truncation windows.
BasisIndex output_extent(const StructuredOperator &op, BasisIndex input_limit);

}  // namespace qrepeat
