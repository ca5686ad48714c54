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

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "qrepeat/arith.hpp"
#include "qrepeat/core.hpp"

namespace qrepeat {

/// An eventually periodic subset of the nonnegative integers.
///
/// Membership below `bound()` is stored explicitly; for i >= bound() it is
/// `residues[i % period()]`. Every constructed value is canonical: the period
/// is the minimal eventual period and the bound is the minimal preperiod, so
/// two sets are equal as sets iff their canonical fields are equal.
class IndexSet {
   public:
    /// The empty set.
    IndexSet();

    static IndexSet empty();
    static IndexSet all();
    static IndexSet finite(const std::vector<BasisIndex> &elements);
    static IndexSet finite(std::initializer_list<BasisIndex> elements);
    /// {offset + stride * j : j >= 0}.
    static IndexSet progression(std::uint64_t stride, std::uint64_t offset);
    /// {i : i >= start}.
    static IndexSet from(BasisIndex start);
    /// Builds and canonicalizes from raw parts. `transient` has one flag per
    /// index below its size; `residues` has one flag per residue class.
    static IndexSet from_parts(std::vector<bool> transient, std::vector<bool> residues);

    bool contains(BasisIndex i) const;

    std::uint64_t bound() const {
        return transient_.size();
    }
    std::uint64_t period() const {
        return residues_.size();
    }
    const std::vector<bool> &transient() const {
        return transient_;
    }
    const std::vector<bool> &residues() const {
        return residues_;
    }

    bool is_empty() const;
    bool is_finite() const;
    /// All elements below `limit`, ascending.
    std::vector<BasisIndex> elements_below(BasisIndex limit) const;
    /// All elements; throws UnsupportedForm for infinite sets.
    std::vector<BasisIndex> elements() const;
    /// Number of elements of a finite set.
    std::uint64_t size() const;

    bool is_subset_of(const IndexSet &other) const;
    bool operator==(const IndexSet &other) const = default;

    std::string str() const;

   private:
    void canonicalize();

    std::vector<bool> transient_;
    std::vector<bool> residues_;
};

IndexSet set_union(const IndexSet &a, const IndexSet &b);
IndexSet set_intersection(const IndexSet &a, const IndexSet &b);
IndexSet set_difference(const IndexSet &a, const IndexSet &b);
IndexSet set_complement(const IndexSet &a);

}  // namespace qrepeat
