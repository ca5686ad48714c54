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

#include "qrepeat/index_set.hpp"

#include <algorithm>
#include <sstream>

#include "qrepeat/errors.hpp"

namespace qrepeat {

namespace {

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) {
                large.push_back(n / d);
            }
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

template <typename Combine>
IndexSet combine(const IndexSet &a, const IndexSet &b, Combine op) {
    std::uint64_t p = arith::lcm_capped(a.period(), b.period(), settings().period_cap);
    std::uint64_t bound = std::max(a.bound(), b.bound());
    std::vector<bool> transient(bound);
    for (std::uint64_t i = 0; i < bound; ++i) {
        transient[i] = op(a.contains(i), b.contains(i));
    }
    std::vector<bool> residues(p);
    for (std::uint64_t r = 0; r < p; ++r) {
        // Smallest representative of class r at or above the bound.
        std::uint64_t i = bound + (r + p - bound % p) % p;
        residues[r] = op(a.contains(i), b.contains(i));
    }
    return IndexSet::from_parts(std::move(transient), std::move(residues));
}

}  // namespace

IndexSet::IndexSet() : residues_{false} {
}

IndexSet IndexSet::empty() {
    return IndexSet();
}

IndexSet IndexSet::all() {
    return from_parts({}, {true});
}

IndexSet IndexSet::finite(const std::vector<BasisIndex> &elements) {
    BasisIndex top = 0;
    for (auto e : elements) {
        top = std::max(top, e + 1);
    }
    std::vector<bool> transient(top);
    for (auto e : elements) {
        transient[e] = true;
    }
    return from_parts(std::move(transient), {false});
}

IndexSet IndexSet::finite(std::initializer_list<BasisIndex> elements) {
    return finite(std::vector<BasisIndex>(elements));
}

IndexSet IndexSet::progression(std::uint64_t stride, std::uint64_t offset) {
    if (stride == 0) {
        return finite({offset});
    }
    if (stride > settings().period_cap) {
        throw PeriodCapExceeded("progression stride " + std::to_string(stride) + " exceeds period cap");
    }
    std::vector<bool> transient(offset, false);
    std::vector<bool> residues(stride, false);
    residues[offset % stride] = true;
    return from_parts(std::move(transient), std::move(residues));
}

IndexSet IndexSet::from(BasisIndex start) {
    return from_parts(std::vector<bool>(start, false), {true});
}

IndexSet IndexSet::from_parts(std::vector<bool> transient, std::vector<bool> residues) {
    if (residues.empty()) {
        throw Error("IndexSet requires a positive period");
    }
    if (residues.size() > settings().period_cap) {
        throw PeriodCapExceeded("IndexSet period " + std::to_string(residues.size()) + " exceeds cap");
    }
    IndexSet s;
    s.transient_ = std::move(transient);
    s.residues_ = std::move(residues);
    s.canonicalize();
    return s;
}

void IndexSet::canonicalize() {
    std::uint64_t p = residues_.size();
    for (std::uint64_t d : divisors(p)) {
        bool ok = true;
        for (std::uint64_t r = 0; r < p && ok; ++r) {
            ok = residues_[r] == residues_[r % d];
        }
        if (ok) {
            residues_.resize(d);
            break;
        }
    }
    p = residues_.size();
    while (!transient_.empty() && transient_.back() == residues_[(transient_.size() - 1) % p]) {
        transient_.pop_back();
    }
}

bool IndexSet::contains(BasisIndex i) const {
    if (i < transient_.size()) {
        return transient_[i];
    }
    return residues_[i % residues_.size()];
}

bool IndexSet::is_empty() const {
    return is_finite() && std::none_of(transient_.begin(), transient_.end(), [](bool b) { return b; });
}

bool IndexSet::is_finite() const {
    return std::none_of(residues_.begin(), residues_.end(), [](bool b) { return b; });
}

std::vector<BasisIndex> IndexSet::elements_below(BasisIndex limit) const {
    std::vector<BasisIndex> out;
    for (BasisIndex i = 0; i < limit; ++i) {
        if (contains(i)) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<BasisIndex> IndexSet::elements() const {
    if (!is_finite()) {
        throw UnsupportedForm("cannot enumerate infinite IndexSet " + str());
    }
    return elements_below(bound());
}

std::uint64_t IndexSet::size() const {
    return elements().size();
}

bool IndexSet::is_subset_of(const IndexSet &other) const {
    return set_difference(*this, other).is_empty();
}

std::string IndexSet::str() const {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (BasisIndex i = 0; i < bound(); ++i) {
        if (transient_[i]) {
            out << (first ? "" : ",") << i;
            first = false;
        }
    }
    if (!is_finite()) {
        std::uint64_t p = period();
        for (std::uint64_t r = 0; r < p; ++r) {
            if (residues_[r]) {
                BasisIndex start = bound() + (r + p - bound() % p) % p;
                out << (first ? "" : ",") << start << "+" << p << "j";
                first = false;
            }
        }
    }
    out << "}";
    return out.str();
}

IndexSet set_union(const IndexSet &a, const IndexSet &b) {
    return combine(a, b, [](bool x, bool y) { return x || y; });
}

IndexSet set_intersection(const IndexSet &a, const IndexSet &b) {
    return combine(a, b, [](bool x, bool y) { return x && y; });
}

IndexSet set_difference(const IndexSet &a, const IndexSet &b) {
    return combine(a, b, [](bool x, bool y) { return x && !y; });
}

IndexSet set_complement(const IndexSet &a) {
    return set_difference(IndexSet::all(), a);
}

}  // namespace qrepeat
