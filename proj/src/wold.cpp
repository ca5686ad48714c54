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

#include "qrepeat/wold.hpp"

#include <algorithm>
#include <set>

namespace qrepeat {

namespace {

// Orbit walks longer than this are reported as unsupported rather than
// looping forever on a malformed map.
constexpr std::uint64_t kMaxOrbitSteps = 1'000'000;

}  // namespace

SplitParts split(const StructuredOperator &m) {
    if (!is_monomial(m)) {
        throw UnsupportedForm("split requires a monomial operator (at most one nonzero per column)");
    }
    IndexSet range = row_support(m);
    IndexSet support = column_support(m);
    SplitParts parts{restrict_columns(m, range), restrict_columns(m, set_difference(support, range))};

    auto require = [](const std::string &what, const StructuredOperator &lhs, const StructuredOperator &rhs) {
        if (auto witness = first_discrepancy(lhs, rhs)) {
            throw SplitInvariantViolation("split invariant '" + what + "' fails", witness);
        }
    };
    const auto zero = StructuredOperator::zero();
    require("M = V + W", add(parts.v, parts.w), m);
    StructuredOperator vv = compose(adjoint(parts.v), parts.v);
    require("V^dag V is a projector", compose(vv, vv), vv);
    require("V^dag W = 0", compose(adjoint(parts.v), parts.w), zero);
    require("W^dag V = 0", compose(adjoint(parts.w), parts.v), zero);
    return parts;
}

std::optional<BasisIndex> WoldDecomposition::image(BasisIndex i) const {
    for (const auto &d : normal_.dyads()) {
        if (d.in == i) {
            return d.out;
        }
    }
    for (const auto &f : normal_.families()) {
        if (auto j = f.inputs().step_of(i)) {
            return f.out_at(*j);
        }
    }
    return std::nullopt;
}

std::optional<BasisIndex> WoldDecomposition::preimage(BasisIndex i) const {
    for (const auto &d : normal_.dyads()) {
        if (d.out == i) {
            return d.in;
        }
    }
    for (const auto &f : normal_.families()) {
        if (auto j = f.outputs().step_of(i)) {
            return f.in_at(*j);
        }
    }
    return std::nullopt;
}

std::optional<std::pair<std::size_t, std::uint64_t>> WoldDecomposition::locate(BasisIndex i) const {
    if (!shift_support_.contains(i)) {
        return std::nullopt;
    }
    BasisIndex x = i;
    std::uint64_t depth = 0;
    while (!generators_.contains(x)) {
        auto prev = preimage(x);
        if (!prev || depth > kMaxOrbitSteps) {
            return std::nullopt;
        }
        x = *prev;
        ++depth;
    }
    for (const auto &orbit : orbits_) {
        if (orbit.generator == x) {
            return std::make_pair(orbit.id, depth);
        }
    }
    return std::nullopt;
}

WoldDecomposition wold_decompose(const StructuredOperator &v) {
    auto normal = monomial_normal_form(v);
    if (!normal) {
        throw UnsupportedForm("Wold decomposition requires a monomial operator");
    }
    for (const auto &d : normal->dyads()) {
        if (std::abs(std::abs(d.coeff) - 1.0) > settings().tolerance) {
            throw NotIsometricOnSupport("column " + std::to_string(d.in) + " has amplitude " +
                                        std::to_string(std::abs(d.coeff)));
        }
    }
    for (const auto &f : normal->families()) {
        if (std::abs(std::abs(f.coeff) - 1.0) > settings().tolerance) {
            throw NotIsometricOnSupport("column " + std::to_string(f.in_offset) + " has amplitude " +
                                        std::to_string(std::abs(f.coeff)));
        }
        if (f.in_stride != f.out_stride) {
            throw UnsupportedForm("Wold decomposition supports only fixed-offset families; got in stride " +
                                  std::to_string(f.in_stride) + ", out stride " + std::to_string(f.out_stride));
        }
    }
    IndexSet support = column_support(v);
    IndexSet range = row_support(v);
    if (auto witness = first_discrepancy(compose(adjoint(v), v), diagonal_projector(support))) {
        throw NotIsometricOnSupport("V^dag V is not the support projector at " + witness->str());
    }
    if (!range.is_subset_of(support)) {
        throw UnsupportedForm("range of V leaves its support; V is not an isometry of Supp(V)");
    }
    IndexSet generators = set_difference(support, range);
    if (!generators.is_finite()) {
        throw UnsupportedForm("infinitely many shift generators");
    }

    WoldDecomposition out;
    out.v_ = v;
    out.normal_ = *normal;
    out.generators_ = generators;
    const ColumnWindow window = column_window({&*normal});

    // Above the window bound every index moves by an offset fixed by its
    // residue class, so a forward orbit becomes periodic once it revisits a
    // class without dropping below the bound in between.
    IndexSet shift_support;
    for (BasisIndex g : generators.elements()) {
        std::vector<BasisIndex> points;
        std::map<std::uint64_t, std::size_t> first_visit;
        BasisIndex x = g;
        std::size_t segment_start = 0;
        std::uint64_t displacement = 0;
        while (true) {
            if (points.size() > kMaxOrbitSteps) {
                throw UnsupportedForm("orbit of generator " + std::to_string(g) + " does not settle");
            }
            if (x >= window.bound) {
                std::uint64_t r = x % window.period;
                auto it = first_visit.find(r);
                if (it != first_visit.end() && x > points[it->second]) {
                    segment_start = it->second;
                    displacement = x - points[it->second];
                    break;
                }
                first_visit[r] = points.size();
            } else {
                first_visit.clear();
            }
            points.push_back(x);
            auto next = out.image(x);
            if (!next) {
                throw UnsupportedForm("orbit of generator " + std::to_string(g) + " leaves the support");
            }
            x = *next;
        }
        if (displacement > settings().period_cap) {
            throw PeriodCapExceeded("orbit period " + std::to_string(displacement) + " exceeds cap");
        }
        BasisIndex top = *std::max_element(points.begin(), points.end()) + 1;
        std::vector<bool> transient(top, false);
        std::vector<bool> residues(displacement, false);
        for (std::size_t k = 0; k < points.size(); ++k) {
            if (k < segment_start) {
                transient[points[k]] = true;
                continue;
            }
            residues[points[k] % displacement] = true;
            for (BasisIndex y = points[k]; y < top; y += displacement) {
                transient[y] = true;
            }
        }
        ShiftOrbit orbit{out.orbits_.size(), g, IndexSet::from_parts(std::move(transient), std::move(residues))};
        shift_support = set_union(shift_support, orbit.members);
        out.orbits_.push_back(std::move(orbit));
    }
    out.shift_support_ = shift_support;
    out.unitary_support_ = set_difference(support, shift_support);
    out.unitary_ = restrict_columns(v, out.unitary_support_);
    out.shift_ = restrict_columns(v, out.shift_support_);
    if (auto witness = first_discrepancy(add(out.unitary_, out.shift_), v)) {
        throw Error("internal: U + S != V at " + witness->str());
    }
    if (!(row_support(out.unitary_) == out.unitary_support_)) {
        throw Error("internal: unitary part does not map its support onto itself");
    }

    std::set<BasisIndex> seen;
    for (BasisIndex i : out.unitary_support_.elements_below(window.bound + window.period)) {
        if (seen.count(i) != 0) {
            continue;
        }
        std::vector<BasisIndex> cycle{i};
        BasisIndex x = *out.image(i);
        while (x != i && cycle.size() <= kMaxOrbitSteps) {
            cycle.push_back(x);
            x = *out.image(x);
        }
        if (x == i) {
            seen.insert(cycle.begin(), cycle.end());
            out.cycles_.push_back(std::move(cycle));
        }
    }
    return out;
}

std::optional<MemoryReading> read_memory(const WoldDecomposition &decomp, const StateVector &psi) {
    double total = norm_sq(psi);
    if (total <= 0) {
        return std::nullopt;
    }
    MemoryReading reading;
    bool first = true;
    for (const auto &[i, a] : psi.entries()) {
        if (is_negligible(a)) {
            continue;
        }
        auto where = decomp.locate(i);
        if (!where) {
            return std::nullopt;
        }
        if (first) {
            reading.orbit_id = where->first;
            reading.generator = decomp.shift_orbits()[where->first].generator;
            first = false;
        } else if (reading.orbit_id != where->first) {
            return std::nullopt;
        }
        reading.depths[where->second] += std::norm(a) / total;
    }
    if (first) {
        return std::nullopt;
    }
    return reading;
}

MemoryModel build_memory_model(const Instrument &inst) {
    MemoryModel model;
    for (const auto &[e, m] : inst.operators()) {
        try {
            SplitParts parts = split(m);
            WoldDecomposition decomp = wold_decompose(parts.v);
            model.parts.emplace(e, std::move(parts));
            model.decompositions.emplace(e, std::move(decomp));
        } catch (const Error &) {
            // No memory readout for this outcome.
        }
    }
    return model;
}

}  // namespace qrepeat
