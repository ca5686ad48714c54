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

#include "qrepeat/operator.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace qrepeat {

namespace {

std::string format_coeff(Coefficient c) {
    std::ostringstream out;
    out << std::setprecision(8);
    if (c.imag() == 0.0) {
        out << c.real();
    } else if (c.real() == 0.0) {
        out << c.imag() << "i";
    } else {
        out << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    }
    return out.str();
}

std::string format_affine(std::uint64_t stride, std::uint64_t offset) {
    std::ostringstream out;
    if (stride != 1) {
        out << stride;
    }
    out << "j";
    if (offset != 0) {
        out << "+" << offset;
    }
    return out.str();
}

auto shape_key(const FamilyTerm &f) {
    return std::make_tuple(f.in_stride, f.in_offset, f.out_stride, f.out_offset);
}

bool dyad_less(const DyadTerm &a, const DyadTerm &b) {
    return std::tie(a.out, a.in) < std::tie(b.out, b.in);
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::basis(BasisIndex i) {
    StateVector v;
    v.entries_[i] = 1.0;
    return v;
}

StateVector StateVector::from_entries(const std::map<BasisIndex, Coefficient> &entries) {
    StateVector v;
    for (const auto &[i, c] : entries) {
        v.add(i, c);
    }
    return v;
}

Coefficient StateVector::at(BasisIndex i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? Coefficient{} : it->second;
}

void StateVector::add(BasisIndex i, Coefficient c) {
    if (c == Coefficient{}) {
        return;
    }
    auto [it, inserted] = entries_.emplace(i, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Coefficient{}) {
            entries_.erase(it);
        }
    }
}

std::vector<BasisIndex> StateVector::support() const {
    std::vector<BasisIndex> out;
    for (const auto &[i, c] : entries_) {
        if (!is_negligible(c)) {
            out.push_back(i);
        }
    }
    return out;
}

StateVector StateVector::scaled(Coefficient c) const {
    StateVector v;
    for (const auto &[i, a] : entries_) {
        v.add(i, a * c);
    }
    return v;
}

StateVector StateVector::normalized() const {
    double n2 = norm_sq(*this);
    if (n2 <= 0.0) {
        throw DegenerateState("cannot normalize the zero vector");
    }
    return scaled(1.0 / std::sqrt(n2));
}

bool StateVector::nearly_equals(const StateVector &other) const {
    for (const auto &[i, c] : entries_) {
        if (!nearly_equal(c, other.at(i))) {
            return false;
        }
    }
    for (const auto &[i, c] : other.entries_) {
        if (!nearly_equal(c, at(i))) {
            return false;
        }
    }
    return true;
}

std::string StateVector::str() const {
    if (entries_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto &[i, c] : entries_) {
        out << (first ? "" : " + ") << format_coeff(c) << "|" << i << ">";
        first = false;
    }
    return out.str();
}

double norm_sq(const StateVector &psi) {
    double total = 0;
    for (const auto &[i, c] : psi.entries()) {
        total += std::norm(c);
    }
    return total;
}

Coefficient inner(const StateVector &a, const StateVector &b) {
    Coefficient total{};
    for (const auto &[i, c] : a.entries()) {
        total += std::conj(c) * b.at(i);
    }
    return total;
}

// ---------------------------------------------------------------------------
// StructuredOperator

StructuredOperator::StructuredOperator(std::vector<DyadTerm> dyads, std::vector<FamilyTerm> families)
    : dyads_(std::move(dyads)), families_(std::move(families)) {
    canonicalize();
}

StructuredOperator StructuredOperator::identity() {
    return family(1.0, 1, 0, 1, 0);
}

StructuredOperator StructuredOperator::dyad(Coefficient coeff, BasisIndex out, BasisIndex in) {
    return StructuredOperator({DyadTerm{coeff, out, in}}, {});
}

StructuredOperator StructuredOperator::family(Coefficient coeff, std::uint64_t out_stride, std::uint64_t out_offset,
                                              std::uint64_t in_stride, std::uint64_t in_offset,
                                              std::uint64_t j_start) {
    return StructuredOperator({}, {FamilyTerm{coeff, out_stride, out_offset, in_stride, in_offset, j_start}});
}

void StructuredOperator::canonicalize() {
    for (auto &f : families_) {
        if (f.in_stride == 0 || f.out_stride == 0) {
            throw Error("shift family with zero stride; use dyad terms instead");
        }
        if (f.in_stride > settings().period_cap || f.out_stride > settings().period_cap) {
            throw PeriodCapExceeded("family stride exceeds period cap");
        }
        f.out_offset += f.out_stride * f.j_start;
        f.in_offset += f.in_stride * f.j_start;
        f.j_start = 0;
    }

    while (true) {
        std::sort(families_.begin(), families_.end(),
                  [](const FamilyTerm &a, const FamilyTerm &b) { return shape_key(a) < shape_key(b); });
        std::vector<FamilyTerm> merged_families;
        for (const auto &f : families_) {
            if (!merged_families.empty() && merged_families.back().same_shape(f)) {
                merged_families.back().coeff += f.coeff;
            } else {
                merged_families.push_back(f);
            }
        }
        std::erase_if(merged_families, [](const FamilyTerm &f) { return is_negligible(f.coeff); });
        families_ = std::move(merged_families);

        std::sort(dyads_.begin(), dyads_.end(), [](const DyadTerm &x, const DyadTerm &y) { return dyad_less(x, y); });
        std::vector<DyadTerm> merged_dyads;
        for (const auto &d : dyads_) {
            if (!merged_dyads.empty() && merged_dyads.back().out == d.out && merged_dyads.back().in == d.in) {
                merged_dyads.back().coeff += d.coeff;
            } else {
                merged_dyads.push_back(d);
            }
        }
        std::erase_if(merged_dyads, [](const DyadTerm &d) { return is_negligible(d.coeff); });
        dyads_ = std::move(merged_dyads);

        bool absorbed = false;
        for (auto &f : families_) {
            while (f.out_offset >= f.out_stride && f.in_offset >= f.in_stride) {
                DyadTerm probe{{}, f.out_offset - f.out_stride, f.in_offset - f.in_stride};
                auto it = std::lower_bound(dyads_.begin(), dyads_.end(), probe, dyad_less);
                if (it == dyads_.end() || it->out != probe.out || it->in != probe.in ||
                    !nearly_equal(it->coeff, f.coeff)) {
                    break;
                }
                dyads_.erase(it);
                f.out_offset = probe.out;
                f.in_offset = probe.in;
                absorbed = true;
            }
        }
        if (!absorbed) {
            break;
        }
    }
}

StateVector StructuredOperator::column(BasisIndex c) const {
    StateVector v;
    for (const auto &d : dyads_) {
        if (d.in == c) {
            v.add(d.out, d.coeff);
        }
    }
    for (const auto &f : families_) {
        if (auto j = f.inputs().step_of(c)) {
            v.add(f.out_at(*j), f.coeff);
        }
    }
    return v;
}

Coefficient StructuredOperator::entry(BasisIndex row, BasisIndex col) const {
    return column(col).at(row);
}

std::string StructuredOperator::str() const {
    if (has_no_terms()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto &d : dyads_) {
        out << (first ? "" : " + ") << format_coeff(d.coeff) << "|" << d.out << "><" << d.in << "|";
        first = false;
    }
    for (const auto &f : families_) {
        out << (first ? "" : " + ") << format_coeff(f.coeff) << "*sum_j|" << format_affine(f.out_stride, f.out_offset)
            << "><" << format_affine(f.in_stride, f.in_offset) << "|";
        first = false;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Algebra

StateVector apply(const StructuredOperator &op, const StateVector &psi) {
    StateVector out;
    for (const auto &d : op.dyads()) {
        Coefficient a = psi.at(d.in);
        if (a != Coefficient{}) {
            out.add(d.out, d.coeff * a);
        }
    }
    for (const auto &f : op.families()) {
        for (const auto &[i, a] : psi.entries()) {
            if (auto j = f.inputs().step_of(i)) {
                out.add(f.out_at(*j), f.coeff * a);
            }
        }
    }
    return out;
}

StructuredOperator adjoint(const StructuredOperator &op) {
    std::vector<DyadTerm> dyads;
    dyads.reserve(op.dyads().size());
    for (const auto &d : op.dyads()) {
        dyads.push_back({std::conj(d.coeff), d.in, d.out});
    }
    std::vector<FamilyTerm> families;
    for (const auto &f : op.families()) {
        families.push_back({std::conj(f.coeff), f.in_stride, f.in_offset, f.out_stride, f.out_offset, f.j_start});
    }
    return StructuredOperator(std::move(dyads), std::move(families));
}

StructuredOperator compose(const StructuredOperator &a, const StructuredOperator &b) {
    std::vector<FamilyTerm> families;
    std::vector<DyadTerm> dyads;
    const std::uint64_t cap = settings().period_cap;

    // Row by row over a's dyads, which are sorted by (out, in). Products
    // with b's dyads collide heavily on dense blocks, so they are summed in a
    // slot per distinct input column of b before the canonical pass.
    const auto &ad = a.dyads();
    const auto &bd = b.dyads();
    std::vector<BasisIndex> b_inputs;
    b_inputs.reserve(bd.size());
    for (const auto &d : bd) {
        b_inputs.push_back(d.in);
    }
    std::sort(b_inputs.begin(), b_inputs.end());
    b_inputs.erase(std::unique(b_inputs.begin(), b_inputs.end()), b_inputs.end());
    std::vector<std::size_t> b_slot(bd.size());
    for (std::size_t y = 0; y < bd.size(); ++y) {
        b_slot[y] = static_cast<std::size_t>(std::lower_bound(b_inputs.begin(), b_inputs.end(), bd[y].in) -
                                             b_inputs.begin());
    }
    std::vector<Coefficient> acc(b_inputs.size());
    std::vector<char> used(b_inputs.size(), 0);
    std::vector<std::size_t> touched;
    for (std::size_t x = 0; x < ad.size();) {
        const BasisIndex out = ad[x].out;
        for (; x < ad.size() && ad[x].out == out; ++x) {
            const auto &da = ad[x];
            auto lo = std::lower_bound(bd.begin(), bd.end(), da.in,
                                       [](const DyadTerm &d, BasisIndex v) { return d.out < v; });
            for (auto it = lo; it != bd.end() && it->out == da.in; ++it) {
                const std::size_t slot = b_slot[static_cast<std::size_t>(it - bd.begin())];
                if (!used[slot]) {
                    used[slot] = 1;
                    acc[slot] = {};
                    touched.push_back(slot);
                }
                acc[slot] += da.coeff * it->coeff;
            }
            for (const auto &fb : b.families()) {
                if (auto j = fb.outputs().step_of(da.in)) {
                    dyads.push_back({da.coeff * fb.coeff, out, fb.in_at(fb.j_start + *j)});
                }
            }
        }
        for (std::size_t slot : touched) {
            dyads.push_back({acc[slot], out, b_inputs[slot]});
            used[slot] = 0;
        }
        touched.clear();
    }
    for (const auto &fa : a.families()) {
        for (const auto &db : b.dyads()) {
            if (auto k = fa.inputs().step_of(db.out)) {
                dyads.push_back({fa.coeff * db.coeff, fa.out_at(fa.j_start + *k), db.in});
            }
        }
        for (const auto &fb : b.families()) {
            // Internal indices x shared by a's inputs and b's outputs form a
            // progression x0 + L*t, t >= 0; both k and j grow with t.
            auto common = arith::intersect(fa.inputs(), fb.outputs(), cap);
            if (!common) {
                continue;
            }
            std::uint64_t k0 = (common->offset - fa.in_offset) / fa.in_stride;
            std::uint64_t j0 = (common->offset - fb.out_offset) / fb.out_stride;
            std::uint64_t l = common->stride;
            families.push_back({fa.coeff * fb.coeff, fa.out_stride * (l / fa.in_stride), fa.out_at(k0),
                                fb.in_stride * (l / fb.out_stride), fb.in_at(j0), 0});
        }
    }
    return StructuredOperator(std::move(dyads), std::move(families));
}

StructuredOperator add(const StructuredOperator &a, const StructuredOperator &b) {
    std::vector<DyadTerm> dyads = a.dyads();
    dyads.insert(dyads.end(), b.dyads().begin(), b.dyads().end());
    std::vector<FamilyTerm> families = a.families();
    families.insert(families.end(), b.families().begin(), b.families().end());
    return StructuredOperator(std::move(dyads), std::move(families));
}

StructuredOperator scale(const StructuredOperator &a, Coefficient c) {
    std::vector<DyadTerm> dyads = a.dyads();
    for (auto &d : dyads) {
        d.coeff *= c;
    }
    std::vector<FamilyTerm> families = a.families();
    for (auto &f : families) {
        f.coeff *= c;
    }
    return StructuredOperator(std::move(dyads), std::move(families));
}

StructuredOperator subtract(const StructuredOperator &a, const StructuredOperator &b) {
    return add(a, scale(b, -1.0));
}

StructuredOperator operator+(const StructuredOperator &a, const StructuredOperator &b) {
    return add(a, b);
}

StructuredOperator operator-(const StructuredOperator &a, const StructuredOperator &b) {
    return subtract(a, b);
}

StructuredOperator operator*(const StructuredOperator &a, const StructuredOperator &b) {
    return compose(a, b);
}

StructuredOperator operator*(Coefficient c, const StructuredOperator &a) {
    return scale(a, c);
}

// ---------------------------------------------------------------------------
// Decision window

ColumnWindow column_window(const std::vector<const StructuredOperator *> &ops) {
    ColumnWindow w;
    const std::uint64_t cap = settings().period_cap;
    std::vector<const FamilyTerm *> families;
    for (const auto *op : ops) {
        for (const auto &d : op->dyads()) {
            w.bound = std::max(w.bound, d.in + 1);
        }
        for (const auto &f : op->families()) {
            w.bound = std::max(w.bound, f.inputs().offset + 1);
            w.period = arith::lcm_capped(w.period, f.in_stride, cap);
            families.push_back(&f);
        }
    }
    // Family f puts column c on row oo + os*(c - io)/is. Two lines with
    // different slopes meet at most once; push the bound past every meeting.
    for (std::size_t x = 0; x < families.size(); ++x) {
        for (std::size_t y = x + 1; y < families.size(); ++y) {
            const auto &f = *families[x];
            const auto &g = *families[y];
            __int128 fos = f.out_stride, fis = f.in_stride, fio = f.inputs().offset, foo = f.outputs().offset;
            __int128 gos = g.out_stride, gis = g.in_stride, gio = g.inputs().offset, goo = g.outputs().offset;
            __int128 den = fos * gis - gos * fis;
            if (den == 0) {
                continue;
            }
            __int128 num = fos * gis * fio - gos * fis * gio + fis * gis * (goo - foo);
            if (den < 0) {
                den = -den;
                num = -num;
            }
            if (num < 0) {
                continue;
            }
            __int128 meet = num / den;
            w.bound = std::max<BasisIndex>(w.bound, static_cast<BasisIndex>(meet + 1));
        }
    }
    return w;
}

std::optional<EntryWitness> first_discrepancy(const StructuredOperator &actual, const StructuredOperator &expected) {
    ColumnWindow w = column_window({&actual, &expected});
    for (BasisIndex c = 0; c < w.decision_limit(); ++c) {
        StateVector x = actual.column(c);
        StateVector y = expected.column(c);
        std::map<BasisIndex, bool> rows;
        for (const auto &[r, v] : x.entries()) {
            rows[r] = true;
        }
        for (const auto &[r, v] : y.entries()) {
            rows[r] = true;
        }
        for (const auto &[r, unused] : rows) {
            if (!nearly_equal(x.at(r), y.at(r))) {
                return EntryWitness{r, c, y.at(r), x.at(r)};
            }
        }
    }
    return std::nullopt;
}

bool equals(const StructuredOperator &a, const StructuredOperator &b) {
    return !first_discrepancy(a, b).has_value();
}

bool is_zero(const StructuredOperator &op) {
    return op.has_no_terms() || equals(op, StructuredOperator::zero());
}

namespace {

std::size_t nonzero_count(const StateVector &v) {
    return v.support().size();
}

}  // namespace

IndexSet column_support(const StructuredOperator &op) {
    ColumnWindow w = column_window({&op});
    std::vector<bool> transient(w.bound);
    for (BasisIndex c = 0; c < w.bound; ++c) {
        transient[c] = nonzero_count(op.column(c)) > 0;
    }
    std::vector<bool> residues(w.period);
    for (std::uint64_t r = 0; r < w.period; ++r) {
        residues[r] = nonzero_count(op.column(w.representative(r))) > 0;
    }
    return IndexSet::from_parts(std::move(transient), std::move(residues));
}

IndexSet row_support(const StructuredOperator &op) {
    return column_support(adjoint(op));
}

bool is_monomial(const StructuredOperator &op) {
    ColumnWindow w = column_window({&op});
    for (BasisIndex c = 0; c < w.bound + w.period; ++c) {
        if (nonzero_count(op.column(c)) > 1) {
            return false;
        }
    }
    return true;
}

std::optional<StructuredOperator> monomial_normal_form(const StructuredOperator &op) {
    if (!is_monomial(op)) {
        return std::nullopt;
    }
    ColumnWindow w = column_window({&op});
    auto single = [&](BasisIndex c) -> std::optional<std::pair<BasisIndex, Coefficient>> {
        StateVector v = op.column(c);
        for (const auto &[r, a] : v.entries()) {
            if (!is_negligible(a)) {
                return std::make_pair(r, a);
            }
        }
        return std::nullopt;
    };
    std::vector<DyadTerm> dyads;
    for (BasisIndex c = 0; c < w.bound; ++c) {
        if (auto e = single(c)) {
            dyads.push_back({e->second, e->first, c});
        }
    }
    std::vector<FamilyTerm> families;
    for (std::uint64_t r = 0; r < w.period; ++r) {
        BasisIndex c0 = w.representative(r);
        auto e0 = single(c0);
        if (!e0) {
            continue;
        }
        auto e1 = single(c0 + w.period);
        families.push_back({e0->second, e1->first - e0->first, e0->first, w.period, c0, 0});
    }
    return StructuredOperator(std::move(dyads), std::move(families));
}

StructuredOperator diagonal_projector(const IndexSet &s) {
    std::vector<DyadTerm> dyads;
    for (BasisIndex i = 0; i < s.bound(); ++i) {
        if (s.contains(i)) {
            dyads.push_back({1.0, i, i});
        }
    }
    std::vector<FamilyTerm> families;
    const std::uint64_t p = s.period();
    for (std::uint64_t r = 0; r < p; ++r) {
        if (s.residues()[r]) {
            BasisIndex c0 = s.bound() + (r + p - s.bound() % p) % p;
            families.push_back({1.0, p, c0, p, c0, 0});
        }
    }
    return StructuredOperator(std::move(dyads), std::move(families));
}

StructuredOperator restrict_columns(const StructuredOperator &op, const IndexSet &s) {
    return compose(op, diagonal_projector(s));
}

BasisIndex output_extent(const StructuredOperator &op, BasisIndex input_limit) {
    BasisIndex extent = 0;
    for (const auto &d : op.dyads()) {
        if (d.in < input_limit) {
            extent = std::max(extent, d.out + 1);
        }
    }
    for (const auto &f : op.families()) {
        auto in = f.inputs();
        if (in.offset < input_limit) {
            std::uint64_t jmax = (input_limit - 1 - in.offset) / in.stride;
            extent = std::max(extent, f.outputs().offset + f.out_stride * jmax + 1);
        }
    }
    return extent;
}

}  // namespace qrepeat
