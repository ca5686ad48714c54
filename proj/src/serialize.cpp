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

#include "qrepeat/serialize.hpp"

#include <charconv>
#include <sstream>

namespace qrepeat {

namespace {

[[noreturn]] void field_error(const std::string &path, const std::string &what) {
    throw ParseError(path + ": " + what);
}

const json &require_field(const json &obj, const char *key, const std::string &path) {
    if (!obj.is_object()) {
        field_error(path, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        field_error(path + "." + key, "missing field");
    }
    return *it;
}

std::uint64_t read_index(const json &obj, const char *key, const std::string &path) {
    const json &v = require_field(obj, key, path);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        field_error(path + "." + key, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

Coefficient read_coefficient(const json &obj, const std::string &path) {
    const json &v = require_field(obj, "coeff", path);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        field_error(path + ".coeff", "expected [re, im]");
    }
    Coefficient c{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        field_error(path + ".coeff", "coefficients must be finite");
    }
    return c;
}

StructuredOperator operator_from_json(const json &terms, const std::string &path) {
    if (!terms.is_array()) {
        field_error(path, "expected an array of terms");
    }
    std::vector<DyadTerm> dyads;
    std::vector<FamilyTerm> families;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const json &t = terms[k];
        const std::string tp = path + "[" + std::to_string(k) + "]";
        const json &kind = require_field(t, "kind", tp);
        if (!kind.is_string()) {
            field_error(tp + ".kind", "expected \"dyad\" or \"family\"");
        }
        Coefficient c = read_coefficient(t, tp);
        if (kind == "dyad") {
            dyads.push_back({c, read_index(t, "out", tp), read_index(t, "in", tp)});
        } else if (kind == "family") {
            FamilyTerm f{c,
                         read_index(t, "outStride", tp),
                         read_index(t, "outOffset", tp),
                         read_index(t, "inStride", tp),
                         read_index(t, "inOffset", tp),
                         t.contains("jStart") ? read_index(t, "jStart", tp) : 0};
            if (f.in_stride == 0 || f.out_stride == 0) {
                field_error(tp, "family strides must be >= 1");
            }
            families.push_back(f);
        } else {
            field_error(tp + ".kind", "unknown term kind '" + kind.get<std::string>() + "'");
        }
    }
    return StructuredOperator(std::move(dyads), std::move(families));
}

json memory_to_json(const std::optional<MemoryReading> &m) {
    if (!m) {
        return nullptr;
    }
    json depths = json::array();
    for (const auto &[d, p] : m->depths) {
        depths.push_back({d, p});
    }
    json out{{"orbit", m->orbit_id}, {"generator", m->generator}, {"depths", depths}};
    if (auto d = m->depth()) {
        out["depth"] = *d;
    }
    return out;
}

json outcome_key(const Outcome &e) {
    return e.label;
}

Coefficient parse_amplitude(std::string_view text) {
    auto fail = [&]() -> Coefficient { throw ParseError("cannot parse amplitude '" + std::string(text) + "'"); };
    auto number = [&](std::string_view s) {
        double v = 0;
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        if (s.front() == '+') {
            s.remove_prefix(1);
        }
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            fail();
        }
        return v;
    };
    if (text.empty()) {
        return fail();
    }
    if (text.back() != 'i') {
        return {number(text), 0.0};
    }
    std::string_view body = text.substr(0, text.size() - 1);
    // Split "a+bi" at the last sign that is not an exponent sign.
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            return {number(body.substr(0, k)), number(body.substr(k))};
        }
    }
    return {0.0, number(body)};
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

json coefficient_to_json(Coefficient c) {
    return json::array({c.real(), c.imag()});
}

json operator_to_json(const StructuredOperator &op) {
    json terms = json::array();
    for (const auto &d : op.dyads()) {
        terms.push_back({{"kind", "dyad"}, {"coeff", coefficient_to_json(d.coeff)}, {"out", d.out}, {"in", d.in}});
    }
    for (const auto &f : op.families()) {
        terms.push_back({{"kind", "family"},
                         {"coeff", coefficient_to_json(f.coeff)},
                         {"outStride", f.out_stride},
                         {"outOffset", f.out_offset},
                         {"inStride", f.in_stride},
                         {"inOffset", f.in_offset},
                         {"jStart", f.j_start}});
    }
    return terms;
}

json index_set_to_json(const IndexSet &s) {
    std::vector<BasisIndex> transient;
    for (BasisIndex i = 0; i < s.bound(); ++i) {
        if (s.contains(i)) {
            transient.push_back(i);
        }
    }
    std::vector<std::uint64_t> residues;
    for (std::uint64_t r = 0; r < s.period(); ++r) {
        if (s.residues()[r]) {
            residues.push_back(r);
        }
    }
    return {{"bound", s.bound()},
            {"transient", transient},
            {"period", s.period()},
            {"residues", residues},
            {"text", s.str()}};
}

json state_to_json(const StateVector &psi) {
    json out = json::array();
    for (const auto &[i, a] : psi.entries()) {
        out.push_back({i, a.real(), a.imag()});
    }
    return out;
}

json instrument_to_json(const Instrument &inst) {
    json outcomes = json::array();
    for (const auto &[e, m] : inst.operators()) {
        json entry{{"label", e.label}, {"terms", operator_to_json(m)}};
        if (!e.alias.empty()) {
            entry["alias"] = e.alias;
        }
        outcomes.push_back(entry);
    }
    return {{"schemaVersion", kInstrumentSchema}, {"outcomes", outcomes}};
}

Instrument instrument_from_json(const json &doc, bool check_completeness) {
    const json &schema = require_field(doc, "schemaVersion", "$");
    if (!schema.is_string() || schema.get<std::string>() != kInstrumentSchema) {
        field_error("$.schemaVersion", std::string("expected \"") + kInstrumentSchema + "\"");
    }
    const json &outcomes = require_field(doc, "outcomes", "$");
    if (!outcomes.is_array() || outcomes.empty()) {
        field_error("$.outcomes", "expected a non-empty array");
    }
    OperatorMap ops;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const std::string path = "outcomes[" + std::to_string(k) + "]";
        const json &o = outcomes[k];
        std::uint64_t label = read_index(o, "label", path);
        if (label > UINT32_MAX) {
            field_error(path + ".label", "label too large");
        }
        Outcome e(static_cast<std::uint32_t>(label));
        if (o.contains("alias")) {
            if (!o["alias"].is_string()) {
                field_error(path + ".alias", "expected a string");
            }
            e.alias = o["alias"].get<std::string>();
        }
        if (ops.count(e) != 0) {
            field_error(path + ".label", "duplicate outcome label " + std::to_string(label));
        }
        ops[e] = operator_from_json(require_field(o, "terms", path), path + ".terms");
    }
    return make_instrument(std::move(ops), check_completeness);
}

std::string serialize_instrument(const Instrument &inst) {
    return instrument_to_json(inst).dump(2) + "\n";
}

Instrument parse_instrument(std::string_view text, bool check_completeness) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &err) {
        std::size_t line = 1, column = 1;
        for (std::size_t k = 0; k + 1 < err.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": malformed JSON");
    }
    return instrument_from_json(doc, check_completeness);
}

json certification_to_json(const CertificationReport &report) {
    json per_outcome = json::array();
    for (const auto &[e, d] : report.per_outcome) {
        json entry{{"outcome", outcome_key(e)}, {"isometricOnRange", d.isometric_on_range}};
        entry["rangeInSupport"] = d.range_in_support ? json(*d.range_in_support) : json(nullptr);
        per_outcome.push_back(entry);
    }
    json per_pair = json::array();
    for (const auto &[key, d] : report.per_pair) {
        per_pair.push_back({{"first", outcome_key(key.first)},
                            {"second", outcome_key(key.second)},
                            {"productVanishes", d.product_vanishes},
                            {"rangesOrthogonal", d.ranges_orthogonal}});
    }
    json witnesses = json::array();
    for (const auto &w : report.witnesses) {
        witnesses.push_back({{"condition", w.condition},
                             {"row", w.entry.row},
                             {"col", w.entry.col},
                             {"expected", coefficient_to_json(w.entry.expected)},
                             {"actual", coefficient_to_json(w.entry.actual)},
                             {"deviation", w.deviation()}});
    }
    return {{"schemaVersion", kReportSchema},
            {"kind", "certification"},
            {"complete", report.complete},
            {"repeatable", report.repeatable},
            {"orthogonal", report.orthogonal},
            {"perOutcome", per_outcome},
            {"perPair", per_pair},
            {"witnesses", witnesses},
            {"summary", certification_summary(report)}};
}

std::string certification_summary(const CertificationReport &report) {
    std::ostringstream out;
    out << (report.repeatable ? "repeatable" : "not repeatable") << ", "
        << (report.orthogonal ? "orthogonal" : "non-orthogonal") << (report.complete ? "" : ", INCOMPLETE") << ".";
    if (report.repeatable && !report.orthogonal) {
        out << " Repeatable without an orthogonal POVM.";
    }
    for (const auto &w : report.witnesses) {
        out << " Fails " << w.condition << " at (" << w.entry.row << ", " << w.entry.col
            << "), deviation " << format_double(w.deviation()) << ".";
    }
    return out.str();
}

json povm_to_json(const Povm &povm) {
    json effects = json::array();
    for (const auto &[e, p] : povm.effects) {
        effects.push_back({{"outcome", outcome_key(e)}, {"terms", operator_to_json(p)}, {"text", p.str()}});
    }
    return {{"schemaVersion", kReportSchema}, {"kind", "povm"}, {"effects", effects}};
}

json classification_to_json(const PovmClassification &c) {
    json parts = json::array();
    for (const auto &[e, zt] : c.per_outcome) {
        parts.push_back({{"outcome", outcome_key(e)},
                         {"Z", operator_to_json(zt.z)},
                         {"T", operator_to_json(zt.t)},
                         {"Zset", index_set_to_json(c.z_sets.at(e))},
                         {"text", "Z = " + zt.z.str() + "; T = " + zt.t.str()}});
    }
    return {{"schemaVersion", kReportSchema},
            {"kind", "classification"},
            {"admitsRepeatableForm", c.admits_repeatable_form},
            {"parts", parts},
            {"Zomega", operator_to_json(c.z_omega)},
            {"omegaSet", index_set_to_json(c.omega_set)},
            {"failedInvariants", c.failed_invariants}};
}

json wold_to_json(const MemoryModel &model) {
    json outcomes = json::array();
    for (const auto &[e, decomp] : model.decompositions) {
        const SplitParts &parts = model.parts.at(e);
        StructuredOperator wdw = compose(adjoint(parts.w), parts.w);
        json orbits = json::array();
        for (const auto &o : decomp.shift_orbits()) {
            orbits.push_back({{"id", o.id}, {"generator", o.generator}, {"members", index_set_to_json(o.members)}});
        }
        outcomes.push_back({{"outcome", outcome_key(e)},
                            {"V", operator_to_json(parts.v)},
                            {"W", operator_to_json(parts.w)},
                            {"WdagW", operator_to_json(wdw)},
                            {"U", operator_to_json(decomp.unitary())},
                            {"S", operator_to_json(decomp.shift())},
                            {"shiftOrbits", orbits},
                            {"unitarySupport", index_set_to_json(decomp.unitary_support())},
                            {"cycles", decomp.cycles()},
                            {"text", "V = " + parts.v.str() + "; W = " + parts.w.str() + "; W^dag W = " +
                                         wdw.str()}});
    }
    return {{"schemaVersion", kReportSchema}, {"kind", "wold"}, {"outcomes", outcomes}};
}

std::string trajectory_to_jsonl(const TrajectoryRecord &record) {
    std::string out;
    json header{{"schemaVersion", kTrajectorySchema},
                {"seed", record.seed},
                {"initial", state_to_json(record.initial_state)},
                {"steps", record.steps.size()}};
    out += header.dump() + "\n";
    for (std::size_t k = 0; k < record.steps.size(); ++k) {
        const auto &s = record.steps[k];
        json line{{"step", k + 1},
                  {"outcome", outcome_key(s.outcome)},
                  {"probability", s.probability},
                  {"state", state_to_json(s.post_state)},
                  {"memory", memory_to_json(s.memory)}};
        out += line.dump() + "\n";
    }
    return out;
}

StateVector parse_state_spec(std::string_view spec) {
    if (spec.empty()) {
        throw ParseError("empty initial state");
    }
    if (spec.find(',') == std::string_view::npos && spec.find('i') == std::string_view::npos &&
        spec.find('.') == std::string_view::npos && spec.find('-') == std::string_view::npos) {
        BasisIndex index = 0;
        auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), index);
        if (ec != std::errc() || ptr != spec.data() + spec.size()) {
            throw ParseError("cannot parse basis index '" + std::string(spec) + "'");
        }
        return StateVector::basis(index);
    }
    StateVector psi;
    BasisIndex index = 0;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(',', start);
        if (end == std::string_view::npos) {
            end = spec.size();
        }
        psi.add(index++, parse_amplitude(spec.substr(start, end - start)));
        start = end + 1;
    }
    return psi;
}

}  // namespace qrepeat
