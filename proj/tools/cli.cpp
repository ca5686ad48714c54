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

#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qrepeat/serialize.hpp"

namespace qrepeat::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot write '" + path.string() + "'");
    }
    f << text;
}

std::string dump(const json &doc) {
    return doc.dump(2) + "\n";
}

Instrument load_instrument(const std::string &path) {
    try {
        return parse_instrument(read_file(path));
    } catch (const ParseError &e) {
        throw ParseError(path + ": " + e.what());
    }
}

// Explicit path wins; otherwise a file in $QREPEAT_OUT_DIR; otherwise none.
std::optional<fs::path> report_path(const std::string &explicit_path, const char *default_name) {
    if (!explicit_path.empty()) {
        return fs::path(explicit_path);
    }
    if (const char *dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
        return fs::path(dir) / default_name;
    }
    return std::nullopt;
}

void emit_report(const json &doc, const std::string &explicit_path, const char *default_name, std::ostream &out) {
    if (auto path = report_path(explicit_path, default_name)) {
        write_file(*path, dump(doc));
        out << "wrote " << path->string() << "\n";
    }
}

std::string povm_summary(const Povm &p) {
    std::ostringstream s;
    for (const auto &[e, effect] : p.effects) {
        s << "P_" << e.str() << " = " << effect.str() << "\n";
    }
    s << (check_orthogonal(p) ? "orthogonal" : "not orthogonal") << "\n";
    return s.str();
}

std::string classification_summary(const PovmClassification &c) {
    std::ostringstream s;
    for (const auto &[e, parts] : c.per_outcome) {
        s << "Z_" << e.str() << " = " << parts.z.str() << "    T_" << e.str() << " = " << parts.t.str() << "\n";
    }
    s << "Z_omega = " << c.z_omega.str() << " on " << c.omega_set.str() << "\n";
    s << (c.admits_repeatable_form ? "admits a repeatable form" : "does not admit a repeatable form") << "\n";
    for (const auto &name : c.failed_invariants) {
        s << "failed invariant: " << name << "\n";
    }
    return s.str();
}

std::string wold_summary(const Instrument &inst, const MemoryModel &model) {
    std::ostringstream s;
    for (const auto &e : inst.outcomes()) {
        auto it = model.decompositions.find(e);
        if (it == model.decompositions.end()) {
            s << "outcome " << e.str() << ": no decomposition\n";
            continue;
        }
        const SplitParts &parts = model.parts.at(e);
        s << "outcome " << e.str() << ":\n";
        s << "  V = " << parts.v.str() << "\n";
        s << "  W = " << parts.w.str() << "\n";
        s << "  W^dag W = " << compose(adjoint(parts.w), parts.w).str() << "\n";
        s << "  U = " << it->second.unitary().str() << " on " << it->second.unitary_support().str() << "\n";
        for (const auto &orbit : it->second.shift_orbits()) {
            s << "  shift orbit " << orbit.id << " from " << orbit.generator << ": " << orbit.members.str() << "\n";
        }
    }
    return s.str();
}

std::string trajectory_summary(const TrajectoryRecord &record) {
    std::ostringstream s;
    s << "outcomes:";
    for (const auto &step : record.steps) {
        s << " " << step.outcome.str();
    }
    s << "\ndepths:";
    for (const auto &step : record.steps) {
        if (step.memory && step.memory->depth()) {
            s << " " << *step.memory->depth();
        } else {
            s << " -";
        }
    }
    s << "\n";
    return s.str();
}

StateVector initial_state(const std::string &spec, std::ostream &err) {
    StateVector psi = parse_state_spec(spec);
    double n2 = norm_sq(psi);
    if (std::abs(std::sqrt(n2) - 1.0) > settings().tolerance) {
        err << "warning: initial state has norm " << format_double(std::sqrt(n2)) << "; normalizing\n";
        psi = psi.normalized();
    }
    return psi;
}

Instrument demo_instrument(const DemoOptions &o) {
    if (o.name == "ex1") {
        std::vector<double> p = o.p;
        if (p.empty()) {
            p.assign(o.n, 1.0 / o.n);
        }
        return build_example_family(o.n, p);
    }
    if (o.name == "binary") {
        return build_binary_example(o.p1, o.p2);
    }
    throw Error("unknown demo '" + o.name + "' (expected ex1 or binary)");
}

}  // namespace

std::vector<std::string> write_demo_bundle(const DemoOptions &options, const fs::path &dir, std::ostream &out,
                                           std::ostream &) {
    Instrument inst = demo_instrument(options);
    CertificationReport report = certify_repeatable(inst);
    Povm p = povm(inst);
    MemoryModel model = build_memory_model(inst);
    TrajectoryRecord record = run_trajectory(inst, StateVector::basis(0), options.steps, options.seed, &model);

    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("instrument.json", serialize_instrument(inst));
    files.emplace_back("certification.json", dump(certification_to_json(report)));
    files.emplace_back("povm.json", dump(povm_to_json(p)));
    std::string classification_text;
    try {
        PovmClassification c = classify_povm(p);
        files.emplace_back("classification.json", dump(classification_to_json(c)));
        classification_text = classification_summary(c);
    } catch (const Error &e) {
        files.emplace_back("classification.json",
                           dump(json{{"schemaVersion", kReportSchema}, {"kind", "classification"}, {"error", e.what()}}));
        classification_text = std::string("classification unavailable: ") + e.what() + "\n";
    }
    files.emplace_back("wold.json", dump(wold_to_json(model)));
    files.emplace_back("trajectory.jsonl", trajectory_to_jsonl(record));

    std::ostringstream summary;
    summary << "demo " << options.name << "\n\n";
    summary << certification_summary(report) << "\n\n";
    summary << povm_summary(p) << "\n";
    summary << classification_text << "\n";
    summary << wold_summary(inst, model) << "\n";
    summary << "trajectory from |0>, seed " << options.seed << "\n" << trajectory_summary(record);
    files.emplace_back("summary.txt", summary.str());

    fs::create_directories(dir);
    std::vector<std::string> names;
    for (const auto &[name, text] : files) {
        write_file(dir / name, text);
        names.push_back(name);
    }
    out << summary.str();
    return names;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Exact certification and simulation of repeatable measurement instruments"};
    app.require_subcommand(1);
    app.fallthrough();

    Settings opts = settings();
    std::uint64_t seed = 1;
    app.add_option("--tolerance", opts.tolerance, "Amplitude tolerance for equality tests")
        ->check(CLI::PositiveNumber);
    app.add_option("--period-cap", opts.period_cap, "Largest period allowed in index-set algebra")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Seed for sampling");

    std::string instrument_path;
    std::string output_path;

    auto *certify_cmd = app.add_subcommand("certify", "Decide repeatability (exit 0 repeatable, 1 not)");
    certify_cmd->add_option("instrument", instrument_path, "Instrument file")->required();
    certify_cmd->add_option("-o,--output", output_path, "Report file");

    auto *povm_cmd = app.add_subcommand("povm", "Print the effects M_e^dag M_e");
    povm_cmd->add_option("instrument", instrument_path, "Instrument file")->required();
    povm_cmd->add_option("-o,--output", output_path, "Report file");

    auto *classify_cmd = app.add_subcommand("classify", "Split diagonal effects into Z and T parts");
    classify_cmd->add_option("instrument", instrument_path, "Instrument file")->required();
    classify_cmd->add_option("-o,--output", output_path, "Report file");

    auto *wold_cmd = app.add_subcommand("wold", "Split and Wold-decompose every outcome");
    wold_cmd->add_option("instrument", instrument_path, "Instrument file")->required();
    wold_cmd->add_option("-o,--output", output_path, "Report file");

    std::size_t steps = 10;
    std::string initial = "0";
    std::string log_path;
    auto *simulate_cmd = app.add_subcommand("simulate", "Sample a repeated-measurement trajectory");
    simulate_cmd->add_option("instrument", instrument_path, "Instrument file")->required();
    simulate_cmd->add_option("--steps", steps, "Number of measurements")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--initial", initial, "Basis index or comma-separated amplitudes");
    simulate_cmd->add_option("--log", log_path, "Trajectory log (line-delimited JSON)");

    DemoOptions demo;
    std::string demo_out;
    auto *demo_cmd = app.add_subcommand("demo", "Write a report bundle for a built-in instrument");
    demo_cmd->add_option("name", demo.name, "ex1 or binary")->required()->check(CLI::IsMember({"ex1", "binary"}));
    demo_cmd->add_option("--n", demo.n, "Number of outcomes (ex1)")->check(CLI::PositiveNumber);
    demo_cmd->add_option("--p", demo.p, "Probabilities p_1..p_n (ex1)")->delimiter(',');
    demo_cmd->add_option("--p1", demo.p1, "p1 (binary)")->check(CLI::Range(0.0, 1.0));
    demo_cmd->add_option("--p2", demo.p2, "p2 (binary)")->check(CLI::Range(0.0, 1.0));
    demo_cmd->add_option("--steps", demo.steps, "Trajectory length")->check(CLI::PositiveNumber);
    demo_cmd->add_option("--out", demo_out, "Bundle directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }

    ScopedSettings scoped(opts);
    try {
        if (certify_cmd->parsed()) {
            Instrument inst = load_instrument(instrument_path);
            CertificationReport report = certify_repeatable(inst);
            out << certification_summary(report) << "\n";
            emit_report(certification_to_json(report), output_path, "certification.json", out);
            return report.repeatable ? kRepeatable : kNotRepeatable;
        }
        if (povm_cmd->parsed()) {
            Povm p = povm(load_instrument(instrument_path));
            out << povm_summary(p);
            emit_report(povm_to_json(p), output_path, "povm.json", out);
            return kOk;
        }
        if (classify_cmd->parsed()) {
            PovmClassification c = classify_povm(povm(load_instrument(instrument_path)));
            out << classification_summary(c);
            emit_report(classification_to_json(c), output_path, "classification.json", out);
            return kOk;
        }
        if (wold_cmd->parsed()) {
            Instrument inst = load_instrument(instrument_path);
            MemoryModel model = build_memory_model(inst);
            out << wold_summary(inst, model);
            emit_report(wold_to_json(model), output_path, "wold.json", out);
            return kOk;
        }
        if (simulate_cmd->parsed()) {
            Instrument inst = load_instrument(instrument_path);
            StateVector psi = initial_state(initial, err);
            TrajectoryRecord record = run_trajectory(inst, psi, steps, seed);
            out << trajectory_summary(record);
            if (auto path = report_path(log_path, "trajectory.jsonl")) {
                write_file(*path, trajectory_to_jsonl(record));
                out << "wrote " << path->string() << "\n";
            }
            return kOk;
        }
        if (demo_cmd->parsed()) {
            demo.seed = seed;
            fs::path dir;
            if (!demo_out.empty()) {
                dir = demo_out;
            } else if (const char *env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
                dir = fs::path(env) / ("demo_" + demo.name);
            } else {
                dir = fs::path("demo_" + demo.name);
            }
            write_demo_bundle(demo, dir, out, err);
            out << "wrote bundle to " << dir.string() << "\n";
            return kOk;
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace qrepeat::cli
