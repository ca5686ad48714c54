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

#include <string>
#include <string_view>

#include "json.hpp"
#include "qrepeat/certify.hpp"
#include "qrepeat/simulate.hpp"
#include "qrepeat/wold.hpp"

namespace qrepeat {

using json = nlohmann::json;

inline constexpr const char *kInstrumentSchema = "qrepeat.instrument/1";
inline constexpr const char *kReportSchema = "qrepeat.report/1";
inline constexpr const char *kTrajectorySchema = "qrepeat.trajectory/1";

json coefficient_to_json(Coefficient c);
json operator_to_json(const StructuredOperator &op);
json index_set_to_json(const IndexSet &s);
json state_to_json(const StateVector &psi);

json instrument_to_json(const Instrument &inst);
/// Throws ParseError naming the offending field (e.g.
/// "outcomes[1].terms[0].coeff"), then whatever make_instrument throws.
Instrument instrument_from_json(const json &doc, bool check_completeness = true);

/// Pretty-printed instrument file with a trailing newline.
std::string serialize_instrument(const Instrument &inst);
/// Parses instrument file text. Syntax errors report line and column.
Instrument parse_instrument(std::string_view text, bool check_completeness = true);

json certification_to_json(const CertificationReport &report);
json povm_to_json(const Povm &povm);
json classification_to_json(const PovmClassification &c);
json wold_to_json(const MemoryModel &model);

/// Human-readable text for a certification report.
std::string certification_summary(const CertificationReport &report);

/// Line-delimited log: one header record, then one record per step.
std::string trajectory_to_jsonl(const TrajectoryRecord &record);

/// "3" is |3>; "a0,a1,..." lists amplitudes of |0>, |1>, ...; each amplitude
/// is a real number, "bi", or "a+bi". The result is not normalized.
StateVector parse_state_spec(std::string_view spec);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace qrepeat
