// Copyright 2026 The gram-realize Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gram_realize/controller.hpp"
#include "gram_realize/harness.hpp"
#include "gram_realize/scenarios.hpp"

namespace gram_realize {

using Json = nlohmann::json;

// Bit-exact CSV header of run records.
inline constexpr const char* kRecordsCsvHeader =
    "scenario,d,W,V,K,seed,calls,final_error,max_entry_error,success,wall_time_s";

// {"d","W","V","K","gram":[[...]], "columns":[[...]]}. "gram" is the full
// row-major M x M matrix; "columns" (optional) lists the M coordinate vectors.
Json gram_to_json(const GramMatrix& g, const ModelMatrix* columns = nullptr);

struct GramDocument {
  GramMatrix gram;
  std::optional<ModelMatrix> columns;
};
GramDocument gram_from_json(const Json& doc);

// {"d","W","V","K","states":[...],"effects":[...]}: every operator is a
// row-major list of d*d [re, im] pairs; effects are in (v, k) order.
Json model_to_json(const GroundTruthModel& model);
GroundTruthModel model_from_json(const Json& doc);

// Report, realized columns and the corresponding operators.
Json realization_to_json(const Realization& result);

Json solve_config_to_json(const SolveConfig& cfg);
SolveConfig solve_config_from_json(const Json& doc);
ExperimentConfig experiment_from_json(const Json& doc);

Json records_to_json(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_json(const Json& doc);
void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(std::istream& is);
// Detects CSV or JSON from the first non-blank character.
std::vector<RunRecord> read_records(std::istream& is);

void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows, OutputFormat format);
void write_histogram(std::ostream& os, const std::vector<HistogramRow>& rows,
                     OutputFormat format);
void write_records(std::ostream& os, const std::vector<RunRecord>& records, OutputFormat format);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

}  // namespace gram_realize
