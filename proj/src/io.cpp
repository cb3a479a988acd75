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


#include "gram_realize/io.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "gram_realize/errors.hpp"

namespace gram_realize {

namespace {

template <typename T>
T require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key))
    throw InputError(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T optional_field(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  return require<T>(doc, key);
}

void check_keys(const Json& doc, std::initializer_list<const char*> allowed, const char* where) {
  if (!doc.is_object()) throw InputError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw InputError(std::string("unknown field '") + key + "' in " + where);
  }
}

LayoutSpec layout_from(const Json& doc) {
  LayoutSpec l{require<int>(doc, "d"), require<int>(doc, "W"), require<int>(doc, "V"),
               require<int>(doc, "K")};
  l.validate();
  return l;
}

void put_layout(Json& doc, const LayoutSpec& l) {
  doc["d"] = l.d;
  doc["W"] = l.W;
  doc["V"] = l.V;
  doc["K"] = l.K;
}

Json operator_to_json(const HermitianMatrix& h) {
  Json out = Json::array();
  const CMatrix& m = h.entries();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  return out;
}

HermitianMatrix operator_from_json(const Json& doc, int d) {
  if (!doc.is_array() || static_cast<int>(doc.size()) != d * d)
    throw InputError("operator must be a list of d*d [re, im] pairs");
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Json& z = doc[i * d + j];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw InputError("complex entry must be [re, im]");
      m(i, j) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  return HermitianMatrix(std::move(m));
}

RMatrix matrix_from_json(const Json& doc, int rows, int cols, const char* what) {
  if (!doc.is_array() || static_cast<int>(doc.size()) != rows)
    throw InputError(std::string(what) + " must have " + std::to_string(rows) + " rows");
  RMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const Json& row = doc[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw InputError(std::string(what) + " row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    for (int j = 0; j < cols; ++j) {
      if (!row[j].is_number()) throw InputError(std::string(what) + " entries must be numbers");
      out(i, j) = row[j].get<double>();
    }
  }
  return out;
}

Json columns_to_json(const ModelMatrix& p) {
  Json cols = Json::array();
  for (int i = 0; i < p.size(); ++i) {
    Json c = Json::array();
    for (Eigen::Index a = 0; a < p.matrix().rows(); ++a) c.push_back(p.matrix()(a, i));
    cols.push_back(std::move(c));
  }
  return cols;
}

Json segments_to_json(const std::vector<ModeSegment>& segments) {
  Json out = Json::array();
  for (const auto& s : segments) out.push_back({{"mode", mode_name(s.mode)}, {"calls", s.calls}});
  return out;
}

std::vector<ModeSegment> segments_from_json(const Json& doc) {
  std::vector<ModeSegment> out;
  if (!doc.is_array()) throw InputError("mode_segments must be a list");
  for (const auto& s : doc)
    out.push_back({parse_mode(require<std::string>(s, "mode")), require<long>(s, "calls")});
  return out;
}

}  // namespace

Json gram_to_json(const GramMatrix& g, const ModelMatrix* columns) {
  Json doc;
  put_layout(doc, g.layout());
  Json rows = Json::array();
  for (int i = 0; i < g.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < g.size(); ++j) row.push_back(g(i, j));
    rows.push_back(std::move(row));
  }
  doc["gram"] = std::move(rows);
  if (columns != nullptr) doc["columns"] = columns_to_json(*columns);
  return doc;
}

GramDocument gram_from_json(const Json& doc) {
  const LayoutSpec l = layout_from(doc);
  const int m = l.columns();
  if (!doc.contains("gram")) throw InputError("missing field 'gram'");
  GramDocument out{GramMatrix(l, matrix_from_json(doc.at("gram"), m, m, "gram")), std::nullopt};
  if (doc.contains("columns")) {
    const RMatrix t = matrix_from_json(doc.at("columns"), m, l.coord_length(), "columns");
    out.columns = ModelMatrix(l, t.transpose());
  }
  return out;
}

Json model_to_json(const GroundTruthModel& model) {
  Json doc;
  put_layout(doc, model.layout);
  Json states = Json::array();
  for (const auto& s : model.states) states.push_back(operator_to_json(s));
  Json effects = Json::array();
  for (const auto& group : model.effects)
    for (const auto& e : group) effects.push_back(operator_to_json(e));
  doc["states"] = std::move(states);
  doc["effects"] = std::move(effects);
  return doc;
}

GroundTruthModel model_from_json(const Json& doc) {
  GroundTruthModel m;
  m.layout = layout_from(doc);
  const auto& l = m.layout;
  const Json& states = doc.at("states");
  const Json& effects = doc.at("effects");
  if (!states.is_array() || static_cast<int>(states.size()) != l.W)
    throw InputError("'states' must list W operators");
  if (!effects.is_array() || static_cast<int>(effects.size()) != l.V * l.K)
    throw InputError("'effects' must list V*K operators");
  for (const auto& s : states) m.states.push_back(operator_from_json(s, l.d));
  m.effects.resize(l.V);
  for (int v = 0; v < l.V; ++v)
    for (int k = 0; k < l.K; ++k)
      m.effects[v].push_back(operator_from_json(effects[l.effect_index(v, k) - l.W], l.d));
  return m;
}

Json realization_to_json(const Realization& result) {
  const auto& p = result.model;
  const auto& l = p.layout();
  const auto& r = result.report;
  Json doc;
  put_layout(doc, l);
  doc["converged"] = r.converged;
  doc["final_error"] = r.final_error;
  doc["final_max_entry_error"] = r.final_max_entry_error;
  doc["subroutine_calls"] = r.subroutine_calls;
  doc["budget_exhausted"] = r.budget_exhausted;
  doc["wall_time_s"] = r.wall_time;
  doc["mode_history"] = segments_to_json(r.mode_history);
  doc["normalization"] = {{"max_trace_error", r.max_trace_error},
                          {"max_completeness_error", r.max_completeness_error},
                          {"min_eigenvalue", r.min_eigenvalue}};
  doc["columns"] = columns_to_json(p);
  Json states = Json::array(), effects = Json::array();
  for (int i = 0; i < p.size(); ++i)
    (i < l.W ? states : effects).push_back(operator_to_json(p.operator_at(i)));
  doc["states"] = std::move(states);
  doc["effects"] = std::move(effects);
  return doc;
}

Json solve_config_to_json(const SolveConfig& cfg) {
  const auto& s = cfg.subsolver;
  const auto& c = cfg.switching;
  return {{"error_threshold", cfg.error_threshold},
          {"entry_threshold", cfg.entry_threshold},
          {"shift_stuck_tolerance", cfg.shift_stuck_tolerance},
          {"neighborhood_size", cfg.neighborhood_size},
          {"max_subroutine_calls", cfg.max_subroutine_calls},
          {"time_limit_s", cfg.time_limit_s},
          {"rng_seed", cfg.rng_seed},
          {"subsolver",
           {{"max_iterations", s.max_iterations},
            {"objective_tolerance", s.objective_tolerance},
            {"psd_eigen_tolerance", s.psd_eigen_tolerance},
            {"fixed_point_tolerance", s.fixed_point_tolerance}}},
          {"switching",
           {{"heads_probability", c.heads_probability},
            {"fast_to_reg", {c.fast_to_reg_heads, c.fast_to_reg_tails}},
            {"reg_to_partial", {c.reg_to_partial_heads, c.reg_to_partial_tails}},
            {"no_zenith_sweeps", {c.no_zenith_sweeps_heads, c.no_zenith_sweeps_tails}}}}};
}

SolveConfig solve_config_from_json(const Json& doc) {
  check_keys(doc,
             {"error_threshold", "entry_threshold", "shift_stuck_tolerance", "neighborhood_size",
              "max_subroutine_calls", "time_limit_s", "rng_seed", "subsolver", "switching"},
             "solve config");
  SolveConfig cfg;
  cfg.error_threshold = optional_field(doc, "error_threshold", cfg.error_threshold);
  cfg.entry_threshold = optional_field(doc, "entry_threshold", cfg.entry_threshold);
  cfg.shift_stuck_tolerance = optional_field(doc, "shift_stuck_tolerance", cfg.shift_stuck_tolerance);
  cfg.neighborhood_size = optional_field(doc, "neighborhood_size", cfg.neighborhood_size);
  cfg.max_subroutine_calls = optional_field(doc, "max_subroutine_calls", cfg.max_subroutine_calls);
  cfg.time_limit_s = optional_field(doc, "time_limit_s", cfg.time_limit_s);
  cfg.rng_seed = optional_field<std::uint64_t>(doc, "rng_seed", cfg.rng_seed);
  if (doc.contains("subsolver")) {
    const Json& s = doc.at("subsolver");
    check_keys(s, {"max_iterations", "objective_tolerance", "psd_eigen_tolerance",
                   "fixed_point_tolerance"}, "subsolver config");
    auto& o = cfg.subsolver;
    o.max_iterations = optional_field(s, "max_iterations", o.max_iterations);
    o.objective_tolerance = optional_field(s, "objective_tolerance", o.objective_tolerance);
    o.psd_eigen_tolerance = optional_field(s, "psd_eigen_tolerance", o.psd_eigen_tolerance);
    o.fixed_point_tolerance = optional_field(s, "fixed_point_tolerance", o.fixed_point_tolerance);
  }
  if (doc.contains("switching")) {
    const Json& s = doc.at("switching");
    check_keys(s, {"heads_probability", "fast_to_reg", "reg_to_partial", "no_zenith_sweeps"},
               "switching config");
    auto& c = cfg.switching;
    c.heads_probability = optional_field(s, "heads_probability", c.heads_probability);
    auto pair = [&](const char* key, auto& heads, auto& tails) {
      if (!s.contains(key)) return;
      using T = std::decay_t<decltype(heads)>;
      const auto v = require<std::vector<T>>(s, key);
      if (v.size() != 2) throw InputError(std::string(key) + " must be a [heads, tails] pair");
      heads = v[0];
      tails = v[1];
    };
    pair("fast_to_reg", c.fast_to_reg_heads, c.fast_to_reg_tails);
    pair("reg_to_partial", c.reg_to_partial_heads, c.reg_to_partial_tails);
    pair("no_zenith_sweeps", c.no_zenith_sweeps_heads, c.no_zenith_sweeps_tails);
  }
  return cfg;
}

ExperimentConfig experiment_from_json(const Json& doc) {
  check_keys(doc,
             {"scenarios", "runs_per_scenario", "solve", "output_path", "output_format",
              "workers", "bucket_width", "keep_models"},
             "experiment config");
  ExperimentConfig cfg;
  cfg.runs_per_scenario = optional_field(doc, "runs_per_scenario", cfg.runs_per_scenario);
  cfg.output_path = optional_field<std::string>(doc, "output_path", "");
  cfg.output_format = parse_format(optional_field<std::string>(doc, "output_format", "csv"));
  cfg.workers = optional_field(doc, "workers", cfg.workers);
  cfg.bucket_width = optional_field(doc, "bucket_width", cfg.bucket_width);
  cfg.keep_models = optional_field(doc, "keep_models", cfg.keep_models);
  if (doc.contains("solve")) cfg.solve = solve_config_from_json(doc.at("solve"));
  const Json scenarios = optional_field<Json>(doc, "scenarios", Json::array());
  if (!scenarios.is_array()) throw InputError("'scenarios' must be a list");
  for (const auto& s : scenarios) {
    check_keys(s, {"kind", "d", "W", "V", "K", "seed", "runs", "time_limit_s", "eta_bounds",
                  "mu_bounds"},
               "scenario entry");
    ExperimentEntry e;
    e.scenario.kind = parse_scenario(require<std::string>(s, "kind"));
    e.scenario.layout = layout_from(s);
    e.scenario.seed = optional_field<std::uint64_t>(s, "seed", 0);
    e.scenario.eta_bounds = optional_field(s, "eta_bounds", e.scenario.eta_bounds);
    e.scenario.mu_bounds = optional_field(s, "mu_bounds", e.scenario.mu_bounds);
    e.runs = optional_field(s, "runs", 0);
    e.time_limit_s = optional_field(s, "time_limit_s", 0.0);
    cfg.scenarios.push_back(e);
  }
  cfg.validate();
  return cfg;
}

Json records_to_json(const std::vector<RunRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records) {
    Json j;
    j["scenario"] = scenario_name(r.scenario);
    put_layout(j, r.layout);
    j["seed"] = r.seed;
    j["calls"] = r.subroutine_calls;
    j["final_error"] = r.final_error;
    j["max_entry_error"] = r.final_max_entry_error;
    j["success"] = r.success;
    j["wall_time_s"] = r.wall_time;
    j["mode_segments"] = segments_to_json(r.mode_segments);
    if (!r.failure_reason.empty()) j["failure_reason"] = r.failure_reason;
    if (r.model) j["columns"] = columns_to_json(*r.model);
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<RunRecord> records_from_json(const Json& doc) {
  if (!doc.is_array()) throw InputError("records document must be a list");
  std::vector<RunRecord> out;
  for (const auto& j : doc) {
    RunRecord r;
    r.scenario = parse_scenario(require<std::string>(j, "scenario"));
    r.layout = layout_from(j);
    r.seed = require<std::uint64_t>(j, "seed");
    r.subroutine_calls = require<long>(j, "calls");
    r.final_error = require<double>(j, "final_error");
    r.final_max_entry_error = require<double>(j, "max_entry_error");
    r.success = require<bool>(j, "success");
    r.wall_time = require<double>(j, "wall_time_s");
    if (j.contains("mode_segments")) r.mode_segments = segments_from_json(j.at("mode_segments"));
    r.failure_reason = optional_field<std::string>(j, "failure_reason", "");
    if (j.contains("columns")) {
      const RMatrix t = matrix_from_json(j.at("columns"), r.layout.columns(),
                                         r.layout.coord_length(), "columns");
      r.model = ModelMatrix(r.layout, t.transpose());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kRecordsCsvHeader << '\n';
  os << std::setprecision(17);
  for (const auto& r : records) {
    os << scenario_name(r.scenario) << ',' << r.layout.d << ',' << r.layout.W << ','
       << r.layout.V << ',' << r.layout.K << ',' << r.seed << ',' << r.subroutine_calls << ','
       << r.final_error << ',' << r.final_max_entry_error << ',' << (r.success ? 1 : 0) << ','
       << r.wall_time << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, int line) {
  std::istringstream ss(s);
  T v{};
  ss >> v;
  if (ss.fail() || !ss.eof())
    throw InputError("records CSV line " + std::to_string(line) + ": cannot parse '" + s + "'");
  return v;
}

}  // namespace

std::vector<RunRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("records CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsCsvHeader) throw InputError("records CSV has an unexpected header");
  std::vector<RunRecord> out;
  int n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 11)
      throw InputError("records CSV line " + std::to_string(n) + " has " +
                       std::to_string(f.size()) + " fields, expected 11");
    RunRecord r;
    r.scenario = parse_scenario(f[0]);
    r.layout = {parse_number<int>(f[1], n), parse_number<int>(f[2], n),
                parse_number<int>(f[3], n), parse_number<int>(f[4], n)};
    r.layout.validate();
    r.seed = parse_number<std::uint64_t>(f[5], n);
    r.subroutine_calls = parse_number<long>(f[6], n);
    r.final_error = parse_number<double>(f[7], n);
    r.final_max_entry_error = parse_number<double>(f[8], n);
    const int success = parse_number<int>(f[9], n);
    if (success != 0 && success != 1)
      throw InputError("records CSV line " + std::to_string(n) + ": success must be 0 or 1");
    r.success = success == 1;
    r.wall_time = parse_number<double>(f[10], n);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> read_records(std::istream& is) {
  is >> std::ws;
  const int c = is.peek();
  if (c == '[' || c == '{') {
    try {
      return records_from_json(Json::parse(is));
    } catch (const Json::exception& e) {
      throw InputError(std::string("records JSON: ") + e.what());
    }
  }
  return read_records_csv(is);
}

void write_summary(std::ostream& os, const std::vector<SummaryRow>& rows, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    Json out = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["scenario"] = scenario_name(r.scenario);
      put_layout(j, r.layout);
      j["successes"] = r.successes;
      j["failures"] = r.failures;
      j["min_calls"] = r.min_calls;
      j["median_calls"] = r.median_calls;
      j["max_calls"] = r.max_calls;
      out.push_back(std::move(j));
    }
    os << out.dump(2) << '\n';
    return;
  }
  os << "scenario,d,W,V,K,successes,failures,min_calls,median_calls,max_calls\n";
  for (const auto& r : rows)
    os << scenario_name(r.scenario) << ',' << r.layout.d << ',' << r.layout.W << ','
       << r.layout.V << ',' << r.layout.K << ',' << r.successes << ',' << r.failures << ','
       << r.min_calls << ',' << r.median_calls << ',' << r.max_calls << '\n';
}

void write_histogram(std::ostream& os, const std::vector<HistogramRow>& rows,
                     OutputFormat format) {
  if (format == OutputFormat::kJson) {
    Json out = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["scenario"] = scenario_name(r.scenario);
      put_layout(j, r.layout);
      j["bucket_start"] = r.bucket_start;
      j["count"] = r.count;
      out.push_back(std::move(j));
    }
    os << out.dump(2) << '\n';
    return;
  }
  os << "scenario,d,W,V,K,bucket_start,count\n";
  for (const auto& r : rows)
    os << scenario_name(r.scenario) << ',' << r.layout.d << ',' << r.layout.W << ','
       << r.layout.V << ',' << r.layout.K << ',' << r.bucket_start << ',' << r.count << '\n';
}

void write_records(std::ostream& os, const std::vector<RunRecord>& records, OutputFormat format) {
  if (format == OutputFormat::kJson)
    os << records_to_json(records).dump(2) << '\n';
  else
    write_records_csv(os, records);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace gram_realize
