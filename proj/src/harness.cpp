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


#include "gram_realize/harness.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>
#include <tuple>
#include <utility>

#include "gram_realize/errors.hpp"
#include "log.hpp"

namespace gram_realize {

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw InputError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

void ExperimentConfig::validate() const {
  if (runs_per_scenario < 1) throw InputError("runs_per_scenario must be >= 1");
  if (workers < 1) throw InputError("workers must be >= 1");
  if (bucket_width < 1) throw InputError("bucket_width must be >= 1");
  std::set<std::uint64_t> seeds;
  for (const auto& e : scenarios) {
    e.scenario.validate();
    solve.validate(e.scenario.layout);
    if (e.runs < 0) throw InputError("scenario runs must be >= 0");
    if (!(e.time_limit_s >= 0.0)) throw InputError("scenario time_limit_s must be >= 0");
    const int runs = e.runs > 0 ? e.runs : runs_per_scenario;
    for (int r = 0; r < runs; ++r)
      if (!seeds.insert(run_seed(e.scenario.seed, r)).second)
        throw InputError("per-run seeds collide; give each scenario a distinct seed range");
  }
}

std::uint64_t run_seed(std::uint64_t base, int index) {
  return base + static_cast<std::uint64_t>(index);
}

std::uint64_t solver_seed(std::uint64_t run_seed, std::uint64_t solve_seed) {
  // splitmix64 finalizer
  std::uint64_t z = run_seed + solve_seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RunRecord execute_run(const ScenarioConfig& scenario, const SolveConfig& solve, bool keep_model) {
  RunRecord rec;
  rec.scenario = scenario.kind;
  rec.layout = scenario.layout;
  rec.seed = scenario.seed;
  try {
    const GramMatrix g = build_gram(model_to_matrix(generate(scenario)));
    SolveConfig cfg = solve;
    cfg.rng_seed = solver_seed(scenario.seed, solve.rng_seed);
    Realization result = realize(g, scenario.layout, cfg);
    rec.subroutine_calls = result.report.subroutine_calls;
    rec.final_error = result.report.final_error;
    rec.final_max_entry_error = result.report.final_max_entry_error;
    rec.success = rec.final_max_entry_error <= solve.entry_threshold;
    rec.wall_time = result.report.wall_time;
    rec.mode_segments = std::move(result.report.mode_history);
    if (keep_model) {
      rec.model = std::move(result.model);
      rec.gram = g;
    }
  } catch (const std::exception& e) {
    rec.success = false;
    rec.failure_reason = e.what();
  }
  return rec;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<ScenarioConfig, SolveConfig>> jobs;
  for (const auto& e : cfg.scenarios) {
    SolveConfig solve = cfg.solve;
    if (e.time_limit_s > 0.0) solve.time_limit_s = e.time_limit_s;
    const int runs = e.runs > 0 ? e.runs : cfg.runs_per_scenario;
    for (int r = 0; r < runs; ++r) {
      ScenarioConfig sc = e.scenario;
      sc.seed = run_seed(e.scenario.seed, r);
      jobs.emplace_back(sc, solve);
    }
  }
  std::vector<RunRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      records[i] = execute_run(jobs[i].first, jobs[i].second, cfg.keep_models);
      const auto& r = records[i];
      log(LogLevel::kInfo, std::string(scenario_name(r.scenario)) + " d=" +
                               std::to_string(r.layout.d) + " seed=" + std::to_string(r.seed) +
                               " calls=" + std::to_string(r.subroutine_calls) +
                               (r.success ? " ok" : " FAILED " + r.failure_reason));
    }
  };
  const int n_workers = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(jobs.size(), 1)));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  return records;
}

namespace {

auto group_key(const RunRecord& r) {
  return std::make_tuple(static_cast<int>(r.scenario), r.layout.d, r.layout.W, r.layout.V,
                         r.layout.K);
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  std::map<decltype(group_key(records.front())), std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[group_key(r)].push_back(&r);
  std::vector<SummaryRow> rows;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    row.scenario = members.front()->scenario;
    row.layout = members.front()->layout;
    std::vector<long> calls;
    for (const RunRecord* r : members) {
      (r->success ? row.successes : row.failures)++;
      calls.push_back(r->subroutine_calls);
    }
    std::sort(calls.begin(), calls.end());
    row.min_calls = calls.front();
    row.max_calls = calls.back();
    const std::size_t n = calls.size();
    row.median_calls = n % 2 == 1 ? static_cast<double>(calls[n / 2])
                                  : 0.5 * static_cast<double>(calls[n / 2 - 1] + calls[n / 2]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<HistogramRow> emit_histogram_data(const std::vector<RunRecord>& records,
                                              int bucket_width) {
  if (bucket_width < 1) throw InputError("bucket_width must be >= 1");
  std::map<std::tuple<int, int, int, int, int, long>, HistogramRow> buckets;
  for (const auto& r : records) {
    const long start = (r.subroutine_calls / bucket_width) * bucket_width;
    const auto g = group_key(r);
    auto [it, inserted] = buckets.try_emplace(
        std::tuple_cat(g, std::make_tuple(start)), HistogramRow{r.scenario, r.layout, start, 0});
    ++it->second.count;
  }
  std::vector<HistogramRow> rows;
  rows.reserve(buckets.size());
  for (auto& [key, row] : buckets) rows.push_back(row);
  return rows;
}

bool all_succeeded(const std::vector<RunRecord>& records) {
  return std::all_of(records.begin(), records.end(), [](const RunRecord& r) { return r.success; });
}

}  // namespace gram_realize
