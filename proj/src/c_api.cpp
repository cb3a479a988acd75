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


#include "gram_realize.h"

#include <fstream>
#include <functional>
#include <iostream>
#include <new>
#include <string>

#include "gram_realize/controller.hpp"
#include "gram_realize/errors.hpp"
#include "gram_realize/harness.hpp"
#include "gram_realize/io.hpp"
#include "gram_realize/scenarios.hpp"

namespace gr = gram_realize;

struct gr_model {
  gr::GroundTruthModel model;
};

struct gr_gram {
  gr::GramMatrix gram;
};

struct gr_result {
  gr::Realization realization;
};

struct gr_experiment {
  gr::ExperimentConfig config;
};

struct gr_records {
  std::vector<gr::RunRecord> records;
};

namespace {

thread_local std::string g_last_error;

gr_status fail(gr_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <typename F>
gr_status guarded(F&& body) {
  try {
    body();
    return GR_OK;
  } catch (const gr::InputError& e) {
    return fail(GR_ERR_INPUT, e.what());
  } catch (const gr::NumericError& e) {
    return fail(GR_ERR_NUMERIC, e.what());
  } catch (const gr::StateError& e) {
    return fail(GR_ERR_STATE, e.what());
  } catch (const gr::GenerationError& e) {
    return fail(GR_ERR_GENERATION, e.what());
  } catch (const gr::IoError& e) {
    return fail(GR_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GR_ERR_INTERNAL, "unknown error");
  }
}

#define GR_REQUIRE(ptr)                                              \
  do {                                                               \
    if ((ptr) == nullptr) return fail(GR_ERR_NULL, #ptr " is NULL"); \
  } while (0)

gr::LayoutSpec to_layout(gr_layout l) { return {l.d, l.W, l.V, l.K}; }
gr_layout from_layout(const gr::LayoutSpec& l) { return {l.d, l.W, l.V, l.K}; }

// Runs `write` against the file at `path`, or stdout for "-".
void with_output(const char* path, const std::function<void(std::ostream&)>& write) {
  const std::string p(path);
  if (p == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(p);
  if (!out) throw gr::IoError("cannot open '" + p + "' for writing");
  write(out);
  if (!out) throw gr::IoError("failed writing '" + p + "'");
}

gr::OutputFormat format_or_default(const char* format) {
  return format == nullptr ? gr::OutputFormat::kCsv : gr::parse_format(format);
}

}  // namespace

extern "C" {

const char* gr_version(void) { return "0.1.0"; }

const char* gr_last_error(void) { return g_last_error.c_str(); }

const char* gr_status_string(gr_status status) {
  switch (status) {
    case GR_OK:
      return "ok";
    case GR_ERR_INPUT:
      return "input error";
    case GR_ERR_NUMERIC:
      return "numeric error";
    case GR_ERR_STATE:
      return "state error";
    case GR_ERR_GENERATION:
      return "generation error";
    case GR_ERR_IO:
      return "i/o error";
    case GR_ERR_NULL:
      return "null argument";
    case GR_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* gr_mode_name(gr_mode mode) {
  switch (mode) {
    case GR_MODE_REGULAR:
      return "REGULAR";
    case GR_MODE_PARTIAL:
      return "PARTIAL";
    case GR_MODE_SELECTION_OF_FASTEST:
      return "SELECTION_OF_FASTEST";
  }
  return "UNKNOWN";
}

gr_status gr_model_generate(const char* kind, gr_layout layout, uint64_t seed, gr_model** out) {
  GR_REQUIRE(kind);
  GR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    gr::ScenarioConfig cfg;
    cfg.kind = gr::parse_scenario(kind);
    cfg.layout = to_layout(layout);
    cfg.seed = seed;
    *out = new gr_model{gr::generate(cfg)};
  });
}

gr_status gr_model_layout(const gr_model* model, gr_layout* out) {
  GR_REQUIRE(model);
  GR_REQUIRE(out);
  *out = from_layout(model->model.layout);
  return GR_OK;
}

gr_status gr_model_write_json(const gr_model* model, const char* path) {
  GR_REQUIRE(model);
  GR_REQUIRE(path);
  return guarded([&] {
    gr::Json doc = gr::model_to_json(model->model);
    const gr::ModelMatrix p = gr::model_to_matrix(model->model);
    doc["gram"] = gr::gram_to_json(gr::build_gram(p))["gram"];
    with_output(path, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  });
}

gr_status gr_model_gram(const gr_model* model, gr_gram** out) {
  GR_REQUIRE(model);
  GR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new gr_gram{gr::build_gram(gr::model_to_matrix(model->model))};
  });
}

void gr_model_free(gr_model* model) { delete model; }

gr_status gr_gram_create(gr_layout layout, const double* entries, size_t len, gr_gram** out) {
  GR_REQUIRE(entries);
  GR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const gr::LayoutSpec l = to_layout(layout);
    l.validate();
    const auto m = static_cast<size_t>(l.columns());
    if (len != m * m)
      throw gr::InputError("expected " + std::to_string(m * m) + " Gram entries, got " +
                           std::to_string(len));
    gr::RMatrix g = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                   Eigen::RowMajor>>(entries, m, m);
    *out = new gr_gram{gr::GramMatrix(l, std::move(g))};
  });
}

gr_status gr_gram_read_json(const char* path, gr_gram** out) {
  GR_REQUIRE(path);
  GR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new gr_gram{gr::gram_from_json(gr::read_json_file(path)).gram};
  });
}

gr_status gr_gram_write_json(const gr_gram* gram, const char* path) {
  GR_REQUIRE(gram);
  GR_REQUIRE(path);
  return guarded([&] {
    const gr::Json doc = gr::gram_to_json(gram->gram);
    with_output(path, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  });
}

gr_status gr_gram_layout(const gr_gram* gram, gr_layout* out) {
  GR_REQUIRE(gram);
  GR_REQUIRE(out);
  *out = from_layout(gram->gram.layout());
  return GR_OK;
}

gr_status gr_gram_entries(const gr_gram* gram, double* buffer, size_t len) {
  GR_REQUIRE(gram);
  GR_REQUIRE(buffer);
  const auto m = static_cast<size_t>(gram->gram.size());
  if (len < m * m) return fail(GR_ERR_INPUT, "buffer too small for the Gram matrix");
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) buffer[i * m + j] = gram->gram(static_cast<int>(i), static_cast<int>(j));
  return GR_OK;
}

void gr_gram_free(gr_gram* gram) { delete gram; }

void gr_solve_options_init(gr_solve_options* options) {
  if (options == nullptr) return;
  const gr::SolveConfig defaults;
  options->entry_threshold = defaults.entry_threshold;
  options->error_threshold = defaults.error_threshold;
  options->max_subroutine_calls = defaults.max_subroutine_calls;
  options->time_limit_s = defaults.time_limit_s;
  options->seed = defaults.rng_seed;
  options->neighborhood_size = defaults.neighborhood_size;
}

gr_status gr_realize(const gr_gram* gram, const gr_solve_options* options, gr_result** out) {
  GR_REQUIRE(gram);
  GR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    gr_solve_options opts;
    gr_solve_options_init(&opts);
    if (options != nullptr) opts = *options;
    gr::SolveConfig cfg;
    cfg.entry_threshold = opts.entry_threshold;
    cfg.error_threshold = opts.error_threshold;
    cfg.max_subroutine_calls = opts.max_subroutine_calls;
    cfg.time_limit_s = opts.time_limit_s;
    cfg.rng_seed = opts.seed;
    cfg.neighborhood_size = opts.neighborhood_size;
    *out = new gr_result{gr::realize(gram->gram, gram->gram.layout(), cfg)};
  });
}

gr_status gr_result_summary(const gr_result* result, gr_solve_summary* out) {
  GR_REQUIRE(result);
  GR_REQUIRE(out);
  const auto& r = result->realization.report;
  out->converged = r.converged ? 1 : 0;
  out->budget_exhausted = r.budget_exhausted ? 1 : 0;
  out->final_error = r.final_error;
  out->final_max_entry_error = r.final_max_entry_error;
  out->subroutine_calls = r.subroutine_calls;
  out->wall_time_s = r.wall_time;
  out->mode_segments = r.mode_history.size();
  out->max_trace_error = r.max_trace_error;
  out->max_completeness_error = r.max_completeness_error;
  out->min_eigenvalue = r.min_eigenvalue;
  return GR_OK;
}

gr_status gr_result_mode_segment(const gr_result* result, size_t index, gr_mode* mode,
                                 int64_t* calls) {
  GR_REQUIRE(result);
  const auto& history = result->realization.report.mode_history;
  if (index >= history.size()) return fail(GR_ERR_INPUT, "mode segment index out of range");
  if (mode != nullptr) {
    switch (history[index].mode) {
      case gr::Mode::kRegular:
        *mode = GR_MODE_REGULAR;
        break;
      case gr::Mode::kPartial:
        *mode = GR_MODE_PARTIAL;
        break;
      case gr::Mode::kSelectionOfFastest:
        *mode = GR_MODE_SELECTION_OF_FASTEST;
        break;
    }
  }
  if (calls != nullptr) *calls = history[index].calls;
  return GR_OK;
}

gr_status gr_result_columns(const gr_result* result, double* buffer, size_t len) {
  GR_REQUIRE(result);
  GR_REQUIRE(buffer);
  const gr::RMatrix& p = result->realization.model.matrix();
  if (len < static_cast<size_t>(p.size())) return fail(GR_ERR_INPUT, "buffer too small for the model");
  std::copy(p.data(), p.data() + p.size(), buffer);
  return GR_OK;
}

gr_status gr_result_write_json(const gr_result* result, const char* path) {
  GR_REQUIRE(result);
  GR_REQUIRE(path);
  return guarded([&] {
    const gr::Json doc = gr::realization_to_json(result->realization);
    with_output(path, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  });
}

void gr_result_free(gr_result* result) { delete result; }

gr_status gr_experiment_read_json(const char* path, gr_experiment** out) {
  GR_REQUIRE(path);
  GR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new gr_experiment{gr::experiment_from_json(gr::read_json_file(path))};
  });
}

gr_status gr_experiment_set_runs(gr_experiment* experiment, int runs) {
  GR_REQUIRE(experiment);
  if (runs < 1) return fail(GR_ERR_INPUT, "runs must be >= 1");
  auto& cfg = experiment->config;
  cfg.runs_per_scenario = runs;
  for (auto& e : cfg.scenarios) e.runs = 0;
  return guarded([&] { cfg.validate(); });
}

gr_status gr_experiment_set_workers(gr_experiment* experiment, int workers) {
  GR_REQUIRE(experiment);
  if (workers < 1) return fail(GR_ERR_INPUT, "workers must be >= 1");
  experiment->config.workers = workers;
  return GR_OK;
}

gr_status gr_experiment_set_format(gr_experiment* experiment, const char* format) {
  GR_REQUIRE(experiment);
  GR_REQUIRE(format);
  return guarded([&] { experiment->config.output_format = gr::parse_format(format); });
}

gr_status gr_experiment_set_output(gr_experiment* experiment, const char* path) {
  GR_REQUIRE(experiment);
  GR_REQUIRE(path);
  experiment->config.output_path = path;
  return GR_OK;
}

gr_status gr_experiment_set_bucket_width(gr_experiment* experiment, int width) {
  GR_REQUIRE(experiment);
  if (width < 1) return fail(GR_ERR_INPUT, "bucket width must be >= 1");
  experiment->config.bucket_width = width;
  return GR_OK;
}

const char* gr_experiment_output(const gr_experiment* experiment) {
  return experiment == nullptr ? "" : experiment->config.output_path.c_str();
}

const char* gr_experiment_format(const gr_experiment* experiment) {
  if (experiment == nullptr) return "csv";
  return experiment->config.output_format == gr::OutputFormat::kJson ? "json" : "csv";
}

int gr_experiment_bucket_width(const gr_experiment* experiment) {
  return experiment == nullptr ? 0 : experiment->config.bucket_width;
}

gr_status gr_experiment_run(const gr_experiment* experiment, gr_records** out) {
  GR_REQUIRE(experiment);
  GR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new gr_records{gr::run_experiment(experiment->config)}; });
}

void gr_experiment_free(gr_experiment* experiment) { delete experiment; }

gr_status gr_records_read(const char* path, gr_records** out) {
  GR_REQUIRE(path);
  GR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw gr::IoError(std::string("cannot open '") + path + "' for reading");
    *out = new gr_records{gr::read_records(in)};
  });
}

size_t gr_records_count(const gr_records* records) {
  return records == nullptr ? 0 : records->records.size();
}

size_t gr_records_failures(const gr_records* records) {
  if (records == nullptr) return 0;
  size_t n = 0;
  for (const auto& r : records->records) n += r.success ? 0 : 1;
  return n;
}

gr_status gr_records_write(const gr_records* records, const char* path, const char* format) {
  GR_REQUIRE(records);
  GR_REQUIRE(path);
  return guarded([&] {
    const auto fmt = format_or_default(format);
    with_output(path, [&](std::ostream& os) { gr::write_records(os, records->records, fmt); });
  });
}

gr_status gr_records_write_summary(const gr_records* records, const char* path,
                                   const char* format) {
  GR_REQUIRE(records);
  GR_REQUIRE(path);
  return guarded([&] {
    const auto fmt = format_or_default(format);
    const auto rows = gr::summarize(records->records);
    with_output(path, [&](std::ostream& os) { gr::write_summary(os, rows, fmt); });
  });
}

gr_status gr_records_write_histogram(const gr_records* records, int bucket_width,
                                     const char* path, const char* format) {
  GR_REQUIRE(records);
  GR_REQUIRE(path);
  return guarded([&] {
    const auto fmt = format_or_default(format);
    const auto rows = gr::emit_histogram_data(records->records, bucket_width);
    with_output(path, [&](std::ostream& os) { gr::write_histogram(os, rows, fmt); });
  });
}

void gr_records_free(gr_records* records) { delete records; }

}  // extern "C"
