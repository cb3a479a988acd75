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


// gram-realize: command-line front end over the C API in gram_realize.h.
//
// Exit codes: 0 success, 1 runtime failure, 2 some runs did not converge,
// 3 configuration error.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "gram_realize.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitFailures = 2;
constexpr int kExitConfig = 3;

int report(gr_status status) {
  std::fprintf(stderr, "gram-realize: %s: %s\n", gr_status_string(status), gr_last_error());
  switch (status) {
    case GR_ERR_INPUT:
    case GR_ERR_IO:
    case GR_ERR_NULL:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

struct RunArgs {
  std::string config;
  int runs = 0;
  int workers = 0;
  std::string format;
  std::string out;
  int bucket_width = 0;
  std::string hist_out;
  std::string summary_out;
};

int cmd_run(const RunArgs& a) {
  gr_experiment* exp = nullptr;
  if (gr_status s = gr_experiment_read_json(a.config.c_str(), &exp); s != GR_OK) return report(s);
  gr_status s = GR_OK;
  if (a.runs > 0 && s == GR_OK) s = gr_experiment_set_runs(exp, a.runs);
  if (a.workers > 0 && s == GR_OK) s = gr_experiment_set_workers(exp, a.workers);
  if (!a.format.empty() && s == GR_OK) s = gr_experiment_set_format(exp, a.format.c_str());
  if (!a.out.empty() && s == GR_OK) s = gr_experiment_set_output(exp, a.out.c_str());
  if (a.bucket_width > 0 && s == GR_OK) s = gr_experiment_set_bucket_width(exp, a.bucket_width);
  if (s != GR_OK) {
    gr_experiment_free(exp);
    return report(s);
  }

  gr_records* records = nullptr;
  s = gr_experiment_run(exp, &records);
  if (s != GR_OK) {
    gr_experiment_free(exp);
    return report(s);
  }
  const std::string output = *gr_experiment_output(exp) ? gr_experiment_output(exp) : "-";
  const std::string format = gr_experiment_format(exp);
  const int width = gr_experiment_bucket_width(exp);
  gr_experiment_free(exp);

  s = gr_records_write(records, output.c_str(), format.c_str());
  if (s == GR_OK && !a.hist_out.empty())
    s = gr_records_write_histogram(records, width, a.hist_out.c_str(), format.c_str());
  if (s == GR_OK) {
    if (!a.summary_out.empty()) {
      s = gr_records_write_summary(records, a.summary_out.c_str(), format.c_str());
    } else if (output != "-") {
      s = gr_records_write_summary(records, "-", "csv");
    }
  }
  const size_t failures = gr_records_failures(records);
  const size_t total = gr_records_count(records);
  gr_records_free(records);
  if (s != GR_OK) return report(s);
  std::fprintf(stderr, "gram-realize: %zu of %zu runs succeeded\n", total - failures, total);
  return failures == 0 ? kExitOk : kExitFailures;
}

struct GenArgs {
  std::string scenario;
  gr_layout layout{0, 0, 0, 0};
  uint64_t seed = 0;
  std::string out = "-";
};

int cmd_gen(const GenArgs& a) {
  gr_model* model = nullptr;
  if (gr_status s = gr_model_generate(a.scenario.c_str(), a.layout, a.seed, &model); s != GR_OK)
    return report(s);
  const gr_status s = gr_model_write_json(model, a.out.c_str());
  gr_model_free(model);
  return s == GR_OK ? kExitOk : report(s);
}

struct SolveArgs {
  std::string gram;
  int d = 0;
  double threshold = 0.0;
  uint64_t seed = 0;
  int64_t max_calls = 0;
  double time_limit = 0.0;
  std::string out = "-";
};

int cmd_solve(const SolveArgs& a) {
  gr_gram* gram = nullptr;
  if (gr_status s = gr_gram_read_json(a.gram.c_str(), &gram); s != GR_OK) return report(s);
  gr_layout layout;
  gr_gram_layout(gram, &layout);
  if (a.d > 0 && a.d != layout.d) {
    std::fprintf(stderr, "gram-realize: --d %d does not match d=%d in %s\n", a.d, layout.d,
                 a.gram.c_str());
    gr_gram_free(gram);
    return kExitConfig;
  }
  gr_solve_options opts;
  gr_solve_options_init(&opts);
  if (a.threshold > 0.0) opts.entry_threshold = a.threshold;
  opts.seed = a.seed;
  opts.max_subroutine_calls = a.max_calls;
  opts.time_limit_s = a.time_limit;

  gr_result* result = nullptr;
  gr_status s = gr_realize(gram, &opts, &result);
  gr_gram_free(gram);
  if (s != GR_OK) return report(s);
  gr_solve_summary summary;
  gr_result_summary(result, &summary);
  s = gr_result_write_json(result, a.out.c_str());
  gr_result_free(result);
  if (s != GR_OK) return report(s);
  std::fprintf(stderr,
               "gram-realize: %s after %lld calls (max entry error %.3g, relative error %.3g)\n",
               summary.converged ? "converged" : "did not converge",
               static_cast<long long>(summary.subroutine_calls), summary.final_max_entry_error,
               summary.final_error);
  return summary.converged ? kExitOk : kExitFailures;
}

struct SummarizeArgs {
  std::string in;
  std::string format = "csv";
  std::string out = "-";
  int bucket_width = 50;
  std::string hist_out;
};

int cmd_summarize(const SummarizeArgs& a) {
  gr_records* records = nullptr;
  if (gr_status s = gr_records_read(a.in.c_str(), &records); s != GR_OK) return report(s);
  gr_status s = gr_records_write_summary(records, a.out.c_str(), a.format.c_str());
  if (s == GR_OK && !a.hist_out.empty())
    s = gr_records_write_histogram(records, a.bucket_width, a.hist_out.c_str(), a.format.c_str());
  gr_records_free(records);
  return s == GR_OK ? kExitOk : report(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Realize Gram matrices as PSD density matrices and POVM effects"};
  app.set_version_flag("--version", gr_version());
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"csv", "json"});

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--runs", run.runs, "Override runs per scenario")->check(CLI::PositiveNumber);
  run_cmd->add_option("--workers", run.workers, "Concurrent runs")->check(CLI::PositiveNumber);
  run_cmd->add_option("--format", run.format, "Output format")->check(formats);
  run_cmd->add_option("--out", run.out, "Records output path ('-' for stdout)");
  run_cmd->add_option("--bucket-width", run.bucket_width, "Histogram bucket width")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--hist-out", run.hist_out, "Write iteration histogram data here");
  run_cmd->add_option("--summary-out", run.summary_out, "Write the summary table here");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random ground-truth model");
  gen_cmd->add_option("--scenario", gen.scenario, "pure | partly_mixed | purified")->required();
  gen_cmd->add_option("--d", gen.layout.d, "Hilbert-space dimension")->required();
  gen_cmd->add_option("--W", gen.layout.W, "Number of states")->required();
  gen_cmd->add_option("--V", gen.layout.V, "Number of measurements")->required();
  gen_cmd->add_option("--K", gen.layout.K, "Outcomes per measurement")->required();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--out", gen.out, "Output path ('-' for stdout)");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Realize the Gram matrix in a JSON document");
  solve_cmd->add_option("--gram", solve.gram, "Gram document (JSON)")->required();
  solve_cmd->add_option("--d", solve.d, "Expected Hilbert-space dimension");
  solve_cmd->add_option("--threshold", solve.threshold, "Max entry error for success")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--seed", solve.seed, "Solver seed");
  solve_cmd->add_option("--max-calls", solve.max_calls, "Column-update budget (0 = 500 M)");
  solve_cmd->add_option("--time-limit", solve.time_limit, "Wall-clock limit in seconds");
  solve_cmd->add_option("--out", solve.out, "Output path ('-' for stdout)");

  SummarizeArgs summ;
  auto* summ_cmd = app.add_subcommand("summarize", "Summarize run records (CSV or JSON)");
  summ_cmd->add_option("--in", summ.in, "Records file")->required();
  summ_cmd->add_option("--format", summ.format, "Output format")->check(formats);
  summ_cmd->add_option("--out", summ.out, "Summary output path ('-' for stdout)");
  summ_cmd->add_option("--bucket-width", summ.bucket_width, "Histogram bucket width")
      ->check(CLI::PositiveNumber);
  summ_cmd->add_option("--hist-out", summ.hist_out, "Write iteration histogram data here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*run_cmd) return cmd_run(run);
  if (*gen_cmd) return cmd_gen(gen);
  if (*solve_cmd) return cmd_solve(solve);
  return cmd_summarize(summ);
}
