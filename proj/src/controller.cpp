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


#include "gram_realize/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "gram_realize/errors.hpp"
#include "log.hpp"

namespace gram_realize {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kRegular:
      return "REGULAR";
    case Mode::kPartial:
      return "PARTIAL";
    case Mode::kSelectionOfFastest:
      return "SELECTION_OF_FASTEST";
  }
  return "UNKNOWN";
}

Mode parse_mode(std::string_view name) {
  if (name == "REGULAR") return Mode::kRegular;
  if (name == "PARTIAL") return Mode::kPartial;
  if (name == "SELECTION_OF_FASTEST") return Mode::kSelectionOfFastest;
  throw InputError("unknown mode '" + std::string(name) + "'");
}

void SolveConfig::validate(const LayoutSpec& layout) const {
  layout.validate();
  if (!(error_threshold > 0.0) || !(entry_threshold > 0.0) || !(shift_stuck_tolerance > 0.0))
    throw InputError("solve thresholds must be > 0");
  if (neighborhood_size < 0 || neighborhood_size > layout.columns() - 1)
    throw InputError("neighborhood_size must be in [1, M-1] (M=" +
                     std::to_string(layout.columns()) + ")");
  if (max_subroutine_calls < 0) throw InputError("max_subroutine_calls must be >= 0");
  if (!(time_limit_s >= 0.0)) throw InputError("time_limit_s must be >= 0");
  if (!(switching.heads_probability >= 0.0 && switching.heads_probability <= 1.0))
    throw InputError("heads_probability must lie in [0, 1]");
  subsolver.validate();
}

int SolveConfig::resolved_neighborhood(const LayoutSpec& layout) const {
  if (neighborhood_size > 0) return neighborhood_size;
  return std::min(layout.d * layout.d, layout.columns() - 1);
}

long SolveConfig::resolved_budget(const LayoutSpec& layout) const {
  if (max_subroutine_calls > 0) return max_subroutine_calls;
  return 500L * layout.columns();
}

ModelMatrix init_model(const LayoutSpec& layout, Rng& rng) {
  ScenarioConfig cfg;
  cfg.kind = ScenarioKind::kPurified;
  cfg.layout = layout;
  return model_to_matrix(gen_purified(cfg, rng));
}

namespace {

HermVec solve_column(const ModelMatrix& p, int ind, const GramMatrix& g,
                     const std::vector<int>& rows, const SubsolverOptions& opts) {
  RVector target(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) target(i) = g(rows[i], ind);
  const SubproblemSpec spec(p, rows, std::move(target));
  return solve_psd_lsq(spec, p.column_vec(ind), opts).v;
}

void check_index(const ModelMatrix& p, const GramMatrix& g, int ind) {
  if (!(p.layout() == g.layout())) throw InputError("model and Gram layouts differ");
  if (ind < 0 || ind >= p.size()) throw InputError("column index out of range");
}

}  // namespace

HermVec regular_update(const ModelMatrix& p, int ind, const GramMatrix& g,
                       const SubsolverOptions& opts) {
  check_index(p, g, ind);
  std::vector<int> rows(p.size());
  std::iota(rows.begin(), rows.end(), 0);
  return solve_column(p, ind, g, rows, opts);
}

HermVec partial_update(const ModelMatrix& p, int ind, const GramMatrix& g,
                       const RMatrix& distances, int neighborhood,
                       const SubsolverOptions& opts) {
  check_index(p, g, ind);
  return solve_column(p, ind, g, nearest_neighbors(distances, ind, neighborhood), opts);
}

HermVec fastest_update(const ModelMatrix& p, int ind, const GramMatrix& g,
                       const MonitorState& monitor, int count,
                       const SubsolverOptions& opts) {
  check_index(p, g, ind);
  return solve_column(p, ind, g, fastest_columns(monitor, p.size(), count), opts);
}

std::vector<int> fastest_columns(const MonitorState& monitor, int columns, int count) {
  const auto n = static_cast<long>(monitor.shifts.size());
  if (n < columns)
    throw StateError("SELECTION_OF_FASTEST needs a full sweep of shifts (" +
                     std::to_string(n) + " of " + std::to_string(columns) + " recorded)");
  if (count < 1 || count > columns) throw InputError("fastest_columns: bad count");
  // Latest shift per column within the window.
  std::vector<double> latest(columns, -1.0);
  for (long i = n - columns; i < n; ++i) latest[monitor.shift_columns[i]] = monitor.shifts[i];
  std::vector<int> idx(columns);
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + count, idx.end(), [&](int a, int b) {
    return latest[a] > latest[b] || (latest[a] == latest[b] && a < b);
  });
  idx.resize(count);
  return idx;
}

void monitor_record(MonitorState& monitor, int column, double shift, double error,
                    int columns) {
  monitor.shifts.push_back(shift);
  monitor.shift_columns.push_back(column);
  monitor.error_history.push_back(error);
  const auto n = monitor.error_history.size();
  if (n >= static_cast<std::size_t>(columns) + 1) {
    const double previous = monitor.error_history[n - 1 - columns];
    monitor.trend = previous != 0.0 ? (error - previous) / previous : 0.0;
  } else {
    monitor.trend = 0.0;
  }
  if (error > monitor.zenith) {
    monitor.zenith = error;
    monitor.counter_no_zenith = 0;
  } else {
    ++monitor.counter_no_zenith;
  }
}

void monitor_step(MonitorState& monitor, int column, const HermVec& old_column,
                  const HermVec& new_column, const ModelMatrix& p, const GramMatrix& g) {
  if (old_column.coords.size() != new_column.coords.size())
    throw InputError("monitor_step: column length mismatch");
  const double shift = (old_column.coords - new_column.coords).norm() /
                       std::max(new_column.coords.norm(), 1e-12);
  monitor_record(monitor, column, shift, gram_error(p, g), p.size());
}

SwitchParams init_switch_params(int columns, Rng& rng, const SwitchingConstants& c) {
  std::bernoulli_distribution coin(c.heads_probability);
  SwitchParams out;
  out.switch_fast_to_reg = coin(rng) ? c.fast_to_reg_heads : c.fast_to_reg_tails;
  out.switch_reg_to_partial = coin(rng) ? c.reg_to_partial_heads : c.reg_to_partial_tails;
  out.no_zenith_threshold =
      static_cast<long>(coin(rng) ? c.no_zenith_sweeps_heads : c.no_zenith_sweeps_tails) * columns;
  return out;
}

Mode switching_decision(MonitorState& monitor, const SwitchParams& params, Mode mode,
                        int columns, double stuck_tolerance) {
  Mode next = mode;
  switch (mode) {
    case Mode::kPartial: {
      const std::size_t n = monitor.shifts.size();
      const std::size_t window = std::min<std::size_t>(n, 2 * static_cast<std::size_t>(columns));
      const auto begin = monitor.shifts.end() - static_cast<std::ptrdiff_t>(window);
      const double largest = window == 0 ? 0.0 : *std::max_element(begin, monitor.shifts.end());
      if (largest <= stuck_tolerance || monitor.counter_no_zenith > params.no_zenith_threshold)
        next = Mode::kSelectionOfFastest;
      break;
    }
    case Mode::kSelectionOfFastest:
      if (monitor.trend >= params.switch_fast_to_reg) next = Mode::kRegular;
      break;
    case Mode::kRegular:
      if (monitor.trend >= params.switch_reg_to_partial) next = Mode::kPartial;
      break;
  }
  if (next != mode) {
    monitor.zenith = -1.0;
    monitor.counter_no_zenith = 0;
  }
  return next;
}

namespace {

void fill_normalization(const ModelMatrix& p, SolveReport& report) {
  const auto& l = p.layout();
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  report.max_trace_error = 0.0;
  report.max_completeness_error = 0.0;
  PsdProjector proj(l.d);
  for (int i = 0; i < p.size(); ++i)
    report.min_eigenvalue = std::min(report.min_eigenvalue, proj.min_eigenvalue(p.column(i)));
  const double sqrt_d = std::sqrt(static_cast<double>(l.d));
  for (int w = 0; w < l.W; ++w)
    report.max_trace_error = std::max(report.max_trace_error, std::abs(p.column(w)(0) * sqrt_d - 1.0));
  RVector identity = RVector::Zero(l.coord_length());
  identity(0) = sqrt_d;
  for (int v = 0; v < l.V; ++v) {
    RVector sum = RVector::Zero(l.coord_length());
    for (int k = 0; k < l.K; ++k) sum += p.column(l.effect_index(v, k));
    CMatrix diff;
    from_coords(sum - identity, diff);
    report.max_completeness_error =
        std::max(report.max_completeness_error, diff.cwiseAbs().maxCoeff());
  }
}

void append_segment(std::vector<ModeSegment>& history, Mode mode) {
  if (history.empty() || history.back().mode != mode)
    history.push_back({mode, 1});
  else
    ++history.back().calls;
}

}  // namespace

Realization realize(const GramMatrix& g, const LayoutSpec& layout, const SolveConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate(layout);
  if (!(g.layout() == layout)) throw InputError("Gram matrix does not match the layout");
  const int m = layout.columns();
  const int neighborhood = config.resolved_neighborhood(layout);
  const long budget = config.resolved_budget(layout);
  const RMatrix& target = g.matrix();
  const double target_norm = target.norm();
  if (target_norm == 0.0) throw InputError("Gram matrix is zero");

  Rng rng(config.rng_seed);
  ModelMatrix p = init_model(layout, rng);
  const RMatrix distances = relative_distances(g);

  // Running P^T P, patched one row/column per update.
  RMatrix product = p.matrix().transpose() * p.matrix();
  MonitorState monitor;
  Mode mode = Mode::kPartial;
  SwitchParams params;

  SolveReport report;
  ModelMatrix best = p;
  double best_error = std::numeric_limits<double>::infinity();
  bool done = false;
  long sweep = 0;
  auto out_of_time = [&] {
    return config.time_limit_s > 0.0 &&
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >=
               config.time_limit_s;
  };

  while (!done) {
    for (int ind = 0; ind < m; ++ind) {
      if (report.subroutine_calls >= budget || out_of_time()) {
        report.budget_exhausted = true;
        done = true;
        break;
      }
      const HermVec old_column = p.column_vec(ind);
      HermVec next;
      switch (mode) {
        case Mode::kPartial:
          next = partial_update(p, ind, g, distances, neighborhood, config.subsolver);
          break;
        case Mode::kSelectionOfFastest:
          next = fastest_update(p, ind, g, monitor, neighborhood, config.subsolver);
          break;
        case Mode::kRegular:
          next = regular_update(p, ind, g, config.subsolver);
          break;
      }
      p.set_column(ind, next.coords);
      const RVector inner = p.matrix().transpose() * next.coords;
      product.col(ind) = inner;
      product.row(ind) = inner.transpose();

      const double error = (product - target).norm() / target_norm;
      const double shift = (old_column.coords - next.coords).norm() /
                           std::max(next.coords.norm(), 1e-12);
      monitor_record(monitor, ind, shift, error, m);
      ++report.subroutine_calls;
      append_segment(report.mode_history, mode);

      if (error < best_error) {
        best_error = error;
        best = p;
      }
      const double max_entry = (product - target).cwiseAbs().maxCoeff();
      if (max_entry <= config.entry_threshold || error < config.error_threshold) {
        best = p;
        done = true;
        break;
      }
    }
    if (done) break;

    ++sweep;
    product.noalias() = p.matrix().transpose() * p.matrix();
    params = init_switch_params(m, rng, config.switching);
    const Mode next_mode =
        switching_decision(monitor, params, mode, m, config.shift_stuck_tolerance);
    if (log_level() >= LogLevel::kTrace) {
      std::ostringstream os;
      os << "sweep " << sweep << " mode=" << mode_name(mode)
         << " error=" << monitor.error_history.back() << " trend=" << monitor.trend;
      log(LogLevel::kTrace, os.str());
    }
    if (next_mode != mode) {
      log(LogLevel::kInfo, "sweep " + std::to_string(sweep) + ": " +
                               std::string(mode_name(mode)) + " -> " +
                               std::string(mode_name(next_mode)));
    }
    mode = next_mode;
  }

  report.final_error = gram_error(best, g);
  report.final_max_entry_error = max_entry_error(best, g);
  report.converged = report.final_max_entry_error <= config.entry_threshold;
  fill_normalization(best, report);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(best), std::move(report)};
}

}  // namespace gram_realize
