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


#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "gram_realize/controller.hpp"
#include "gram_realize/errors.hpp"
#include "test_support.hpp"

using namespace gram_realize;

namespace {

const LayoutSpec kQubit{2, 8, 4, 2};

GramMatrix scenario_gram(ScenarioKind kind, LayoutSpec layout, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.kind = kind;
  cfg.layout = layout;
  cfg.seed = seed;
  return build_gram(model_to_matrix(generate(cfg)));
}

std::vector<CMatrix> column_operators(const ModelMatrix& p) {
  std::vector<CMatrix> ops;
  for (int i = 0; i < p.size(); ++i) ops.push_back(from_coords(p.column_vec(i)).entries());
  return ops;
}

double min_column_eigenvalue(const ModelMatrix& p) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& op : column_operators(p)) lo = std::min(lo, testing::min_eig(op));
  return lo;
}

bool is_cycle_step(Mode from, Mode to) {
  return (from == Mode::kPartial && to == Mode::kSelectionOfFastest) ||
         (from == Mode::kSelectionOfFastest && to == Mode::kRegular) ||
         (from == Mode::kRegular && to == Mode::kPartial);
}

}  // namespace

TEST_CASE("mode names") {
  for (auto m : {Mode::kRegular, Mode::kPartial, Mode::kSelectionOfFastest})
    CHECK(parse_mode(mode_name(m)) == m);
  CHECK(mode_name(Mode::kSelectionOfFastest) == "SELECTION_OF_FASTEST");
  CHECK_THROWS_AS(parse_mode("FAST"), InputError);
}

TEST_CASE("init_model draws valid states and POVMs") {
  for (int d : {2, 3}) {
    const LayoutSpec l{d, 5, 3, 3};
    Rng rng(3);
    const ModelMatrix p = init_model(l, rng);
    CHECK(min_column_eigenvalue(p) >= -1e-12);
    const auto ops = column_operators(p);
    for (int w = 0; w < l.W; ++w) CHECK(std::abs(ops[w].trace().real() - 1.0) <= 1e-12);
    for (int v = 0; v < l.V; ++v) {
      CMatrix sum = CMatrix::Zero(d, d);
      for (int k = 0; k < l.K; ++k) sum += ops[l.effect_index(v, k)];
      CHECK((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    Rng again(3);
    CHECK(init_model(l, again).matrix() == p.matrix());
  }
}

TEST_CASE("regular_update keeps an exact model fixed") {
  Rng rng(4);
  const ModelMatrix p = init_model(kQubit, rng);
  const GramMatrix g = build_gram(p);
  for (int ind = 0; ind < p.size(); ++ind) {
    const HermVec next = regular_update(p, ind, g);
    CHECK((next.coords - p.column(ind)).norm() <= 1e-6);
    const RMatrix dist = relative_distances(g);
    CHECK((partial_update(p, ind, g, dist, 4).coords - p.column(ind)).norm() <= 1e-6);
  }
}

TEST_CASE("regular_update agrees with the Bloch-ball grid oracle") {
  const LayoutSpec l{2, 3, 2, 2};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(100 + seed);
    const ModelMatrix p = init_model(l, rng);
    const GramMatrix g = build_gram(init_model(l, rng));
    const auto ops = column_operators(p);
    const int ind = static_cast<int>(seed % l.columns());
    const HermVec v = regular_update(p, ind, g);
    const RVector b = g.matrix().col(ind);
    const double got = (p.matrix().transpose() * v.coords - b).norm();
    CHECK(std::abs(got - testing::qubit_grid_oracle(ops, b, 0.01)) <= 1e-3);
  }
}

TEST_CASE("partial_update with every other column as neighbor beats regular") {
  const LayoutSpec l{2, 1, 2, 2};
  REQUIRE(l.columns() - 1 == 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(200 + seed);
    const ModelMatrix p = init_model(l, rng);
    const GramMatrix g = build_gram(init_model(l, rng));
    const RMatrix dist = relative_distances(g);
    for (int ind = 0; ind < l.columns(); ++ind) {
      const auto s = nearest_neighbors(dist, ind, 4);
      CHECK(std::find(s.begin(), s.end(), ind) == s.end());
      const RVector b = g.matrix().col(ind);
      const RVector reg = regular_update(p, ind, g).coords;
      const RVector part = partial_update(p, ind, g, dist, 4).coords;
      auto restricted = [&](const RVector& v) {
        double sum = 0.0;
        for (int j : s) sum += std::pow(p.column(j).dot(v) - b(j), 2);
        return std::sqrt(sum);
      };
      CHECK(restricted(part) <= (p.matrix().transpose() * reg - b).norm() + 1e-7);
    }
  }
}

TEST_CASE("fastest_columns") {
  const int m = 6;
  MonitorState mon;
  SUBCASE("too few shifts") {
    for (int i = 0; i < m - 1; ++i) monitor_record(mon, i, 0.1, 0.5, m);
    CHECK_THROWS_AS(fastest_columns(mon, m, 2), StateError);
  }
  SUBCASE("equal shifts pick the first indices") {
    for (int i = 0; i < m; ++i) monitor_record(mon, i, 0.1, 0.5, m);
    CHECK(fastest_columns(mon, m, 4) == std::vector<int>{0, 1, 2, 3});
  }
  SUBCASE("a single moving column is selected") {
    for (int i = 0; i < m; ++i) monitor_record(mon, i, i == 5 ? 0.3 : 0.0, 0.5, m);
    const auto s = fastest_columns(mon, m, 4);
    CHECK(std::find(s.begin(), s.end(), 5) != s.end());
  }
  SUBCASE("only the last sweep counts") {
    for (int i = 0; i < m; ++i) monitor_record(mon, i, i == 0 ? 9.0 : 0.0, 0.5, m);
    for (int i = 0; i < m; ++i) monitor_record(mon, i, 0.1 * i, 0.5, m);
    CHECK(fastest_columns(mon, m, 2) == std::vector<int>{5, 4});
  }
  SUBCASE("matches a full sort of random sweeps") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int sweep = 0; sweep < 30; ++sweep) {
      std::vector<double> last(m);
      for (int i = 0; i < m; ++i) {
        last[i] = std::round(u(rng) * 10.0) / 10.0;  // coarse values force ties
        monitor_record(mon, i, last[i], 0.5, m);
      }
      std::vector<int> idx(m);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return last[a] > last[b]; });
      idx.resize(3);
      CHECK(fastest_columns(mon, m, 3) == idx);
    }
  }
}

TEST_CASE("fastest_update requires a full sweep") {
  Rng rng(8);
  const ModelMatrix p = init_model(kQubit, rng);
  const GramMatrix g = build_gram(p);
  MonitorState mon;
  CHECK_THROWS_AS(fastest_update(p, 0, g, mon, 4), StateError);
  for (int i = 0; i < p.size(); ++i) monitor_record(mon, i, 0.0, 0.0, p.size());
  CHECK((fastest_update(p, 3, g, mon, 4).coords - p.column(3)).norm() <= 1e-6);
}

TEST_CASE("monitor bookkeeping") {
  const int m = 4;
  MonitorState mon;
  SUBCASE("zenith and counter") {
    monitor_record(mon, 0, 0.1, 0.3, m);
    CHECK(mon.zenith == 0.3);
    CHECK(mon.counter_no_zenith == 0);
    monitor_record(mon, 1, 0.1, 0.2, m);
    monitor_record(mon, 2, 0.1, 0.25, m);
    CHECK(mon.counter_no_zenith == 2);
    monitor_record(mon, 3, 0.1, 0.4, m);
    CHECK(mon.zenith == 0.4);
    CHECK(mon.counter_no_zenith == 0);
  }
  SUBCASE("trend is zero before a full sweep of history") {
    for (int i = 0; i < m; ++i) {
      monitor_record(mon, i, 0.1, 1.0 / (i + 1), m);
      CHECK(mon.trend == 0.0);
    }
  }
  SUBCASE("constant error gives zero trend") {
    for (int i = 0; i < 3 * m; ++i) monitor_record(mon, i % m, 0.1, 0.5, m);
    CHECK(mon.trend == 0.0);
  }
  SUBCASE("halving over one sweep gives -0.5") {
    for (int i = 0; i <= m; ++i) monitor_record(mon, i % m, 0.1, i == m ? 0.25 : 0.5, m);
    CHECK(mon.trend == doctest::Approx(-0.5));
  }
  SUBCASE("monitor_step computes shift and error") {
    Rng rng(9);
    ModelMatrix p = init_model(kQubit, rng);
    const GramMatrix g = build_gram(p);
    const HermVec old = p.column_vec(2);
    monitor_step(mon, 2, old, old, p, g);
    CHECK(mon.shifts.back() == 0.0);
    CHECK(mon.error_history.back() <= 1e-14);
    HermVec next = old;
    next.coords *= 2.0;
    p.set_column(2, next.coords);
    monitor_step(mon, 2, old, next, p, g);
    CHECK(mon.shifts.back() == doctest::Approx(0.5));
    CHECK(mon.error_history.back() == doctest::Approx(gram_error(p, g)));
    CHECK(mon.shift_columns == std::vector<int>{2, 2});
    const HermVec zero{2, RVector::Zero(4)};
    monitor_step(mon, 2, old, zero, p, g);
    CHECK(std::isfinite(mon.shifts.back()));
  }
}

TEST_CASE("init_switch_params coin statistics") {
  const int m = 16;
  Rng rng(10);
  constexpr int kDraws = 10000;
  int fast = 0, reg = 0, zen = 0, fast_reg = 0, fast_zen = 0, reg_zen = 0;
  for (int i = 0; i < kDraws; ++i) {
    const SwitchParams s = init_switch_params(m, rng);
    REQUIRE((s.switch_fast_to_reg == -0.08 || s.switch_fast_to_reg == -0.05));
    REQUIRE((s.switch_reg_to_partial == -0.01 || s.switch_reg_to_partial == -0.02));
    REQUIRE((s.no_zenith_threshold == 3 * m || s.no_zenith_threshold == 7 * m));
    const bool a = s.switch_fast_to_reg == -0.08;
    const bool b = s.switch_reg_to_partial == -0.01;
    const bool c = s.no_zenith_threshold == 3 * m;
    fast += a;
    reg += b;
    zen += c;
    fast_reg += a && b;
    fast_zen += a && c;
    reg_zen += b && c;
  }
  const double pa = double(fast) / kDraws, pb = double(reg) / kDraws, pc = double(zen) / kDraws;
  CHECK(std::abs(pa - 0.7) <= 0.02);
  CHECK(std::abs(pb - 0.7) <= 0.02);
  CHECK(std::abs(pc - 0.7) <= 0.02);
  CHECK(std::abs(double(fast_reg) / kDraws - pa * pb) <= 0.02);
  CHECK(std::abs(double(fast_zen) / kDraws - pa * pc) <= 0.02);
  CHECK(std::abs(double(reg_zen) / kDraws - pb * pc) <= 0.02);
}

TEST_CASE("switching_decision thresholds") {
  const int m = 4;
  SwitchParams params{-0.08, -0.01, 3 * m};

  SUBCASE("PARTIAL with stuck shifts") {
    MonitorState mon;
    for (int i = 0; i < 2 * m; ++i) monitor_record(mon, i % m, 0.001, 1.0 - 0.01 * i, m);
    mon.counter_no_zenith = 0;
    CHECK(switching_decision(mon, params, Mode::kPartial, m) == Mode::kSelectionOfFastest);
    CHECK(mon.zenith == -1.0);
  }
  SUBCASE("PARTIAL shift boundary at 0.002") {
    MonitorState mon;
    for (int i = 0; i < 2 * m; ++i) monitor_record(mon, i % m, 0.002, 0.5, m);
    mon.counter_no_zenith = 0;
    CHECK(switching_decision(mon, params, Mode::kPartial, m) == Mode::kSelectionOfFastest);
    mon.shifts.back() = 0.0021;
    CHECK(switching_decision(mon, params, Mode::kPartial, m) == Mode::kPartial);
  }
  SUBCASE("PARTIAL only looks at the last 2M shifts") {
    MonitorState mon;
    monitor_record(mon, 0, 5.0, 0.5, m);
    for (int i = 0; i < 2 * m; ++i) monitor_record(mon, i % m, 0.001, 0.5, m);
    mon.counter_no_zenith = 0;
    CHECK(switching_decision(mon, params, Mode::kPartial, m) == Mode::kSelectionOfFastest);
  }
  SUBCASE("PARTIAL with fewer than 2M shifts uses all of them") {
    MonitorState mon;
    monitor_record(mon, 0, 0.5, 0.5, m);
    monitor_record(mon, 1, 0.001, 0.5, m);
    mon.counter_no_zenith = 0;
    CHECK(switching_decision(mon, params, Mode::kPartial, m) == Mode::kPartial);
  }
  SUBCASE("PARTIAL no-zenith counter is strict") {
    MonitorState mon;
    monitor_record(mon, 0, 1.0, 0.5, m);
    mon.counter_no_zenith = 3 * m;
    CHECK(switching_decision(mon, params, Mode::kPartial, m) == Mode::kPartial);
    mon.counter_no_zenith = 3 * m + 1;
    CHECK(switching_decision(mon, params, Mode::kPartial, m) == Mode::kSelectionOfFastest);
    CHECK(mon.counter_no_zenith == 0);
  }
  SUBCASE("SELECTION_OF_FASTEST trend boundary") {
    MonitorState mon;
    mon.trend = -0.20;
    CHECK(switching_decision(mon, params, Mode::kSelectionOfFastest, m) ==
          Mode::kSelectionOfFastest);
    mon.trend = -0.08;
    CHECK(switching_decision(mon, params, Mode::kSelectionOfFastest, m) == Mode::kRegular);
    SwitchParams tails = params;
    tails.switch_fast_to_reg = -0.05;
    mon.trend = -0.06;
    CHECK(switching_decision(mon, tails, Mode::kSelectionOfFastest, m) ==
          Mode::kSelectionOfFastest);
  }
  SUBCASE("REGULAR trend boundary") {
    MonitorState mon;
    mon.trend = -0.005;
    CHECK(switching_decision(mon, params, Mode::kRegular, m) == Mode::kPartial);
    mon.trend = -0.011;
    CHECK(switching_decision(mon, params, Mode::kRegular, m) == Mode::kRegular);
    SwitchParams tails = params;
    tails.switch_reg_to_partial = -0.02;
    CHECK(switching_decision(mon, tails, Mode::kRegular, m) == Mode::kPartial);
  }
  SUBCASE("unchanged mode keeps zenith") {
    MonitorState mon;
    mon.zenith = 0.7;
    mon.counter_no_zenith = 5;
    mon.trend = -0.5;
    CHECK(switching_decision(mon, params, Mode::kRegular, m) == Mode::kRegular);
    CHECK(mon.zenith == 0.7);
    CHECK(mon.counter_no_zenith == 5);
  }
}

TEST_CASE("manual sweeps keep every column PSD and the bookkeeping aligned") {
  const LayoutSpec l{3, 6, 3, 3};
  const GramMatrix g = scenario_gram(ScenarioKind::kPartlyMixed, l, 11);
  Rng rng(12);
  ModelMatrix p = init_model(l, rng);
  const RMatrix dist = relative_distances(g);
  MonitorState mon;
  Mode mode = Mode::kPartial;
  long updates = 0;
  for (int sweep = 0; sweep < 12; ++sweep) {
    for (int ind = 0; ind < p.size(); ++ind) {
      const HermVec old = p.column_vec(ind);
      HermVec next;
      if (mode == Mode::kPartial)
        next = partial_update(p, ind, g, dist, 9);
      else if (mode == Mode::kSelectionOfFastest)
        next = fastest_update(p, ind, g, mon, 9);
      else
        next = regular_update(p, ind, g);
      p.set_column(ind, next.coords);
      monitor_step(mon, ind, old, next, p, g);
      ++updates;
      REQUIRE(min_column_eigenvalue(p) >= -1e-9);
      REQUIRE(static_cast<long>(mon.shifts.size()) == updates);
      REQUIRE(static_cast<long>(mon.error_history.size()) == updates);
    }
    const Mode next_mode = switching_decision(mon, init_switch_params(p.size(), rng), mode, p.size());
    if (next_mode != mode) CHECK(is_cycle_step(mode, next_mode));
    mode = sweep % 3 == 2 ? Mode::kSelectionOfFastest : next_mode;
  }
}

TEST_CASE("a REGULAR sweep leaves an exact model exact") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(300 + seed);
    ModelMatrix p = init_model(LayoutSpec{3, 4, 3, 3}, rng);
    const GramMatrix g = build_gram(p);
    const double before = gram_error(p, g);
    REQUIRE(before <= 1e-10);
    for (int ind = 0; ind < p.size(); ++ind) p.set_column(ind, regular_update(p, ind, g).coords);
    CHECK(std::abs(gram_error(p, g) - before) < 1e-8);
  }
}

TEST_CASE("realize") {
  SolveConfig cfg;
  cfg.rng_seed = 5;

  SUBCASE("pure qubit scenario converges") {
    const GramMatrix g = scenario_gram(ScenarioKind::kPure, kQubit, 13);
    const auto r = realize(g, kQubit, cfg);
    CHECK(r.report.converged);
    CHECK(r.report.final_max_entry_error <= 1e-2);
    CHECK(r.report.final_max_entry_error == doctest::Approx(max_entry_error(r.model, g)));
    CHECK(r.report.final_error == doctest::Approx(gram_error(r.model, g)));
    CHECK(r.report.min_eigenvalue >= -1e-9);
    CHECK(min_column_eigenvalue(r.model) >= -1e-9);
    long total = 0;
    for (const auto& seg : r.report.mode_history) total += seg.calls;
    CHECK(total == r.report.subroutine_calls);
    REQUIRE(!r.report.mode_history.empty());
    CHECK(r.report.mode_history.front().mode == Mode::kPartial);
    for (std::size_t i = 1; i < r.report.mode_history.size(); ++i)
      CHECK(is_cycle_step(r.report.mode_history[i - 1].mode, r.report.mode_history[i].mode));
  }
  SUBCASE("purified qutrit scenario converges") {
    const LayoutSpec l{3, 27, 9, 3};
    const auto r = realize(scenario_gram(ScenarioKind::kPurified, l, 14), l, cfg);
    CHECK(r.report.converged);
  }
  SUBCASE("starting at the solution stops within two sweeps") {
    Rng rng(cfg.rng_seed);
    const GramMatrix g = build_gram(init_model(kQubit, rng));
    const auto r = realize(g, kQubit, cfg);
    CHECK(r.report.converged);
    CHECK(r.report.subroutine_calls <= 2 * kQubit.columns());
  }
  SUBCASE("same seed, same trajectory") {
    const GramMatrix g = scenario_gram(ScenarioKind::kPartlyMixed, kQubit, 15);
    const auto a = realize(g, kQubit, cfg);
    const auto b = realize(g, kQubit, cfg);
    CHECK(a.report.subroutine_calls == b.report.subroutine_calls);
    CHECK(a.report.mode_history == b.report.mode_history);
    CHECK(a.model.matrix() == b.model.matrix());
  }
  SUBCASE("budget exhaustion returns the best model") {
    const GramMatrix g = scenario_gram(ScenarioKind::kPartlyMixed, LayoutSpec{3, 27, 9, 3}, 16);
    cfg.max_subroutine_calls = 7;
    const auto r = realize(g, LayoutSpec{3, 27, 9, 3}, cfg);
    CHECK(r.report.subroutine_calls == 7);
    CHECK(r.report.budget_exhausted);
    CHECK_FALSE(r.report.converged);
    CHECK(min_column_eigenvalue(r.model) >= -1e-9);
  }
  SUBCASE("layout mismatch") {
    const GramMatrix g = scenario_gram(ScenarioKind::kPure, kQubit, 17);
    CHECK_THROWS_AS(realize(g, LayoutSpec{2, 7, 4, 2}, cfg), InputError);
  }
  SUBCASE("bad config") {
    const GramMatrix g = scenario_gram(ScenarioKind::kPure, kQubit, 18);
    cfg.entry_threshold = -1.0;
    CHECK_THROWS_AS(realize(g, kQubit, cfg), InputError);
  }
}
