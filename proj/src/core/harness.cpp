// Copyright 2026 The vinesim Authors
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

#include "core/harness.hpp"

#include "core/trial.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

namespace vine::harness {

std::string_view factor_name(Factor f) {
  switch (f) {
    case Factor::kFMax: return "f_max";
    case Factor::kKMax: return "k_max";
    case Factor::kDelta: return "delta";
    case Factor::kXiSteady: return "xi_s";
    case Factor::kXiClosing: return "xi_c";
    case Factor::kXiAway: return "xi_a";
  }
  return "?";
}

std::size_t FactorGrid::active_factors() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.active() ? 1 : 0;
  return n;
}

void FactorGrid::validate() const {
  if (repetitions < 1) throw Error(ErrorCode::kInvalidArgument, "repetitions must be >= 1");
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    const auto& l = levels[i];
    const std::string name(factor_name(static_cast<Factor>(i)));
    if (!(l.low > 0.0) || !(l.high > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "factor " + name + " levels must be positive");
    }
    if (l.low > l.high) {
      throw Error(ErrorCode::kInvalidArgument, "factor " + name + " has low > high");
    }
  }
  if (levels[0].high > 7.0) throw Error(ErrorCode::kInvalidArgument, "f_max level above 7 N");
}

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Runs job(i) for i in [0, n) on up to `workers` threads.
template <typename Job>
void parallel_for(std::size_t n, unsigned workers, Job&& job) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep) {
  return mix(mix(mix(master) ^ cell) ^ rep);
}

std::vector<BatchRow> run_batch(const SimConfig& config, std::uint64_t master_seed, int reps,
                                bool keep_traces) {
  if (reps < 1) throw Error(ErrorCode::kInvalidArgument, "reps must be >= 1");
  config.validate();
  std::vector<BatchRow> rows(static_cast<std::size_t>(reps));
  parallel_for(rows.size(), config.harness.workers, [&](std::size_t i) {
    auto& row = rows[i];
    row.trial_id = "rep" + std::to_string(i);
    row.seed = derive_seed(master_seed, 0, i);
    row.record = run_trial(config, row.seed);
    if (!keep_traces) row.record.trace.clear();
  });
  return rows;
}

std::string batch_csv(const SimConfig& config, const std::vector<BatchRow>& rows) {
  std::string out = record_csv_header() + "\n";
  const auto paradigm = paradigms::to_token(config.paradigm.kind);
  const auto op = to_token(config.harness.operator_source);
  for (const auto& r : rows) {
    out += record_csv_row(r.record, r.trial_id, paradigm, op, r.seed);
    out += '\n';
  }
  return out;
}

paradigms::ParadigmConfig cell_config(const paradigms::ParadigmConfig& base,
                                      const FactorGrid& grid, std::size_t cell,
                                      std::array<double, kFactorCount>* levels,
                                      std::array<bool, kFactorCount>* high) {
  paradigms::ParadigmConfig p = base;
  p.kind = paradigms::ParadigmKind::kAssistAsNeeded;
  std::array<double, kFactorCount> v{};
  std::array<bool, kFactorCount> h{};
  std::size_t bit = 0;
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    const auto& l = grid.levels[i];
    if (l.active()) {
      h[i] = ((cell >> bit) & 1U) != 0;
      ++bit;
    }
    v[i] = h[i] ? l.high : l.low;
  }
  p.f_max = v[0];
  p.k_max = v[1];
  p.delta = v[2];
  p.xi_steady = v[3];
  p.xi_closing = v[4];
  p.xi_away = v[5];
  if (levels) *levels = v;
  if (high) *high = h;
  return p;
}

FactorialResult run_factorial(const SimConfig& config, const FactorGrid& grid,
                              std::uint64_t master_seed) {
  grid.validate();
  const std::size_t cells = grid.cell_count();
  const auto reps = static_cast<std::size_t>(grid.repetitions);
  FactorialResult result;
  result.rows.resize(cells * reps);
  parallel_for(result.rows.size(), config.harness.workers, [&](std::size_t i) {
    auto& row = result.rows[i];
    row.cell = i / reps;
    row.rep = static_cast<int>(i % reps);
    row.seed = derive_seed(master_seed, row.cell, row.rep);
    SimConfig cfg = config;
    cfg.paradigm = cell_config(config.paradigm, grid, row.cell, &row.levels, &row.high);
    try {
      row.record = run_trial(cfg, row.seed);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    row.record.trace.clear();
  });

  for (std::size_t f = 0; f < kFactorCount; ++f) {
    if (!grid.levels[f].active()) continue;
    double sum[2][4] = {};
    int count[2] = {};
    for (const auto& row : result.rows) {
      if (!row.ok) continue;
      const int side = row.high[f] ? 1 : 0;
      sum[side][0] += row.record.completion_time;
      sum[side][1] += row.record.trajectory_length;
      sum[side][2] += row.record.mean_assistance;
      sum[side][3] += row.record.precision;
      ++count[side];
    }
    MainEffect e{static_cast<Factor>(f)};
    if (count[0] > 0 && count[1] > 0) {
      auto diff = [&](int m) { return sum[1][m] / count[1] - sum[0][m] / count[0]; };
      e.dT = diff(0);
      e.dL = diff(1);
      e.dH = diff(2);
      e.dP = diff(3);
    }
    result.effects.push_back(e);
  }
  return result;
}

std::string factorial_csv(const FactorialResult& result) {
  std::ostringstream os;
  os << "cell,rep,seed";
  for (std::size_t f = 0; f < kFactorCount; ++f) os << ',' << factor_name(static_cast<Factor>(f));
  os << ",ok,completed,T,L,H,H_per_iteration,P,error\n";
  for (const auto& r : result.rows) {
    os << r.cell << ',' << r.rep << ',' << r.seed;
    for (double v : r.levels) os << ',' << fmt(v);
    os << ',' << (r.ok ? 1 : 0) << ',' << (r.record.completed ? 1 : 0) << ','
       << fmt(r.record.completion_time) << ',' << fmt(r.record.trajectory_length) << ','
       << fmt(r.record.mean_assistance) << ',' << fmt(r.record.assistance_per_iteration) << ','
       << fmt(r.record.precision) << ',';
    // Error text is free-form; quote it and drop embedded quotes.
    if (!r.ok) {
      std::string msg = r.error;
      for (char& c : msg) {
        if (c == '"' || c == '\n') c = '\'';
      }
      os << '"' << msg << '"';
    }
    os << '\n';
  }
  return os.str();
}

std::string main_effects_csv(const FactorialResult& result) {
  std::ostringstream os;
  os << "factor,dT,dL,dH,dP\n";
  for (const auto& e : result.effects) {
    os << factor_name(e.factor) << ',' << fmt(e.dT) << ',' << fmt(e.dL) << ',' << fmt(e.dH) << ','
       << fmt(e.dP) << '\n';
  }
  return os.str();
}

}  // namespace vine::harness
