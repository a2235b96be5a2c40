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

#pragma once

#include "core/config.hpp"
#include "core/factor_grid.hpp"
#include "core/task.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace vine::harness {

/// Stable per-trial seed for (master, cell, repetition).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep);

struct BatchRow {
  std::string trial_id;
  std::uint64_t seed = 0;
  task::TrialRecord record;  // trace kept only when requested
};

/// `reps` trials of the configured paradigm and operator.
std::vector<BatchRow> run_batch(const SimConfig& config, std::uint64_t master_seed, int reps,
                                bool keep_traces = false);

std::string batch_csv(const SimConfig& config, const std::vector<BatchRow>& rows);

struct FactorialRow {
  std::size_t cell = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::array<double, kFactorCount> levels{};
  std::array<bool, kFactorCount> high{};  // level indicator, false for collapsed factors
  bool ok = true;                         // false if the trial threw
  std::string error;
  task::TrialRecord record;               // trace dropped
};

struct MainEffect {
  Factor factor;
  double dT = 0.0;
  double dL = 0.0;
  double dH = 0.0;
  double dP = 0.0;
};

struct FactorialResult {
  std::vector<FactorialRow> rows;  // cell-major, then repetition
  std::vector<MainEffect> effects;  // active factors only
};

/// Full two-level sweep of the AAN parameters. Trials run under the AAN
/// paradigm with the configured operator; `config.harness.workers` threads
/// may run in parallel and rows are merged in cell order.
FactorialResult run_factorial(const SimConfig& config, const FactorGrid& grid,
                              std::uint64_t master_seed);

/// Applies the levels of `cell` to a paradigm configuration.
paradigms::ParadigmConfig cell_config(const paradigms::ParadigmConfig& base,
                                      const FactorGrid& grid, std::size_t cell,
                                      std::array<double, kFactorCount>* levels = nullptr,
                                      std::array<bool, kFactorCount>* high = nullptr);

std::string factorial_csv(const FactorialResult& result);
std::string main_effects_csv(const FactorialResult& result);

}  // namespace vine::harness
