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

#include <array>
#include <cstddef>
#include <string_view>

namespace vine::harness {

struct FactorLevels {
  double low = 0.0;
  double high = 0.0;

  bool active() const { return low != high; }
};

enum class Factor : std::size_t { kFMax, kKMax, kDelta, kXiSteady, kXiClosing, kXiAway };
inline constexpr std::size_t kFactorCount = 6;

std::string_view factor_name(Factor f);

/// Two-level grid over the AAN parameters. A factor whose levels coincide is
/// collapsed and contributes a single level.
struct FactorGrid {
  std::array<FactorLevels, kFactorCount> levels{{
      {3.0, 7.0},      // f_max, N
      {50.0, 100.0},   // k_max, N/m
      {2.0, 5.0},      // delta, N/m per s
      {1.0, 3.0},      // xi_steady, s
      {1.0, 3.0},      // xi_closing, s
      {1.0, 3.0},      // xi_away, s
  }};
  int repetitions = 3;

  FactorLevels& operator[](Factor f) { return levels[static_cast<std::size_t>(f)]; }
  const FactorLevels& operator[](Factor f) const { return levels[static_cast<std::size_t>(f)]; }

  std::size_t active_factors() const;
  std::size_t cell_count() const { return std::size_t{1} << active_factors(); }
  std::size_t trial_count() const { return cell_count() * static_cast<std::size_t>(repetitions); }
  void validate() const;
};

}  // namespace vine::harness
