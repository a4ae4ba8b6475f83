// Copyright 2026 The cree Authors
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

#include <cstdint>
#include <string>
#include <vector>

#include "cree/scenario_io.hpp"

namespace cree {

inline constexpr int kFirstFigure = 2;
inline constexpr int kLastFigure = 10;

/// One swept curve of a figure preset.
struct CurvePreset {
  std::string name;
  ScenarioParams params;
  std::string sweep_key;
  std::vector<double> values;
};

struct FigureOptions {
  std::int64_t mc_count = 0;  // 0 keeps each preset's own count
  std::uint64_t seed = 1;
};

/// Curves of a solver-driven figure (ids 4..10) with options applied.
/// Throws kInvalidArgument for ids 2 and 3, which are not sweeps.
std::vector<CurvePreset> figure_curves(int id, const FigureOptions& options = {});

struct FigureFile {
  std::string name;  // file name inside the output directory
  std::string content;
};

struct FigureResult {
  int id = 0;
  std::vector<FigureFile> curves;
  std::string manifest;
};

FigureResult run_figure(int id, const FigureOptions& options = {});

/// Writes every curve and manifest.txt into `dir`, creating it if needed.
void write_figure(const FigureResult& result, const std::string& dir);

}  // namespace cree
