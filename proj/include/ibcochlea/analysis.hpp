// Copyright 2026 The ibcochlea Authors.
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

// Membrane observables extracted from snapshot series: centreline
// displacement, wave envelope, peak location, linearity and frequency-sweep
// tables.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ibcochlea/snapshot.hpp"
#include "ibcochlea/structures.hpp"

namespace ibc {

/// Rest geometry of the membrane centreline: arclength stations, rest
/// positions and rest normals. For an even number of rows the centreline is
/// the mean of the two middle rows.
struct CenterlineFrame {
  std::string grid;
  int n1 = 0;
  int n2 = 0;
  std::vector<double> s;
  std::vector<Vec3> normal;
};

CenterlineFrame centerline_frame(const LagrangianGrid& membrane);

struct CenterlineProfile {
  std::uint64_t step = 0;
  double time = 0.0;
  std::vector<double> s;  // cm
  std::vector<double> d;  // cm, along the rest normal
};

/// Normal displacement of the membrane centreline in `snap`, measured from
/// the rest positions of `membrane`.
CenterlineProfile centerline(const Snapshot& snap, const LagrangianGrid& membrane);
CenterlineProfile centerline(const Snapshot& snap, const LagrangianGrid& membrane, const CenterlineFrame& frame);

struct Envelope {
  std::vector<double> s;
  std::vector<double> e;
  std::uint64_t window_start = 0;
  std::uint64_t window_end = 0;
};

/// Pointwise max of |d| over the profiles with step in [start, end].
/// Throws std::invalid_argument if no profile falls in the window.
Envelope envelope(std::span<const CenterlineProfile> profiles, std::uint64_t start, std::uint64_t end);

/// Station of the global maximum; ties resolve to the smallest station.
double peak_location(const Envelope& env);
std::size_t peak_index(const Envelope& env);

/// Smallest e(s) / e(peak) over stations past the peak; 1 when the peak is
/// the last station.
double post_peak_min_ratio(const Envelope& env);

struct LinearityReport {
  double scale = 1.0;
  double threshold_fraction = 0.01;
  std::vector<double> s;
  std::vector<double> ratio;     // e_b / e_a per station (NaN where e_a == 0)
  std::vector<bool> considered;  // e_a above threshold_fraction * peak(e_a)
  /// max |ratio / scale - 1| over considered stations
  double max_deviation = 0.0;
};

LinearityReport linearity_report(const Envelope& a, const Envelope& b, double scale,
                                 double threshold_fraction = 0.01);

struct SweepRow {
  double frequency = 0.0;
  double peak = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // ascending frequency
  /// Peak station strictly decreases as frequency increases.
  bool monotone = true;
};

SweepReport frequency_sweep_report(std::vector<std::pair<double, Envelope>> runs);

// CSV writers. Every file starts with a header row.
void write_profile_csv(std::ostream& out, const CenterlineProfile& p);   // station_cm,displacement_cm
void write_envelope_csv(std::ostream& out, const Envelope& env);         // station_cm,envelope_cm
void write_linearity_csv(std::ostream& out, const LinearityReport& r);   // station_cm,ratio,considered
void write_sweep_csv(std::ostream& out, const SweepReport& r);           // frequency_hz,peak_cm

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line plot.
void write_svg_plot(std::ostream& out, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, std::span<const PlotSeries> series);

/// Loads every snapshot in `dir` and extracts the centreline of `grid`,
/// using the model copy stored next to the snapshots.
std::vector<CenterlineProfile> load_profiles(const std::filesystem::path& dir, const std::string& grid);

}  // namespace ibc
