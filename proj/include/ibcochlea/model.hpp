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

// Straight cochlear-channel model generator and the binary model file.
//
// The channel is a closed box aligned with the x axis, split lengthwise at
// mid height by a partition (bony shelf strips on both sides of an elastic
// membrane strip). The partition stops short of the apical end wall, leaving
// the helicotrema gap that joins the upper and lower scalae. The base end
// wall carries the oval window (upper scala, driven) and the round window
// (lower scala).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ibcochlea/binary_io.hpp"
#include "ibcochlea/lattice.hpp"
#include "ibcochlea/structures.hpp"

namespace ibc {

struct FluidSpec {
  Dims dims;
  double h = 1.0;
  double rho = 1.0;
  double mu = 0.0;

  Lattice lattice() const { return Lattice(dims, h); }
  friend bool operator==(const FluidSpec&, const FluidSpec&) = default;
};

/// Everything a simulation needs besides the time-stepping controls.
struct ModelFiles {
  FluidSpec fluid;
  Drive drive;
  std::vector<LagrangianGrid> grids;

  const LagrangianGrid* find(const std::string& name) const;
  std::size_t point_count() const;
  friend bool operator==(const ModelFiles&, const ModelFiles&) = default;
};

/// Mesh width of the default desk channel (2 cm box length over 64 cells).
inline constexpr double kDeskH = 2.0 / 64;

/// Lengths in cm, stiffnesses in dyn/cm. Text config keys are the field
/// names below.
struct ChannelSpec {
  int n1 = 64, n2 = 32, n3 = 32;
  double h = kDeskH;
  double rho = 1.0;
  double mu = 0.5;
  /// Material point spacing; 0 selects h / 2.
  double spacing = 0.0;

  /// Base end wall position; the box is centred in y and z.
  double channel_x0 = 4 * kDeskH;
  double channel_length = 56 * kDeskH;
  double channel_width = 12 * kDeskH;
  double channel_height = 12 * kDeskH;
  double helicotrema = 3 * kDeskH;

  double w_base = 3 * kDeskH;
  double w_apex = 6 * kDeskH;
  double k0 = 1.0e6;
  /// 0 derives lambda from compliance_ratio over the membrane length.
  double lambda = 0.0;
  double compliance_ratio = 1.0e4;
  double membrane_prestrain = 1.0;

  double window_radius = 1.75 * kDeskH;
  double window_stiffness = 2.0e5;
  double window_prestrain = 1.0;
  double wall_stiffness = 2.0e6;

  double drive_amplitude = 1.0;
  double drive_frequency = 1000.0;

  double material_spacing() const { return spacing > 0.0 ? spacing : 0.5 * h; }
  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys and
/// malformed values throw std::invalid_argument naming the line.
ChannelSpec parse_channel_spec(std::istream& in, const ChannelSpec& defaults = {});
ChannelSpec load_channel_spec(const std::filesystem::path& path);
/// Inverse of parse_channel_spec.
void write_channel_spec(std::ostream& out, const ChannelSpec& spec);

/// Generates the channel model. Throws std::invalid_argument when the spec
/// is inconsistent or a grid's point spacing falls outside [h/4, h].
ModelFiles build_channel(const ChannelSpec& spec);

/// Smallest and largest nearest-neighbour distance along the parameter axes.
std::pair<double, double> spacing_range(const LagrangianGrid& g);

/// Membrane stiffness decay rate actually used by build_channel.
double membrane_lambda(const ChannelSpec& spec);

// Model file. Layout documented in docs/file_formats.md.
void write_model(std::ostream& out, const ModelFiles& model);
ModelFiles read_model(std::istream& in, const std::string& context = "model");
void write_model_file(const std::filesystem::path& path, const ModelFiles& model);
ModelFiles read_model_file(const std::filesystem::path& path);

// Model record without the file header; shared with checkpoints.
void write_model_body(BinaryWriter& w, const ModelFiles& model);
ModelFiles read_model_body(BinaryReader& r);

}  // namespace ibc
