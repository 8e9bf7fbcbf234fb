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

// Snapshot (instantaneous material positions) and checkpoint (full resumable
// state) files. Layouts are documented in docs/file_formats.md.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ibcochlea/lattice.hpp"
#include "ibcochlea/model.hpp"
#include "ibcochlea/vec3.hpp"

namespace ibc {

struct GridPositions {
  std::string name;
  int n1 = 0;
  int n2 = 0;
  std::vector<Vec3> X;

  friend bool operator==(const GridPositions&, const GridPositions&) = default;
};

struct Snapshot {
  std::uint64_t step = 0;
  double time = 0.0;
  double dt = 0.0;
  Dims dims;
  double h = 0.0;
  std::vector<GridPositions> grids;
  /// Present only when velocity dumping was requested.
  std::optional<VectorField> velocity;

  const GridPositions* find(const std::string& name) const;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

void write_snapshot(std::ostream& out, const Snapshot& snap);
Snapshot read_snapshot(std::istream& in, const std::string& context = "snapshot");
void write_snapshot_file(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot_file(const std::filesystem::path& path);

/// Canonical snapshot file name for a step, e.g. snap_00000120.ibs.
std::string snapshot_name(std::uint64_t step);
/// Snapshot files in a directory, ordered by step.
std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir);

struct Checkpoint {
  std::uint64_t step = 0;
  double dt = 0.0;
  /// Rest geometry, laws, fluid parameters and the drive in effect.
  ModelFiles model;
  /// Current positions, grid by grid, in model order.
  std::vector<std::vector<Vec3>> positions;
  VectorField velocity;
};

void write_checkpoint_file(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint read_checkpoint_file(const std::filesystem::path& path);

}  // namespace ibc
