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

// The immersed boundary time loop.
//
// Each step:
//   1. material force densities f^n at t = n dt (elastic laws plus drive);
//   2. F^n = spread of f^n over the free material points;
//   3. (u^{n+1}, p^{n+1}) from the fluid solver;
//   4. X^{n+1} = X^n + dt * interpolate(u^{n+1}, X^n) for free points, fixed
//      points re-pinned to their rest positions.
//
// Fixed points act as anchors of the spring networks. The force computed on
// them is the reaction carried by the supporting bone and is not spread.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ibcochlea/fluid_solver.hpp"
#include "ibcochlea/lattice.hpp"
#include "ibcochlea/model.hpp"
#include "ibcochlea/snapshot.hpp"
#include "ibcochlea/structures.hpp"

namespace ibc {

struct SimState {
  std::uint64_t n = 0;
  double dt = 0.0;
  FluidGrid fluid;
  std::vector<LagrangianGrid> grids;
  Drive drive;

  double time() const { return static_cast<double>(n) * dt; }
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// Fluid at rest, every grid at its rest configuration.
SimState make_state(const ModelFiles& model, double dt);
SimState state_from_checkpoint(const Checkpoint& ck);
Checkpoint make_checkpoint(const SimState& s);
Snapshot make_snapshot(const SimState& s, bool with_velocity = false);
/// The model the state was built from (rest geometry, fluid parameters, drive).
ModelFiles model_of(const SimState& s);

/// Slab colouring of the material points for conflict-free spreading.
///
/// The fluid lattice is cut along axis 1 into slabs of `slab_width` >= 4
/// cells. A point whose kernel window starts in slab s writes only into slabs
/// s and s + 1, so all even slabs (then all odd slabs) can be spread
/// concurrently. Within a slab, points are visited in grid order, then index
/// order, which fixes the summation order at every lattice node independently
/// of the thread count.
class SpreadPartition {
 public:
  struct Entry {
    int grid;
    int point;
  };

  explicit SpreadPartition(const Lattice& lattice, int slab_width = 4);

  int slab_count() const { return slab_count_; }
  int slab_width() const { return slab_width_; }
  int slab_of(double x) const;
  const std::vector<Entry>& bucket(int slab) const { return buckets_[slab]; }
  std::size_t rebuild_count() const { return rebuilds_; }

  /// Re-buckets the free points if any moved to another slab (or on first
  /// use). Returns true when a rebuild happened.
  bool update(std::span<const LagrangianGrid> grids);

  /// Adds the spread of every free point's force into `target`.
  void spread(std::span<const LagrangianGrid> grids, std::span<const std::vector<Vec3>> forces,
              VectorField& target) const;

 private:
  Lattice lattice_;
  int slab_width_;
  int slab_count_;
  std::vector<std::vector<Entry>> buckets_;
  std::vector<std::vector<int>> slab_of_point_;
  std::size_t rebuilds_ = 0;
};

struct StepReport {
  double cfl = 0.0;
  bool cfl_warning = false;
};

class Engine {
 public:
  explicit Engine(SimState state, SolverOptions options = {});

  const SimState& state() const { return state_; }
  const ScalarField& pressure() const { return pressure_; }
  const SpreadPartition& partition() const { return partition_; }

  /// One time step. Throws std::domain_error naming the step on any
  /// non-finite value.
  StepReport step();

 private:
  SimState state_;
  FluidSolver solver_;
  SpreadPartition partition_;
  ScalarField pressure_;
};

struct RunOptions {
  std::uint64_t steps = 0;
  std::uint64_t snapshot_every = 10;
  std::filesystem::path out_dir;
  bool dump_velocity = false;
  /// Called after every step with the step report; may be empty.
  std::function<void(const SimState&, const StepReport&)> on_step;
};

struct RunSummary {
  std::uint64_t final_step = 0;
  std::size_t snapshots = 0;
  double max_cfl = 0.0;
  std::uint64_t cfl_warnings = 0;
  double seconds = 0.0;
};

/// Advances `engine` by opts.steps, writing model.ibm, snapshots at steps that
/// are multiples of snapshot_every (including the starting step) and a final
/// checkpoint.ibk into opts.out_dir. I/O errors carry the offending path.
RunSummary run(Engine& engine, const RunOptions& opts);

inline constexpr const char* kModelCopyName = "model.ibm";
inline constexpr const char* kCheckpointName = "checkpoint.ibk";

struct BenchRow {
  int threads = 1;
  double seconds_per_step = 0.0;
  std::uint64_t checksum = 0;
};

/// Wall-clock time per step for each thread count, starting from rest every
/// time. `checksum` hashes the final positions bit for bit.
std::vector<BenchRow> bench(const ModelFiles& model, double dt, std::uint64_t steps, std::span<const int> threads);
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

/// FNV-1a over the bytes of every position, grid by grid.
std::uint64_t position_checksum(const SimState& s);

/// Largest distance of a tethered wall point from its rest position.
double max_wall_drift(const SimState& s);
/// Largest distance of a fixed point from its rest position (always 0).
double max_fixed_displacement(const SimState& s);

}  // namespace ibc
