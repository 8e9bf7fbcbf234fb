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

#include "ibcochlea/engine.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ibcochlea/kernel.hpp"

namespace ibc {

void SimState::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("state: dt must be positive");
  for (const auto& g : grids) g.validate();
  if (!drive.target.empty()) {
    bool found = false;
    for (const auto& g : grids) found = found || g.name == drive.target;
    if (!found) throw std::invalid_argument("state: drive target '" + drive.target + "' not found");
    drive.signal.validate();
  }
}

SimState make_state(const ModelFiles& model, double dt) {
  SimState s;
  s.dt = dt;
  s.fluid = FluidGrid(model.fluid.lattice(), model.fluid.rho, model.fluid.mu);
  s.grids = model.grids;
  for (auto& g : s.grids) g.X = g.X_rest;
  s.drive = model.drive;
  s.validate();
  return s;
}

ModelFiles model_of(const SimState& s) {
  ModelFiles m;
  const Lattice& lat = s.fluid.lattice;
  m.fluid = FluidSpec{lat.dims, lat.h, s.fluid.rho, s.fluid.mu};
  m.drive = s.drive;
  m.grids = s.grids;
  for (auto& g : m.grids) g.X = g.X_rest;
  return m;
}

Checkpoint make_checkpoint(const SimState& s) {
  Checkpoint ck;
  ck.step = s.n;
  ck.dt = s.dt;
  ck.model = model_of(s);
  for (const auto& g : s.grids) ck.positions.push_back(g.X);
  ck.velocity = s.fluid.u;
  return ck;
}

SimState state_from_checkpoint(const Checkpoint& ck) {
  SimState s = make_state(ck.model, ck.dt);
  s.n = ck.step;
  if (ck.positions.size() != s.grids.size()) throw std::invalid_argument("checkpoint: grid count mismatch");
  for (std::size_t g = 0; g < s.grids.size(); ++g) {
    if (ck.positions[g].size() != s.grids[g].X.size()) {
      throw std::invalid_argument("checkpoint: position count mismatch for grid '" + s.grids[g].name + "'");
    }
    s.grids[g].X = ck.positions[g];
  }
  if (!(ck.velocity.lattice() == s.fluid.lattice)) throw std::invalid_argument("checkpoint: velocity lattice mismatch");
  s.fluid.u = ck.velocity;
  s.validate();
  return s;
}

Snapshot make_snapshot(const SimState& s, bool with_velocity) {
  Snapshot snap;
  snap.step = s.n;
  snap.time = s.time();
  snap.dt = s.dt;
  snap.dims = s.fluid.lattice.dims;
  snap.h = s.fluid.lattice.h;
  for (const auto& g : s.grids) snap.grids.push_back({g.name, g.n1, g.n2, g.X});
  if (with_velocity) snap.velocity = s.fluid.u;
  return snap;
}

// ---------------------------------------------------------------------------

SpreadPartition::SpreadPartition(const Lattice& lattice, int slab_width) : lattice_(lattice), slab_width_(slab_width) {
  if (slab_width < 4 || !is_power_of_two(slab_width)) {
    throw std::invalid_argument("spread partition: slab width must be a power of two >= 4");
  }
  slab_count_ = std::max(1, lattice.dims.n1 / slab_width);
  buckets_.resize(static_cast<std::size_t>(slab_count_));
}

int SpreadPartition::slab_of(double x) const {
  const int base = Lattice::wrap(static_cast<int>(std::floor(x / lattice_.h)) - 1, lattice_.dims.n1);
  return std::min(base / slab_width_, slab_count_ - 1);
}

bool SpreadPartition::update(std::span<const LagrangianGrid> grids) {
  bool stale = slab_of_point_.size() != grids.size();
  for (std::size_t g = 0; g < grids.size() && !stale; ++g) {
    const auto& grid = grids[g];
    const auto& slabs = slab_of_point_[g];
    if (slabs.size() != grid.X.size()) {
      stale = true;
      break;
    }
    for (std::size_t q = 0; q < slabs.size(); ++q) {
      if (!grid.fixed[q] && slabs[q] != slab_of(grid.X[q].x)) {
        stale = true;
        break;
      }
    }
  }
  if (!stale) return false;

  for (auto& b : buckets_) b.clear();
  slab_of_point_.assign(grids.size(), {});
  for (std::size_t g = 0; g < grids.size(); ++g) {
    const auto& grid = grids[g];
    auto& slabs = slab_of_point_[g];
    slabs.assign(grid.X.size(), -1);
    for (std::size_t q = 0; q < grid.X.size(); ++q) {
      if (grid.fixed[q]) continue;
      const int s = slab_of(grid.X[q].x);
      slabs[q] = s;
      buckets_[static_cast<std::size_t>(s)].push_back({static_cast<int>(g), static_cast<int>(q)});
    }
  }
  ++rebuilds_;
  return true;
}

void SpreadPartition::spread(std::span<const LagrangianGrid> grids, std::span<const std::vector<Vec3>> forces,
                             VectorField& target) const {
  for (int phase = 0; phase < 2; ++phase) {
    // domain_error cannot leave an OpenMP region; carry the first message out
    std::string error;
#pragma omp parallel for schedule(dynamic, 1)
    for (int s = phase; s < slab_count_; s += 2) {
      try {
        for (const Entry& e : buckets_[static_cast<std::size_t>(s)]) {
          const auto& g = grids[static_cast<std::size_t>(e.grid)];
          spread_points(forces[static_cast<std::size_t>(e.grid)], g.X, g.dq(), std::span<const int>(&e.point, 1),
                        target, g.name);
        }
      } catch (const std::exception& ex) {
#pragma omp critical(ibc_spread_error)
        if (error.empty()) error = ex.what();
      }
    }
    if (!error.empty()) throw std::domain_error(error);
  }
}

// ---------------------------------------------------------------------------

Engine::Engine(SimState state, SolverOptions options)
    : state_(std::move(state)),
      solver_(state_.fluid.lattice, state_.fluid.rho, state_.fluid.mu, options),
      partition_(state_.fluid.lattice),
      pressure_(state_.fluid.lattice) {
  state_.validate();
}

StepReport Engine::step() {
  SimState& s = state_;
  StepReport report;
  try {
    const auto forces = total_force(s.grids, s.time(), s.drive);

    s.fluid.force.fill(0.0);
    partition_.update(s.grids);
    partition_.spread(s.grids, forces, s.fluid.force);

    StepResult res = solver_.solve_step(s.fluid.u, s.fluid.force, s.dt);
    report.cfl = res.cfl;
    report.cfl_warning = res.cfl_warning;
    s.fluid.u = std::move(res.u);
    pressure_ = std::move(res.p);

    for (auto& g : s.grids) {
      const long n = static_cast<long>(g.X.size());
      long bad = -1;
#pragma omp parallel for schedule(static) reduction(max : bad)
      for (long q = 0; q < n; ++q) {
        if (g.fixed[q]) continue;
        const Vec3 U = interpolate_point(s.fluid.u, g.X[q]);
        g.X[q] += U * s.dt;
        if (!is_finite(g.X[q])) bad = std::max(bad, q);
      }
      if (bad >= 0) {
        throw std::domain_error("non-finite position at point " + std::to_string(bad) + " of grid '" + g.name + "'");
      }
      g.pin_fixed();
    }
  } catch (const std::domain_error& e) {
    throw std::domain_error("step " + std::to_string(s.n) + ": " + e.what());
  }
  ++s.n;
  return report;
}

// ---------------------------------------------------------------------------

RunSummary run(Engine& engine, const RunOptions& opts) {
  namespace fs = std::filesystem;
  if (opts.snapshot_every == 0) throw std::invalid_argument("run: snapshot cadence must be positive");
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + opts.out_dir.string() + ": " + ec.message());

  const auto t0 = std::chrono::steady_clock::now();
  RunSummary summary;
  write_model_file(opts.out_dir / kModelCopyName, model_of(engine.state()));

  auto snapshot = [&] {
    const SimState& s = engine.state();
    write_snapshot_file(opts.out_dir / snapshot_name(s.n), make_snapshot(s, opts.dump_velocity));
    ++summary.snapshots;
  };
  if (engine.state().n % opts.snapshot_every == 0) snapshot();

  for (std::uint64_t k = 0; k < opts.steps; ++k) {
    const StepReport r = engine.step();
    summary.max_cfl = std::max(summary.max_cfl, r.cfl);
    summary.cfl_warnings += r.cfl_warning;
    if (opts.on_step) opts.on_step(engine.state(), r);
    if (engine.state().n % opts.snapshot_every == 0) snapshot();
  }
  write_checkpoint_file(opts.out_dir / kCheckpointName, make_checkpoint(engine.state()));
  summary.final_step = engine.state().n;
  summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summary;
}

std::uint64_t position_checksum(const SimState& s) {
  std::uint64_t hash = 1469598103934665603ull;
  for (const auto& g : s.grids) {
    for (const Vec3& p : g.X) {
      const double v[3] = {p.x, p.y, p.z};
      unsigned char bytes[sizeof v];
      std::memcpy(bytes, v, sizeof v);
      for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ull;
      }
    }
  }
  return hash;
}

std::vector<BenchRow> bench(const ModelFiles& model, double dt, std::uint64_t steps, std::span<const int> threads) {
  if (steps == 0) throw std::invalid_argument("bench: need at least one step");
  const int saved = omp_get_max_threads();
  std::vector<BenchRow> rows;
  for (int t : threads) {
    if (t < 1) throw std::invalid_argument("bench: thread counts must be positive");
    omp_set_num_threads(t);
    Engine engine(make_state(model, dt));
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t k = 0; k < steps; ++k) engine.step();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back({t, secs / static_cast<double>(steps), position_checksum(engine.state())});
  }
  omp_set_num_threads(saved);
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "threads,seconds_per_step,checksum\n";
  for (const auto& r : rows) {
    std::ostringstream hex;
    hex << std::hex << r.checksum;
    out << r.threads << ',' << r.seconds_per_step << ",0x" << hex.str() << '\n';
  }
}

double max_wall_drift(const SimState& s) {
  double m = 0.0;
  for (const auto& g : s.grids) {
    if (!std::holds_alternative<RigidWallLaw>(g.law)) continue;
    for (std::size_t q = 0; q < g.X.size(); ++q) m = std::max(m, norm(g.X[q] - g.X_rest[q]));
  }
  return m;
}

double max_fixed_displacement(const SimState& s) {
  double m = 0.0;
  for (const auto& g : s.grids) {
    for (std::size_t q = 0; q < g.X.size(); ++q) {
      if (g.fixed[q]) m = std::max(m, norm(g.X[q] - g.X_rest[q]));
    }
  }
  return m;
}

}  // namespace ibc
