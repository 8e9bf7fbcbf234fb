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

// Lagrangian material patches and their force laws.
//
// A patch is a rectangular n1 x n2 parameter lattice with mesh widths
// (dq1, dq2). Forces are returned as densities per unit parameter area:
// nodal force divided by dq1 * dq2, so spreading with weight dq restores the
// nodal force.
//
// Membranes and window plates are spring networks. Every node links to its
// eight lattice neighbours (axis-aligned and diagonal). A link a-b with rest
// length l0 and stiffness k pulls a with k (|d| - l0) d/|d|, d = X_b - X_a.
// Rest lengths are the rest-position distances shortened by a pre-strain,
// which gives a flat network linear stiffness against normal load. Each
// link's force at the rest configuration is subtracted (the supports carry
// the pre-stress), so X = X_rest is an exact equilibrium of every law. The
// matching energy per link is
//   k/2 ((|d| - l0)^2 - (|d0| - l0)^2) - k (|d0| - l0) d0.(d - d0) / |d0|.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ibcochlea/vec3.hpp"

namespace ibc {

/// Exponentially graded spring network. Station s of a node is its rest x
/// coordinate (the channel axis) minus `s_origin`; link stiffness is
/// evaluated at the mean station of its two ends. Only links along parameter
/// axis 2 (across the membrane width) carry pre-strain.
struct MembraneLaw {
  double k0 = 1.0;         // dyn/cm at s = 0
  double lambda = 0.0;     // 1/cm, > 0
  double s_origin = 0.0;   // cm
  double prestrain = 0.0;  // width links rest at |d_rest| / (1 + prestrain)

  double stiffness(double s) const;
  friend bool operator==(const MembraneLaw&, const MembraneLaw&) = default;
};

/// Uniform spring network; every link carries the same pre-strain. Points
/// outside `radius` of the plate centre are flagged fixed by the builder.
struct WindowPlateLaw {
  double k = 1.0;          // dyn/cm
  double radius = 0.0;     // cm
  double prestrain = 0.0;

  friend bool operator==(const WindowPlateLaw&, const WindowPlateLaw&) = default;
};

/// Each point tethered to its rest position.
struct RigidWallLaw {
  double k_tether = 1.0;  // dyn/cm

  friend bool operator==(const RigidWallLaw&, const RigidWallLaw&) = default;
};

using MaterialLaw = std::variant<MembraneLaw, WindowPlateLaw, RigidWallLaw>;

const char* law_name(const MaterialLaw& law);

struct LagrangianGrid {
  std::string name;
  int n1 = 0;
  int n2 = 0;
  double dq1 = 0.0;  // cm
  double dq2 = 0.0;  // cm
  std::vector<Vec3> X;
  std::vector<Vec3> X_rest;
  MaterialLaw law = RigidWallLaw{};
  std::vector<std::uint8_t> fixed;

  int size() const { return n1 * n2; }
  int index(int i, int j) const { return i + n1 * j; }
  double dq() const { return dq1 * dq2; }
  bool is_fixed(int q) const { return fixed[q] != 0; }
  int free_count() const;

  /// Throws std::invalid_argument on inconsistent sizes, non-positive mesh
  /// widths, invalid law parameters or fixed points off their rest position.
  void validate() const;
  /// Puts every fixed point back on its rest position.
  void pin_fixed();

  friend bool operator==(const LagrangianGrid&, const LagrangianGrid&) = default;
};

/// Builds an n1 x n2 grid at rest (X = X_rest), nothing fixed.
LagrangianGrid make_grid(std::string name, int n1, int n2, double dq1, double dq2, std::vector<Vec3> rest,
                         MaterialLaw law);

struct DriveSignal {
  double amplitude = 0.0;    // dyn, total force on the window
  double frequency = 1.0;    // Hz
  Vec3 direction{1.0, 0.0, 0.0};

  void validate() const;
  friend bool operator==(const DriveSignal&, const DriveSignal&) = default;
};

/// Drive applied to the grid named `target`. Empty target means undriven.
struct Drive {
  DriveSignal signal;
  std::string target;

  friend bool operator==(const Drive&, const Drive&) = default;
};

// Force laws. Each throws std::invalid_argument when the grid carries a
// different law, and std::domain_error when two linked points coincide.
std::vector<Vec3> membrane_force(const LagrangianGrid& g);
std::vector<Vec3> window_force(const LagrangianGrid& g);
std::vector<Vec3> wall_force(const LagrangianGrid& g);

/// Dispatches on the grid's law.
std::vector<Vec3> elastic_force(const LagrangianGrid& g);

/// Stored elastic energy (erg) of the grid's current configuration; zero at rest.
double elastic_energy(const LagrangianGrid& g);

/// Adds amplitude sin(2 pi f t) direction, spread uniformly per unit area over
/// the grid's non-fixed points, to `f`.
void stapes_drive(const LagrangianGrid& g, double t, const DriveSignal& sig, std::vector<Vec3>& f);

/// Force density for every grid, in grid order, with the drive added to its
/// target grid.
std::vector<std::vector<Vec3>> total_force(std::span<const LagrangianGrid> grids, double t, const Drive& drive);

}  // namespace ibc
