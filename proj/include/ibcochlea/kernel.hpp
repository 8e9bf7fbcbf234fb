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

// Four-point smoothed delta function and the two Eulerian/Lagrangian
// coupling operations built on it: force spreading and velocity
// interpolation.

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "ibcochlea/lattice.hpp"
#include "ibcochlea/vec3.hpp"

namespace ibc {

/// One-dimensional kernel profile. phi(0) = 1/2, support |r| < 2, and the
/// integer translates of phi sum to one for every r.
double phi(double r);

/// Tensor-product delta function, units cm^-3.
double delta_h(const Vec3& x, double h);

/// The four lattice nodes along one axis that a point at coordinate x
/// touches, with their kernel weights. Offsets are unwrapped node indices.
struct KernelWeight {
  std::array<int, 4> offsets{};
  std::array<double, 4> weights{};
};

/// Support window floor(x/h) - 1 ... floor(x/h) + 2.
KernelWeight axis_weights(double x, double h);

/// Adds f(q) delta_h(x - X(q)) dq into `target` for each q in `indices`, in
/// the order given. Throws std::domain_error naming `grid` and
/// the index of the first non-finite position or force.
void spread_points(std::span<const Vec3> force_density, std::span<const Vec3> positions, double dq,
                   std::span<const int> indices, VectorField& target, std::string_view grid = "");

/// Serial spread of every point, in index order.
void spread(std::span<const Vec3> force_density, std::span<const Vec3> positions, double dq,
            VectorField& target, std::string_view grid = "");

/// Velocity at a single material point: sum_x u(x) delta_h(x - X) h^3.
Vec3 interpolate_point(const VectorField& u, const Vec3& position);

std::vector<Vec3> interpolate(const VectorField& u, std::span<const Vec3> positions);

}  // namespace ibc
