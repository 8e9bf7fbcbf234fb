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

#include "ibcochlea/kernel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ibc {

namespace {

double phi_inner(double r) { return 0.125 * (3.0 - 2.0 * r + std::sqrt(1.0 + 4.0 * r - 4.0 * r * r)); }

[[noreturn]] void reject(std::string_view grid, int index, const char* what) {
  std::ostringstream msg;
  msg << "non-finite " << what << " at point " << index;
  if (!grid.empty()) msg << " of grid '" << grid << "'";
  throw std::domain_error(msg.str());
}

}  // namespace

double phi(double r) {
  const double a = std::abs(r);
  if (a <= 1.0) return phi_inner(a);
  if (a < 2.0) return 0.5 - phi_inner(2.0 - a);
  return 0.0;
}

double delta_h(const Vec3& x, double h) {
  return phi(x.x / h) * phi(x.y / h) * phi(x.z / h) / (h * h * h);
}

KernelWeight axis_weights(double x, double h) {
  const double s = x / h;
  const int base = static_cast<int>(std::floor(s)) - 1;
  KernelWeight w;
  for (int m = 0; m < 4; ++m) {
    w.offsets[m] = base + m;
    w.weights[m] = phi(s - static_cast<double>(base + m));
  }
  return w;
}

void spread_points(std::span<const Vec3> force_density, std::span<const Vec3> positions, double dq,
                   std::span<const int> indices, VectorField& target, std::string_view grid) {
  const Lattice& lat = target.lattice();
  const double h = lat.h;
  const double scale = dq / (h * h * h);
  double* out[3] = {target[0].data(), target[1].data(), target[2].data()};

  for (int q : indices) {
    const Vec3& X = positions[q];
    if (!is_finite(X)) reject(grid, q, "position");
    const Vec3 f = force_density[q] * scale;
    if (!is_finite(f)) reject(grid, q, "force");

    const KernelWeight wx = axis_weights(X.x, h);
    const KernelWeight wy = axis_weights(X.y, h);
    const KernelWeight wz = axis_weights(X.z, h);
    for (int c = 0; c < 4; ++c) {
      const int k = Lattice::wrap(wz.offsets[c], lat.dims.n3);
      for (int b = 0; b < 4; ++b) {
        const int j = Lattice::wrap(wy.offsets[b], lat.dims.n2);
        const double wyz = wy.weights[b] * wz.weights[c];
        for (int a = 0; a < 4; ++a) {
          const int i = Lattice::wrap(wx.offsets[a], lat.dims.n1);
          const double w = wx.weights[a] * wyz;
          const std::size_t n = lat.index(i, j, k);
          out[0][n] += f.x * w;
          out[1][n] += f.y * w;
          out[2][n] += f.z * w;
        }
      }
    }
  }
}

void spread(std::span<const Vec3> force_density, std::span<const Vec3> positions, double dq,
            VectorField& target, std::string_view grid) {
  if (force_density.size() != positions.size()) {
    throw std::invalid_argument("spread: force and position counts differ");
  }
  std::vector<int> all(positions.size());
  for (std::size_t q = 0; q < all.size(); ++q) all[q] = static_cast<int>(q);
  spread_points(force_density, positions, dq, all, target, grid);
}

Vec3 interpolate_point(const VectorField& u, const Vec3& position) {
  const Lattice& lat = u.lattice();
  const KernelWeight wx = axis_weights(position.x, lat.h);
  const KernelWeight wy = axis_weights(position.y, lat.h);
  const KernelWeight wz = axis_weights(position.z, lat.h);
  const double* in[3] = {u[0].data(), u[1].data(), u[2].data()};
  Vec3 U;
  for (int c = 0; c < 4; ++c) {
    const int k = Lattice::wrap(wz.offsets[c], lat.dims.n3);
    for (int b = 0; b < 4; ++b) {
      const int j = Lattice::wrap(wy.offsets[b], lat.dims.n2);
      const double wyz = wy.weights[b] * wz.weights[c];
      for (int a = 0; a < 4; ++a) {
        const int i = Lattice::wrap(wx.offsets[a], lat.dims.n1);
        const double w = wx.weights[a] * wyz;
        const std::size_t n = lat.index(i, j, k);
        U.x += in[0][n] * w;
        U.y += in[1][n] * w;
        U.z += in[2][n] * w;
      }
    }
  }
  return U;
}

std::vector<Vec3> interpolate(const VectorField& u, std::span<const Vec3> positions) {
  std::vector<Vec3> out(positions.size());
  const long n = static_cast<long>(positions.size());
#pragma omp parallel for schedule(static)
  for (long q = 0; q < n; ++q) out[q] = interpolate_point(u, positions[q]);
  return out;
}

}  // namespace ibc
