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

#include "ibcochlea/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ibc {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Lattice::Lattice(Dims d, double mesh_width) : dims(d), h(mesh_width) {
  for (int a = 0; a < 3; ++a) {
    if (!is_power_of_two(d[a])) {
      throw std::invalid_argument("lattice extent " + std::to_string(d[a]) + " on axis " +
                                  std::to_string(a + 1) + " is not a power of two");
    }
  }
  if (!(mesh_width > 0.0) || !std::isfinite(mesh_width)) {
    throw std::invalid_argument("lattice mesh width must be positive");
  }
}

void ScalarField::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::mean() const {
  if (data_.empty()) return 0.0;
  long double s = 0.0L;
  for (double v : data_) s += v;
  return static_cast<double>(s / static_cast<long double>(data_.size()));
}

void VectorField::fill(double v) {
  for (auto& f : c) f.fill(v);
}

double VectorField::max_norm() const {
  double m = 0.0;
  const std::size_t n = c[0].size();
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, std::sqrt(c[0][i] * c[0][i] + c[1][i] * c[1][i] + c[2][i] * c[2][i]));
  }
  return m;
}

FluidGrid::FluidGrid(const Lattice& lat, double density, double viscosity)
    : lattice(lat), rho(density), mu(viscosity), u(lat), p(lat), force(lat) {
  if (!(density > 0.0)) throw std::invalid_argument("fluid density must be positive");
  if (!(viscosity >= 0.0)) throw std::invalid_argument("fluid viscosity must be non-negative");
}

namespace {

int checked_axis(int axis) {
  if (axis < 1 || axis > 3) {
    throw std::invalid_argument("difference axis " + std::to_string(axis) + " outside 1..3");
  }
  return axis - 1;
}

// out(x) = stencil(f(x - h e), f(x), f(x + h e)) for the unit vector e of axis0.
template <typename Stencil>
ScalarField apply_along(const ScalarField& f, int axis0, Stencil&& stencil) {
  const Lattice& lat = f.lattice();
  ScalarField out(lat);
  const int n1 = lat.dims.n1, n2 = lat.dims.n2, n3 = lat.dims.n3;
  const int d[3] = {axis0 == 0, axis0 == 1, axis0 == 2};
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n3; ++k) {
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const double fp = f.at(i + d[0], j + d[1], k + d[2]);
        const double f0 = f[lat.index(i, j, k)];
        const double fm = f.at(i - d[0], j - d[1], k - d[2]);
        out[lat.index(i, j, k)] = stencil(fm, f0, fp);
      }
    }
  }
  return out;
}

}  // namespace

ScalarField dplus(const ScalarField& f, int axis) {
  const double inv_h = 1.0 / f.lattice().h;
  return apply_along(f, checked_axis(axis), [inv_h](double, double f0, double fp) { return (fp - f0) * inv_h; });
}

ScalarField dminus(const ScalarField& f, int axis) {
  const double inv_h = 1.0 / f.lattice().h;
  return apply_along(f, checked_axis(axis), [inv_h](double fm, double f0, double) { return (f0 - fm) * inv_h; });
}

ScalarField dzero(const ScalarField& f, int axis) {
  const double inv_2h = 0.5 / f.lattice().h;
  return apply_along(f, checked_axis(axis), [inv_2h](double fm, double, double fp) { return (fp - fm) * inv_2h; });
}

ScalarField divergence0(const VectorField& v) {
  ScalarField out = dzero(v[0], 1);
  for (int a = 1; a < 3; ++a) {
    const ScalarField d = dzero(v[a], a + 1);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += d[n];
  }
  return out;
}

ScalarField laplacian_pm(const ScalarField& f) {
  const double inv_h2 = 1.0 / (f.lattice().h * f.lattice().h);
  ScalarField out(f.lattice());
  for (int a = 0; a < 3; ++a) {
    const ScalarField d = apply_along(
        f, a, [inv_h2](double fm, double f0, double fp) { return (fp - 2.0 * f0 + fm) * inv_h2; });
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += d[n];
  }
  return out;
}

}  // namespace ibc
