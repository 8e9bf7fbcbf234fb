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

// Periodic Eulerian lattice and the finite-difference operators acting on it.
//
// Node (i, j, k) sits at x = (i h, j h, k h). Storage is structure-of-arrays
// with axis 1 fastest: index = i + n1 * (j + n2 * k). Every operator wraps
// periodically in all three axes.

#include <array>
#include <cstddef>
#include <vector>

namespace ibc {

struct Dims {
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;

  constexpr int operator[](int axis0) const { return axis0 == 0 ? n1 : (axis0 == 1 ? n2 : n3); }
  constexpr std::size_t count() const {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) * static_cast<std::size_t>(n3);
  }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

/// Shape and mesh width of a periodic cubic-cell lattice.
struct Lattice {
  Dims dims;
  double h = 1.0;

  /// Throws std::invalid_argument unless every extent is a power of two and h > 0.
  Lattice(Dims d, double mesh_width);
  Lattice() = default;

  std::size_t size() const { return dims.count(); }
  double extent(int axis0) const { return dims[axis0] * h; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims.n1) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims.n2) * static_cast<std::size_t>(k));
  }

  /// Index with periodic wrap applied to each coordinate.
  std::size_t wrapped_index(int i, int j, int k) const {
    return index(wrap(i, dims.n1), wrap(j, dims.n2), wrap(k, dims.n3));
  }

  static int wrap(int i, int n) {
    // n is a power of two
    return i & (n - 1);
  }

  friend bool operator==(const Lattice&, const Lattice&) = default;
};

bool is_power_of_two(int n);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Lattice& lattice, double value = 0.0)
      : lattice_(lattice), data_(lattice.size(), value) {}

  const Lattice& lattice() const { return lattice_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t n) { return data_[n]; }
  double operator[](std::size_t n) const { return data_[n]; }
  double& at(int i, int j, int k) { return data_[lattice_.wrapped_index(i, j, k)]; }
  double at(int i, int j, int k) const { return data_[lattice_.wrapped_index(i, j, k)]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  void fill(double v);
  double max_abs() const;
  double mean() const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Lattice lattice_;
  std::vector<double> data_;
};

struct VectorField {
  std::array<ScalarField, 3> c;

  VectorField() = default;
  explicit VectorField(const Lattice& lattice, double value = 0.0)
      : c{ScalarField(lattice, value), ScalarField(lattice, value), ScalarField(lattice, value)} {}

  const Lattice& lattice() const { return c[0].lattice(); }
  ScalarField& operator[](int axis0) { return c[axis0]; }
  const ScalarField& operator[](int axis0) const { return c[axis0]; }

  void fill(double v);
  /// Max over nodes of the Euclidean norm.
  double max_norm() const;

  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// Fluid state on the periodic lattice. Units are CGS throughout.
struct FluidGrid {
  Lattice lattice;
  double rho = 1.0;  // g/cm^3
  double mu = 0.0;   // g/(cm s)
  VectorField u;     // cm/s
  ScalarField p;     // dyn/cm^2
  VectorField force; // dyn/cm^3

  FluidGrid() = default;
  /// Throws std::invalid_argument for rho <= 0 or mu < 0.
  FluidGrid(const Lattice& lat, double density, double viscosity);
};

// Difference operators. `axis` is 1-based (1, 2 or 3); anything else throws
// std::invalid_argument.
ScalarField dplus(const ScalarField& f, int axis);
ScalarField dminus(const ScalarField& f, int axis);
ScalarField dzero(const ScalarField& f, int axis);
/// Sum over axes of the centered difference of each component.
ScalarField divergence0(const VectorField& v);
/// Standard 7-point Laplacian, sum_k D+_k D-_k.
ScalarField laplacian_pm(const ScalarField& f);

}  // namespace ibc
