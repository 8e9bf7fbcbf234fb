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

// Shared fixtures for the unit tests.

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "ibcochlea/lattice.hpp"

namespace ibc::testing {

inline ScalarField random_field(const Lattice& lat, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  ScalarField f(lat);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = u(rng);
  return f;
}

inline VectorField random_vector_field(const Lattice& lat, std::mt19937_64& rng, double scale = 1.0) {
  VectorField v(lat);
  for (int a = 0; a < 3; ++a) v[a] = random_field(lat, rng, scale);
  return v;
}

// cos(theta) of the lattice plane wave with integer wavenumbers (k1, k2, k3).
inline double mode_phase(const Lattice& lat, int i, int j, int k, int k1, int k2, int k3) {
  const double two_pi = 2.0 * std::numbers::pi;
  return two_pi * (static_cast<double>(k1) * i / lat.dims.n1 + static_cast<double>(k2) * j / lat.dims.n2 +
                   static_cast<double>(k3) * k / lat.dims.n3);
}

inline ScalarField cos_mode(const Lattice& lat, int k1, int k2, int k3, double amp = 1.0, double shift = 0.0) {
  ScalarField f(lat);
  for (int k = 0; k < lat.dims.n3; ++k)
    for (int j = 0; j < lat.dims.n2; ++j)
      for (int i = 0; i < lat.dims.n1; ++i) f.at(i, j, k) = amp * std::cos(mode_phase(lat, i, j, k, k1, k2, k3) + shift);
  return f;
}

inline double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

inline double max_diff(const VectorField& a, const VectorField& b) {
  return std::max({max_diff(a[0], b[0]), max_diff(a[1], b[1]), max_diff(a[2], b[2])});
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ibcochlea_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace ibc::testing
