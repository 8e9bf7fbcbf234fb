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

// One time step of the periodic incompressible Navier-Stokes discretization:
// explicit upwind advection, implicit viscosity, centered-difference
// pressure gradient and divergence constraint, all solved mode by mode in
// Fourier space.

#include <array>
#include <memory>
#include <vector>

#include "ibcochlea/fft.hpp"
#include "ibcochlea/lattice.hpp"

namespace ibc {

struct SolverOptions {
  /// Test hook: drop the advection term (Stokes path).
  bool advection = true;
  /// Advective CFL above which a step is flagged.
  double cfl_warning = 0.5;
};

struct StepResult {
  VectorField u;
  ScalarField p;
  /// max |u_n| dt / h of the input velocity.
  double cfl = 0.0;
  bool cfl_warning = false;
};

/// Precomputed transform plans and per-axis symbols.
///   viscous denominator  d(k) = rho/dt + mu * l(k),  l(k) = (4/h^2) sum_i sin^2(pi k_i / N_i)
///   gradient symbol      g_i(k) = i * sin(2 pi k_i / N_i) / h
class FourierWorkspace {
 public:
  explicit FourierWorkspace(const Lattice& lattice);

  const Fft3d& fft() const { return fft_; }
  /// sin(2 pi k / N) / h for axis0, exactly zero at k = 0 and k = N/2.
  double gradient_sine(int axis0, int k) const { return grad_[axis0][k]; }
  /// (4/h^2) sin^2(pi k / N) for axis0.
  double laplacian_symbol(int axis0, int k) const { return lap_[axis0][k]; }

 private:
  Fft3d fft_;
  std::array<std::vector<double>, 3> grad_;
  std::array<std::vector<double>, 3> lap_;
};

class FluidSolver {
 public:
  FluidSolver(const Lattice& lattice, double rho, double mu, SolverOptions options = {});

  const Lattice& lattice() const { return lattice_; }
  double rho() const { return rho_; }
  double mu() const { return mu_; }
  const SolverOptions& options() const { return options_; }

  /// sum_k u_k D_k^{+/-} u with the difference direction picked by the sign
  /// of u_k at each node: backward for u_k >= 0, forward for u_k < 0.
  VectorField advect_upwind(const VectorField& u) const;

  /// Advances (u_n, F_n) by dt. Throws std::domain_error on non-finite input
  /// or a non-finite spectral coefficient.
  StepResult solve_step(const VectorField& u_n, const VectorField& force, double dt) const;

 private:
  Lattice lattice_;
  double rho_;
  double mu_;
  SolverOptions options_;
  std::unique_ptr<FourierWorkspace> work_;
};

}  // namespace ibc
