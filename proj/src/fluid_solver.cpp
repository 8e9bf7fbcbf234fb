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

#include "ibcochlea/fluid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ibc {

FourierWorkspace::FourierWorkspace(const Lattice& lattice) : fft_(lattice) {
  const double h = lattice.h;
  for (int a = 0; a < 3; ++a) {
    const int n = lattice.dims[a];
    grad_[a].resize(n);
    lap_[a].resize(n);
    for (int k = 0; k < n; ++k) {
      // signed wavenumber keeps g(-k) = -g(k) bit for bit
      const int ks = k <= n / 2 ? k : k - n;
      const double theta = 2.0 * std::numbers::pi * ks / n;
      grad_[a][k] = (k == 0 || 2 * k == n) ? 0.0 : std::sin(theta) / h;
      const double half = std::sin(0.5 * theta);
      lap_[a][k] = 4.0 * half * half / (h * h);
    }
  }
}

FluidSolver::FluidSolver(const Lattice& lattice, double rho, double mu, SolverOptions options)
    : lattice_(lattice), rho_(rho), mu_(mu), options_(options),
      work_(std::make_unique<FourierWorkspace>(lattice)) {
  if (!(rho > 0.0)) throw std::invalid_argument("fluid density must be positive");
  if (!(mu >= 0.0)) throw std::invalid_argument("fluid viscosity must be non-negative");
}

VectorField FluidSolver::advect_upwind(const VectorField& u) const {
  const Lattice& lat = lattice_;
  const int n1 = lat.dims.n1, n2 = lat.dims.n2, n3 = lat.dims.n3;
  const double inv_h = 1.0 / lat.h;
  VectorField out(lat);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n3; ++k) {
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) {
        const std::size_t n = lat.index(i, j, k);
        const int at[3] = {i, j, k};
        double tend[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < 3; ++a) {
          const double ua = u[a][n];
          int nb[3] = {at[0], at[1], at[2]};
          const bool backward = !(ua < 0.0);
          nb[a] += backward ? -1 : 1;
          const std::size_t m = lat.wrapped_index(nb[0], nb[1], nb[2]);
          for (int c = 0; c < 3; ++c) {
            const double diff = backward ? (u[c][n] - u[c][m]) * inv_h : (u[c][m] - u[c][n]) * inv_h;
            tend[c] += ua * diff;
          }
        }
        for (int c = 0; c < 3; ++c) out[c][n] = tend[c];
      }
    }
  }
  return out;
}

namespace {

void require_finite(const VectorField& v, const char* what) {
  for (int c = 0; c < 3; ++c) {
    const ScalarField& f = v[c];
    for (std::size_t n = 0; n < f.size(); ++n) {
      if (!std::isfinite(f[n])) {
        std::ostringstream msg;
        msg << "solve_step: non-finite " << what << " component " << c + 1 << " at lattice index " << n;
        throw std::domain_error(msg.str());
      }
    }
  }
}

}  // namespace

StepResult FluidSolver::solve_step(const VectorField& u_n, const VectorField& force, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("solve_step: dt must be positive");
  require_finite(u_n, "velocity");
  require_finite(force, "force");

  const Lattice& lat = lattice_;
  StepResult result;
  result.cfl = u_n.max_norm() * dt / lat.h;
  result.cfl_warning = result.cfl > options_.cfl_warning;

  VectorField rhs(lat);
  const double rho_dt = rho_ / dt;
  if (options_.advection) {
    const VectorField adv = advect_upwind(u_n);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t n = 0; n < rhs[c].size(); ++n) {
        rhs[c][n] = rho_dt * u_n[c][n] - rho_ * adv[c][n] + force[c][n];
      }
    }
  } else {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t n = 0; n < rhs[c].size(); ++n) rhs[c][n] = rho_dt * u_n[c][n] + force[c][n];
    }
  }

  const Fft3d& fft = work_->fft();
  std::array<Spectrum, 3> r;
  for (int c = 0; c < 3; ++c) {
    r[c] = Spectrum(lat.dims);
    fft.forward(rhs[c], r[c]);
  }
  Spectrum pres(lat.dims);

  const int half = r[0].half(), n2 = lat.dims.n2, n3 = lat.dims.n3;
  long bad_mode = std::numeric_limits<long>::max();
#pragma omp parallel for schedule(static) reduction(min : bad_mode)
  for (int kz = 0; kz < n3; ++kz) {
    for (int ky = 0; ky < n2; ++ky) {
      for (int kx = 0; kx < half; ++kx) {
        const std::size_t m = r[0].index(kx, ky, kz);
        const double s[3] = {work_->gradient_sine(0, kx), work_->gradient_sine(1, ky), work_->gradient_sine(2, kz)};
        const double denom = rho_dt + mu_ * (work_->laplacian_symbol(0, kx) + work_->laplacian_symbol(1, ky) +
                                             work_->laplacian_symbol(2, kz));
        const double ss = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
        // g = i s, p = (g* . r) / |g|^2 = -i (s . r) / |s|^2,  u = (r - g p) / d = (r - s (s . r)/|s|^2) / d
        if (ss > 0.0) {
          const std::complex<double> sr = s[0] * r[0][m] + s[1] * r[1][m] + s[2] * r[2][m];
          const std::complex<double> proj = sr / ss;
          pres[m] = std::complex<double>(0.0, -1.0) * proj;
          for (int c = 0; c < 3; ++c) r[c][m] = (r[c][m] - s[c] * proj) / denom;
        } else {
          pres[m] = 0.0;
          for (int c = 0; c < 3; ++c) r[c][m] /= denom;
        }
        bool finite = std::isfinite(pres[m].real()) && std::isfinite(pres[m].imag());
        for (int c = 0; c < 3; ++c) finite = finite && std::isfinite(r[c][m].real()) && std::isfinite(r[c][m].imag());
        if (!finite) bad_mode = std::min(bad_mode, static_cast<long>(m));
      }
    }
  }
  if (bad_mode != std::numeric_limits<long>::max()) {
    const long kx = bad_mode % half, ky = (bad_mode / half) % n2, kz = bad_mode / (static_cast<long>(half) * n2);
    std::ostringstream msg;
    msg << "solve_step: non-finite spectral coefficient at mode (" << kx << ", " << ky << ", " << kz << ")";
    throw std::domain_error(msg.str());
  }

  result.u = VectorField(lat);
  for (int c = 0; c < 3; ++c) fft.inverse(r[c], result.u[c]);
  result.p = ScalarField(lat);
  fft.inverse(pres, result.p);
  return result;
}

}  // namespace ibc
