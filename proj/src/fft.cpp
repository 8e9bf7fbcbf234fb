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

#include "ibcochlea/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace ibc {

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct RealBuffer {
  explicit RealBuffer(int n) : p(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {}
  ~RealBuffer() { fftw_free(p); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* p;
};

struct ComplexBuffer {
  explicit ComplexBuffer(int n) : p(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~ComplexBuffer() { fftw_free(p); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* p;
};

}  // namespace

struct Fft3d::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan y_fwd = nullptr;
  fftw_plan y_bwd = nullptr;
  fftw_plan z_fwd = nullptr;
  fftw_plan z_bwd = nullptr;

  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (fftw_plan p : {r2c, c2r, y_fwd, y_bwd, z_fwd, z_bwd}) {
      if (p) fftw_destroy_plan(p);
    }
  }
};

Fft3d::Fft3d(const Lattice& lattice) : lattice_(lattice), plans_(new Plans) {
  const Dims& d = lattice.dims;
  const int half = d.n1 / 2 + 1;
  std::lock_guard<std::mutex> lock(planner_mutex());
  RealBuffer r(d.n1);
  ComplexBuffer c(std::max({half, d.n2, d.n3}));
  // FFTW_ESTIMATE keeps plan selection reproducible from run to run.
  plans_->r2c = fftw_plan_dft_r2c_1d(d.n1, r.p, c.p, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_1d(d.n1, c.p, r.p, FFTW_ESTIMATE);
  plans_->y_fwd = fftw_plan_dft_1d(d.n2, c.p, c.p, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->y_bwd = fftw_plan_dft_1d(d.n2, c.p, c.p, FFTW_BACKWARD, FFTW_ESTIMATE);
  plans_->z_fwd = fftw_plan_dft_1d(d.n3, c.p, c.p, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->z_bwd = fftw_plan_dft_1d(d.n3, c.p, c.p, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft3d::~Fft3d() { delete plans_; }

namespace {

// Transforms every line of `spec` along axis 2 (ky) or 3 (kz) in place.
void complex_sweep(Spectrum& spec, int axis, fftw_plan plan) {
  const int half = spec.half(), n2 = spec.n2(), n3 = spec.n3();
  const int len = axis == 2 ? n2 : n3;
  const int outer = axis == 2 ? n3 : n2;
  const std::size_t stride = axis == 2 ? static_cast<std::size_t>(half) : static_cast<std::size_t>(half) * n2;
  auto* base = reinterpret_cast<fftw_complex*>(spec.data());
#pragma omp parallel
  {
    ComplexBuffer buf(len);
#pragma omp for schedule(static)
    for (int line = 0; line < half * outer; ++line) {
      const int kx = line % half;
      const int o = line / half;
      const std::size_t start = axis == 2 ? spec.index(kx, 0, o) : spec.index(kx, o, 0);
      for (int m = 0; m < len; ++m) std::memcpy(buf.p[m], base[start + m * stride], sizeof(fftw_complex));
      fftw_execute_dft(plan, buf.p, buf.p);
      for (int m = 0; m < len; ++m) std::memcpy(base[start + m * stride], buf.p[m], sizeof(fftw_complex));
    }
  }
}

}  // namespace

void Fft3d::forward(const ScalarField& in, Spectrum& out) const {
  const Dims& d = lattice_.dims;
  const int half = d.n1 / 2 + 1;
  if (out.size() != static_cast<std::size_t>(half) * d.n2 * d.n3) out = Spectrum(d);
  auto* base = reinterpret_cast<fftw_complex*>(out.data());
  const double* src = in.data();
#pragma omp parallel
  {
    RealBuffer r(d.n1);
    ComplexBuffer c(half);
#pragma omp for schedule(static)
    for (int line = 0; line < d.n2 * d.n3; ++line) {
      std::memcpy(r.p, src + static_cast<std::size_t>(line) * d.n1, sizeof(double) * d.n1);
      fftw_execute_dft_r2c(plans_->r2c, r.p, c.p);
      std::memcpy(base + static_cast<std::size_t>(line) * half, c.p, sizeof(fftw_complex) * half);
    }
  }
  complex_sweep(out, 2, plans_->y_fwd);
  complex_sweep(out, 3, plans_->z_fwd);
}

void Fft3d::inverse(Spectrum& in, ScalarField& out) const {
  const Dims& d = lattice_.dims;
  const int half = d.n1 / 2 + 1;
  complex_sweep(in, 3, plans_->z_bwd);
  complex_sweep(in, 2, plans_->y_bwd);
  if (out.size() != lattice_.size()) out = ScalarField(lattice_);
  const double scale = 1.0 / static_cast<double>(lattice_.size());
  auto* base = reinterpret_cast<fftw_complex*>(in.data());
  double* dst = out.data();
#pragma omp parallel
  {
    RealBuffer r(d.n1);
    ComplexBuffer c(half);
#pragma omp for schedule(static)
    for (int line = 0; line < d.n2 * d.n3; ++line) {
      std::memcpy(c.p, base + static_cast<std::size_t>(line) * half, sizeof(fftw_complex) * half);
      fftw_execute_dft_c2r(plans_->c2r, c.p, r.p);
      double* o = dst + static_cast<std::size_t>(line) * d.n1;
      for (int i = 0; i < d.n1; ++i) o[i] = r.p[i] * scale;
    }
  }
}

}  // namespace ibc
