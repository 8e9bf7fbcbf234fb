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

// Real-to-complex 3D transform on a periodic lattice, done as sweeps of
// single-threaded 1D FFTW plans over lines. Every line goes through the same
// plan, so results do not depend on how lines are distributed over threads.

#include <complex>
#include <vector>

#include "ibcochlea/lattice.hpp"

namespace ibc {

/// Half spectrum: kx in [0, n1/2], ky in [0, n2), kz in [0, n3); kx fastest.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(const Dims& d)
      : half_(d.n1 / 2 + 1), n2_(d.n2), n3_(d.n3),
        data_(static_cast<std::size_t>(half_) * d.n2 * d.n3) {}

  int half() const { return half_; }
  int n2() const { return n2_; }
  int n3() const { return n3_; }
  std::size_t size() const { return data_.size(); }
  std::size_t index(int kx, int ky, int kz) const {
    return static_cast<std::size_t>(kx) +
           static_cast<std::size_t>(half_) * (static_cast<std::size_t>(ky) + static_cast<std::size_t>(n2_) * kz);
  }
  std::complex<double>& operator[](std::size_t n) { return data_[n]; }
  const std::complex<double>& operator[](std::size_t n) const { return data_[n]; }
  std::complex<double>* data() { return data_.data(); }

 private:
  int half_ = 0;
  int n2_ = 0;
  int n3_ = 0;
  std::vector<std::complex<double>> data_;
};

class Fft3d {
 public:
  explicit Fft3d(const Lattice& lattice);
  ~Fft3d();
  Fft3d(const Fft3d&) = delete;
  Fft3d& operator=(const Fft3d&) = delete;

  /// Unnormalized forward transform.
  void forward(const ScalarField& in, Spectrum& out) const;
  /// Inverse transform including the 1/N normalization. `in` is consumed.
  void inverse(Spectrum& in, ScalarField& out) const;

  const Lattice& lattice() const { return lattice_; }

 private:
  struct Plans;
  Lattice lattice_;
  Plans* plans_;
};

}  // namespace ibc
