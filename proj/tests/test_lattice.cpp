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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ibcochlea/lattice.hpp"
#include "support.hpp"

using namespace ibc;
using namespace ibc::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Reference stencils written directly against wrapped indices.
double ref_dplus(const ScalarField& f, int i, int j, int k, int axis) {
  const double h = f.lattice().h;
  const int di = axis == 1, dj = axis == 2, dk = axis == 3;
  return (f.at(i + di, j + dj, k + dk) - f.at(i, j, k)) / h;
}

double ref_dminus(const ScalarField& f, int i, int j, int k, int axis) {
  const double h = f.lattice().h;
  const int di = axis == 1, dj = axis == 2, dk = axis == 3;
  return (f.at(i, j, k) - f.at(i - di, j - dj, k - dk)) / h;
}

ScalarField shifted(const ScalarField& f, int si, int sj, int sk) {
  ScalarField g(f.lattice());
  const Dims d = f.lattice().dims;
  for (int k = 0; k < d.n3; ++k)
    for (int j = 0; j < d.n2; ++j)
      for (int i = 0; i < d.n1; ++i) g.at(i + si, j + sj, k + sk) = f.at(i, j, k);
  return g;
}

double inner(const ScalarField& a, const ScalarField& b) {
  long double s = 0.0L;
  for (std::size_t n = 0; n < a.size(); ++n) s += static_cast<long double>(a[n]) * b[n];
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("lattice validates its shape") {
  CHECK_NOTHROW(Lattice({4, 8, 16}, 0.5));
  CHECK_THROWS_AS(Lattice({6, 8, 8}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice({8, 8, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice({8, 8, 8}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice({8, 8, 8}, -1.0), std::invalid_argument);

  const Lattice lat({4, 8, 2}, 0.25);
  CHECK(lat.size() == 64);
  CHECK(lat.extent(1) == doctest::Approx(2.0));
  CHECK(lat.index(1, 2, 1) == 1 + 4 * (2 + 8 * 1));
  CHECK(lat.wrapped_index(-1, 8, 3) == lat.index(3, 0, 1));
}

TEST_CASE("fluid grid checks material constants") {
  const Lattice lat({4, 4, 4}, 1.0);
  CHECK_THROWS_AS(FluidGrid(lat, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FluidGrid(lat, 1.0, -0.1), std::invalid_argument);
  const FluidGrid g(lat, 1.0, 0.0);
  CHECK(g.u[0].size() == 64);
  CHECK(g.p.size() == 64);
  CHECK(g.force[2].size() == 64);
}

TEST_CASE("operators reject bad axes") {
  const ScalarField f(Lattice({4, 4, 4}, 1.0));
  CHECK_THROWS_AS(dplus(f, 0), std::invalid_argument);
  CHECK_THROWS_AS(dminus(f, 4), std::invalid_argument);
  CHECK_THROWS_AS(dzero(f, -1), std::invalid_argument);
}

TEST_CASE("constant fields have zero differences") {
  const ScalarField f(Lattice({8, 4, 16}, 0.1), 3.25);
  for (int axis = 1; axis <= 3; ++axis) {
    CHECK(dplus(f, axis).max_abs() == 0.0);
    CHECK(dminus(f, axis).max_abs() == 0.0);
    CHECK(dzero(f, axis).max_abs() == 0.0);
  }
  CHECK(laplacian_pm(f).max_abs() == 0.0);
  VectorField v(f.lattice(), 2.0);
  CHECK(divergence0(v).max_abs() == 0.0);
}

TEST_CASE("hand stencils on a 4-point line") {
  for (int axis = 1; axis <= 3; ++axis) {
    const Dims d{axis == 1 ? 4 : 1, axis == 2 ? 4 : 1, axis == 3 ? 4 : 1};
    ScalarField f(Lattice(d, 1.0));
    f[1] = 1.0;
    const ScalarField dp = dplus(f, axis), dm = dminus(f, axis), lap = laplacian_pm(f);
    const double want_dp[] = {1, -1, 0, 0}, want_dm[] = {0, 1, -1, 0}, want_lap[] = {1, -2, 1, 0};
    for (int n = 0; n < 4; ++n) {
      CHECK(dp[n] == want_dp[n]);
      CHECK(dm[n] == want_dm[n]);
      CHECK(lap[n] == want_lap[n]);
    }
  }
}

TEST_CASE("operators agree with reference stencils on random fields") {
  std::mt19937_64 rng(11);
  const Lattice lat({8, 16, 4}, 0.3);
  const ScalarField f = random_field(lat, rng);
  for (int axis = 1; axis <= 3; ++axis) {
    const ScalarField dp = dplus(f, axis), dm = dminus(f, axis), d0 = dzero(f, axis);
    double err = 0.0, err0 = 0.0;
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 8; ++i) {
          err = std::max(err, std::abs(dp.at(i, j, k) - ref_dplus(f, i, j, k, axis)));
          err = std::max(err, std::abs(dm.at(i, j, k) - ref_dminus(f, i, j, k, axis)));
          const double avg = 0.5 * (ref_dplus(f, i, j, k, axis) + ref_dminus(f, i, j, k, axis));
          err0 = std::max(err0, std::abs(d0.at(i, j, k) - avg));
        }
    CHECK(err == 0.0);
    CHECK(err0 <= 1e-14 * 10);
  }
}

TEST_CASE("forward difference of a sine has the closed-form symbol") {
  const Lattice lat({32, 4, 4}, 0.05);
  const double L = lat.extent(0);
  for (int kw : {1, 3, 7, 15}) {
    const ScalarField f = cos_mode(lat, kw, 0, 0, 1.0, -kPi / 2);  // sin
    const double want = std::abs(2.0 * std::sin(kPi * kw * lat.h / L) / lat.h);
    // D+ sin(a i) = (2/h) sin(a/2) cos(a i + a/2)
    const ScalarField dp = dplus(f, 1);
    const double shift = kPi * kw / lat.dims.n1;
    const ScalarField expect = cos_mode(lat, kw, 0, 0, want, shift);
    CHECK(max_diff(dp, expect) <= 1e-12 * want);
    CHECK(dp.max_abs() <= want * (1 + 1e-12));
  }
}

TEST_CASE("centered difference annihilates the Nyquist mode") {
  const Lattice lat({8, 8, 8}, 1.0);
  for (int axis = 1; axis <= 3; ++axis) {
    const ScalarField f = cos_mode(lat, axis == 1 ? 4 : 0, axis == 2 ? 4 : 0, axis == 3 ? 4 : 0);
    CHECK(dzero(f, axis).max_abs() == 0.0);
  }
}

TEST_CASE("Fourier symbols of dzero, divergence and the Laplacian") {
  const Lattice lat({16, 8, 32}, 0.2);
  const int k1 = 3, k2 = 1, k3 = 5;
  const double th[3] = {2 * kPi * k1 / 16, 2 * kPi * k2 / 8, 2 * kPi * k3 / 32};
  const ScalarField c = cos_mode(lat, k1, k2, k3);
  const ScalarField s = cos_mode(lat, k1, k2, k3, 1.0, -kPi / 2);

  // D0 cos = -sin(theta)/h * sin
  for (int a = 0; a < 3; ++a) {
    const ScalarField d = dzero(c, a + 1);
    const ScalarField expect = cos_mode(lat, k1, k2, k3, -std::sin(th[a]) / lat.h, -kPi / 2);
    CHECK(max_diff(d, expect) <= 1e-12 / lat.h);
  }

  double ell = 0.0;
  for (double t : th) ell += 4.0 / (lat.h * lat.h) * std::sin(t / 2) * std::sin(t / 2);
  const ScalarField lap = laplacian_pm(c);
  const ScalarField expect_lap = cos_mode(lat, k1, k2, k3, -ell);
  CHECK(max_diff(lap, expect_lap) <= 1e-12 * ell);

  // grad of a sine mode by dzero, then divergence: -sum sin^2(theta)/h^2
  VectorField g(lat);
  for (int a = 0; a < 3; ++a) g[a] = dzero(s, a + 1);
  double sym = 0.0;
  for (double t : th) sym += std::sin(t) * std::sin(t) / (lat.h * lat.h);
  const ScalarField div = divergence0(g);
  CHECK(max_diff(div, cos_mode(lat, k1, k2, k3, -sym, -kPi / 2)) <= 1e-12 * sym);
}

TEST_CASE("summation by parts") {
  std::mt19937_64 rng(5);
  const Lattice lat({8, 8, 16}, 0.7);
  const ScalarField a = random_field(lat, rng), b = random_field(lat, rng);
  for (int axis = 1; axis <= 3; ++axis) {
    const double lhs = inner(dplus(a, axis), b);
    const double rhs = -inner(a, dminus(b, axis));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + 1.0) * 100);
  }
}

TEST_CASE("dzero is the mean of dplus and dminus") {
  std::mt19937_64 rng(6);
  const Lattice lat({16, 4, 8}, 0.125);
  const ScalarField f = random_field(lat, rng);
  for (int axis = 1; axis <= 3; ++axis) {
    const ScalarField p = dplus(f, axis), m = dminus(f, axis), z = dzero(f, axis);
    double err = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) err = std::max(err, std::abs(z[n] - 0.5 * (p[n] + m[n])));
    CHECK(err <= 1e-13 / lat.h);
  }
}

TEST_CASE("operators commute with lattice translations") {
  std::mt19937_64 rng(7);
  const Lattice lat({8, 16, 8}, 0.5);
  const ScalarField f = random_field(lat, rng);
  const ScalarField g = shifted(f, 3, -5, 1);
  for (int axis = 1; axis <= 3; ++axis) {
    CHECK(max_diff(shifted(dplus(f, axis), 3, -5, 1), dplus(g, axis)) == 0.0);
    CHECK(max_diff(shifted(dminus(f, axis), 3, -5, 1), dminus(g, axis)) == 0.0);
    CHECK(max_diff(shifted(dzero(f, axis), 3, -5, 1), dzero(g, axis)) == 0.0);
  }
  CHECK(max_diff(shifted(laplacian_pm(f), 3, -5, 1), laplacian_pm(g)) == 0.0);
}

TEST_CASE("laplacian equals the sum of dplus dminus") {
  std::mt19937_64 rng(8);
  const Lattice lat({8, 8, 8}, 0.25);
  const ScalarField f = random_field(lat, rng);
  ScalarField sum(lat);
  for (int axis = 1; axis <= 3; ++axis) {
    const ScalarField t = dplus(dminus(f, axis), axis);
    for (std::size_t n = 0; n < f.size(); ++n) sum[n] += t[n];
  }
  CHECK(max_diff(sum, laplacian_pm(f)) <= 1e-12 / (lat.h * lat.h));
}

TEST_CASE("field reductions") {
  const Lattice lat({2, 2, 2}, 1.0);
  ScalarField f(lat);
  for (std::size_t n = 0; n < 8; ++n) f[n] = static_cast<double>(n) - 5.0;
  CHECK(f.max_abs() == 5.0);
  CHECK(f.mean() == -1.5);
  VectorField v(lat);
  v[0][3] = 3.0;
  v[1][3] = 4.0;
  CHECK(v.max_norm() == 5.0);
}
