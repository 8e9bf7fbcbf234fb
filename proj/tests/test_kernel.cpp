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
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "ibcochlea/kernel.hpp"
#include "support.hpp"

using namespace ibc;
using namespace ibc::testing;

namespace {

// Brute-force kernel sums over every integer within reach.
double translate_sum(double r, int power = 1, int stride = 1, int phase = 0) {
  double s = 0.0;
  for (int j = -8 + phase; j <= 8; j += stride) s += std::pow(phi(r - j), power);
  return s;
}

std::vector<Vec3> random_points(std::mt19937_64& rng, int n, const Lattice& lat) {
  std::uniform_real_distribution<double> x(0.0, lat.extent(0)), y(0.0, lat.extent(1)), z(0.0, lat.extent(2));
  std::vector<Vec3> p(n);
  for (auto& q : p) q = {x(rng), y(rng), z(rng)};
  return p;
}

std::vector<Vec3> random_vectors(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> p(n);
  for (auto& q : p) q = {u(rng), u(rng), u(rng)};
  return p;
}

Vec3 field_sum(const VectorField& F) {
  Vec3 s;
  for (int a = 0; a < 3; ++a)
    for (std::size_t n = 0; n < F[a].size(); ++n) s[a] += F[a][n];
  return s;
}

}  // namespace

TEST_CASE("phi point values") {
  CHECK(phi(0.0) == 0.5);
  CHECK(phi(1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(phi(-1.0) == phi(1.0));
  CHECK(phi(2.0) == 0.0);
  CHECK(phi(-2.0) == 0.0);
  CHECK(phi(2.5) == 0.0);
  CHECK(phi(1e9) == 0.0);
  // branch formulas meet at |r| = 1
  const double inner = (3.0 - 2.0 + std::sqrt(1.0 + 4.0 - 4.0)) / 8.0;
  const double outer = 0.5 - (3.0 - 2.0 + std::sqrt(1.0 + 4.0 - 4.0)) / 8.0;
  CHECK(inner == outer);
  CHECK(std::abs(phi(1.0 - 1e-13) - phi(1.0 + 1e-13)) < 1e-12);
  CHECK(std::abs(phi(2.0 - 1e-13)) < 1e-12);
}

TEST_CASE("phi is even and non-negative") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 1000; ++n) {
    const double r = u(rng);
    CHECK(phi(r) == phi(-r));
    CHECK(phi(r) >= 0.0);
  }
}

TEST_CASE("phi moment identities") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 1000; ++n) {
    const double r = u(rng);
    CHECK(std::abs(translate_sum(r) - 1.0) <= 1e-12);
    CHECK(std::abs(translate_sum(r, 1, 2, 0) - 0.5) <= 1e-12);
    CHECK(std::abs(translate_sum(r, 1, 2, 1) - 0.5) <= 1e-12);
    CHECK(std::abs(translate_sum(r, 2) - 0.375) <= 1e-12);
    double first = 0.0;
    for (int j = -8; j <= 8; ++j) first += (r - j) * phi(r - j);
    CHECK(std::abs(first) <= 1e-12);
  }
}

TEST_CASE("delta_h values and support") {
  const double h = 0.1;
  CHECK(delta_h({0, 0, 0}, h) == doctest::Approx(1.0 / (8 * h * h * h)).epsilon(1e-14));
  CHECK(delta_h({2 * h, 0, 0}, h) == 0.0);
  CHECK(delta_h({0, -2.5 * h, 0}, h) == 0.0);
  CHECK(delta_h({0, 0, 3 * h}, h) == 0.0);
  const Vec3 x{0.37 * h, -1.2 * h, 0.9 * h};
  CHECK(delta_h(x, h) == doctest::Approx(phi(0.37) * phi(-1.2) * phi(0.9) / (h * h * h)).epsilon(1e-14));
}

TEST_CASE("delta_h integrates to one over the lattice") {
  std::mt19937_64 rng(3);
  const Lattice lat({16, 16, 16}, 0.125);
  for (const Vec3& X : random_points(rng, 20, lat)) {
    // lattice points near X, unwrapped so no periodic images are needed
    const int ci = static_cast<int>(std::floor(X.x / lat.h)), cj = static_cast<int>(std::floor(X.y / lat.h)),
              ck = static_cast<int>(std::floor(X.z / lat.h));
    double s = 0.0;
    for (int k = ck - 3; k <= ck + 3; ++k)
      for (int j = cj - 3; j <= cj + 3; ++j)
        for (int i = ci - 3; i <= ci + 3; ++i) s += delta_h(Vec3{i * lat.h, j * lat.h, k * lat.h} - X, lat.h);
    CHECK(std::abs(s * lat.h * lat.h * lat.h - 1.0) <= 1e-12);
  }
}

TEST_CASE("axis weights cover the floor-based window") {
  const double h = 0.5;
  const KernelWeight w = axis_weights(1.3, h);  // x/h = 2.6
  CHECK(w.offsets[0] == 1);
  CHECK(w.offsets[3] == 4);
  double s = 0.0;
  for (int m = 0; m < 4; ++m) {
    CHECK(w.weights[m] == doctest::Approx(phi(2.6 - w.offsets[m])).epsilon(1e-15));
    s += w.weights[m];
  }
  CHECK(std::abs(s - 1.0) <= 1e-12);
  const KernelWeight e = axis_weights(-1.0, h);  // exactly on node -2
  CHECK(e.offsets[0] == -3);
  CHECK(e.weights[0] == doctest::Approx(0.25));
  CHECK(e.weights[1] == 0.5);
  CHECK(e.weights[3] == 0.0);
}

TEST_CASE("spreading a point at a node") {
  const Lattice lat({8, 8, 8}, 0.25);
  VectorField F(lat);
  const std::vector<Vec3> X{{1.0, 0.5, 0.75}}, f{{1.0, 0.0, 0.0}};
  const double dq = 0.01;
  spread(f, X, dq, F);
  int touched = 0;
  for (std::size_t n = 0; n < F[0].size(); ++n) touched += F[0][n] != 0.0;
  CHECK(touched == 27);  // weights at offsets +-2 vanish on a node
  const Vec3 total = field_sum(F) * (lat.h * lat.h * lat.h);
  CHECK(total.x == doctest::Approx(dq).epsilon(1e-13));
  CHECK(total.y == 0.0);
  CHECK(F[0].at(4, 2, 3) == doctest::Approx(dq / (8 * lat.h * lat.h * lat.h)).epsilon(1e-14));
}

TEST_CASE("spread of a generic point touches exactly its 4x4x4 stencil") {
  const Lattice lat({16, 16, 16}, 0.1);
  VectorField F(lat);
  const std::vector<Vec3> X{{0.033, 1.571, 0.777}}, f{{0.0, 0.0, 2.0}};
  spread(f, X, 1.0, F);
  int touched = 0;
  for (std::size_t n = 0; n < F[2].size(); ++n) touched += F[2][n] != 0.0;
  CHECK(touched == 64);
  CHECK(F[0].max_abs() == 0.0);
  // wrapped below zero along x
  CHECK(F[2].at(-1, 15, 7) != 0.0);
  CHECK(F[2].at(-2, 15, 7) == 0.0);
}

TEST_CASE("zero and cancelling forces spread to nothing") {
  const Lattice lat({8, 8, 8}, 0.25);
  VectorField F(lat);
  spread(std::vector<Vec3>{{0, 0, 0}}, std::vector<Vec3>{{0.3, 0.3, 0.3}}, 1.0, F);
  CHECK(F.max_norm() == 0.0);
  spread(std::vector<Vec3>{{1, 2, 3}, {-1, -2, -3}}, std::vector<Vec3>{{0.3, 1.1, 0.6}, {0.3, 1.1, 0.6}}, 1.0, F);
  CHECK(F.max_norm() <= 1e-15);
}

TEST_CASE("spread rejects non-finite input with grid and index") {
  const Lattice lat({8, 8, 8}, 0.25);
  VectorField F(lat);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<Vec3> X{{0.1, 0.1, 0.1}, {0.2, nan, 0.1}}, f{{1, 0, 0}, {1, 0, 0}};
  try {
    spread(f, X, 1.0, F, "oval_window");
    FAIL("expected a throw");
  } catch (const std::domain_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("oval_window") != std::string::npos);
    CHECK(msg.find("1") != std::string::npos);
    CHECK(msg.find("position") != std::string::npos);
  }
  const std::vector<Vec3> X2{{0.1, 0.1, 0.1}}, f2{{std::numeric_limits<double>::infinity(), 0, 0}};
  CHECK_THROWS_AS(spread(f2, X2, 1.0, F, "g"), std::domain_error);
}

TEST_CASE("interpolation reproduces constants and zero") {
  std::mt19937_64 rng(4);
  const Lattice lat({8, 16, 8}, 0.2);
  VectorField u(lat);
  u[0].fill(1.5);
  u[1].fill(-2.0);
  u[2].fill(0.25);
  const auto X = random_points(rng, 50, lat);
  for (const Vec3& U : interpolate(u, X)) {
    CHECK(std::abs(U.x - 1.5) <= 1e-13);
    CHECK(std::abs(U.y + 2.0) <= 1e-13);
    CHECK(std::abs(U.z - 0.25) <= 1e-13);
  }
  for (const Vec3& U : interpolate(VectorField(lat), X)) CHECK(norm(U) == 0.0);
}

TEST_CASE("interpolation equals the direct delta sum") {
  std::mt19937_64 rng(9);
  const Lattice lat({8, 8, 8}, 0.3);
  const VectorField u = random_vector_field(lat, rng);
  for (const Vec3& X : random_points(rng, 10, lat)) {
    Vec3 ref;
    for (int k = 0; k < 8; ++k)
      for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i) {
          // nearest periodic image of X
          Vec3 d{i * lat.h - X.x, j * lat.h - X.y, k * lat.h - X.z};
          for (int a = 0; a < 3; ++a) d[a] -= lat.extent(a) * std::round(d[a] / lat.extent(a));
          const double w = delta_h(d, lat.h) * lat.h * lat.h * lat.h;
          for (int a = 0; a < 3; ++a) ref[a] += w * u[a].at(i, j, k);
        }
    const Vec3 got = interpolate_point(u, X);
    CHECK(norm(got - ref) <= 1e-12 * (1.0 + norm(ref)));
  }
}

TEST_CASE("spread and interpolate are adjoint and conserve force") {
  std::mt19937_64 rng(10);
  for (int n : {16, 32}) {
    const Lattice lat({n, n, n}, 1.0 / n);
    const int m = 500;
    const auto X = random_points(rng, m, lat);
    const auto f = random_vectors(rng, m);
    const double dq = 3e-4;
    VectorField F(lat);
    spread(f, X, dq, F);
    const VectorField v = random_vector_field(lat, rng);

    const double h3 = lat.h * lat.h * lat.h;
    long double lhs = 0.0L, rhs = 0.0L, scale = 0.0L;
    for (int a = 0; a < 3; ++a)
      for (std::size_t k = 0; k < F[a].size(); ++k) {
        lhs += static_cast<long double>(F[a][k]) * v[a][k] * h3;
        scale += std::abs(static_cast<long double>(F[a][k]) * v[a][k] * h3);
      }
    const auto U = interpolate(v, X);
    for (int q = 0; q < m; ++q) rhs += static_cast<long double>(dot(f[q], U[q])) * dq;
    CHECK(std::abs(static_cast<double>(lhs - rhs)) <= 1e-12 * static_cast<double>(scale));

    Vec3 fsum;
    double fscale = 0.0;
    for (const Vec3& fq : f) {
      fsum = fsum + fq * dq;
      fscale += norm(fq) * dq;
    }
    const Vec3 Fsum = field_sum(F) * h3;
    CHECK(norm(Fsum - fsum) <= 1e-12 * fscale);
  }
}

TEST_CASE("spreading commutes with lattice translation") {
  std::mt19937_64 rng(12);
  const Lattice lat({16, 16, 16}, 0.0625);
  const auto X = random_points(rng, 20, lat);
  const auto f = random_vectors(rng, 20);
  std::vector<Vec3> Y = X;
  for (auto& y : Y) y = y + Vec3{3 * lat.h, -2 * lat.h, 5 * lat.h};
  VectorField A(lat), B(lat);
  spread(f, X, 1.0, A);
  spread(f, Y, 1.0, B);
  double err = 0.0, scale = A.max_norm();
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 16; ++k)
      for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i) err = std::max(err, std::abs(A[a].at(i, j, k) - B[a].at(i + 3, j - 2, k + 5)));
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("subset spreading follows the given indices") {
  std::mt19937_64 rng(13);
  const Lattice lat({8, 8, 8}, 0.25);
  const auto X = random_points(rng, 6, lat);
  const auto f = random_vectors(rng, 6);
  VectorField A(lat), B(lat);
  const std::vector<int> odd{1, 3, 5};
  spread_points(f, X, 0.5, odd, A);
  for (int q : odd) spread(std::vector<Vec3>{f[q]}, std::vector<Vec3>{X[q]}, 0.5, B);
  CHECK(A == B);
}
