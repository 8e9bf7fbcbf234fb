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

#include "ibcochlea/structures.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ibc {

double MembraneLaw::stiffness(double s) const { return k0 * std::exp(-lambda * (s - s_origin)); }

const char* law_name(const MaterialLaw& law) {
  switch (law.index()) {
    case 0: return "membrane";
    case 1: return "window";
    default: return "wall";
  }
}

int LagrangianGrid::free_count() const {
  int n = 0;
  for (auto f : fixed) n += f == 0;
  return n;
}

void LagrangianGrid::validate() const {
  auto fail = [this](const std::string& what) {
    throw std::invalid_argument("grid '" + name + "': " + what);
  };
  if (n1 <= 0 || n2 <= 0) fail("dimensions must be positive");
  if (!(dq1 > 0.0) || !(dq2 > 0.0)) fail("parameter mesh widths must be positive");
  const auto n = static_cast<std::size_t>(size());
  if (X.size() != n || X_rest.size() != n || fixed.size() != n) fail("array sizes do not match n1 * n2");
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, MembraneLaw>) {
          if (!(law.k0 > 0.0)) fail("membrane stiffness must be positive");
          if (!(law.lambda > 0.0)) fail("membrane stiffness must strictly decrease along the channel");
          if (!(law.prestrain >= 0.0)) fail("pre-strain must be non-negative");
        } else if constexpr (std::is_same_v<T, WindowPlateLaw>) {
          if (!(law.k > 0.0)) fail("window stiffness must be positive");
          if (!(law.radius > 0.0)) fail("window radius must be positive");
          if (!(law.prestrain >= 0.0)) fail("pre-strain must be non-negative");
        } else {
          if (!(law.k_tether > 0.0)) fail("tether stiffness must be positive");
        }
      },
      law);
  for (std::size_t q = 0; q < n; ++q) {
    if (!is_finite(X[q]) || !is_finite(X_rest[q])) fail("non-finite position at point " + std::to_string(q));
    if (fixed[q] && !(X[q] == X_rest[q])) fail("fixed point " + std::to_string(q) + " is off its rest position");
  }
}

void LagrangianGrid::pin_fixed() {
  for (std::size_t q = 0; q < X.size(); ++q) {
    if (fixed[q]) X[q] = X_rest[q];
  }
}

LagrangianGrid make_grid(std::string name, int n1, int n2, double dq1, double dq2, std::vector<Vec3> rest,
                         MaterialLaw law) {
  LagrangianGrid g;
  g.name = std::move(name);
  g.n1 = n1;
  g.n2 = n2;
  g.dq1 = dq1;
  g.dq2 = dq2;
  g.X = rest;
  g.X_rest = std::move(rest);
  g.law = law;
  g.fixed.assign(g.X.size(), 0);
  return g;
}

void DriveSignal::validate() const {
  if (!(amplitude >= 0.0)) throw std::invalid_argument("drive amplitude must be non-negative");
  if (!(frequency > 0.0)) throw std::invalid_argument("drive frequency must be positive");
  if (std::abs(norm(direction) - 1.0) > 1e-12) throw std::invalid_argument("drive direction must be a unit vector");
}

namespace {

// Neighbour offsets (di, dj) and the link family each belongs to:
// 0 = along parameter axis 1, 1 = along axis 2, 2 = diagonal.
constexpr int kLinks[8][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 1}, {0, -1, 1},
                              {1, 1, 2}, {-1, -1, 2}, {1, -1, 2}, {-1, 1, 2}};

struct LinkParams {
  double k;
  double rest_scale;  // l0 = |X_rest_b - X_rest_a| * rest_scale
};

template <typename ParamFn>
std::vector<Vec3> network_force(const LagrangianGrid& g, ParamFn&& params) {
  std::vector<Vec3> f(g.X.size());
  const double inv_dq = 1.0 / g.dq();
  bool coincident = false;
  int bad_a = -1, bad_b = -1;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.n2; ++j) {
    for (int i = 0; i < g.n1; ++i) {
      const int a = g.index(i, j);
      Vec3 acc;
      for (const auto& link : kLinks) {
        const int ib = i + link[0], jb = j + link[1];
        if (ib < 0 || ib >= g.n1 || jb < 0 || jb >= g.n2) continue;
        const int b = g.index(ib, jb);
        const Vec3 d = g.X[b] - g.X[a];
        const double len = norm(d);
        if (!(len > 0.0)) {
#pragma omp critical(ibc_coincident)
          if (!coincident || a < bad_a) {
            coincident = true;
            bad_a = std::min(a, b);
            bad_b = std::max(a, b);
          }
          continue;
        }
        const LinkParams lp = params(a, b, link[2]);
        const Vec3 d0 = g.X_rest[b] - g.X_rest[a];
        const double len0 = norm(d0);
        const double rest = len0 * lp.rest_scale;
        // the rest-state tension is carried by the supports, not by the fluid
        acc += d * (lp.k * (len - rest) / len) - d0 * (lp.k * (len0 - rest) / len0);
      }
      f[a] = acc * inv_dq;
    }
  }
  if (coincident) {
    throw std::domain_error("grid '" + g.name + "': linked points " + std::to_string(bad_a) + " and " +
                            std::to_string(bad_b) + " coincide");
  }
  return f;
}

template <typename ParamFn>
double network_energy(const LagrangianGrid& g, ParamFn&& params) {
  double e = 0.0;
  for (int j = 0; j < g.n2; ++j) {
    for (int i = 0; i < g.n1; ++i) {
      const int a = g.index(i, j);
      // each link once: only the offsets with a positive leading component
      for (const auto& link : kLinks) {
        if (!(link[1] > 0 || (link[1] == 0 && link[0] > 0))) continue;
        const int ib = i + link[0], jb = j + link[1];
        if (ib < 0 || ib >= g.n1 || jb < 0 || jb >= g.n2) continue;
        const int b = g.index(ib, jb);
        const LinkParams lp = params(a, b, link[2]);
        const Vec3 d0 = g.X_rest[b] - g.X_rest[a], d = g.X[b] - g.X[a];
        const double len0 = norm(d0);
        const double rest = len0 * lp.rest_scale;
        const double stretch = norm(d) - rest, stretch0 = len0 - rest;
        const double t0 = lp.k * stretch0;
        e += 0.5 * lp.k * (stretch * stretch - stretch0 * stretch0) - t0 * dot(d0, d - d0) / len0;
      }
    }
  }
  return e;
}

auto membrane_params(const LagrangianGrid& g, const MembraneLaw& law) {
  const double width_scale = 1.0 / (1.0 + law.prestrain);
  return [&g, &law, width_scale](int a, int b, int family) {
    const double s = 0.5 * (g.X_rest[a].x + g.X_rest[b].x);
    return LinkParams{law.stiffness(s), family == 1 ? width_scale : 1.0};
  };
}

auto window_params(const WindowPlateLaw& law) {
  const double scale = 1.0 / (1.0 + law.prestrain);
  return [k = law.k, scale](int, int, int) { return LinkParams{k, scale}; };
}

template <typename Law>
const Law& require_law(const LagrangianGrid& g, const char* op) {
  const Law* law = std::get_if<Law>(&g.law);
  if (!law) {
    throw std::invalid_argument(std::string(op) + ": grid '" + g.name + "' has law " + law_name(g.law));
  }
  return *law;
}

}  // namespace

std::vector<Vec3> membrane_force(const LagrangianGrid& g) {
  const auto& law = require_law<MembraneLaw>(g, "membrane_force");
  return network_force(g, membrane_params(g, law));
}

std::vector<Vec3> window_force(const LagrangianGrid& g) {
  const auto& law = require_law<WindowPlateLaw>(g, "window_force");
  return network_force(g, window_params(law));
}

std::vector<Vec3> wall_force(const LagrangianGrid& g) {
  const auto& law = require_law<RigidWallLaw>(g, "wall_force");
  std::vector<Vec3> f(g.X.size());
  const double scale = law.k_tether / g.dq();
  const long n = static_cast<long>(f.size());
#pragma omp parallel for schedule(static)
  for (long q = 0; q < n; ++q) f[q] = (g.X_rest[q] - g.X[q]) * scale;
  return f;
}

std::vector<Vec3> elastic_force(const LagrangianGrid& g) {
  switch (g.law.index()) {
    case 0: return membrane_force(g);
    case 1: return window_force(g);
    default: return wall_force(g);
  }
}

double elastic_energy(const LagrangianGrid& g) {
  if (const auto* m = std::get_if<MembraneLaw>(&g.law)) return network_energy(g, membrane_params(g, *m));
  if (const auto* w = std::get_if<WindowPlateLaw>(&g.law)) return network_energy(g, window_params(*w));
  const double k = std::get<RigidWallLaw>(g.law).k_tether;
  double e = 0.0;
  for (std::size_t q = 0; q < g.X.size(); ++q) {
    const Vec3 d = g.X[q] - g.X_rest[q];
    e += 0.5 * k * dot(d, d);
  }
  return e;
}

void stapes_drive(const LagrangianGrid& g, double t, const DriveSignal& sig, std::vector<Vec3>& f) {
  const int n_free = g.free_count();
  if (n_free == 0) return;
  const double magnitude = sig.amplitude * std::sin(2.0 * std::numbers::pi * sig.frequency * t);
  const Vec3 add = sig.direction * (magnitude / (static_cast<double>(n_free) * g.dq()));
  for (std::size_t q = 0; q < f.size(); ++q) {
    if (!g.fixed[q]) f[q] += add;
  }
}

std::vector<std::vector<Vec3>> total_force(std::span<const LagrangianGrid> grids, double t, const Drive& drive) {
  std::vector<std::vector<Vec3>> out;
  out.reserve(grids.size());
  bool driven = drive.target.empty();
  for (const auto& g : grids) {
    out.push_back(elastic_force(g));
    if (!drive.target.empty() && g.name == drive.target) {
      stapes_drive(g, t, drive.signal, out.back());
      driven = true;
    }
  }
  if (!driven) throw std::invalid_argument("drive target grid '" + drive.target + "' not found");
  return out;
}

}  // namespace ibc
