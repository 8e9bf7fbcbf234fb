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

#include "ibcochlea/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace ibc {

const LagrangianGrid* ModelFiles::find(const std::string& name) const {
  for (const auto& g : grids) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

std::size_t ModelFiles::point_count() const {
  std::size_t n = 0;
  for (const auto& g : grids) n += static_cast<std::size_t>(g.size());
  return n;
}

// ---------------------------------------------------------------------------
// Text config

namespace {

struct Key {
  const char* name;
  std::variant<int ChannelSpec::*, double ChannelSpec::*> field;
};

constexpr Key kKeys[] = {
    {"n1", &ChannelSpec::n1},
    {"n2", &ChannelSpec::n2},
    {"n3", &ChannelSpec::n3},
    {"h", &ChannelSpec::h},
    {"rho", &ChannelSpec::rho},
    {"mu", &ChannelSpec::mu},
    {"spacing", &ChannelSpec::spacing},
    {"channel_x0", &ChannelSpec::channel_x0},
    {"channel_length", &ChannelSpec::channel_length},
    {"channel_width", &ChannelSpec::channel_width},
    {"channel_height", &ChannelSpec::channel_height},
    {"helicotrema", &ChannelSpec::helicotrema},
    {"w_base", &ChannelSpec::w_base},
    {"w_apex", &ChannelSpec::w_apex},
    {"k0", &ChannelSpec::k0},
    {"lambda", &ChannelSpec::lambda},
    {"compliance_ratio", &ChannelSpec::compliance_ratio},
    {"membrane_prestrain", &ChannelSpec::membrane_prestrain},
    {"window_radius", &ChannelSpec::window_radius},
    {"window_stiffness", &ChannelSpec::window_stiffness},
    {"window_prestrain", &ChannelSpec::window_prestrain},
    {"wall_stiffness", &ChannelSpec::wall_stiffness},
    {"drive_amplitude", &ChannelSpec::drive_amplitude},
    {"drive_frequency", &ChannelSpec::drive_frequency},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ChannelSpec parse_channel_spec(std::istream& in, const ChannelSpec& defaults) {
  ChannelSpec spec = defaults;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("channel spec line " + std::to_string(lineno) + ": " + what);
    };
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto* k = std::find_if(std::begin(kKeys), std::end(kKeys), [&](const Key& c) { return key == c.name; });
    if (k == std::end(kKeys)) fail("unknown key '" + key + "'");
    std::istringstream vs(value);
    bool ok = std::visit(
        [&](auto member) {
          vs >> spec.*member;
          return !vs.fail() && (vs >> std::ws).eof();
        },
        k->field);
    if (!ok) fail("malformed value '" + value + "' for " + key);
  }
  return spec;
}

ChannelSpec load_channel_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open channel spec " + path.string());
  try {
    return parse_channel_spec(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_channel_spec(std::ostream& out, const ChannelSpec& spec) {
  out << std::setprecision(17);
  for (const Key& k : kKeys) {
    std::visit([&](auto member) { out << k.name << " = " << spec.*member << "\n"; }, k.field);
  }
}

// ---------------------------------------------------------------------------
// Geometry

double membrane_lambda(const ChannelSpec& spec) {
  if (spec.lambda > 0.0) return spec.lambda;
  const double delta = spec.material_spacing();
  const int nx = static_cast<int>(std::lround(spec.channel_length / delta));
  const int gap = static_cast<int>(std::lround(spec.helicotrema / delta));
  const int stations = nx - 1 - gap;
  const double length = (stations - 1) * delta;
  if (!(length > 0.0) || !(spec.compliance_ratio > 1.0)) {
    throw std::invalid_argument("cannot derive membrane lambda: need a positive membrane length and compliance_ratio > 1");
  }
  return std::log(spec.compliance_ratio) / length;
}

std::pair<double, double> spacing_range(const LagrangianGrid& g) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int j = 0; j < g.n2; ++j) {
    for (int i = 0; i < g.n1; ++i) {
      const Vec3& a = g.X_rest[g.index(i, j)];
      if (i + 1 < g.n1) {
        const double d = norm(g.X_rest[g.index(i + 1, j)] - a);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      if (j + 1 < g.n2) {
        const double d = norm(g.X_rest[g.index(i, j + 1)] - a);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    }
  }
  return {lo, hi};
}

namespace {

// Points origin + i*delta*e1 + j*delta*e2 for i in [i0, i1], j in [j0, j1].
LagrangianGrid plane_grid(std::string name, MaterialLaw law, Vec3 origin, Vec3 e1, Vec3 e2, int i0, int i1, int j0,
                          int j1, double delta) {
  const int n1 = i1 - i0 + 1, n2 = j1 - j0 + 1;
  std::vector<Vec3> rest;
  rest.reserve(static_cast<std::size_t>(n1) * n2);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) rest.push_back(origin + e1 * (i * delta) + e2 * (j * delta));
  }
  return make_grid(std::move(name), n1, n2, delta, delta, std::move(rest), law);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("channel spec: " + what);
}

// Number of intervals across a strip whose width runs from w0 to w1, keeping
// every spacing inside [h/4, h]; prefers an even count near the mean / delta.
int strip_intervals(double w0, double w1, double delta, double h, const std::string& name) {
  const double wmin = std::min(w0, w1), wmax = std::max(w0, w1);
  const int lo = std::max(1, static_cast<int>(std::ceil(wmax / h - 1e-12)));
  const int hi = static_cast<int>(std::floor(wmin / (0.25 * h) + 1e-12));
  if (lo > hi) {
    throw std::invalid_argument("grid '" + name + "': width range " + std::to_string(wmin) + " .. " +
                                std::to_string(wmax) + " cm cannot keep point spacing within [h/4, h]");
  }
  const double target = 0.5 * (w0 + w1) / delta;
  int best = lo;
  double best_score = std::numeric_limits<double>::infinity();
  for (int m = lo; m <= hi; ++m) {
    const double score = std::abs(m - target) + (m % 2 == 0 ? 0.0 : 0.75);
    if (score < best_score) {
      best_score = score;
      best = m;
    }
  }
  return best;
}

void check_spacing(const LagrangianGrid& g, double h) {
  if (g.n1 < 2 && g.n2 < 2) return;
  const auto [lo, hi] = spacing_range(g);
  if (lo < 0.25 * h * (1.0 - 1e-12) || hi > h * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "grid '" << g.name << "': point spacing " << lo << " .. " << hi << " cm outside [h/4, h] = [" << 0.25 * h
        << ", " << h << "]";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

ModelFiles build_channel(const ChannelSpec& spec) {
  const double h = spec.h;
  const Lattice lattice(Dims{spec.n1, spec.n2, spec.n3}, h);
  require(spec.rho > 0.0 && spec.mu >= 0.0, "rho must be positive and mu non-negative");
  const double delta = spec.material_spacing();
  require(delta >= 0.25 * h && delta <= h, "material spacing must lie in [h/4, h]");

  const int nx = static_cast<int>(std::lround(spec.channel_length / delta));
  const int ny = static_cast<int>(std::lround(spec.channel_width / delta));
  const int nz = static_cast<int>(std::lround(spec.channel_height / delta));
  require(nx >= 4 && ny >= 4 && nz >= 4, "channel too small for the material spacing");
  require(ny % 2 == 0 && nz % 2 == 0, "channel width and height must be even multiples of the spacing");

  const double xa = spec.channel_x0;
  const double ya = 0.5 * (lattice.extent(1) - ny * delta);
  const double za = 0.5 * (lattice.extent(2) - nz * delta);
  require(xa >= 0.0 && xa + nx * delta <= lattice.extent(0), "channel does not fit along x");
  require(ya >= 0.0 && za >= 0.0, "channel does not fit across the box");

  const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
  const Vec3 corner{xa, ya, za};
  const RigidWallLaw wall{spec.wall_stiffness};
  require(spec.wall_stiffness > 0.0, "wall stiffness must be positive");

  ModelFiles model;
  model.fluid = FluidSpec{lattice.dims, h, spec.rho, spec.mu};
  auto& grids = model.grids;

  // Partition: stations i = 1 .. stations along x at mid height.
  const int gap = static_cast<int>(std::lround(spec.helicotrema / delta));
  const int stations = nx - 1 - gap;
  require(gap >= 1 && stations >= 3, "helicotrema gap leaves no room for the partition");
  require(spec.w_base > 0.0 && spec.w_apex >= spec.w_base, "membrane width must be positive and non-decreasing");
  require(spec.w_apex < spec.channel_width - 2.0 * delta, "membrane must leave room for the bony shelf");
  require(spec.k0 > 0.0, "membrane stiffness must be positive");

  const double zm = za + (nz / 2) * delta;
  const double yc = ya + (ny / 2) * delta;
  const double s_origin = xa + delta;
  const double s_end = (stations - 1) * delta;
  auto width_at = [&](int i) { return spec.w_base + (spec.w_apex - spec.w_base) * (i * delta) / s_end; };

  const MembraneLaw membrane_law{spec.k0, membrane_lambda(spec), s_origin, spec.membrane_prestrain};
  const int mw = strip_intervals(spec.w_base, spec.w_apex, delta, h, "membrane") + 1;
  const double shelf0 = (yc - 0.5 * spec.w_base) - (ya + delta);
  const double shelf1 = (yc - 0.5 * spec.w_apex) - (ya + delta);
  const int ms = strip_intervals(shelf0, shelf1, delta, h, "shelf") + 1;

  {
    std::vector<Vec3> rest;
    for (int j = 0; j < mw; ++j) {
      for (int i = 0; i < stations; ++i) {
        const double w = width_at(i);
        const double y = j == mw - 1 ? yc + 0.5 * w : yc - 0.5 * w + j * w / (mw - 1);
        rest.push_back({s_origin + i * delta, y, zm});
      }
    }
    LagrangianGrid m = make_grid("membrane", stations, mw, delta, spec.w_base / (mw - 1), std::move(rest), membrane_law);
    for (int i = 0; i < stations; ++i) {
      m.fixed[m.index(i, 0)] = 1;
      m.fixed[m.index(i, mw - 1)] = 1;
    }
    grids.push_back(std::move(m));
  }
  for (int side = 0; side < 2; ++side) {
    std::vector<Vec3> rest;
    for (int j = 0; j < ms; ++j) {
      for (int i = 0; i < stations; ++i) {
        const double w = width_at(i);
        const double lo = side == 0 ? ya + delta : yc + 0.5 * w;
        const double hi = side == 0 ? yc - 0.5 * w : ya + (ny - 1) * delta;
        rest.push_back({s_origin + i * delta, j == ms - 1 ? hi : lo + j * (hi - lo) / (ms - 1), zm});
      }
    }
    grids.push_back(make_grid(side == 0 ? "shelf_south" : "shelf_north", stations, ms, delta, delta, std::move(rest),
                              wall));
  }

  // Closed box surface; each lattice point belongs to exactly one grid.
  grids.push_back(plane_grid("wall_bottom", wall, corner, ex, ey, 0, nx, 0, ny, delta));
  grids.push_back(plane_grid("wall_top", wall, corner + ez * (nz * delta), ex, ey, 0, nx, 0, ny, delta));
  grids.push_back(plane_grid("wall_south", wall, corner, ex, ez, 0, nx, 1, nz - 1, delta));
  grids.push_back(plane_grid("wall_north", wall, corner + ey * (ny * delta), ex, ez, 0, nx, 1, nz - 1, delta));
  grids.push_back(plane_grid("wall_apex", wall, corner + ex * (nx * delta), ey, ez, 1, ny - 1, 1, nz - 1, delta));

  // Windows: square patches on the base wall, centred in each scala.
  require(spec.window_radius > 0.0 && spec.window_stiffness > 0.0, "window radius and stiffness must be positive");
  const int half = static_cast<int>(std::ceil(spec.window_radius / delta - 1e-12)) + 1;
  const int jc = ny / 2;
  const int k_oval = nz / 2 + nz / 4;
  const int k_round = nz / 2 - nz / 4;
  require(jc - half >= 1 && jc + half <= ny - 1, "window does not fit across the end wall");
  require(k_oval - half > nz / 2 && k_oval + half <= nz - 1 && k_round - half >= 1 && k_round + half < nz / 2,
          "window does not fit inside its scala");

  const WindowPlateLaw window_law{spec.window_stiffness, spec.window_radius, spec.window_prestrain};
  auto window = [&](const char* name, int kc) {
    LagrangianGrid g = plane_grid(name, window_law, corner, ey, ez, jc - half, jc + half, kc - half, kc + half, delta);
    const Vec3 centre = corner + ey * (jc * delta) + ez * (kc * delta);
    for (int q = 0; q < g.size(); ++q) g.fixed[q] = norm(g.X_rest[q] - centre) > spec.window_radius;
    return g;
  };

  // Base wall minus the two window squares, as up to five rectangles.
  auto base_piece = [&](const char* name, int j0, int j1, int k0, int k1) {
    if (j0 <= j1 && k0 <= k1) grids.push_back(plane_grid(name, wall, corner, ey, ez, j0, j1, k0, k1, delta));
  };
  base_piece("base_south", 1, jc - half - 1, 1, nz - 1);
  base_piece("base_north", jc + half + 1, ny - 1, 1, nz - 1);
  base_piece("base_low", jc - half, jc + half, 1, k_round - half - 1);
  base_piece("base_mid", jc - half, jc + half, k_round + half + 1, k_oval - half - 1);
  base_piece("base_high", jc - half, jc + half, k_oval + half + 1, nz - 1);

  grids.push_back(window("oval_window", k_oval));
  grids.push_back(window("round_window", k_round));

  for (const auto& g : grids) {
    g.validate();
    check_spacing(g, h);
  }

  model.drive.target = "oval_window";
  model.drive.signal = DriveSignal{spec.drive_amplitude, spec.drive_frequency, ex};
  model.drive.signal.validate();
  return model;
}

// ---------------------------------------------------------------------------
// Binary model file

namespace {

constexpr char kModelMagic[9] = "IBCMODEL";
constexpr std::uint32_t kModelVersion = 1;

enum class LawTag : std::uint32_t { membrane = 1, window = 2, wall = 3 };

}  // namespace

void write_model_body(BinaryWriter& w, const ModelFiles& model) {
  const FluidSpec& f = model.fluid;
  w.put<std::uint32_t>(f.dims.n1);
  w.put<std::uint32_t>(f.dims.n2);
  w.put<std::uint32_t>(f.dims.n3);
  w.put(f.h);
  w.put(f.rho);
  w.put(f.mu);

  w.put_string(model.drive.target);
  w.put(model.drive.signal.amplitude);
  w.put(model.drive.signal.frequency);
  w.put(model.drive.signal.direction.x);
  w.put(model.drive.signal.direction.y);
  w.put(model.drive.signal.direction.z);

  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.grids.size()));
  for (const auto& g : model.grids) {
    w.put_string(g.name);
    w.put<std::uint32_t>(g.n1);
    w.put<std::uint32_t>(g.n2);
    w.put(g.dq1);
    w.put(g.dq2);
    double params[4] = {0, 0, 0, 0};
    LawTag tag;
    if (const auto* m = std::get_if<MembraneLaw>(&g.law)) {
      tag = LawTag::membrane;
      params[0] = m->k0;
      params[1] = m->lambda;
      params[2] = m->s_origin;
      params[3] = m->prestrain;
    } else if (const auto* win = std::get_if<WindowPlateLaw>(&g.law)) {
      tag = LawTag::window;
      params[0] = win->k;
      params[1] = win->radius;
      params[2] = win->prestrain;
    } else {
      tag = LawTag::wall;
      params[0] = std::get<RigidWallLaw>(g.law).k_tether;
    }
    w.put(static_cast<std::uint32_t>(tag));
    w.put_doubles(params, 4);
    w.put_vec3s(g.X_rest);
    w.put_bytes(g.fixed);
  }
}

ModelFiles read_model_body(BinaryReader& r) {
  ModelFiles model;
  FluidSpec& f = model.fluid;
  f.dims.n1 = static_cast<int>(r.get<std::uint32_t>());
  f.dims.n2 = static_cast<int>(r.get<std::uint32_t>());
  f.dims.n3 = static_cast<int>(r.get<std::uint32_t>());
  f.h = r.get<double>();
  f.rho = r.get<double>();
  f.mu = r.get<double>();
  if (f.dims.count() > 0) {
    try {
      (void)f.lattice();
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
  }

  model.drive.target = r.get_string();
  model.drive.signal.amplitude = r.get<double>();
  model.drive.signal.frequency = r.get<double>();
  model.drive.signal.direction.x = r.get<double>();
  model.drive.signal.direction.y = r.get<double>();
  model.drive.signal.direction.z = r.get<double>();

  const auto count = r.get<std::uint32_t>();
  if (count > (1u << 20)) r.fail("grid count " + std::to_string(count) + " out of range");
  for (std::uint32_t n = 0; n < count; ++n) {
    LagrangianGrid g;
    g.name = r.get_string();
    g.n1 = static_cast<int>(r.get<std::uint32_t>());
    g.n2 = static_cast<int>(r.get<std::uint32_t>());
    if (g.n1 <= 0 || g.n2 <= 0 || static_cast<long long>(g.n1) * g.n2 > (1ll << 28)) {
      r.fail("grid '" + g.name + "' has invalid dimensions");
    }
    g.dq1 = r.get<double>();
    g.dq2 = r.get<double>();
    const auto tag = static_cast<LawTag>(r.get<std::uint32_t>());
    double params[4];
    r.get_doubles(params, 4);
    switch (tag) {
      case LawTag::membrane: g.law = MembraneLaw{params[0], params[1], params[2], params[3]}; break;
      case LawTag::window: g.law = WindowPlateLaw{params[0], params[1], params[2]}; break;
      case LawTag::wall: g.law = RigidWallLaw{params[0]}; break;
      default: r.fail("grid '" + g.name + "' has unknown law tag");
    }
    g.X_rest = r.get_vec3s(static_cast<std::size_t>(g.size()));
    g.X = g.X_rest;
    g.fixed = r.get_bytes(static_cast<std::size_t>(g.size()));
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    model.grids.push_back(std::move(g));
  }
  return model;
}

void write_model(std::ostream& out, const ModelFiles& model) {
  BinaryWriter w(out);
  w.put_header(kModelMagic, kModelVersion);
  write_model_body(w, model);
}

ModelFiles read_model(std::istream& in, const std::string& context) {
  BinaryReader r(in, context);
  r.expect_header(kModelMagic, kModelVersion);
  return read_model_body(r);
}

void write_model_file(const std::filesystem::path& path, const ModelFiles& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_model(out, model);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

ModelFiles read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file " + path.string());
  return read_model(in, path.string());
}

}  // namespace ibc
