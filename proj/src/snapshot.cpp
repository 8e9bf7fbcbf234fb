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

#include "ibcochlea/snapshot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ibcochlea/binary_io.hpp"

namespace ibc {

namespace {

constexpr char kSnapMagic[9] = "IBCSNAP1";
constexpr char kCheckpointMagic[9] = "IBCCHKPT";
constexpr std::uint32_t kSnapVersion = 1;
constexpr std::uint32_t kCheckpointVersion = 1;
constexpr std::uint32_t kFlagVelocity = 1u;

void put_field(BinaryWriter& w, const VectorField& v) {
  for (int c = 0; c < 3; ++c) w.put_doubles(v[c].data(), v[c].size());
}

VectorField get_field(BinaryReader& r, const Lattice& lat) {
  VectorField v(lat);
  for (int c = 0; c < 3; ++c) r.get_doubles(v[c].data(), v[c].size());
  return v;
}

Lattice checked_lattice(BinaryReader& r, Dims dims, double h) {
  try {
    return Lattice(dims, h);
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

const GridPositions* Snapshot::find(const std::string& name) const {
  for (const auto& g : grids) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

void write_snapshot(std::ostream& out, const Snapshot& snap) {
  BinaryWriter w(out);
  w.put_header(kSnapMagic, kSnapVersion);
  w.put<std::uint64_t>(snap.step);
  w.put(snap.time);
  w.put(snap.dt);
  w.put<std::uint32_t>(snap.dims.n1);
  w.put<std::uint32_t>(snap.dims.n2);
  w.put<std::uint32_t>(snap.dims.n3);
  w.put(snap.h);
  w.put<std::uint32_t>(snap.velocity ? kFlagVelocity : 0u);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(snap.grids.size()));
  for (const auto& g : snap.grids) {
    w.put_string(g.name);
    w.put<std::uint32_t>(g.n1);
    w.put<std::uint32_t>(g.n2);
    w.put_vec3s(g.X);
  }
  if (snap.velocity) put_field(w, *snap.velocity);
}

Snapshot read_snapshot(std::istream& in, const std::string& context) {
  BinaryReader r(in, context);
  r.expect_header(kSnapMagic, kSnapVersion);
  Snapshot s;
  s.step = r.get<std::uint64_t>();
  s.time = r.get<double>();
  s.dt = r.get<double>();
  s.dims.n1 = static_cast<int>(r.get<std::uint32_t>());
  s.dims.n2 = static_cast<int>(r.get<std::uint32_t>());
  s.dims.n3 = static_cast<int>(r.get<std::uint32_t>());
  s.h = r.get<double>();
  const auto flags = r.get<std::uint32_t>();
  const auto count = r.get<std::uint32_t>();
  if (count > (1u << 20)) r.fail("grid count out of range");
  for (std::uint32_t n = 0; n < count; ++n) {
    GridPositions g;
    g.name = r.get_string();
    g.n1 = static_cast<int>(r.get<std::uint32_t>());
    g.n2 = static_cast<int>(r.get<std::uint32_t>());
    if (g.n1 <= 0 || g.n2 <= 0 || static_cast<long long>(g.n1) * g.n2 > (1ll << 28)) {
      r.fail("grid '" + g.name + "' has invalid dimensions");
    }
    g.X = r.get_vec3s(static_cast<std::size_t>(g.n1) * g.n2);
    s.grids.push_back(std::move(g));
  }
  if (flags & kFlagVelocity) s.velocity = get_field(r, checked_lattice(r, s.dims, s.h));
  return s;
}

void write_snapshot_file(const std::filesystem::path& path, const Snapshot& snap) {
  auto out = open_out(path);
  write_snapshot(out, snap);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

Snapshot read_snapshot_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_snapshot(in, path.string());
}

std::string snapshot_name(std::uint64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%08llu.ibs", static_cast<unsigned long long>(step));
  return buf;
}

std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with("snap_") && name.ends_with(".ibs")) out.push_back(e.path());
  }
  // zero-padded names sort by step
  std::sort(out.begin(), out.end());
  return out;
}

void write_checkpoint_file(const std::filesystem::path& path, const Checkpoint& ck) {
  if (ck.positions.size() != ck.model.grids.size()) {
    throw std::invalid_argument("checkpoint: position list does not match the grid list");
  }
  auto out = open_out(path);
  BinaryWriter w(out);
  w.put_header(kCheckpointMagic, kCheckpointVersion);
  w.put<std::uint64_t>(ck.step);
  w.put(ck.dt);
  write_model_body(w, ck.model);
  for (const auto& X : ck.positions) w.put_vec3s(X);
  put_field(w, ck.velocity);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

Checkpoint read_checkpoint_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  BinaryReader r(in, path.string());
  r.expect_header(kCheckpointMagic, kCheckpointVersion);
  Checkpoint ck;
  ck.step = r.get<std::uint64_t>();
  ck.dt = r.get<double>();
  ck.model = read_model_body(r);
  for (const auto& g : ck.model.grids) ck.positions.push_back(r.get_vec3s(static_cast<std::size_t>(g.size())));
  ck.velocity = get_field(r, checked_lattice(r, ck.model.fluid.dims, ck.model.fluid.h));
  return ck;
}

}  // namespace ibc
