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

#include "ibcochlea/binary_io.hpp"

#include <cstring>

namespace ibc {

namespace {
constexpr std::uint32_t kMaxStringLength = 1u << 16;
}

void BinaryWriter::put_string(const std::string& s) {
  put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
  out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void BinaryWriter::put_vec3s(const std::vector<Vec3>& v) {
  for (const Vec3& p : v) {
    put(p.x);
    put(p.y);
    put(p.z);
  }
}

void BinaryWriter::put_doubles(const double* p, std::size_t n) {
  out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void BinaryWriter::put_bytes(const std::vector<std::uint8_t>& v) {
  out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size()));
}

void BinaryWriter::put_header(const char (&magic)[9], std::uint32_t version) {
  put_magic(magic);
  put(version);
  put(kEndianMarker);
}

void BinaryReader::fail(const std::string& what) const { throw FormatError(context_ + ": " + what); }

void BinaryReader::read(char* p, std::size_t n) {
  in_.read(p, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) fail("unexpected end of file");
}

std::string BinaryReader::get_string() {
  const auto n = get<std::uint32_t>();
  if (n > kMaxStringLength) fail("string length " + std::to_string(n) + " out of range");
  std::string s(n, '\0');
  read(s.data(), n);
  return s;
}

std::vector<Vec3> BinaryReader::get_vec3s(std::size_t n) {
  std::vector<Vec3> v(n);
  for (Vec3& p : v) {
    p.x = get<double>();
    p.y = get<double>();
    p.z = get<double>();
  }
  return v;
}

void BinaryReader::get_doubles(double* p, std::size_t n) { read(reinterpret_cast<char*>(p), n * sizeof(double)); }

std::vector<std::uint8_t> BinaryReader::get_bytes(std::size_t n) {
  std::vector<std::uint8_t> v(n);
  read(reinterpret_cast<char*>(v.data()), n);
  return v;
}

std::uint32_t BinaryReader::expect_header(const char (&magic)[9], std::uint32_t max_version) {
  char got[8];
  read(got, 8);
  if (std::memcmp(got, magic, 8) != 0) fail("bad magic bytes");
  const auto version = get<std::uint32_t>();
  if (version == 0 || version > max_version) fail("unsupported version " + std::to_string(version));
  const auto marker = get<std::uint32_t>();
  if (marker != kEndianMarker) fail("file written with a different byte order");
  return version;
}

}  // namespace ibc
