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

// Little helpers for the self-describing binary files (model, snapshot,
// checkpoint). Values are written in host byte order; every file carries an
// endianness marker that readers check.

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "ibcochlea/vec3.hpp"

namespace ibc {

/// Raised for malformed, truncated or foreign files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kEndianMarker = 0x01020304u;

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  template <typename T>
    requires std::is_arithmetic_v<T>
  void put(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put_magic(const char (&magic)[9]) { out_.write(magic, 8); }
  void put_string(const std::string& s);
  void put_vec3s(const std::vector<Vec3>& v);
  void put_doubles(const double* p, std::size_t n);
  void put_bytes(const std::vector<std::uint8_t>& v);
  /// Magic, version and endianness marker.
  void put_header(const char (&magic)[9], std::uint32_t version);

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string context) : in_(in), context_(std::move(context)) {}

  template <typename T>
    requires std::is_arithmetic_v<T>
  T get() {
    T v{};
    read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
  }
  std::string get_string();
  std::vector<Vec3> get_vec3s(std::size_t n);
  void get_doubles(double* p, std::size_t n);
  std::vector<std::uint8_t> get_bytes(std::size_t n);
  /// Checks magic and endianness marker; returns the version.
  std::uint32_t expect_header(const char (&magic)[9], std::uint32_t max_version);

  [[noreturn]] void fail(const std::string& what) const;

 private:
  void read(char* p, std::size_t n);

  std::istream& in_;
  std::string context_;
};

}  // namespace ibc
