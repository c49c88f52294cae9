// Copyright 2026 The metacnp Authors.
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

// Little-endian binary primitives and the named-array container used for
// checkpoints.
//
// Named-array file layout (all integers unsigned little-endian):
//
//   char[8]  magic "MCNPARRS"
//   u32      format version (1)
//   u32      metadata entry count, then per entry: str key, str value
//   u32      array count, then per array:
//              str name, u32 rows, u32 cols, f64[rows * cols] row-major
//
// where str = u32 byte length followed by the bytes.

#ifndef METACNP_IO_H_
#define METACNP_IO_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "metacnp/autodiff.h"

namespace metacnp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void F64(double v);
  void Str(const std::string& s);
  void Bytes(const char* data, std::size_t n);
  void Array(const Matrix& m);  // row-major f64, no shape

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}
  std::uint32_t U32();
  std::uint64_t U64();
  double F64();
  std::string Str();
  void Bytes(char* data, std::size_t n);
  Matrix Array(std::uint64_t rows, std::uint64_t cols);

 private:
  std::istream& in_;
};

struct NamedArrays {
  static constexpr std::uint32_t kVersion = 1;

  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, Matrix>> arrays;

  void Add(std::string name, Matrix m) {
    arrays.emplace_back(std::move(name), std::move(m));
  }
  // Throws FormatError when absent.
  const Matrix& Get(const std::string& name) const;
  bool Has(const std::string& name) const;
  const std::string& Meta(const std::string& key) const;

  void Write(const std::string& path) const;
  static NamedArrays Read(const std::string& path);
};

}  // namespace metacnp

#endif  // METACNP_IO_H_
