// Copyright 2026 The trpca Authors. All Rights Reserved.
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

#include "trpca/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include "trpca/error.hpp"

namespace trpca {

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'N', 'S', '3'};
constexpr std::uint8_t kVersion = 0x01;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
  v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return true;
}

}  // namespace

void write_tensor(const DenseTensor& t, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kVersion));
  put_u64(out, t.shape().n1);
  put_u64(out, t.shape().n2);
  put_u64(out, t.shape().n3);
  for (double v : t.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError(IoError::Kind::kWriteFailed, "failed to write tensor payload");
}

void write_tensor(const DenseTensor& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoError::Kind::kOpenFailed, "cannot open " + path.string() + " for writing");
  write_tensor(t, out);
  out.flush();
  if (!out) throw IoError(IoError::Kind::kWriteFailed, "failed to write " + path.string());
}

DenseTensor read_tensor(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError(IoError::Kind::kBadMagic, "bad magic: not a TNS3 tensor file");
  }
  const int version = in.get();
  if (version == std::char_traits<char>::eof()) {
    throw IoError(IoError::Kind::kTruncatedPayload, "truncated header: missing version byte");
  }
  if (version != kVersion) {
    throw IoError(IoError::Kind::kUnsupportedVersion,
                  "unsupported TNS3 version " + std::to_string(version));
  }

  std::array<std::uint64_t, 3> dims{};
  for (auto& d : dims) {
    if (!get_u64(in, d)) throw IoError(IoError::Kind::kTruncatedPayload, "truncated header: missing dimensions");
  }
  // Element count must fit both size_t and the byte count of the payload.
  constexpr std::uint64_t kMaxElements = std::numeric_limits<std::uint64_t>::max() / sizeof(double);
  std::uint64_t count = 1;
  for (auto d : dims) {
    if (d == 0) throw IoError(IoError::Kind::kDimensionOverflow, "dimension overflow: zero-sized dimension");
    if (count > kMaxElements / d) {
      throw IoError(IoError::Kind::kDimensionOverflow, "dimension overflow: element count too large");
    }
    count *= d;
  }
  if (count > std::numeric_limits<std::size_t>::max() / sizeof(double)) {
    throw IoError(IoError::Kind::kDimensionOverflow, "dimension overflow: tensor does not fit in memory");
  }

  const Shape3 shape{static_cast<std::size_t>(dims[0]), static_cast<std::size_t>(dims[1]),
                     static_cast<std::size_t>(dims[2])};
  std::vector<double> values;
  // Grow incrementally so a lying header cannot force a huge allocation.
  values.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
  for (std::uint64_t n = 0; n < count; ++n) {
    std::uint64_t bits = 0;
    if (!get_u64(in, bits)) {
      throw IoError(IoError::Kind::kTruncatedPayload,
                    "truncated payload: expected " + std::to_string(count) + " values, got " +
                        std::to_string(n));
    }
    const double v = std::bit_cast<double>(bits);
    if (!std::isfinite(v)) throw IoError(IoError::Kind::kNonFiniteValue, "non-finite value in payload");
    values.push_back(v);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError(IoError::Kind::kTrailingData, "trailing bytes after tensor payload");
  }
  return DenseTensor(shape, std::move(values));
}

DenseTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Kind::kOpenFailed, "cannot open " + path.string());
  return read_tensor(in);
}

}  // namespace trpca
