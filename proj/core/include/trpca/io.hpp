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

#pragma once

#include <filesystem>
#include <iosfwd>

#include "trpca/tensor.hpp"

namespace trpca {

// TNS3 layout: the magic "TNS3", a version byte (0x01), n1, n2, n3 as
// little-endian uint64, then n1*n2*n3 little-endian binary64 values with k
// varying fastest, then j, then i.

void write_tensor(const DenseTensor& t, std::ostream& out);
void write_tensor(const DenseTensor& t, const std::filesystem::path& path);

/// Throws IoError whose kind() distinguishes bad magic, unsupported version,
/// dimension overflow, truncated payload, trailing bytes and non-finite values.
DenseTensor read_tensor(std::istream& in);
DenseTensor read_tensor(const std::filesystem::path& path);

}  // namespace trpca
