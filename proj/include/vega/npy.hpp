// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <vega/common.hpp>

namespace vega::npy {

// Minimal NPY v1.0 container for little-endian int16/int32 C-order tensors
// (the only dtypes the test vectors use).
struct array {
  std::string descr;             // "<i2" or "<i4"
  std::vector<uint64_t> shape;   // row-major
  std::vector<uint8_t> data;     // raw little-endian payload

  size_t item_size() const;
  uint64_t elements() const;
};

array load(const std::string& path);
void save(const std::string& path, const array& a);

array from_i16(const std::vector<int16_t>& v, std::vector<uint64_t> shape);
array from_i32(const std::vector<int32_t>& v, std::vector<uint64_t> shape);
std::vector<int16_t> to_i16(const array& a);
std::vector<int32_t> to_i32(const array& a);

}  // namespace vega::npy
