// Copyright 2026 The SAERS Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAERS_TENSOR_H_
#define SAERS_TENSOR_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

namespace saers {

enum class DType : std::uint8_t {
  kFloat32 = 1,
  kFloat64 = 2,
};

const char* DTypeName(DType dtype);

// Dense row-major tensor holding either f32 or f64 elements. The element
// buffer keeps its native precision so that serialization is bit-exact.
class Tensor {
 public:
  Tensor() = default;

  // Throws DataError if `shape` is empty, has a zero entry, or its product
  // disagrees with the buffer length.
  Tensor(std::vector<std::int64_t> shape, std::vector<float> data);
  Tensor(std::vector<std::int64_t> shape, std::vector<double> data);

  static Tensor Zeros(DType dtype, std::vector<std::int64_t> shape);

  DType dtype() const { return dtype_; }
  const std::vector<std::int64_t>& shape() const { return shape_; }
  std::size_t ndim() const { return shape_.size(); }
  std::int64_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const;

  std::span<const float> f32() const;
  std::span<const double> f64() const;
  std::span<float> mutable_f32();
  std::span<double> mutable_f64();

  // Element `index` of the flat buffer, widened to double.
  double at(std::size_t index) const;

  // Copy of all elements widened to double.
  std::vector<double> ToDoubles() const;

  // True when every element is finite.
  bool AllFinite() const;

  // Bitwise equality of dtype, shape and payload.
  friend bool operator==(const Tensor& a, const Tensor& b);

 private:
  DType dtype_ = DType::kFloat32;
  std::vector<std::int64_t> shape_;
  std::variant<std::vector<float>, std::vector<double>> data_;
};

// `.sat` container: "SAT1", dtype code, ndim, two zero octets, ndim
// little-endian u64 dims, then the little-endian row-major payload.
inline constexpr char kTensorMagic[4] = {'S', 'A', 'T', '1'};
inline constexpr std::size_t kTensorHeaderBytes = 8;

// Encodes `t` into `.sat` bytes. Throws NumericError on NaN/Inf.
std::vector<std::uint8_t> EncodeTensor(const Tensor& t);

// Decodes `.sat` bytes. Throws FormatError on bad magic, unknown dtype,
// reserved octets, truncated or trailing payload or a NaN/Inf payload.
Tensor DecodeTensor(std::span<const std::uint8_t> bytes);

void WriteTensor(const std::filesystem::path& path, const Tensor& t);
Tensor ReadTensor(const std::filesystem::path& path);

}  // namespace saers

#endif  // SAERS_TENSOR_H_
