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

#include "saers/tensor.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "saers/error.h"

namespace saers {
namespace {

std::size_t CheckedProduct(const std::vector<std::int64_t>& shape) {
  if (shape.empty()) throw DataError("tensor shape must have at least one axis");
  std::size_t n = 1;
  for (std::int64_t d : shape) {
    if (d < 1) throw DataError("tensor shape entries must be >= 1");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

void PutU64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t GetU64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return v;
}

template <typename T, typename Bits>
void AppendLittleEndian(std::vector<std::uint8_t>& out, std::span<const T> values) {
  static_assert(sizeof(T) == sizeof(Bits));
  const std::size_t start = out.size();
  out.resize(start + values.size() * sizeof(T));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data() + start, values.data(), values.size() * sizeof(T));
  } else {
    std::uint8_t* dst = out.data() + start;
    for (T v : values) {
      const Bits bits = std::bit_cast<Bits>(v);
      for (std::size_t b = 0; b < sizeof(T); ++b) *dst++ = static_cast<std::uint8_t>(bits >> (8 * b));
    }
  }
}

template <typename T, typename Bits>
std::vector<T> ReadLittleEndian(const std::uint8_t* src, std::size_t count) {
  std::vector<T> values(count);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(values.data(), src, count * sizeof(T));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      Bits bits = 0;
      for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<Bits>(src[i * sizeof(T) + b]) << (8 * b);
      values[i] = std::bit_cast<T>(bits);
    }
  }
  return values;
}

}  // namespace

const char* DTypeName(DType dtype) {
  switch (dtype) {
    case DType::kFloat32: return "f32";
    case DType::kFloat64: return "f64";
  }
  return "unknown";
}

Tensor::Tensor(std::vector<std::int64_t> shape, std::vector<float> data)
    : dtype_(DType::kFloat32), shape_(std::move(shape)), data_(std::move(data)) {
  if (CheckedProduct(shape_) != std::get<0>(data_).size()) {
    throw DataError("tensor shape does not match element count");
  }
}

Tensor::Tensor(std::vector<std::int64_t> shape, std::vector<double> data)
    : dtype_(DType::kFloat64), shape_(std::move(shape)), data_(std::move(data)) {
  if (CheckedProduct(shape_) != std::get<1>(data_).size()) {
    throw DataError("tensor shape does not match element count");
  }
}

Tensor Tensor::Zeros(DType dtype, std::vector<std::int64_t> shape) {
  const std::size_t n = CheckedProduct(shape);
  if (dtype == DType::kFloat32) return Tensor(std::move(shape), std::vector<float>(n, 0.0f));
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

std::size_t Tensor::size() const {
  return std::visit([](const auto& v) { return v.size(); }, data_);
}

std::span<const float> Tensor::f32() const {
  if (dtype_ != DType::kFloat32) throw DataError("tensor is not f32");
  return std::get<0>(data_);
}

std::span<const double> Tensor::f64() const {
  if (dtype_ != DType::kFloat64) throw DataError("tensor is not f64");
  return std::get<1>(data_);
}

std::span<float> Tensor::mutable_f32() {
  if (dtype_ != DType::kFloat32) throw DataError("tensor is not f32");
  return std::get<0>(data_);
}

std::span<double> Tensor::mutable_f64() {
  if (dtype_ != DType::kFloat64) throw DataError("tensor is not f64");
  return std::get<1>(data_);
}

double Tensor::at(std::size_t index) const {
  return std::visit([index](const auto& v) { return static_cast<double>(v.at(index)); }, data_);
}

std::vector<double> Tensor::ToDoubles() const {
  return std::visit([](const auto& v) { return std::vector<double>(v.begin(), v.end()); }, data_);
}

bool Tensor::AllFinite() const {
  return std::visit(
      [](const auto& v) {
        for (auto x : v) {
          if (!std::isfinite(x)) return false;
        }
        return true;
      },
      data_);
}

bool operator==(const Tensor& a, const Tensor& b) {
  if (a.dtype_ != b.dtype_ || a.shape_ != b.shape_ || a.size() != b.size()) return false;
  // Compare bit patterns, not values: -0.0 != 0.0 here.
  return std::visit(
      [&b](const auto& va) {
        using V = std::decay_t<decltype(va)>;
        const auto& vb = std::get<V>(b.data_);
        return std::memcmp(va.data(), vb.data(), va.size() * sizeof(typename V::value_type)) == 0;
      },
      a.data_);
}

std::vector<std::uint8_t> EncodeTensor(const Tensor& t) {
  if (t.ndim() == 0 || t.ndim() > 255) throw DataError("tensor ndim must be in [1, 255]");
  if (!t.AllFinite()) throw NumericError("refusing to write tensor with NaN/Inf values");
  const std::size_t elem = t.dtype() == DType::kFloat32 ? 4 : 8;
  std::vector<std::uint8_t> out;
  out.reserve(kTensorHeaderBytes + 8 * t.ndim() + elem * t.size());
  out.insert(out.end(), std::begin(kTensorMagic), std::end(kTensorMagic));
  out.push_back(static_cast<std::uint8_t>(t.dtype()));
  out.push_back(static_cast<std::uint8_t>(t.ndim()));
  out.push_back(0);
  out.push_back(0);
  for (std::int64_t d : t.shape()) PutU64(out, static_cast<std::uint64_t>(d));
  if (t.dtype() == DType::kFloat32) {
    AppendLittleEndian<float, std::uint32_t>(out, t.f32());
  } else {
    AppendLittleEndian<double, std::uint64_t>(out, t.f64());
  }
  return out;
}

Tensor DecodeTensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kTensorHeaderBytes) throw FormatError("truncated tensor header");
  if (std::memcmp(bytes.data(), kTensorMagic, 4) != 0) throw FormatError("bad tensor magic");
  const std::uint8_t code = bytes[4];
  if (code != 1 && code != 2) {
    throw FormatError("unknown tensor dtype code " + std::to_string(code));
  }
  const DType dtype = static_cast<DType>(code);
  const std::size_t ndim = bytes[5];
  if (ndim == 0) throw FormatError("tensor ndim must be >= 1");
  if (bytes[6] != 0 || bytes[7] != 0) throw FormatError("nonzero reserved header octets");
  const std::size_t dims_end = kTensorHeaderBytes + 8 * ndim;
  if (bytes.size() < dims_end) throw FormatError("truncated tensor dims");

  std::vector<std::int64_t> shape(ndim);
  std::size_t count = 1;
  for (std::size_t a = 0; a < ndim; ++a) {
    const std::uint64_t d = GetU64(bytes.data() + kTensorHeaderBytes + 8 * a);
    if (d == 0 || d > (std::uint64_t{1} << 40)) throw FormatError("invalid tensor dimension");
    shape[a] = static_cast<std::int64_t>(d);
    count *= d;
    if (count > (std::size_t{1} << 40)) throw FormatError("tensor too large");
  }
  const std::size_t elem = dtype == DType::kFloat32 ? 4 : 8;
  const std::size_t expected = dims_end + count * elem;
  if (bytes.size() < expected) {
    throw FormatError("truncated tensor payload: expected " + std::to_string(count) +
                      " elements, found " + std::to_string((bytes.size() - dims_end) / elem));
  }
  if (bytes.size() > expected) throw FormatError("trailing bytes after tensor payload");

  Tensor t = dtype == DType::kFloat32
                 ? Tensor(std::move(shape), ReadLittleEndian<float, std::uint32_t>(bytes.data() + dims_end, count))
                 : Tensor(std::move(shape), ReadLittleEndian<double, std::uint64_t>(bytes.data() + dims_end, count));
  if (!t.AllFinite()) throw FormatError("tensor payload contains NaN/Inf");
  return t;
}

void WriteTensor(const std::filesystem::path& path, const Tensor& t) {
  const std::vector<std::uint8_t> bytes = EncodeTensor(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

Tensor ReadTensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open tensor file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return DecodeTensor(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace saers
