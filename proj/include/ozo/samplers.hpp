// Copyright 2026 The ozo Authors.
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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "ozo/linalg.hpp"
#include "ozo/rng.hpp"

namespace ozo {

/// A d×ℓ matrix whose columns are mutually orthogonal with squared norm d/ℓ.
/// Stored column-major: column j is contiguous.
class DirectionMatrix {
 public:
  DirectionMatrix() = default;
  DirectionMatrix(std::size_t d, std::size_t ell);

  std::size_t dim() const noexcept { return d_; }
  std::size_t ell() const noexcept { return ell_; }

  std::span<const double> column(std::size_t j) const noexcept {
    return {data_.data() + j * d_, d_};
  }
  std::span<double> column(std::size_t j) noexcept {
    return {data_.data() + j * d_, d_};
  }

  /// Pᵀv, length ℓ.
  Vector apply_transpose(std::span<const double> v) const;
  /// P·g, length d.
  Vector apply(std::span<const double> g) const;

  Matrix gram() const;           // PᵀP
  Matrix outer() const;          // PPᵀ
  Matrix to_matrix() const;      // dense d×ℓ

 private:
  std::size_t d_ = 0;
  std::size_t ell_ = 0;
  Vector data_;
};

enum class SamplerKind { kCoordinate, kHaar, kHadamard };

std::string_view to_string(SamplerKind kind) noexcept;
std::optional<SamplerKind> parse_sampler_kind(std::string_view tag) noexcept;
/// "coordinate|haar|hadamard"
std::string_view sampler_tags() noexcept;

DirectionMatrix sample_coordinate(std::size_t d, std::size_t ell, Rng& rng,
                                  bool random_signs = true);
DirectionMatrix sample_haar(std::size_t d, std::size_t ell, Rng& rng);
DirectionMatrix sample_hadamard(std::size_t d, std::size_t ell, Rng& rng);

/// Owns the RNG stream of one run and hands out P_1, P_2, ...
class Sampler {
 public:
  Sampler(SamplerKind kind, std::size_t d, std::size_t ell, std::uint64_t seed,
          bool coordinate_signs = true);

  DirectionMatrix next();

  SamplerKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return d_; }
  std::size_t ell() const noexcept { return ell_; }

 private:
  SamplerKind kind_;
  std::size_t d_;
  std::size_t ell_;
  bool coordinate_signs_;
  Rng rng_;
};

}  // namespace ozo
