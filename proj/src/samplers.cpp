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

#include "ozo/samplers.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "ozo/error.hpp"

namespace ozo {

namespace {

void check_dims(std::size_t d, std::size_t ell) {
  if (d == 0 || ell == 0 || ell > d)
    fail(ErrorCode::kConfig, "sampler: need 1 <= ell <= d (got d=" +
                                 std::to_string(d) +
                                 ", ell=" + std::to_string(ell) + ")");
}

// First ell entries of a uniformly random permutation of 0..d-1.
std::vector<std::size_t> choose_without_replacement(std::size_t d,
                                                    std::size_t ell, Rng& rng) {
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t j = 0; j < ell; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, d - 1);
    std::swap(idx[j], idx[pick(rng)]);
  }
  idx.resize(ell);
  return idx;
}

}  // namespace

DirectionMatrix::DirectionMatrix(std::size_t d, std::size_t ell)
    : d_(d), ell_(ell), data_(d * ell, 0.0) {}

Vector DirectionMatrix::apply_transpose(std::span<const double> v) const {
  require(v.size() == d_, "DirectionMatrix::apply_transpose: length mismatch");
  Vector out(ell_);
  for (std::size_t j = 0; j < ell_; ++j) out[j] = dot(column(j), v);
  return out;
}

Vector DirectionMatrix::apply(std::span<const double> g) const {
  require(g.size() == ell_, "DirectionMatrix::apply: length mismatch");
  Vector out(d_, 0.0);
  for (std::size_t j = 0; j < ell_; ++j) {
    auto p = column(j);
    for (std::size_t i = 0; i < d_; ++i) out[i] += g[j] * p[i];
  }
  return out;
}

Matrix DirectionMatrix::gram() const {
  Matrix g(ell_, ell_);
  for (std::size_t i = 0; i < ell_; ++i)
    for (std::size_t j = i; j < ell_; ++j)
      g(i, j) = g(j, i) = dot(column(i), column(j));
  return g;
}

Matrix DirectionMatrix::outer() const {
  Matrix o(d_, d_);
  for (std::size_t j = 0; j < ell_; ++j) {
    auto p = column(j);
    for (std::size_t a = 0; a < d_; ++a) {
      if (p[a] == 0.0) continue;
      for (std::size_t b = 0; b < d_; ++b) o(a, b) += p[a] * p[b];
    }
  }
  return o;
}

Matrix DirectionMatrix::to_matrix() const {
  Matrix m(d_, ell_);
  for (std::size_t j = 0; j < ell_; ++j) m.set_col(j, column(j));
  return m;
}

std::string_view to_string(SamplerKind kind) noexcept {
  switch (kind) {
    case SamplerKind::kCoordinate: return "coordinate";
    case SamplerKind::kHaar: return "haar";
    case SamplerKind::kHadamard: return "hadamard";
  }
  return "unknown";
}

std::optional<SamplerKind> parse_sampler_kind(std::string_view tag) noexcept {
  if (tag == "coordinate") return SamplerKind::kCoordinate;
  if (tag == "haar") return SamplerKind::kHaar;
  if (tag == "hadamard") return SamplerKind::kHadamard;
  return std::nullopt;
}

std::string_view sampler_tags() noexcept { return "coordinate|haar|hadamard"; }

DirectionMatrix sample_coordinate(std::size_t d, std::size_t ell, Rng& rng,
                                  bool random_signs) {
  check_dims(d, ell);
  const double scale = std::sqrt(static_cast<double>(d) / static_cast<double>(ell));
  DirectionMatrix p(d, ell);
  const auto idx = choose_without_replacement(d, ell, rng);
  for (std::size_t j = 0; j < ell; ++j) {
    const double sign = (random_signs && rng.coin()) ? -1.0 : 1.0;
    p.column(j)[idx[j]] = sign * scale;
  }
  return p;
}

DirectionMatrix sample_haar(std::size_t d, std::size_t ell, Rng& rng) {
  check_dims(d, ell);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kAttempts = 3;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Matrix z(d, d);
    for (double& x : z.data()) x = normal(rng);
    QrResult qr;
    try {
      qr = qr_positive_diagonal(z);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kDegenerateInput) continue;
      throw;
    }
    const double scale =
        std::sqrt(static_cast<double>(d) / static_cast<double>(ell));
    DirectionMatrix p(d, ell);
    for (std::size_t j = 0; j < ell; ++j) {
      auto col = p.column(j);
      for (std::size_t i = 0; i < d; ++i) col[i] = scale * qr.q(i, j);
    }
    return p;
  }
  fail(ErrorCode::kInternal,
       "sample_haar: Gaussian matrix rank-deficient in 3 consecutive draws");
}

DirectionMatrix sample_hadamard(std::size_t d, std::size_t ell, Rng& rng) {
  check_dims(d, ell);
  if (!is_power_of_two(d))
    fail(ErrorCode::kConfig, "hadamard sampler: d=" + std::to_string(d) +
                                 " is not a power of two");
  // Column j of D·H·S is D times column i_j of H; H is symmetric, so that
  // column is fwht(e_{i_j}). Each entry then has magnitude 1/sqrt(ell)
  // after the sqrt(d/ell)/sqrt(d) scaling.
  Vector signs(d);
  for (double& s : signs) s = rng.coin() ? -1.0 : 1.0;
  const auto idx = choose_without_replacement(d, ell, rng);
  const double scale = 1.0 / std::sqrt(static_cast<double>(ell));

  DirectionMatrix p(d, ell);
  for (std::size_t j = 0; j < ell; ++j) {
    auto col = p.column(j);
    col[idx[j]] = 1.0;
    fwht_inplace(col);
    for (std::size_t i = 0; i < d; ++i) col[i] *= scale * signs[i];
  }
  return p;
}

Sampler::Sampler(SamplerKind kind, std::size_t d, std::size_t ell,
                 std::uint64_t seed, bool coordinate_signs)
    : kind_(kind),
      d_(d),
      ell_(ell),
      coordinate_signs_(coordinate_signs),
      rng_(seed) {
  check_dims(d, ell);
  if (kind == SamplerKind::kHadamard && !is_power_of_two(d))
    fail(ErrorCode::kConfig, "hadamard sampler: d=" + std::to_string(d) +
                                 " is not a power of two");
}

DirectionMatrix Sampler::next() {
  switch (kind_) {
    case SamplerKind::kCoordinate:
      return sample_coordinate(d_, ell_, rng_, coordinate_signs_);
    case SamplerKind::kHaar:
      return sample_haar(d_, ell_, rng_);
    case SamplerKind::kHadamard:
      return sample_hadamard(d_, ell_, rng_);
  }
  fail(ErrorCode::kInternal, "Sampler::next: unknown kind");
}

}  // namespace ozo
