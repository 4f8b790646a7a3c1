/*
 *            Copyright 2026 The qed1d Development Team
 *
 *      Licensed under the Apache License, Version 2.0 (the "License")
 *
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *              http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once
#ifndef QED1D_DISTRIBUTION_HPP
#define QED1D_DISTRIBUTION_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"

namespace qed1d {

namespace detail {
inline bool all_finite(double v) { return std::isfinite(v); }
inline bool all_finite(const Complex2x2& v) { return v.allFinite(); }
inline double unit(double) { return 1.0; }
inline Complex2x2 unit(const Complex2x2&) { return Complex2x2::Identity(); }
}  // namespace detail

/// alpha delta(x) + regular part sampled on a grid. V is double (traced
/// density) or Complex2x2; for the matrix form the delta coefficient
/// multiplies the identity.
template <class V>
class DeltaPlusRegular {
 public:
  using value_type = V;

  DeltaPlusRegular(double delta_coeff, std::vector<double> grid, std::vector<V> values)
      : delta_coeff_(delta_coeff), grid_(std::move(grid)), values_(std::move(values)) {
    if (!std::isfinite(delta_coeff_)) throw DomainError("DeltaPlusRegular: non-finite delta coefficient");
    if (grid_.size() != values_.size()) throw DomainError("DeltaPlusRegular: grid/values size mismatch");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!std::isfinite(grid_[i])) throw DomainError("DeltaPlusRegular: non-finite grid point");
      if (i > 0 && !(grid_[i] > grid_[i - 1])) {
        throw DomainError("DeltaPlusRegular: grid must be strictly increasing");
      }
      if (!detail::all_finite(values_[i])) throw DomainError("DeltaPlusRegular: non-finite sample");
    }
  }

  double delta_coeff() const { return delta_coeff_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<V>& values() const { return values_; }

  V delta_part() const {
    if (values_.empty()) return V(detail::unit(V{}) * delta_coeff_);
    return V(detail::unit(values_.front()) * delta_coeff_);
  }

  // quadrature of the sampled regular part only
  V regular_integral() const {
    if (grid_.size() < 2) throw DomainError("DeltaPlusRegular: need >= 2 samples to integrate");
    return composite_grid_integral(grid_, values_);
  }

  V integral() const { return V(delta_part() + regular_integral()); }

 private:
  double delta_coeff_;
  std::vector<double> grid_;
  std::vector<V> values_;
};

using ScalarDistribution = DeltaPlusRegular<double>;
using MatrixDistribution = DeltaPlusRegular<Complex2x2>;

/// Symmetric grid on [-x_max, x_max] that skips x = 0: points are placed at
/// half-integer multiples of the spacing.
inline std::vector<double> symmetric_grid(double x_max, int points) {
  if (!(x_max > 0)) throw DomainError("symmetric_grid: x_max must be > 0");
  if (points < 2 || points % 2 != 0) throw DomainError("symmetric_grid: need an even point count >= 2");
  const int half = points / 2;
  const double h = x_max / (half - 0.5);
  std::vector<double> g(points);
  for (int i = 0; i < half; ++i) {
    const double x = (i + 0.5) * h;
    g[half + i] = x;
    g[half - 1 - i] = -x;
  }
  return g;
}

}  // namespace qed1d

#endif  // QED1D_DISTRIBUTION_HPP
