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
#ifndef QED1D_VACUUM_DENSITY_HPP
#define QED1D_VACUUM_DENSITY_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "core.hpp"
#include "distribution.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace qed1d {

namespace uehling {

// h_k = sqrt(k^2 + 4 m^2 c^2)
inline double h(const PhysicalParams& p, double k) { return std::hypot(k, 2.0 * p.m() * p.c()); }

// atanh(k/h_k) = ln((h+|k|)/(2mc)) sign(k); 1 - k/h rounds to 0 for large k
inline double atanh_kh(const PhysicalParams& p, double k) {
  const double a = std::abs(k), b = 2.0 * p.m() * p.c();
  return std::copysign(std::log((std::hypot(a, b) + a) / b), k);
}

// atanh(k/h)/(k/h), finite at k = 0
inline double atanh_over(const PhysicalParams& p, double k) {
  const double y = k / h(p, k);
  if (std::abs(y) < 1e-8) return 1.0 + y * y / 3.0;
  return atanh_kh(p, k) / y;
}

// e^{-2 mc |x| t}/t, the t-form kernel without the 1/sqrt(t^2-1) weight
inline double t_kernel(const PhysicalParams& p, double x, double t) {
  return std::exp(-2.0 * p.m() * p.c() * std::abs(x) * t) / t;
}

}  // namespace uehling

namespace detail {

/// Integral over the whole imaginary-frequency axis, u = mc^2 sinh(t).
/// With kappa(iu) = mc cosh(t) the exponential factors become double
/// exponentials, and 1/u^2 tails become e^{-t}.
template <class F>
auto imaginary_axis_integral(const PhysicalParams& p, double x, F&& f, const QuadSpec& spec)
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
  using V = std::decay_t<decltype(f(0.0))>;
  const double mc2 = p.rest_energy();
  double T = 40.0;
  const double ax = std::abs(x);
  if (ax > 0) {
    const double s = 20.0 / (p.m() * p.c() * ax);
    T = std::min(T, std::max(2.0, std::acosh(std::max(1.0, s))));
  }
  auto mapped = [&](double t) -> V {
    const double u = mc2 * std::sinh(t);
    const double jac = mc2 * std::cosh(t);
    return V((f(u) + f(-u)) * jac);
  };
  return integrate(mapped, 0.0, T, spec, 8);
}

// (1 - lambda g)(1 + lambda conj g) = 1 - lambda^2 - 2 i lambda sin(phi), Lambda = infinity
inline cplx dyson_denominator(const PhysicalParams& p, double u) {
  const double l = p.lambda();
  const double sphi = u / std::hypot(p.rest_energy(), u);
  return cplx(1.0 - l * l, -2.0 * l * sphi);
}

// z1 C1 + z2 C2 = (2 cos(phi)/D) [[g, -i s], [i s, conj g]]; the first-order
// kernel is the same with D = 1. Written this way the 1/u tails of the
// off-diagonal entries carry no cancellation.
inline Complex2x2 position_kernel(const PhysicalParams& p, double x, double u, cplx inv_d) {
  const double r = std::hypot(p.rest_energy(), u);
  const double cphi = p.rest_energy() / r;
  const cplx g(cphi, u / r);
  const double s = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
  const cplx I(0.0, 1.0);
  return (2.0 * cphi * inv_d) * make_matrix(g, -I * s, I * s, std::conj(g));
}

}  // namespace detail

// closed-form first-order pair density
inline Complex2x2 uehling_pair_density(const PhysicalParams& p, double q, double qp) {
  const double e = dispersion(p, q);
  const double ep = dispersion(p, qp);
  const double mc2 = p.rest_energy();
  const double c = p.c();
  const double pref = -p.Z() / (4.0 * pi * (e * e * ep + e * ep * ep));
  const double diag = mc2 * mc2 + c * c * q * qp - e * ep;
  const double off = mc2 * c * (q - qp);
  return pref * make_matrix(diag, -off, off, diag);
}

// regular part of the first-order momentum density (Lambda = infinity)
inline Complex2x2 uehling_momentum_density_regular(const PhysicalParams& p, double k) {
  const double m = p.m(), c = p.c();
  const double hk = uehling::h(p, k);
  const double pref = -p.Z() * m / (std::pow(2.0 * pi, 1.5) * hk);
  const double diag = 4.0 * m * c / hk * uehling::atanh_over(p, k);
  // ln((h-k)/(h+k)) = -2 atanh(k/h)
  const double lg = -2.0 * uehling::atanh_kh(p, k);
  return pref * make_matrix(diag, lg, -lg, diag);
}

inline Complex2x2 uehling_momentum_density(const PhysicalParams& p, double k) {
  const double constant = p.Z() / (std::pow(2.0 * pi, 1.5) * p.c());
  return Complex2x2(constant * Complex2x2::Identity() + uehling_momentum_density_regular(p, k));
}

inline double uehling_delta_coefficient(const PhysicalParams& p) { return p.Z() / (pi * p.c()); }

// traced regular part, finite at x = 0 where it equals -Z m/2
inline double uehling_regular_scalar(const PhysicalParams& p, double x, const QuadSpec& spec = {}) {
  if (p.Z() == 0.0) return 0.0;
  auto h = [&](double t) { return uehling::t_kernel(p, x, t); };
  const double I = integrate_endpoint_singularity(h, spec).value_or_throw("uehling_regular_scalar");
  return -p.Z() * p.m() / pi * I;
}

// regular part of the first-order density matrix, x != 0
inline Complex2x2 uehling_regular_matrix(const PhysicalParams& p, double x, const QuadSpec& spec = {}) {
  if (x == 0.0) throw DomainError("uehling_regular_matrix: off-diagonal entries diverge at x = 0");
  if (p.Z() == 0.0) return Complex2x2::Zero();
  auto f = [&](double u) -> Complex2x2 {
    return std::exp(-2.0 * kappa_imag_axis(p, u) * std::abs(x)) * detail::position_kernel(p, x, u, 1.0);
  };
  const Complex2x2 J = detail::imaginary_axis_integral(p, x, f, spec).value_or_throw("uehling_regular_matrix");
  return (-p.Z() / (4.0 * p.c() * p.c()) / (2.0 * pi)) * J;
}

inline ScalarDistribution uehling_position_density(const PhysicalParams& p, const std::vector<double>& grid,
                                                   const QuadSpec& spec = {}, int threads = 1) {
  auto values = parallel_map<double>(grid.size(), [&](std::size_t i) { return uehling_regular_scalar(p, grid[i], spec); },
                                     threads);
  return ScalarDistribution(uehling_delta_coefficient(p), grid, std::move(values));
}

inline MatrixDistribution uehling_position_density_matrix(const PhysicalParams& p, const std::vector<double>& grid,
                                                          const QuadSpec& spec = {}, int threads = 1) {
  auto values = parallel_map<Complex2x2>(
      grid.size(), [&](std::size_t i) { return uehling_regular_matrix(p, grid[i], spec); }, threads);
  return MatrixDistribution(0.5 * uehling_delta_coefficient(p), grid, std::move(values));
}

// --- all orders ----------------------------------------------------------

struct ChargeSummary {
  double N0;
  double Nreg;
  double Ntotal;
  double Zren;
};

// coefficient of delta(x) in the total density
inline double delta_charge(const PhysicalParams& p) {
  const double l = p.lambda();
  return (p.Z() / p.c()) / (pi * (1.0 + l * l));
}

// integral of the regular part; formula only, valid up to Z = 2c
inline double regular_charge(const PhysicalParams& p) { return -(2.0 / pi) * std::atan(p.lambda()); }

inline ChargeSummary charge_summary(const PhysicalParams& p) {
  p.require_subcritical("charge_summary");
  ChargeSummary s;
  s.N0 = delta_charge(p);
  s.Nreg = regular_charge(p);
  s.Ntotal = s.N0 + s.Nreg;
  s.Zren = p.Z() - s.Ntotal;
  return s;
}

inline Complex2x2 total_momentum_density_reg(const PhysicalParams& p, double k, const QuadSpec& spec = {}) {
  p.require_subcritical("total_momentum_density_reg");
  if (p.Z() == 0.0) return Complex2x2::Zero();
  const double mc2 = p.rest_energy();
  const double c = p.c();
  const double kc = k * c;
  const cplx I(0.0, 1.0);
  auto f = [&](double u) -> Complex2x2 {
    const auto [z1, z2] = z_factors(p, infinite_cutoff, u);
    const cplx up = mc2 + I * u;
    const cplx dn = mc2 - I * u;
    const double r2 = mc2 * mc2 + u * u;
    const Complex2x2 B1 = make_matrix(up * up, -0.5 * kc * up, 0.5 * kc * up, r2);
    const Complex2x2 B2 = make_matrix(r2, -0.5 * kc * dn, 0.5 * kc * dn, dn * dn);
    const double den = kappa_imag_axis(p, u) * (kc * kc + 4.0 * mc2 * mc2 + 4.0 * u * u);
    return Complex2x2((z1 * B1 + z2 * B2) / den);
  };
  const Complex2x2 J =
      detail::imaginary_axis_integral(p, 0.0, f, spec).value_or_throw("total_momentum_density_reg");
  return (-p.Z() / (std::sqrt(2.0 * pi) * c * c) / (2.0 * pi)) * J;
}

// regular part of the all-order density matrix, x != 0
inline Complex2x2 total_regular_matrix(const PhysicalParams& p, double x, const QuadSpec& spec = {}) {
  p.require_subcritical("total_regular_matrix");
  if (x == 0.0) throw DomainError("total_regular_matrix: off-diagonal entries diverge at x = 0");
  if (p.Z() == 0.0) return Complex2x2::Zero();
  auto f = [&](double u) -> Complex2x2 {
    return std::exp(-2.0 * kappa_imag_axis(p, u) * std::abs(x)) *
           detail::position_kernel(p, x, u, 1.0 / detail::dyson_denominator(p, u));
  };
  const Complex2x2 J = detail::imaginary_axis_integral(p, x, f, spec).value_or_throw("total_regular_matrix");
  return (-p.Z() / (4.0 * p.c() * p.c()) / (2.0 * pi)) * J;
}

// traced regular part; finite at x = 0
inline double total_regular_scalar(const PhysicalParams& p, double x, const QuadSpec& spec = {}) {
  p.require_subcritical("total_regular_scalar");
  if (p.Z() == 0.0) return 0.0;
  auto f = [&](double u) -> double {
    const Complex2x2 K = detail::position_kernel(p, x, u, 1.0 / detail::dyson_denominator(p, u));
    return std::exp(-2.0 * kappa_imag_axis(p, u) * std::abs(x)) * K.trace().real();
  };
  const double J = detail::imaginary_axis_integral(p, x, f, spec).value_or_throw("total_regular_scalar");
  return -p.Z() / (4.0 * p.c() * p.c()) / (2.0 * pi) * J;
}

inline ScalarDistribution total_position_density(const PhysicalParams& p, const std::vector<double>& grid,
                                                 const QuadSpec& spec = {}, int threads = 1) {
  p.require_subcritical("total_position_density");
  auto values = parallel_map<double>(grid.size(), [&](std::size_t i) { return total_regular_scalar(p, grid[i], spec); },
                                     threads);
  return ScalarDistribution(delta_charge(p), grid, std::move(values));
}

inline MatrixDistribution total_position_density_matrix(const PhysicalParams& p, const std::vector<double>& grid,
                                                        const QuadSpec& spec = {}, int threads = 1) {
  p.require_subcritical("total_position_density_matrix");
  auto values = parallel_map<Complex2x2>(
      grid.size(), [&](std::size_t i) { return total_regular_matrix(p, grid[i], spec); }, threads);
  return MatrixDistribution(0.5 * delta_charge(p), grid, std::move(values));
}

// renormalized: the delta part absorbs -Nreg so the total integrates to zero
inline ScalarDistribution renormalized_density(const PhysicalParams& p, const std::vector<double>& grid,
                                               const QuadSpec& spec = {}, int threads = 1) {
  p.require_subcritical("renormalized_density");
  auto values = parallel_map<double>(grid.size(), [&](std::size_t i) { return total_regular_scalar(p, grid[i], spec); },
                                     threads);
  return ScalarDistribution(-regular_charge(p), grid, std::move(values));
}

inline MatrixDistribution renormalized_density_matrix(const PhysicalParams& p, const std::vector<double>& grid,
                                                      const QuadSpec& spec = {}, int threads = 1) {
  p.require_subcritical("renormalized_density_matrix");
  auto values = parallel_map<Complex2x2>(
      grid.size(), [&](std::size_t i) { return total_regular_matrix(p, grid[i], spec); }, threads);
  return MatrixDistribution(-0.5 * regular_charge(p), grid, std::move(values));
}

/// Integral of the traced regular density over (0, X], X may be infinite.
inline double regular_charge_quadrature(const PhysicalParams& p, double X = infinite_cutoff,
                                        const QuadSpec& spec = {}) {
  p.require_subcritical("regular_charge_quadrature");
  if (p.Z() == 0.0) return 0.0;
  // beyond 40/(mc) the density is below e^{-80}
  const double cut = 40.0 / (p.m() * p.c());
  const double top = std::min(X, cut);
  auto f = [&](double x) { return total_regular_scalar(p, x, spec); };
  return 2.0 * integrate_from_origin(f, top, spec).value_or_throw("regular_charge_quadrature");
}

inline double uehling_regular_charge_quadrature(const PhysicalParams& p, const QuadSpec& spec = {}) {
  if (p.Z() == 0.0) return 0.0;
  const double cut = 40.0 / (p.m() * p.c());
  auto f = [&](double x) { return uehling_regular_scalar(p, x, spec); };
  return 2.0 * integrate_from_origin(f, cut, spec).value_or_throw("uehling_regular_charge_quadrature");
}

// charge seen inside [-d, d]
inline double observed_charge(const PhysicalParams& p, double d, const QuadSpec& spec = {}) {
  if (!(d > 0)) throw DomainError("observed_charge: d must be > 0");
  p.require_subcritical("observed_charge");
  if (p.Z() == 0.0) return 0.0;
  return p.Z() - delta_charge(p) - regular_charge_quadrature(p, d, spec);
}

}  // namespace qed1d

#endif  // QED1D_VACUUM_DENSITY_HPP
