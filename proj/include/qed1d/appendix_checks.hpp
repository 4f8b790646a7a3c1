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
#ifndef QED1D_APPENDIX_CHECKS_HPP
#define QED1D_APPENDIX_CHECKS_HPP

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "core.hpp"
#include "exact_model.hpp"
#include "quadrature.hpp"

namespace qed1d {

// --- mollifier product ----------------------------------------------------

enum class Mollifier { bump, bspline };

namespace detail {

inline double bump_raw(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

inline double bump_norm() {
  static const double n = integrate(bump_raw, -1.0, 1.0, QuadSpec{1e-15, 1e-14, 30}).value;
  return n;
}

// cubic B-spline on [-2, 2], unit integral
inline double bspline4(double t) {
  t = std::abs(t);
  if (t < 1.0) return (4.0 - 6.0 * t * t + 3.0 * t * t * t) / 6.0;
  if (t < 2.0) return (2.0 - t) * (2.0 - t) * (2.0 - t) / 6.0;
  return 0.0;
}

// integral of bspline4 from -2 to t
inline double bspline4_cdf(double t) {
  if (t <= -2.0) return 0.0;
  if (t >= 2.0) return 1.0;
  auto right = [](double s) {  // integral from 0 to s, s in [0, 2]
    if (s <= 1.0) return (4.0 * s - 2.0 * s * s * s + 0.75 * s * s * s * s) / 6.0;
    const double tail = (2.0 - s) * (2.0 - s) * (2.0 - s) * (2.0 - s) / 24.0;
    return 0.5 - tail;
  };
  return t >= 0.0 ? 0.5 + right(t) : 0.5 - right(-t);
}

}  // namespace detail

/// Normalized mollifier supported on [-1, 1].
inline double mollifier_density(Mollifier kind, double x) {
  if (kind == Mollifier::bump) return detail::bump_raw(x) / detail::bump_norm();
  return 2.0 * detail::bspline4(2.0 * x);
}

inline double mollifier_cdf(Mollifier kind, double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (kind == Mollifier::bspline) return detail::bspline4_cdf(2.0 * x);
  auto f = [](double y) { return detail::bump_raw(y); };
  return integrate(f, -1.0, x, QuadSpec{1e-15, 1e-14, 30}).value / detail::bump_norm();
}

struct MollifierEstimate {
  std::vector<double> eps;
  std::vector<double> values;
  double extrapolated;
};

/// int H_eps(x) delta_eps(x) f(x) dx for each eps, with H_eps the integrated
/// mollifier, and a polynomial (Neville) extrapolation to eps = 0.
inline MollifierEstimate mollifier_half_delta(const std::function<double(double)>& f, Mollifier kind,
                                              std::vector<double> eps = {1e-1, 1e-2, 1e-3}) {
  if (eps.size() < 2) throw DomainError("mollifier_half_delta: need at least two eps values");
  MollifierEstimate out;
  out.eps = eps;
  const QuadSpec spec{1e-13, 1e-12, 25};
  for (double e : eps) {
    if (!(e > 0)) throw DomainError("mollifier_half_delta: eps must be > 0");
    // x = e y
    auto g = [&](double y) { return mollifier_density(kind, y) * mollifier_cdf(kind, y) * f(e * y); };
    out.values.push_back(integrate(g, -1.0, 1.0, spec, 4).value_or_throw("mollifier_half_delta"));
  }
  // Neville: polynomial in eps evaluated at eps = 0
  std::vector<double> t = out.values;
  for (std::size_t level = 1; level < t.size(); ++level) {
    for (std::size_t i = t.size() - 1; i >= level; --i) {
      const double r = eps[i - level] / eps[i];
      t[i] = (r * t[i] - t[i - 1]) / (r - 1.0);
    }
  }
  out.extrapolated = t.back();
  return out;
}

// --- asymmetric cutoff ----------------------------------------------------

struct AsymmetricCutoff {
  double r;
  double a;
  Complex2x2 M;
  cplx w;
  double A, B, C, D;
};

inline double cutoff_parameter(double r) {
  if (!(r > 0)) throw DomainError("asymmetric_cutoff: r must be > 0");
  return -std::log(r) / pi;
}

inline AsymmetricCutoff asymmetric_cutoff(const PhysicalParams& p, double r) {
  AsymmetricCutoff out;
  out.r = r;
  out.a = cutoff_parameter(r);
  const double a = out.a;
  const double l = p.lambda();
  const double l2 = l * l;
  const cplx I(0.0, 1.0);
  const cplx den = 1.0 - (a - I) * (a - I) * l2;
  const double diag = 1.0 - (a * a + 1.0) * l2;
  out.M = make_matrix(diag, 2.0 * I * l, 2.0 * I * l, diag) / den;
  out.w = (1.0 - (a + I) * (a + I) * l2) / den;
  const double P = 1.0 - 2.0 * (a * a - 1.0) * l2 + (a * a + 1.0) * (a * a + 1.0) * l2 * l2;
  out.A = out.D = diag / std::sqrt(P);
  out.B = 2.0 * l / std::sqrt(P);
  out.C = -out.B;
  return out;
}

// --- singular kernel ------------------------------------------------------

inline double singular_kernel(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return 0.5 * std::log(4.0 / (1.0 - x * x)) - x * std::atanh(x);
}

inline double singular_kernel_integral(const QuadSpec& spec = {1e-13, 1e-13, 40}) {
  // log endpoint behavior at +-1; mirrored map from the origin handles it
  auto f = [](double s) { return singular_kernel(1.0 - s); };
  return 2.0 * integrate_from_origin(f, 1.0, spec).value_or_throw("singular_kernel_integral");
}

/// eps times the square-averaged singular part at x = 0, divided by f(0);
/// tends to Z/(pi c) as eps -> 0.
inline double averaged_delta_coefficient(const PhysicalParams& p, double eps, const QuadSpec& spec = {1e-13, 1e-12, 30}) {
  if (!(eps > 0)) throw DomainError("averaged_delta_coefficient: eps must be > 0");
  const double mc = p.m() * p.c();
  // opposite-sign quadrants: 2 int_0^eps int_0^eps (mZ/pi) K1(mc(a+b)) da db
  auto g = [&](double s) {
    if (s == 0.0) return p.Z() / (pi * p.c());
    return p.m() * p.Z() / pi * boost::math::cyl_bessel_k(1, mc * s) * std::min(s, 2.0 * eps - s);
  };
  const double I = integrate(g, 0.0, 2.0 * eps, spec, 2).value_or_throw("averaged_delta_coefficient");
  const double n_sing = 2.0 * I / (4.0 * eps * eps);
  return eps * n_sing / singular_kernel(0.0);
}

// --- truncated-energy model ----------------------------------------------

struct ConvergenceModel {
  double energy;           // eps~(L, Lambda)
  double energy_infinite;  // eps~(L, infinity)
  double asymptotic_term;  // leading 1/Lambda term
  double norm;             // sum |c^L|^2 + sum |c^S|^2
  int nmax;
};

inline double model_large_coefficient(const PhysicalParams& p, double L, int n) {
  const BoundState b = bound_state(p);
  const double kap = b.kappa_b;
  const double half = std::exp(-kap * L / 2.0);
  if (n == 0) return 2.0 * b.amp / (kap * std::sqrt(L)) * (1.0 - half);
  const double k = 2.0 * pi * n / L;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return 2.0 * std::sqrt(2.0) * b.amp * kap / std::sqrt(L) * (1.0 - sign * half) / (kap * kap + k * k);
}

inline double model_small_coefficient(const PhysicalParams& p, double L, int n) {
  if (n == 0) return 0.0;
  const BoundState b = bound_state(p);
  const double k = 2.0 * pi * n / L;
  return -(p.Z() * k) / (2.0 * p.c() * b.kappa_b) * model_large_coefficient(p, L, n);
}

inline double model_energy_partial(const PhysicalParams& p, double L, int nmax) {
  double s = 0.0;
  // summed from the small terms up to limit round-off
  for (int n = nmax; n >= 0; --n) {
    const double cl = model_large_coefficient(p, L, n);
    const double cs = model_small_coefficient(p, L, n);
    s += cl * cl - cs * cs;
  }
  return p.rest_energy() * s;
}

inline ConvergenceModel truncated_energy_model(const PhysicalParams& p, double L, double Lambda) {
  if (!(L > 0) || !(Lambda > 0)) throw DomainError("truncated_energy_model: L and Lambda must be > 0");
  const BoundState b = bound_state(p);
  ConvergenceModel m;
  m.nmax = static_cast<int>(std::floor(L * Lambda / (2.0 * pi) * (1.0 + 1e-12)));
  m.energy = model_energy_partial(p, L, m.nmax);
  double norm = 0.0;
  for (int n = m.nmax; n >= 0; --n) {
    const double cl = model_large_coefficient(p, L, n);
    const double cs = model_small_coefficient(p, L, n);
    norm += cl * cl + cs * cs;
  }
  m.norm = norm;
  const double eL = std::exp(-b.kappa_b * L);
  m.energy_infinite = (1.0 - eL) * b.energy;
  m.asymptotic_term = p.rest_energy() * b.amp * b.amp * p.Z() * p.Z() * (1.0 + eL) / (pi * p.c() * p.c() * Lambda);
  return m;
}

/// Limit of the partial sums by Richardson extrapolation in 1/n_max.
inline double model_energy_series_limit(const PhysicalParams& p, double L, int nmax = 1 << 16) {
  const double s1 = model_energy_partial(p, L, nmax);
  const double s2 = model_energy_partial(p, L, 2 * nmax);
  const double s4 = model_energy_partial(p, L, 4 * nmax);
  const double r1 = 2.0 * s2 - s1;
  const double r2 = 2.0 * s4 - s2;
  return (4.0 * r2 - r1) / 3.0;
}

// --- slope fits -----------------------------------------------------------

enum class FitAxes { loglog, semilog };

/// Least-squares slope of log(error) against log(x) or x.
inline double convergence_slope_fit(const std::vector<double>& x, const std::vector<double>& err, FitAxes axes) {
  if (x.size() != err.size()) throw DomainError("convergence_slope_fit: size mismatch");
  if (x.size() < 4) throw DomainError("convergence_slope_fit: need at least 4 points");
  std::vector<double> X, Y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(err[i] > 0) || !std::isfinite(err[i])) throw DomainError("convergence_slope_fit: errors must be > 0");
    if (axes == FitAxes::loglog && !(x[i] > 0)) throw DomainError("convergence_slope_fit: abscissae must be > 0");
    X.push_back(axes == FitAxes::loglog ? std::log(x[i]) : x[i]);
    Y.push_back(std::log(err[i]));
  }
  const double n = static_cast<double>(X.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("convergence_slope_fit: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace qed1d

#endif  // QED1D_APPENDIX_CHECKS_HPP
