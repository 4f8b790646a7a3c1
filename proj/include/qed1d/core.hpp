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
#ifndef QED1D_CORE_HPP
#define QED1D_CORE_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace qed1d {

using cplx = std::complex<double>;
using Complex2x2 = Eigen::Matrix2cd;
using Spinor = Eigen::Vector2cd;

inline constexpr double pi = std::numbers::pi;

// Precondition violations (bad parameters, evaluation on a pole, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature or eigensolver failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Momentum cutoff sentinel for the Lambda -> infinity limit.
inline constexpr double infinite_cutoff = std::numeric_limits<double>::infinity();

inline bool is_infinite_cutoff(double Lambda) { return std::isinf(Lambda) && Lambda > 0; }

/// Mass, speed of light and nuclear charge in atomic units.
class PhysicalParams {
 public:
  PhysicalParams(double m, double c, double Z) : m_(m), c_(c), Z_(Z) {
    if (!(std::isfinite(m) && m > 0)) throw DomainError("mass must be finite and > 0");
    if (!(std::isfinite(c) && c > 0)) throw DomainError("speed of light must be finite and > 0");
    if (!(std::isfinite(Z) && Z >= 0)) throw DomainError("nuclear charge must be finite and >= 0");
  }

  double m() const { return m_; }
  double c() const { return c_; }
  double Z() const { return Z_; }

  double rest_energy() const { return m_ * c_ * c_; }
  // Z/2c
  double lambda() const { return Z_ / (2.0 * c_); }
  bool subcritical() const { return Z_ < 2.0 * c_; }

  // same m and c, different charge
  PhysicalParams with_charge(double Z) const { return PhysicalParams(m_, c_, Z); }

  void require_subcritical(const char* what) const {
    if (!subcritical()) {
      throw DomainError(std::string(what) + ": requires Z < 2c");
    }
  }

 private:
  double m_;
  double c_;
  double Z_;
};

namespace pauli {
inline Complex2x2 identity() { return Complex2x2::Identity(); }
inline Complex2x2 sigma1() {
  Complex2x2 s;
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}
inline Complex2x2 sigma2() {
  Complex2x2 s;
  s << 0.0, cplx(0, -1), cplx(0, 1), 0.0;
  return s;
}
inline Complex2x2 sigma3() {
  Complex2x2 s;
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}
}  // namespace pauli

inline Complex2x2 make_matrix(cplx a11, cplx a12, cplx a21, cplx a22) {
  Complex2x2 a;
  a << a11, a12, a21, a22;
  return a;
}

inline double dispersion(const PhysicalParams& p, double momentum) {
  const double mc2 = p.rest_energy();
  return std::hypot(momentum * p.c(), mc2);
}

// sqrt((mc^2 + w)/(mc^2 - w)), principal branch
inline cplx g_factor(const PhysicalParams& p, cplx omega) {
  const double mc2 = p.rest_energy();
  if (omega == cplx(mc2, 0.0) || omega == cplx(-mc2, 0.0)) {
    throw DomainError("g_factor: omega = +-mc^2 is not an admissible evaluation point");
  }
  return std::sqrt((mc2 + omega) / (mc2 - omega));
}

// On the imaginary axis g(iu) is a pure phase, exp(i atan(u/mc^2)).
inline cplx g_imag_axis(const PhysicalParams& p, double u) {
  return std::polar(1.0, std::atan2(u, p.rest_energy()));
}

inline cplx xi_cutoff(const PhysicalParams& p, double Lambda, cplx omega) {
  if (!(Lambda > 0)) throw DomainError("xi_cutoff: Lambda must be > 0");
  const double mc2 = p.rest_energy();
  if (omega == cplx(mc2, 0.0) || omega == cplx(-mc2, 0.0)) {
    throw DomainError("xi_cutoff: branch point omega = +-mc^2");
  }
  if (is_infinite_cutoff(Lambda)) return 1.0;
  const cplx root = std::sqrt(mc2 * mc2 - omega * omega);
  return (2.0 / pi) * std::atan(p.c() * Lambda / root);
}

// z1(iu), z2(iu) on the gamma = 0 contour
inline std::pair<cplx, cplx> z_factors(const PhysicalParams& p, double Lambda, double u) {
  p.require_subcritical("z_factors");
  if (p.Z() == 0.0) return {1.0, 1.0};
  const cplx xi = xi_cutoff(p, Lambda, cplx(0.0, u));
  const cplx g = g_imag_axis(p, u);
  const cplx gm = g_imag_axis(p, -u);
  const double t = p.Z() / (2.0 * p.c());
  const cplx d1 = 1.0 - t * g * xi;
  const cplx d2 = 1.0 + t * gm * xi;
  if (std::abs(d1) == 0.0 || std::abs(d2) == 0.0) {
    throw NumericalError("z_factors: contour crosses an eigenvalue");
  }
  return {1.0 / d1, 1.0 / d2};
}

// kappa(iu) = sqrt(m^2c^4 + u^2)/c
inline double kappa_imag_axis(const PhysicalParams& p, double u) {
  return std::hypot(p.rest_energy(), u) / p.c();
}

}  // namespace qed1d

#endif  // QED1D_CORE_HPP
