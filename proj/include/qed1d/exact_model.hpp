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
#ifndef QED1D_EXACT_MODEL_HPP
#define QED1D_EXACT_MODEL_HPP

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "core.hpp"
#include "quadrature.hpp"

namespace qed1d {

struct BoundState {
  double energy;
  double kappa_b;
  double amp;
};

inline BoundState bound_state(const PhysicalParams& p) {
  if (!(p.Z() > 0)) throw DomainError("bound_state: Z = 0 has no bound state");
  const double l2 = p.lambda() * p.lambda();
  BoundState b;
  b.energy = p.rest_energy() * (1.0 - l2) / (1.0 + l2);
  b.kappa_b = p.m() * p.Z() / (1.0 + l2);
  b.amp = std::sqrt(b.kappa_b / (1.0 + l2));
  return b;
}

/// Spinor value with both one-sided limits; they coincide for x != 0.
struct OneSidedSpinor {
  Spinor left;
  Spinor right;
  Spinor average() const { return 0.5 * (left + right); }
};

inline OneSidedSpinor bound_wavefunction(const PhysicalParams& p, double x) {
  const BoundState b = bound_state(p);
  const double e = b.amp * std::exp(-b.kappa_b * std::abs(x));
  const cplx small(0.0, p.lambda() * e);
  OneSidedSpinor out;
  if (x > 0) {
    out.left = out.right = Spinor(e, small);
  } else if (x < 0) {
    out.left = out.right = Spinor(e, -small);
  } else {
    out.left = Spinor(e, -small);
    out.right = Spinor(e, small);
  }
  return out;
}

// mc^2 <psi|sigma_3 psi>, by quadrature
inline double virial_energy(const PhysicalParams& p, const QuadSpec& spec = {}) {
  const BoundState b = bound_state(p);
  auto density = [&](double x) {
    const Spinor s = bound_wavefunction(p, x).right;
    return std::norm(s(0)) - std::norm(s(1));
  };
  const auto r = integrate_half_line(density, 0.0, spec, 1.0 / b.kappa_b);
  return 2.0 * p.rest_energy() * r.value_or_throw("virial_energy");
}

// resolvent of the free operator at fixed momentum, delta(p - p') stripped
inline Complex2x2 gbar0(const PhysicalParams& p, double momentum, cplx omega) {
  const double mc2 = p.rest_energy();
  const double ep = dispersion(p, momentum);
  const cplx den = omega * omega - ep * ep;
  if (std::abs(den) == 0.0) throw DomainError("gbar0: omega on the free spectrum");
  const double cp = p.c() * momentum;
  return make_matrix(mc2 + omega, cp, cp, -mc2 + omega) / den;
}

// integral of gbar0 over [-Lambda, Lambda]
inline Complex2x2 gbarbar0(const PhysicalParams& p, double Lambda, cplx omega) {
  const cplx xi = xi_cutoff(p, Lambda, omega);
  const double f = pi / p.c();
  Complex2x2 out = Complex2x2::Zero();
  out(0, 0) = -f * xi * g_factor(p, omega);
  out(1, 1) = f * xi * g_factor(p, -omega);
  return out;
}

/// Frequency-dependent pieces of the Dyson solution shared by all (p, p').
class GreenEval {
 public:
  GreenEval(const PhysicalParams& p, cplx omega, double Lambda)
      : params_(p), omega_(omega), Lambda_(Lambda), gg0_(qed1d::gbarbar0(p, Lambda, omega)) {
    const cplx xi = xi_cutoff(p, Lambda, omega);
    const double t = p.Z() / (2.0 * p.c());
    const cplx d1 = 1.0 - t * g_factor(p, omega) * xi;
    const cplx d2 = 1.0 + t * g_factor(p, -omega) * xi;
    if (std::abs(d1) == 0.0 || std::abs(d2) == 0.0) {
      throw NumericalError("GreenEval: omega is an eigenvalue of the interacting operator");
    }
    z1_ = 1.0 / d1;
    z2_ = 1.0 / d2;
  }

  cplx omega() const { return omega_; }
  double cutoff() const { return Lambda_; }
  const Complex2x2& gbarbar0() const { return gg0_; }
  cplx z1() const { return z1_; }
  cplx z2() const { return z2_; }

  Complex2x2 delta_green(double q, double qp) const {
    const PhysicalParams& p = params_;
    if (p.Z() == 0.0) return Complex2x2::Zero();
    const double mc2 = p.rest_energy();
    const double c = p.c();
    const cplx w = omega_;
    const cplx up = mc2 + w;
    const cplx dn = -mc2 + w;
    const Complex2x2 A1 = make_matrix(up * up, c * qp * up, c * q * up, c * c * q * qp);
    const Complex2x2 A2 = make_matrix(c * c * q * qp, c * q * dn, c * qp * dn, dn * dn);
    const double e = dispersion(p, q);
    const double ep = dispersion(p, qp);
    const cplx den = (w * w - e * e) * (w * w - ep * ep);
    if (std::abs(den) == 0.0) throw DomainError("delta_green: omega on the free spectrum");
    return (-p.Z() / (2.0 * pi)) * (z1_ * A1 + z2_ * A2) / den;
  }

 private:
  PhysicalParams params_;
  cplx omega_;
  double Lambda_;
  Complex2x2 gg0_;
  cplx z1_;
  cplx z2_;
};

inline Complex2x2 delta_green(const PhysicalParams& p, double q, double qp, cplx omega,
                              double Lambda = infinite_cutoff) {
  if (omega.real() == 0.0) p.require_subcritical("delta_green");
  return GreenEval(p, omega, Lambda).delta_green(q, qp);
}

/// Plane-wave expansion on [-L/2, L/2]; index i holds momentum 2 pi (i - n_max)/L.
struct PlaneWaveState {
  double L;
  Eigen::VectorXcd large;
  Eigen::VectorXcd small;
};

/// Momentum-space representation (unitary convention, 1/sqrt(2 pi)) with
/// explicit one-sided values at the origin.
struct MomentumSpaceState {
  std::function<Spinor(double)> fourier;
  Spinor at_0plus;
  Spinor at_0minus;
  Spinor average_at_0() const { return 0.5 * (at_0plus + at_0minus); }
};

// <phi|D_0 psi> - Z phibar(0)^dagger psibar(0)
inline cplx matrix_element(const PhysicalParams& p, const PlaneWaveState& phi,
                           const PlaneWaveState& psi) {
  const Eigen::Index n = phi.large.size();
  if (phi.small.size() != n || psi.large.size() != n || psi.small.size() != n || phi.L != psi.L ||
      n % 2 == 0) {
    throw DomainError("matrix_element: incompatible plane-wave states");
  }
  const Eigen::Index nmax = (n - 1) / 2;
  const double mc2 = p.rest_energy();
  cplx kinetic = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ck = p.c() * 2.0 * pi * static_cast<double>(i - nmax) / phi.L;
    kinetic += mc2 * (std::conj(phi.large(i)) * psi.large(i) - std::conj(phi.small(i)) * psi.small(i));
    kinetic += ck * (std::conj(phi.large(i)) * psi.small(i) + std::conj(phi.small(i)) * psi.large(i));
  }
  // plane waves are continuous, so the averaged value is the value
  const double norm = 1.0 / std::sqrt(phi.L);
  const cplx phiL = phi.large.sum() * norm, phiS = phi.small.sum() * norm;
  const cplx psiL = psi.large.sum() * norm, psiS = psi.small.sum() * norm;
  return kinetic - p.Z() * (std::conj(phiL) * psiL + std::conj(phiS) * psiS);
}

inline cplx matrix_element(const PhysicalParams& p, const MomentumSpaceState& phi,
                           const MomentumSpaceState& psi, const QuadSpec& spec = {}) {
  const double mc2 = p.rest_energy();
  auto integrand = [&](double q) -> cplx {
    const Spinor a = phi.fourier(q);
    const Spinor b = psi.fourier(q);
    const double cq = p.c() * q;
    return mc2 * (std::conj(a(0)) * b(0) - std::conj(a(1)) * b(1)) +
           cq * (std::conj(a(0)) * b(1) + std::conj(a(1)) * b(0));
  };
  const cplx kinetic =
      integrate_real_line(integrand, spec, Decay::algebraic, p.m() * p.c()).value_or_throw("matrix_element");
  return kinetic - p.Z() * phi.average_at_0().dot(psi.average_at_0());
}

inline MomentumSpaceState bound_state_momentum(const PhysicalParams& p) {
  const BoundState b = bound_state(p);
  const double lam = p.lambda();
  MomentumSpaceState s;
  s.fourier = [b, lam](double q) {
    const double f = b.amp * std::sqrt(2.0 / pi) / (b.kappa_b * b.kappa_b + q * q);
    return Spinor(f * b.kappa_b, f * lam * q);
  };
  const OneSidedSpinor at0 = bound_wavefunction(p, 0.0);
  s.at_0plus = at0.right;
  s.at_0minus = at0.left;
  return s;
}

}  // namespace qed1d

#endif  // QED1D_EXACT_MODEL_HPP
