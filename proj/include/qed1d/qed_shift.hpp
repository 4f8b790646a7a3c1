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
#ifndef QED1D_QED_SHIFT_HPP
#define QED1D_QED_SHIFT_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "distribution.hpp"
#include "exact_model.hpp"
#include "planewave.hpp"
#include "quadrature.hpp"
#include "vacuum_density.hpp"

namespace qed1d {

struct ShiftBreakdown {
  double dc = 0.0;
  double xc = 0.0;
  double db = 0.0;
  double xb = 0.0;
  double total() const { return dc + xc + db + xb; }
};

/// The four bilinear pieces evaluated on one pair of 2x2 matrices E (electron)
/// and V (vacuum polarization); the c factors of the currents cancel.
struct Contraction {
  cplx dc, xc, db, xb;

  Contraction& operator+=(const Contraction& o) {
    dc += o.dc;
    xc += o.xc;
    db += o.db;
    xb += o.xb;
    return *this;
  }
  Contraction operator*(double s) const { return {dc * s, xc * s, db * s, xb * s}; }
  ShiftBreakdown real() const { return {dc.real(), xc.real(), db.real(), xb.real()}; }
};

// tr[s1 A s1 B] = a22 b11 + a11 b22 + a21 b21 + a12 b12
inline cplx sigma1_sandwich_trace(const Complex2x2& A, const Complex2x2& B) {
  return A(1, 1) * B(0, 0) + A(0, 0) * B(1, 1) + A(1, 0) * B(1, 0) + A(0, 1) * B(0, 1);
}

inline Contraction contract(const Complex2x2& E, const Complex2x2& V) {
  Contraction c;
  c.dc = E.trace() * V.trace();
  c.xc = -(E * V).trace();
  // tr(s1 A) = a12 + a21
  c.db = -(E(0, 1) + E(1, 0)) * (V(0, 1) + V(1, 0));
  c.xb = sigma1_sandwich_trace(E, V);
  return c;
}

enum class SourceTag { exact, basis_raw, basis_improved };
enum class VpVariant { raw, regularized, exact, uehling };

inline std::string to_string(SourceTag t) {
  switch (t) {
    case SourceTag::exact: return "exact";
    case SourceTag::basis_raw: return "basis-raw";
    case SourceTag::basis_improved: return "basis-improved";
  }
  return "?";
}

inline std::string to_string(VpVariant v) {
  switch (v) {
    case VpVariant::raw: return "raw";
    case VpVariant::regularized: return "regularized";
    case VpVariant::exact: return "exact";
    case VpVariant::uehling: return "uehling";
  }
  return "?";
}

// --- grid-based corrections ---------------------------------------------

namespace detail {
inline void require_same_grid(const std::vector<double>& a, const std::vector<double>& b) {
  if (a != b) throw DomainError("qed shift: electron and vacuum-polarization grids differ");
}
}  // namespace detail

/// Electron density on a grid with the matrix used for the delta parts.
struct ElectronSamples {
  std::vector<double> grid;
  std::vector<Complex2x2> values;
  Complex2x2 at_zero;
};

inline ElectronSamples exact_electron_samples(const PhysicalParams& p, const std::vector<double>& grid) {
  ElectronSamples e;
  e.grid = grid;
  for (double x : grid) {
    const Spinor s = bound_wavefunction(p, x).right;
    e.values.push_back(s * s.adjoint());
  }
  // one-sided limits averaged entrywise; the odd off-diagonals drop out
  const OneSidedSpinor z = bound_wavefunction(p, 0.0);
  e.at_zero = 0.5 * (z.left * z.left.adjoint() + z.right * z.right.adjoint());
  return e;
}

inline ElectronSamples basis_electron_samples(const ElectronDensityGrid& g, bool improved) {
  return ElectronSamples{g.grid, g.values, improved ? g.improved_at_zero : g.raw_at_zero};
}

inline double dc_correction(const ElectronSamples& el, const ScalarDistribution& vp) {
  detail::require_same_grid(el.grid, vp.grid());
  std::vector<double> prod(el.grid.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = el.values[i].trace().real() * vp.values()[i];
  return vp.delta_coeff() * el.at_zero.trace().real() + composite_grid_integral(el.grid, prod);
}

namespace detail {
template <class Pick>
double grid_matrix_correction(const ElectronSamples& el, const MatrixDistribution& vp, Pick pick) {
  require_same_grid(el.grid, vp.grid());
  std::vector<double> prod(el.grid.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = pick(contract(el.values[i], vp.values()[i])).real();
  const double delta = pick(contract(el.at_zero, vp.delta_part())).real();
  return delta + composite_grid_integral(el.grid, prod);
}
}  // namespace detail

inline double xc_correction(const ElectronSamples& el, const MatrixDistribution& vp) {
  return detail::grid_matrix_correction(el, vp, [](const Contraction& c) { return c.xc; });
}
inline double db_correction(const ElectronSamples& el, const MatrixDistribution& vp) {
  return detail::grid_matrix_correction(el, vp, [](const Contraction& c) { return c.db; });
}
inline double xb_correction(const ElectronSamples& el, const MatrixDistribution& vp) {
  return detail::grid_matrix_correction(el, vp, [](const Contraction& c) { return c.xb; });
}

// --- assembled shifts -----------------------------------------------------

/// Everything total_shift needs about the electron side.
struct DensitySource {
  SourceTag tag;
  PhysicalParams params;
  std::optional<BasisBoundState> bound;  // basis sources only
  Complex2x2 at_zero;                    // matrix used against delta parts

  static DensitySource exact(const PhysicalParams& p) {
    const OneSidedSpinor z = bound_wavefunction(p, 0.0);
    const Complex2x2 avg = 0.5 * (z.left * z.left.adjoint() + z.right * z.right.adjoint());
    return DensitySource{SourceTag::exact, p, std::nullopt, avg};
  }

  static DensitySource basis(const PhysicalParams& p, const BasisSpec& b, bool improved) {
    BasisBoundState bs = basis_bound_state(p, b);
    Complex2x2 at0 = bs.density(0.0);
    if (improved) at0(1, 1) = std::max(at0(1, 1).real(), improved_small_component(bs));
    return DensitySource{improved ? SourceTag::basis_improved : SourceTag::basis_raw, p, std::move(bs), at0};
  }

  bool is_exact() const { return tag == SourceTag::exact; }

  Complex2x2 at(double x) const {
    if (is_exact()) {
      const Spinor s = bound_wavefunction(params, x).right;
      return s * s.adjoint();
    }
    return bound->density(x);
  }

  // box Fourier coefficients int_{-L/2}^{L/2} n(x) e^{-i k_j x} dx
  Complex2x2 box_fourier(const BasisSpec& b, int j) const {
    if (is_exact()) {
      const BoundState st = bound_state(params);
      const double k = b.k(j);
      const double kap = st.kappa_b;
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const double tail = 1.0 - sign * std::exp(-kap * b.L());
      const double den = 4.0 * kap * kap + k * k;
      const double even = 4.0 * kap * tail / den;
      const cplx odd(0.0, -2.0 * k * tail / den);
      const double a2 = st.amp * st.amp;
      const double lam = params.lambda();
      const cplx I(0.0, 1.0);
      return a2 * make_matrix(even, -I * lam * odd, I * lam * odd, lam * lam * even);
    }
    if (bound->basis.L() != b.L() || bound->basis.nmax() != b.nmax()) {
      throw DomainError("box_fourier: electron basis differs from the vacuum-polarization basis");
    }
    const int N = b.size();
    const Eigen::VectorXd& c = bound->coeffs;
    double s[2][2] = {{0, 0}, {0, 0}};
    const int lo = std::max(0, -j), hi = std::min(N, N - j);
    for (int n = lo; n < hi; ++n) {
      for (int a = 0; a < 2; ++a) {
        for (int d = 0; d < 2; ++d) s[a][d] += c(a * N + n + j) * c(d * N + n);
      }
    }
    return make_matrix(s[0][0], s[0][1], s[1][0], s[1][1]);
  }
};

namespace detail {

// regular part against a basis vp density given by its Fourier coefficients
inline Contraction fourier_pairing(const DensitySource& el, const MomentumDensity& md) {
  const BasisSpec& b = md.basis();
  const double pref = std::sqrt(2.0 * pi) / b.L();
  Contraction acc{0.0, 0.0, 0.0, 0.0};
  for (int j = -md.jmax(); j <= md.jmax(); ++j) {
    // int n_el(x) v_j e^{i k_j x} dx = v_j hat E(-j)
    acc += contract(el.box_fourier(b, -j), pref * md.matrix(j));
  }
  return acc;
}

// regular part against an exact vp density, pointwise quadrature
template <class VpReg>
Contraction pointwise_pairing(const DensitySource& el, VpReg&& vp_reg, std::optional<BasisSpec> box,
                              const QuadSpec& spec) {
  const PhysicalParams& p = el.params;
  auto integrand = [&](double x) -> Eigen::Matrix<cplx, 4, 1> {
    Eigen::Matrix<cplx, 4, 1> v;
    const Contraction c1 = contract(el.at(x), vp_reg(x));
    const Contraction c2 = contract(el.at(-x), vp_reg(-x));
    v << c1.dc + c2.dc, c1.xc + c2.xc, c1.db + c2.db, c1.xb + c2.xb;
    return v;
  };
  double X;
  if (box) {
    X = 0.5 * box->L();
  } else {
    const double rate = std::min(2.0 * p.m() * p.c(), 2.0 * bound_state(p).kappa_b);
    X = 90.0 / rate;
  }
  const auto r = integrate_from_origin(integrand, X, spec);
  const auto v = r.value_or_throw("qed shift pairing");
  return Contraction{v(0), v(1), v(2), v(3)};
}

}  // namespace detail

/// First-order shift for a pairing of an electron source with a vacuum
/// polarization variant. Basis variants need the basis; a basis electron
/// source carries its own.
inline ShiftBreakdown total_shift(const DensitySource& el, VpVariant vp, std::optional<BasisSpec> basis = std::nullopt,
                                  const QuadSpec& spec = {}) {
  const PhysicalParams& p = el.params;
  p.require_subcritical("total_shift");
  if (el.tag == SourceTag::basis_improved && vp == VpVariant::raw) {
    throw DomainError("total_shift: the improved density cannot be paired with the raw basis density");
  }
  if (!el.is_exact()) {
    if (basis && (basis->L() != el.bound->basis.L() || basis->nmax() != el.bound->basis.nmax())) {
      throw DomainError("total_shift: electron and vacuum-polarization bases differ");
    }
    basis = el.bound->basis;
  }
  if (p.Z() == 0.0) return {};

  Contraction acc{0.0, 0.0, 0.0, 0.0};
  Complex2x2 delta = Complex2x2::Zero();
  switch (vp) {
    case VpVariant::raw:
    case VpVariant::regularized: {
      if (!basis) throw DomainError("total_shift: basis vacuum polarization needs a basis");
      const MomentumDensity md = vp_momentum_density(p, *basis);
      if (vp == VpVariant::raw) {
        acc = detail::fourier_pairing(el, md);
      } else {
        const RegularizedDensity r = regularize(md);
        acc = detail::fourier_pairing(el, r.density);
        delta = (-0.5 * r.n_reg) * Complex2x2::Identity();
      }
      break;
    }
    case VpVariant::exact: {
      auto reg = [&](double x) { return total_regular_matrix(p, x, spec); };
      acc = detail::pointwise_pairing(el, reg, el.is_exact() ? std::nullopt : basis, spec);
      delta = (-0.5 * regular_charge(p)) * Complex2x2::Identity();
      break;
    }
    case VpVariant::uehling: {
      auto reg = [&](double x) { return uehling_regular_matrix(p, x, spec); };
      acc = detail::pointwise_pairing(el, reg, el.is_exact() ? std::nullopt : basis, spec);
      delta = (0.5 * uehling_delta_coefficient(p)) * Complex2x2::Identity();
      break;
    }
  }
  acc += contract(el.at_zero, delta);
  return acc.real();
}

}  // namespace qed1d

#endif  // QED1D_QED_SHIFT_HPP
