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
#ifndef QED1D_PLANEWAVE_HPP
#define QED1D_PLANEWAVE_HPP

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "core.hpp"
#include "distribution.hpp"

namespace qed1d {

/// Box length L, UV cutoff Lambda and n_max = floor(L Lambda / 2 pi).
class BasisSpec {
 public:
  BasisSpec(double L, double Lambda) : L_(L), Lambda_(Lambda) {
    if (!(std::isfinite(L) && L > 0)) throw DomainError("BasisSpec: L must be finite and > 0");
    if (!(std::isfinite(Lambda) && Lambda > 0)) throw DomainError("BasisSpec: Lambda must be finite and > 0");
    const double x = L * Lambda / (2.0 * pi);
    // absorb round-off when L Lambda / 2 pi is meant to be an integer
    nmax_ = static_cast<int>(std::floor(x * (1.0 + 1e-12)));
    if (nmax_ < 1) throw DomainError("BasisSpec: L Lambda / 2 pi must be >= 1");
  }

  double L() const { return L_; }
  double Lambda() const { return Lambda_; }
  int nmax() const { return nmax_; }
  // number of plane waves per component
  int size() const { return 2 * nmax_ + 1; }
  double k(int n) const { return 2.0 * pi * n / L_; }

 private:
  double L_;
  double Lambda_;
  int nmax_;
};

inline Eigen::MatrixXd assemble_hamiltonian(const PhysicalParams& p, const BasisSpec& b) {
  const int N = b.size();
  const double mc2 = p.rest_energy();
  const double v = -p.Z() / b.L();
  Eigen::MatrixXd H(2 * N, 2 * N);
  H.setConstant(0.0);
  H.topLeftCorner(N, N).setConstant(v);
  H.bottomRightCorner(N, N).setConstant(v);
  for (int i = 0; i < N; ++i) {
    const double ck = p.c() * b.k(i - b.nmax());
    H(i, i) += mc2;
    H(N + i, N + i) -= mc2;
    H(i, N + i) = ck;
    H(N + i, i) = ck;
  }
  return H;
}

struct SpectralSolution {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // columns, large block on top
  std::vector<int> ns_indices;
  std::vector<int> ps_indices;

  int half() const { return static_cast<int>(vectors.rows() / 2); }
};

inline SpectralSolution diagonalize(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols() || H.rows() % 2 != 0) throw DomainError("diagonalize: need an even square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver did not converge");
  SpectralSolution s;
  s.energies = es.eigenvalues();
  s.vectors = es.eigenvectors();
  for (int i = 0; i < s.energies.size(); ++i) {
    if (s.energies(i) < 0.0) {
      s.ns_indices.push_back(i);
    } else {
      s.ps_indices.push_back(i);
    }
  }
  return s;
}

inline SpectralSolution solve(const PhysicalParams& p, const BasisSpec& b) {
  return diagonalize(assemble_hamiltonian(p, b));
}

/// The gap eigenpair of a plane-wave Hamiltonian.
struct BasisBoundState {
  BasisSpec basis;
  double energy;
  Eigen::VectorXd coeffs;  // large then small, each of length 2 n_max + 1

  Eigen::VectorXd large() const { return coeffs.head(basis.size()); }
  Eigen::VectorXd small() const { return coeffs.tail(basis.size()); }

  Spinor psi(double x) const {
    const int N = basis.size();
    cplx a = 0.0, b = 0.0;
    for (int i = 0; i < N; ++i) {
      const cplx e = std::polar(1.0, basis.k(i - basis.nmax()) * x);
      a += coeffs(i) * e;
      b += coeffs(N + i) * e;
    }
    const double norm = 1.0 / std::sqrt(basis.L());
    return Spinor(a * norm, b * norm);
  }

  Complex2x2 density(double x) const {
    const Spinor s = psi(x);
    return s * s.adjoint();
  }
};

inline int count_gap_eigenvalues(const SpectralSolution& s, const PhysicalParams& p) {
  const double mc2 = p.rest_energy();
  int n = 0;
  for (int i = 0; i < s.energies.size(); ++i) {
    if (s.energies(i) > -mc2 && s.energies(i) < mc2) ++n;
  }
  return n;
}

inline BasisBoundState basis_bound_state(const SpectralSolution& s, const PhysicalParams& p, const BasisSpec& b) {
  if (!(p.Z() > 0)) throw DomainError("basis_bound_state: Z = 0 has no bound state");
  p.require_subcritical("basis_bound_state");
  if (s.vectors.rows() != 2 * b.size()) throw DomainError("basis_bound_state: basis does not match the solution");
  const double mc2 = p.rest_energy();
  std::optional<int> found;
  for (int i = 0; i < s.energies.size(); ++i) {
    if (s.energies(i) > -mc2 && s.energies(i) < mc2) {
      if (found) throw NumericalError("basis_bound_state: more than one eigenvalue in the gap");
      found = i;
    }
  }
  if (!found) throw NumericalError("basis_bound_state: no eigenvalue in the gap");
  Eigen::VectorXd v = s.vectors.col(*found);
  // fix the overall sign so that the large component is positive at x = 0
  if (v.head(b.size()).sum() < 0) v = -v;
  return BasisBoundState{b, s.energies(*found), v};
}

inline BasisBoundState basis_bound_state(const PhysicalParams& p, const BasisSpec& b) {
  return basis_bound_state(solve(p, b), p, b);
}

/// Fourier coefficients hat n(k_j), j = -2 n_max .. 2 n_max, of a basis
/// density, unitary convention. Zero outside the stored range.
class MomentumDensity {
 public:
  MomentumDensity(BasisSpec basis, std::vector<Complex2x2> coeffs) : basis_(basis), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != 4 * basis_.nmax() + 1) {
      throw DomainError("MomentumDensity: expected 4 n_max + 1 coefficients");
    }
  }

  const BasisSpec& basis() const { return basis_; }
  int jmax() const { return 2 * basis_.nmax(); }
  double k(int j) const { return basis_.k(j); }

  Complex2x2 matrix(int j) const {
    if (std::abs(j) > jmax()) return Complex2x2::Zero();
    return coeffs_[j + jmax()];
  }
  cplx trace(int j) const { return matrix(j).trace(); }

  // value at an arbitrary grid momentum; exactly zero past the stored range
  Complex2x2 at(double kk) const {
    const double jf = kk * basis_.L() / (2.0 * pi);
    const long j = std::lround(jf);
    if (std::abs(jf - static_cast<double>(j)) > 1e-9 * std::max(1.0, std::abs(jf))) {
      throw DomainError("MomentumDensity::at: k is not on the grid 2 pi j / L");
    }
    if (std::labs(j) > jmax()) return Complex2x2::Zero();
    return matrix(static_cast<int>(j));
  }

  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (c.cwiseAbs().maxCoeff() != 0.0) return false;
    }
    return true;
  }

  const std::vector<Complex2x2>& coefficients() const { return coeffs_; }

 private:
  BasisSpec basis_;
  std::vector<Complex2x2> coeffs_;
};

namespace detail {

// sum over negative-energy states of c c^T
inline Eigen::MatrixXd negative_projector(const SpectralSolution& s) {
  const Eigen::Index n = s.vectors.rows();
  Eigen::MatrixXd C(n, static_cast<Eigen::Index>(s.ns_indices.size()));
  for (std::size_t i = 0; i < s.ns_indices.size(); ++i) C.col(static_cast<Eigen::Index>(i)) = s.vectors.col(s.ns_indices[i]);
  Eigen::MatrixXd P(n, n);
  P.noalias() = C * C.transpose();
  return P;
}

// hat n_ab(k_j) = (1/sqrt(2 pi)) sum_n P_ab[n + j, n]
inline std::vector<Complex2x2> convolve_projector(const Eigen::MatrixXd& P, int nmax) {
  const int N = 2 * nmax + 1;
  const double norm = 1.0 / std::sqrt(2.0 * pi);
  std::vector<Complex2x2> out(static_cast<std::size_t>(4 * nmax + 1));
  for (int j = -2 * nmax; j <= 2 * nmax; ++j) {
    double s[2][2] = {{0, 0}, {0, 0}};
    const int lo = std::max(0, -j);
    const int hi = std::min(N, N - j);
    for (int n = lo; n < hi; ++n) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) s[a][b] += P(a * N + n + j, b * N + n);
      }
    }
    out[static_cast<std::size_t>(j + 2 * nmax)] = norm * make_matrix(s[0][0], s[0][1], s[1][0], s[1][1]);
  }
  return out;
}

}  // namespace detail

inline MomentumDensity vp_momentum_density(const PhysicalParams& p, const BasisSpec& b) {
  p.require_subcritical("vp_momentum_density");
  const int N = b.size();
  if (p.Z() == 0.0) return MomentumDensity(b, std::vector<Complex2x2>(static_cast<std::size_t>(2 * N - 1), Complex2x2::Zero()));
  const SpectralSolution sz = solve(p, b);
  const SpectralSolution s0 = solve(p.with_charge(0.0), b);
  if (static_cast<int>(sz.ns_indices.size()) != N || static_cast<int>(s0.ns_indices.size()) != N) {
    throw NumericalError("vp_momentum_density: negative-energy state count differs from 2 n_max + 1");
  }
  const Eigen::MatrixXd P = detail::negative_projector(sz) - detail::negative_projector(s0);
  return MomentumDensity(b, detail::convolve_projector(P, b.nmax()));
}

// n(x) = (sqrt(2 pi)/L) sum_j hat n(k_j) e^{i k_j x}
inline std::vector<Complex2x2> vp_position_density_matrix(const MomentumDensity& md, const std::vector<double>& grid) {
  const double pref = std::sqrt(2.0 * pi) / md.basis().L();
  std::vector<Complex2x2> out;
  out.reserve(grid.size());
  for (double x : grid) {
    Complex2x2 acc = md.matrix(0);
    for (int j = 1; j <= md.jmax(); ++j) {
      const cplx e = std::polar(1.0, md.k(j) * x);
      acc += md.matrix(j) * e + md.matrix(-j) * std::conj(e);
    }
    out.emplace_back(pref * acc);
  }
  return out;
}

inline std::vector<double> vp_position_density(const MomentumDensity& md, const std::vector<double>& grid) {
  const double pref = std::sqrt(2.0 * pi) / md.basis().L();
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) {
    // conjugate symmetry makes the sum real
    double acc = md.trace(0).real();
    for (int j = 1; j <= md.jmax(); ++j) {
      const cplx e = std::polar(1.0, md.k(j) * x);
      acc += 2.0 * (md.trace(j) * e).real();
    }
    out.push_back(pref * acc);
  }
  return out;
}

struct RegularizedDensity {
  MomentumDensity density;  // [hat n - hat n(k_max)] theta(k_max - |k|)
  int j_max;
  double k_max;
  double n_reg;           // -sqrt(2 pi) tr hat n(k_max)
  Complex2x2 subtracted;  // matrix value at k_max
};

inline RegularizedDensity regularize(const MomentumDensity& md) {
  const BasisSpec& b = md.basis();
  if (md.is_zero()) {
    return RegularizedDensity{md, 0, 0.0, 0.0, Complex2x2::Zero()};
  }
  int best = 0;
  double best_value = md.trace(0).real();
  for (int j = 1; j <= md.jmax() && md.k(j) <= 2.0 * b.Lambda(); ++j) {
    // strict comparison keeps the smaller j on ties
    if (md.trace(j).real() > best_value) {
      best_value = md.trace(j).real();
      best = j;
    }
  }
  // the same matrix is subtracted for every |j| < j_max; its off-diagonal
  // part is real and even in x and drops out against odd partners
  const Complex2x2 sub = md.matrix(best);
  std::vector<Complex2x2> coeffs(md.coefficients().size(), Complex2x2::Zero());
  for (int j = -best; j <= best; ++j) coeffs[static_cast<std::size_t>(j + md.jmax())] = md.matrix(j) - sub;
  return RegularizedDensity{MomentumDensity(b, std::move(coeffs)), best, md.k(best),
                            -std::sqrt(2.0 * pi) * sub.trace().real(), sub};
}

inline ScalarDistribution renormalized_basis_density(const RegularizedDensity& r, const std::vector<double>& grid) {
  return ScalarDistribution(-r.n_reg, grid, vp_position_density(r.density, grid));
}

inline MatrixDistribution renormalized_basis_density_matrix(const RegularizedDensity& r,
                                                            const std::vector<double>& grid) {
  return MatrixDistribution(-0.5 * r.n_reg, grid, vp_position_density_matrix(r.density, grid));
}

/// Electron density matrix of the basis bound state sampled on a grid.
struct ElectronDensityGrid {
  std::vector<double> grid;
  std::vector<Complex2x2> values;
  Complex2x2 raw_at_zero;
  Complex2x2 improved_at_zero;
};

inline ElectronDensityGrid electron_density_matrix(const BasisBoundState& bs, const std::vector<double>& grid) {
  ElectronDensityGrid out;
  out.grid = grid;
  out.values.reserve(grid.size());
  double best_small = 0.0;
  for (double x : grid) {
    out.values.push_back(bs.density(x));
    best_small = std::max(best_small, out.values.back()(1, 1).real());
  }
  out.raw_at_zero = bs.density(0.0);
  out.improved_at_zero = out.raw_at_zero;
  out.improved_at_zero(1, 1) = std::max(best_small, out.raw_at_zero(1, 1).real());
  return out;
}

/// Maximum of the small-component density over the box: dense scan then
/// golden-section refinement around the best sample.
inline double improved_small_component(const BasisBoundState& bs) {
  const double half = 0.5 * bs.basis.L();
  const int samples = 40 * bs.basis.size();
  const double h = half / samples;
  auto small = [&](double x) { return std::norm(bs.psi(x)(1)); };
  int best = 1;
  double best_value = small(h);
  for (int i = 2; i <= samples; ++i) {
    const double v = small(i * h);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = std::max(0.0, (best - 1) * h), b = std::min(half, (best + 1) * h);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = small(c), fd = small(d);
  for (int it = 0; it < 80 && b - a > 1e-14 * half; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = small(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = small(d);
    }
  }
  return std::max({best_value, fc, fd});
}

}  // namespace qed1d

#endif  // QED1D_PLANEWAVE_HPP
