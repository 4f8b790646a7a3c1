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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <qed1d/planewave.hpp>
#include <qed1d/vacuum_density.hpp>

#include "oracles.hpp"

using namespace qed1d;

namespace {
const PhysicalParams unit(1, 1, 1);

// periodic trapezoid over the box, exact for trigonometric polynomials of
// degree below the sample count
template <class F>
double box_integral(double L, int samples, F&& f) {
  const double h = L / samples;
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) acc += f(-0.5 * L + i * h);
  return acc * h;
}
}  // namespace

TEST(BasisSpec, Construction) {
  const BasisSpec b(10.0, 50.0);
  EXPECT_EQ(b.nmax(), 79);
  EXPECT_EQ(b.size(), 159);
  EXPECT_NEAR(b.k(3), 2 * pi * 3 / 10.0, 1e-15);
  // exact multiples survive round-off
  EXPECT_EQ(BasisSpec(2 * pi, 5.0).nmax(), 5);
  EXPECT_THROW(BasisSpec(1.0, 1.0), DomainError);
  EXPECT_THROW(BasisSpec(-1.0, 100.0), DomainError);
}

TEST(Hamiltonian, Structure) {
  const BasisSpec b(6.0, 8.0);
  const Eigen::MatrixXd H = assemble_hamiltonian(unit, b);
  const int N = b.size();
  EXPECT_EQ((H - H.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      EXPECT_EQ(H(i, j), -1.0 / 6.0);
      EXPECT_EQ(H(N + i, N + j), -1.0 / 6.0);
    }
  }
  // kinetic balance: both off-diagonal blocks are c P
  const Eigen::MatrixXd P = H.topRightCorner(N, N);
  EXPECT_EQ((P - H.bottomLeftCorner(N, N)).cwiseAbs().maxCoeff(), 0.0);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) EXPECT_EQ(P(i, j), i == j ? b.k(i - b.nmax()) : 0.0);
  }
}

TEST(Hamiltonian, FreeSpectrum) {
  const PhysicalParams free(1, 1, 0);
  const BasisSpec b(10.0, 50.0);
  const SpectralSolution s = solve(free, b);
  std::vector<double> expected;
  for (int n = -b.nmax(); n <= b.nmax(); ++n) {
    expected.push_back(dispersion(free, b.k(n)));
    expected.push_back(-dispersion(free, b.k(n)));
  }
  std::sort(expected.begin(), expected.end());
  const Eigen::MatrixXd H = assemble_hamiltonian(free, b);
  for (int i = 0; i < s.energies.size(); ++i) {
    EXPECT_NEAR(s.energies(i), expected[i], 1e-10);
    EXPECT_LT((H * s.vectors.col(i) - s.energies(i) * s.vectors.col(i)).norm(), 1e-10);
  }
  EXPECT_EQ(count_gap_eigenvalues(s, free), 0);
  EXPECT_EQ(static_cast<int>(s.ns_indices.size()), b.size());
}

TEST(Hamiltonian, GapAndNegativeStates) {
  const BasisSpec b(10.0, 50.0);
  const SpectralSolution s = solve(unit, b);
  EXPECT_EQ(count_gap_eigenvalues(s, unit), 1);
  EXPECT_EQ(static_cast<int>(s.ns_indices.size()), b.size());
  const BasisBoundState bs = basis_bound_state(s, unit, b);
  EXPECT_NEAR(bs.energy, 0.6, 0.01);
  EXPECT_NEAR(bs.coeffs.norm(), 1.0, 1e-12);
  EXPECT_GT(bs.large().sum(), 0.0);
  EXPECT_THROW(basis_bound_state(PhysicalParams(1, 1, 0), b), DomainError);
  EXPECT_THROW(diagonalize(Eigen::MatrixXd::Zero(3, 3)), DomainError);
}

TEST(BoundState, ConvergesFromAbove) {
  double prev = 1e9;
  for (double Lam : {20.0, 40.0, 80.0}) {
    const double e = basis_bound_state(unit, BasisSpec(10.0, Lam)).energy;
    EXPECT_GT(e, 0.6 * (1 - std::exp(-8.0)) - 1e-9);
    EXPECT_LT(e - 0.6, prev);
    prev = e - 0.6;
  }
  EXPECT_NEAR(basis_bound_state(PhysicalParams(1, 1, 1e-6), BasisSpec(10.0, 20.0)).energy, 1.0, 1e-5);
}

TEST(VpMomentum, Basics) {
  const BasisSpec b(10.0, 50.0);
  const MomentumDensity md = vp_momentum_density(unit, b);
  // no net charge; the diagonal entries separately need not vanish
  EXPECT_LT(std::abs(md.trace(0)), 1e-12);
  EXPECT_EQ(md.jmax(), 2 * b.nmax());
  // nothing at or past 2 Lambda
  const int j2 = static_cast<int>(std::ceil(2 * 50.0 * 10.0 / (2 * pi)));
  EXPECT_EQ(md.matrix(j2), Complex2x2::Zero());
  EXPECT_EQ(md.at(b.k(j2)), Complex2x2::Zero());
  EXPECT_THROW(md.at(0.123), DomainError);
  for (int j = 1; j <= md.jmax(); ++j) {
    // real density: hat n(-k) = hat n(k)^dagger, and an even trace
    EXPECT_LT((md.matrix(-j) - md.matrix(j).adjoint()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(md.trace(j).real(), md.trace(-j).real(), 1e-13);
  }
  EXPECT_TRUE(vp_momentum_density(PhysicalParams(1, 1, 0), b).is_zero());
}

TEST(VpMomentum, PlateauFollowsExactDensity) {
  const BasisSpec b(10.0, 50.0);
  const MomentumDensity md = vp_momentum_density(unit, b);
  // the box holds no net charge, so for k << Lambda it tracks hat n(k) - hat n(0)
  // of the exact density rather than hat n(k) itself
  const double constant = delta_charge(unit) / std::sqrt(2 * pi);
  const double at0 = constant + total_momentum_density_reg(unit, 0.0).trace().real();
  EXPECT_LT(at0, -0.01);
  for (int j : {8, 16, 24}) {
    const double exact = constant + total_momentum_density_reg(unit, b.k(j)).trace().real();
    EXPECT_NEAR(md.trace(j).real(), exact - at0, 1e-3) << j;
    EXPECT_GT(std::abs(md.trace(j).real() - exact), 0.01) << j;
  }
}

TEST(VpPosition, TinyBasisRealSpaceOracle) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-2.5, 2.5);
  for (int nmax : {1, 2, 4}) {
    const double L = 5.0;
    const BasisSpec b(L, 2 * pi * nmax / L + 1e-9);
    ASSERT_EQ(b.nmax(), nmax);
    const PhysicalParams p(1, 1, 0.8);
    const MomentumDensity md = vp_momentum_density(p, b);
    const auto tz = oracle::tiny_basis(p, L, nmax), t0 = oracle::tiny_basis(p.with_charge(0), L, nmax);
    std::vector<double> xs;
    for (int i = 0; i < 12; ++i) xs.push_back(U(rng));
    const auto vals = vp_position_density(md, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double ref = oracle::negative_state_density(tz, xs[i]) - oracle::negative_state_density(t0, xs[i]);
      EXPECT_NEAR(vals[i], ref, 1e-12) << nmax << " " << xs[i];
    }
  }
}

TEST(VpPosition, ParsevalAndZeroIntegral) {
  const BasisSpec b(10.0, 20.0);
  const MomentumDensity md = vp_momentum_density(unit, b);
  const int M = 8 * md.jmax() + 8;
  std::vector<double> xs;
  for (int i = 0; i < M; ++i) xs.push_back(-5.0 + 10.0 * i / M);
  const auto vals = vp_position_density(md, xs);
  double sq = 0.0, sum = 0.0;
  for (double v : vals) {
    sq += v * v;
    sum += v;
  }
  sq *= 10.0 / M;
  sum *= 10.0 / M;
  double parseval = 0.0;
  for (int j = -md.jmax(); j <= md.jmax(); ++j) parseval += std::norm(md.trace(j));
  parseval *= 2 * pi / 10.0;
  EXPECT_NEAR(sq, parseval, 1e-10);
  EXPECT_NEAR(sum, 0.0, 1e-10);
  // matrix form: trace is the scalar, entries Hermitian
  const auto mat = vp_position_density_matrix(md, {-1.3, 0.4});
  EXPECT_NEAR(mat[0].trace().real(), vp_position_density(md, {-1.3})[0], 1e-13);
  EXPECT_LT((mat[1] - mat[1].adjoint()).cwiseAbs().maxCoeff(), 1e-13);
  const auto zero = vp_position_density(vp_momentum_density(PhysicalParams(1, 1, 0), b), {0.0, 1.0});
  EXPECT_EQ(zero[0], 0.0);
  EXPECT_EQ(zero[1], 0.0);
}

TEST(Regularize, Values) {
  const BasisSpec b(10.0, 50.0);
  const MomentumDensity md = vp_momentum_density(unit, b);
  const RegularizedDensity r = regularize(md);
  EXPECT_NEAR(r.n_reg, -(2 / pi) * std::atan(0.5), 0.02);
  EXPECT_NEAR(r.density.trace(0).real(), -md.trace(r.j_max).real(), 1e-12);
  EXPECT_NEAR(r.n_reg, -std::sqrt(2 * pi) * md.trace(r.j_max).real(), 1e-12);
  EXPECT_EQ(r.density.matrix(r.j_max + 1), Complex2x2::Zero());
  // k_max is the trace maximum below 2 Lambda
  for (int j = 0; j <= md.jmax() && md.k(j) <= 100.0; ++j) EXPECT_LE(md.trace(j).real(), md.trace(r.j_max).real());
  EXPECT_GT(r.k_max, 0.5 * 50.0);
  EXPECT_LT(r.k_max, 50.0);
  // integral of the regularized density is N_reg
  const int M = 8 * md.jmax() + 8;
  const double integral = box_integral(10.0, M, [&](double x) { return vp_position_density(r.density, {x})[0]; });
  EXPECT_NEAR(integral, r.n_reg, 1e-10);
  const RegularizedDensity z = regularize(vp_momentum_density(PhysicalParams(1, 1, 0), b));
  EXPECT_EQ(z.n_reg, 0.0);
  EXPECT_TRUE(z.density.is_zero());
}

TEST(Regularize, ApproachesExactDensity) {
  const BasisSpec b(10.0, 50.0);
  const RegularizedDensity r = regularize(vp_momentum_density(unit, b));
  const ScalarDistribution d = renormalized_basis_density(r, {0.05, 0.5, 1.0, 2.0, 3.0});
  EXPECT_NEAR(d.delta_coeff(), -r.n_reg, 1e-15);
  EXPECT_NEAR(renormalized_basis_density_matrix(r, {1.0}).delta_coeff(), -0.5 * r.n_reg, 1e-15);
  std::vector<double> err;
  const std::vector<double> xs{0.05, 0.5, 1.0, 2.0, 3.0};
  for (std::size_t i = 0; i < xs.size(); ++i) err.push_back(std::abs(d.values()[i] - total_regular_scalar(unit, xs[i])));
  for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_LT(err[i], 5e-3) << xs[i];
  EXPECT_GT(err[0], err[2]);
  // finer cutoff helps at x = 1
  const RegularizedDensity r2 = regularize(vp_momentum_density(unit, BasisSpec(10.0, 100.0)));
  const double e2 = std::abs(vp_position_density(r2.density, {0.5})[0] - total_regular_scalar(unit, 0.5));
  EXPECT_LT(e2, err[1]);
}

TEST(ElectronDensity, NormalizationAndOrigin) {
  const BasisSpec b(10.0, 50.0);
  const BasisBoundState bs = basis_bound_state(unit, b);
  const double norm = box_integral(10.0, 4 * b.size(), [&](double x) { return bs.density(x).trace().real(); });
  EXPECT_NEAR(norm, 1.0, 1e-10);
  EXPECT_LT(std::norm(bs.psi(0.0)(1)), 1e-28);
  const ElectronDensityGrid g = electron_density_matrix(bs, symmetric_grid(2.0, 200));
  EXPECT_LT(std::abs(g.raw_at_zero(1, 1)), 1e-28);
  EXPECT_GT(g.improved_at_zero(1, 1).real(), 0.1);
  EXPECT_EQ(g.improved_at_zero(0, 0), g.raw_at_zero(0, 0));
  EXPECT_NEAR(g.raw_at_zero(0, 0).real(), 0.64, 0.02);
}

TEST(ElectronDensity, ImprovedSmallComponent) {
  // the maximum of a truncated series of a function with a jump carries the
  // Gibbs overshoot: it rises above |psi_S(0+)|^2 = 0.16 towards
  // (0.4 * 1.17898)^2 as Lambda grows
  const double gibbs = std::pow(0.4 * 1.1789797444721675, 2);
  double prev = 0.0;
  for (double Lam : {25.0, 50.0, 100.0, 200.0}) {
    const double s = improved_small_component(basis_bound_state(unit, BasisSpec(10.0, Lam)));
    EXPECT_GT(s, 0.16);
    EXPECT_LT(s, gibbs);
    EXPECT_GT(s, prev);
    prev = s;
  }
  EXPECT_NEAR(prev, gibbs, 0.01);
}
