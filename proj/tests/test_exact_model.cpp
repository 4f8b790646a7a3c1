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
#include <limits>

#include <gtest/gtest.h>

#include <qed1d/exact_model.hpp>

#include "oracles.hpp"

using namespace qed1d;

namespace {
const PhysicalParams unit(1, 1, 1);
}

TEST(BoundState, Examples) {
  const BoundState b = bound_state(unit);
  EXPECT_NEAR(b.energy, 0.6, 1e-15);
  EXPECT_NEAR(b.kappa_b, 0.8, 1e-15);
  EXPECT_NEAR(b.amp, 0.8, 1e-15);
  EXPECT_NEAR(bound_state(PhysicalParams(1, 1, 1e-9)).energy, 1.0, 1e-15);
  EXPECT_THROW(bound_state(PhysicalParams(1, 1, 0)), DomainError);
}

TEST(BoundState, EnergyDecreasesInZ) {
  double prev = 1.0;
  for (double Z = 0.05; Z < 50; Z *= 1.3) {
    const double e = bound_state(PhysicalParams(1, 1, Z)).energy;
    EXPECT_LT(e, prev);
    prev = e;
  }
  EXPECT_NEAR(bound_state(PhysicalParams(1, 1, 1e7)).energy, -1.0, 1e-12);
}

TEST(BoundWavefunction, ValuesAtOrigin) {
  const OneSidedSpinor z = bound_wavefunction(unit, 0.0);
  EXPECT_LT(std::abs(z.right(0) - 0.8), 1e-15);
  EXPECT_LT(std::abs(z.right(1) - cplx(0, 0.4)), 1e-15);
  EXPECT_LT(std::abs(z.left(1) - cplx(0, -0.4)), 1e-15);
  EXPECT_LT(std::abs(z.average()(1)), 1e-15);
  // away from the origin both sides agree
  const OneSidedSpinor w = bound_wavefunction(unit, -0.3);
  EXPECT_LT((w.left - w.right).norm(), 1e-15);
  EXPECT_LT(bound_wavefunction(unit, 60.0).right.norm(), 1e-20);
  EXPECT_LT(bound_wavefunction(unit, -60.0).right.norm(), 1e-20);
}

TEST(BoundWavefunction, Normalized) {
  for (const auto& p : {unit, PhysicalParams(1, 2, 1), PhysicalParams(0.7, 1.3, 2.0)}) {
    auto f = [&](double x) { return bound_wavefunction(p, x).right.squaredNorm(); };
    const double n = 2.0 * oracle::integrate_scalar(f, 0.0, std::numeric_limits<double>::infinity());
    EXPECT_NEAR(n, 1.0, 1e-12);
  }
}

TEST(Virial, Examples) {
  EXPECT_NEAR(virial_energy(unit), 0.6, 1e-10);
  EXPECT_NEAR(virial_energy(PhysicalParams(1, 2, 1)), 60.0 / 17.0, 1e-10);
  EXPECT_NEAR(virial_energy(PhysicalParams(1, 1, 1e-4)), 1.0, 1e-7);
}

TEST(Gbar0, Examples) {
  const Complex2x2 g = gbar0(unit, 0.0, 0.0);
  EXPECT_LT((g - make_matrix(-1, 0, 0, 1)).norm(), 1e-15);
  const cplx I(0, 1);
  for (double q : {-3.0, -0.4, 0.0, 1.1, 7.0}) {
    for (cplx w : {cplx(0.0), 0.5 * I, -2.0 * I, cplx(0.3, 0.7)}) {
      EXPECT_LT((gbar0(unit, q, w) - oracle::free_resolvent(unit, q, w)).norm(), 1e-14);
    }
    EXPECT_LT(std::abs(gbar0(unit, q, I)(0, 1) + gbar0(unit, -q, I)(0, 1)), 1e-15);
    EXPECT_LT((gbar0(unit, q, 0.8 * I).conjugate() - gbar0(unit, q, -0.8 * I)).norm(), 1e-15);
  }
}

TEST(Gbarbar0, Examples) {
  const Complex2x2 g = gbarbar0(unit, infinite_cutoff, 0.0);
  EXPECT_LT((g - make_matrix(-pi, 0, 0, pi)).norm(), 1e-14);
  EXPECT_EQ(g(0, 1), cplx(0.0));
  EXPECT_EQ(g(1, 0), cplx(0.0));
}

TEST(Gbarbar0, MatchesQuadrature) {
  const cplx I(0, 1);
  for (double Lambda : {0.5, 3.0, 25.0}) {
    for (cplx w : {cplx(0.0), 0.4 * I, -3.0 * I, cplx(0.2, 1.0)}) {
      auto f = [&](double q) { return oracle::free_resolvent(unit, q, w); };
      const Complex2x2 ref = oracle::integrate_matrix(f, -Lambda, Lambda);
      EXPECT_LT((gbarbar0(unit, Lambda, w) - ref).cwiseAbs().maxCoeff(), 1e-8) << Lambda << " " << w;
    }
  }
  // infinite cutoff: diagonal decays as 1/q^2
  for (cplx w : {cplx(0.0), 2.0 * I}) {
    auto f = [&](double q) { return Complex2x2(oracle::free_resolvent(unit, q, w) + oracle::free_resolvent(unit, -q, w)); };
    const Complex2x2 ref = oracle::integrate_matrix(f, 0.0, std::numeric_limits<double>::infinity());
    const Complex2x2 got = gbarbar0(unit, infinite_cutoff, w);
    EXPECT_LT(std::abs(got(0, 0) - ref(0, 0)), 1e-8);
    EXPECT_LT(std::abs(got(1, 1) - ref(1, 1)), 1e-8);
  }
}

TEST(DeltaGreen, FreeCaseVanishes) {
  EXPECT_EQ(delta_green(PhysicalParams(1, 1, 0), 0.3, -1.2, cplx(0, 1)), Complex2x2::Zero());
}

TEST(DeltaGreen, DysonResidual) {
  const double Lambda = 5.0;
  const std::vector<double> ps{-4.0, -1.5, 0.0, 0.7, 3.0};
  const std::vector<double> us{0.3, 1.0, 4.0};
  for (const auto& p : {unit, PhysicalParams(1, 1, 1.7), PhysicalParams(1, 2, 0.5)}) {
    double worst = 0.0;
    for (double u : us) {
      const GreenEval ge(p, cplx(0, u), Lambda);
      auto dG = [&](double q, double qp) { return ge.delta_green(q, qp); };
      for (double a : ps) {
        for (double b : ps) worst = std::max(worst, oracle::dyson_residual(p, Lambda, a, b, cplx(0, u), dG));
      }
    }
    EXPECT_LT(worst, 1e-8) << p.Z();
  }
}

TEST(DeltaGreen, FirstOrderLimit) {
  const double eps = 1e-7;
  const PhysicalParams p(1, 1, eps);
  for (double q : {-2.0, 0.5}) {
    for (double qp : {-0.3, 1.7}) {
      const cplx w(0, 0.9);
      const Complex2x2 ref = (-1.0 / (2 * pi)) * oracle::free_resolvent(p, q, w) * oracle::free_resolvent(p, qp, w);
      const Complex2x2 got = delta_green(p, q, qp, w) / eps;
      EXPECT_LT((got - ref).cwiseAbs().maxCoeff(), 1e-6 * ref.cwiseAbs().maxCoeff());
    }
  }
}

TEST(DeltaGreen, Preconditions) {
  EXPECT_THROW(delta_green(PhysicalParams(1, 1, 2.5), 0.1, 0.2, cplx(0, 1)), DomainError);
}

TEST(MatrixElement, BoundStateEnergy) {
  const MomentumSpaceState s = bound_state_momentum(unit);
  EXPECT_NEAR(matrix_element(unit, s, s).real(), 0.6, 1e-9);
  EXPECT_NEAR(matrix_element(unit, s, s).imag(), 0.0, 1e-12);
  // momentum form is consistent with the position form
  for (double q : {0.0, 0.9, -2.5}) {
    auto re = [&](double x) { return 2.0 * bound_wavefunction(unit, x).right(0).real() * std::cos(q * x); };
    const double ref = oracle::integrate_scalar(re, 0.0, std::numeric_limits<double>::infinity()) / std::sqrt(2 * pi);
    EXPECT_NEAR(s.fourier(q)(0).real(), ref, 1e-12);
  }
}

TEST(MatrixElement, FreeIsKinetic) {
  const PhysicalParams free(1, 1, 0);
  const MomentumSpaceState s = bound_state_momentum(unit);
  // <psi|D_0|psi> for the normalized state: mc^2 (|a|^2 - |b|^2) + 2 c q Re(a* b)
  auto f = [&](double q) {
    const Spinor v = s.fourier(q);
    return std::norm(v(0)) - std::norm(v(1)) + 2.0 * q * (std::conj(v(0)) * v(1)).real();
  };
  const double ref = 2.0 * oracle::integrate_scalar([&](double q) { return f(q); }, 0.0,
                                                    std::numeric_limits<double>::infinity());
  EXPECT_NEAR(matrix_element(free, s, s).real(), ref, 1e-9);
}

TEST(MatrixElement, PlaneWavePotential) {
  const double L = 7.0;
  const int nmax = 3, N = 2 * nmax + 1;
  PlaneWaveState a{L, Eigen::VectorXcd::Zero(N), Eigen::VectorXcd::Zero(N)};
  PlaneWaveState b = a;
  a.large(1) = 1.0;
  b.large(4) = 1.0;
  EXPECT_NEAR(std::abs(matrix_element(unit, a, b) - cplx(-1.0 / L)), 0.0, 1e-15);
  PlaneWaveState c = a, d = a;
  c.large.setZero();
  c.small(2) = 1.0;
  d.large.setZero();
  d.small(5) = 1.0;
  EXPECT_NEAR(std::abs(matrix_element(PhysicalParams(1, 1, 0.7), c, d) - cplx(-0.7 / L)), 0.0, 1e-15);
}
