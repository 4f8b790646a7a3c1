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
#include <vector>

#include <gtest/gtest.h>

#include <qed1d/appendix_checks.hpp>

#include "oracles.hpp"

using namespace qed1d;

namespace {
const PhysicalParams unit(1, 1, 1);
}

TEST(Mollifier, Normalization) {
  for (Mollifier k : {Mollifier::bump, Mollifier::bspline}) {
    const double n = oracle::integrate_scalar([&](double x) { return mollifier_density(k, x); }, -1.0, 1.0, 1e-14);
    EXPECT_NEAR(n, 1.0, 1e-12);
    EXPECT_NEAR(mollifier_cdf(k, 1.0), 1.0, 1e-12);
    EXPECT_NEAR(mollifier_cdf(k, -1.0), 0.0, 1e-15);
    EXPECT_NEAR(mollifier_cdf(k, 0.0), 0.5, 1e-12);
    EXPECT_EQ(mollifier_density(k, 1.5), 0.0);
    const double mid =
        oracle::integrate_scalar([&](double x) { return mollifier_density(k, x); }, -1.0, 0.3, 1e-14);
    EXPECT_NEAR(mollifier_cdf(k, 0.3), mid, 1e-12);
  }
}

TEST(Mollifier, HalfDelta) {
  for (Mollifier k : {Mollifier::bump, Mollifier::bspline}) {
    EXPECT_NEAR(mollifier_half_delta([](double) { return 1.0; }, k).extrapolated, 0.5, 1e-10);
    EXPECT_NEAR(mollifier_half_delta([](double x) { return x; }, k).extrapolated, 0.0, 1e-10);
    const auto c = mollifier_half_delta([](double x) { return std::cos(x); }, k);
    EXPECT_NEAR(c.values.back(), 0.5, 1e-4);
    EXPECT_NEAR(c.extrapolated, 0.5, 1e-8);
  }
  auto f = [](double x) { return std::exp(x) / (1.0 + x * x); };
  const double a = mollifier_half_delta(f, Mollifier::bump).extrapolated;
  const double b = mollifier_half_delta(f, Mollifier::bspline).extrapolated;
  EXPECT_NEAR(a, b, 1e-3);
  EXPECT_THROW(mollifier_half_delta(f, Mollifier::bump, {0.1}), DomainError);
}

TEST(AsymmetricCutoff, Examples) {
  EXPECT_NEAR(asymmetric_cutoff(unit, 2.0).a, -std::log(2.0) / pi, 1e-15);
  EXPECT_NEAR(asymmetric_cutoff(unit, 2.0).a, -0.2206356, 1e-7);
  const AsymmetricCutoff one = asymmetric_cutoff(unit, 1.0);
  EXPECT_EQ(one.a, 0.0);
  const double theta = 2.0 * std::atan(0.5);
  const Complex2x2 M0 = make_matrix(std::cos(theta), cplx(0, std::sin(theta)), cplx(0, std::sin(theta)), std::cos(theta));
  EXPECT_LT((one.M - M0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(asymmetric_cutoff(unit, 0.0), DomainError);
}

TEST(AsymmetricCutoff, Decomposition) {
  for (const auto& p : {unit, PhysicalParams(1, 1, 1.8), PhysicalParams(1, 3, 0.4)}) {
    for (double r : {0.5, 1.0, 2.0, std::exp(1.0), 17.0}) {
      const AsymmetricCutoff ac = asymmetric_cutoff(p, r);
      EXPECT_NEAR(std::abs(ac.w), 1.0, 1e-12);
      EXPECT_NEAR(ac.A * ac.D - ac.B * ac.C, 1.0, 1e-12);
      // M = sqrt(w) [[A, iB], [-iC, D]], the root chosen by the sign of A
      const cplx I(0, 1);
      const Complex2x2 core = make_matrix(ac.A, I * ac.B, -I * ac.C, ac.D);
      const cplx sw = std::sqrt(ac.w);
      const double e1 = (ac.M - sw * core).cwiseAbs().maxCoeff();
      const double e2 = (ac.M + sw * core).cwiseAbs().maxCoeff();
      EXPECT_LT(std::min(e1, e2), 1e-12) << r;
      EXPECT_LT((ac.M * ac.M.adjoint() - Complex2x2::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(AsymmetricCutoff, LogAdditivity) {
  for (double r1 : {0.3, 2.0}) {
    for (double r2 : {1.7, 5.0}) EXPECT_NEAR(cutoff_parameter(r1 * r2), cutoff_parameter(r1) + cutoff_parameter(r2), 1e-15);
  }
}

TEST(SingularKernel, Values) {
  EXPECT_NEAR(singular_kernel_integral(), 1.0, 1e-10);
  EXPECT_EQ(singular_kernel(1.0), 0.0);
  EXPECT_EQ(singular_kernel(-1.5), 0.0);
  EXPECT_NEAR(singular_kernel(0.0), std::log(2.0), 1e-15);
  const double x = 0.999;
  const double direct = 0.5 * std::log(4.0 / (1.0 - x * x)) - x * 0.5 * std::log((1 + x) / (1 - x));
  EXPECT_TRUE(std::isfinite(singular_kernel(x)));
  EXPECT_NEAR(singular_kernel(x), direct, 1e-13);
  EXPECT_NEAR(singular_kernel(-x), direct, 1e-13);
}

TEST(SingularKernel, RecoveredDeltaCoefficient) {
  EXPECT_NEAR(averaged_delta_coefficient(unit, 1e-3), 1.0 / pi, 1e-3);
  const double e2 = std::abs(averaged_delta_coefficient(unit, 1e-2) - 1 / pi);
  const double e3 = std::abs(averaged_delta_coefficient(unit, 1e-3) - 1 / pi);
  EXPECT_LT(e3, e2);
  EXPECT_NEAR(averaged_delta_coefficient(PhysicalParams(1, 2, 1), 1e-4), 1.0 / (2 * pi), 1e-4);
}

TEST(ConvergenceModel, ClosedForms) {
  const ConvergenceModel m = truncated_energy_model(unit, 10.0, 50.0);
  EXPECT_NEAR(m.energy_infinite, 0.6 * (1 - std::exp(-8.0)), 1e-15);
  EXPECT_NEAR(m.energy_infinite, 0.5997987, 1e-7);
  EXPECT_NEAR(m.asymptotic_term, 0.64 * (1 + std::exp(-8.0)) / (50 * pi), 1e-15);
  EXPECT_NEAR(m.asymptotic_term, 0.004076, 1e-6);
  EXPECT_EQ(m.nmax, 79);
  EXPECT_NEAR(model_energy_series_limit(unit, 10.0), m.energy_infinite, 1e-9);
  // partial sums approach the limit from above at the predicted rate
  const ConvergenceModel big = truncated_energy_model(unit, 10.0, 400.0);
  EXPECT_NEAR((big.energy - big.energy_infinite) / big.asymptotic_term, 1.0, 0.02);
}

TEST(ConvergenceModel, CoefficientDecay) {
  std::vector<double> n, cl, cs;
  for (int k = 16; k <= 512; k *= 2) {
    n.push_back(k);
    cl.push_back(std::abs(model_large_coefficient(unit, 10.0, k)));
    cs.push_back(std::abs(model_small_coefficient(unit, 10.0, k)));
  }
  EXPECT_NEAR(convergence_slope_fit(n, cl, FitAxes::loglog), -2.0, 0.1);
  EXPECT_NEAR(convergence_slope_fit(n, cs, FitAxes::loglog), -1.0, 0.1);
}

TEST(ConvergenceModel, Parseval) {
  // cosine/sine coefficients of psi restricted to the box: the sum over
  // n >= 0 tends to the norm inside the box
  double prev = 0.0;
  for (double L : {4.0, 8.0, 12.0}) {
    const BoundState b = bound_state(unit);
    double s = 0.0;
    for (int k = 1 << 17; k >= 0; --k) {
      const double a = model_large_coefficient(unit, L, k);
      const double c = model_small_coefficient(unit, L, k);
      s += a * a + c * c;
    }
    const double inside = 1.0 - std::exp(-b.kappa_b * L);
    EXPECT_NEAR(s, inside, 5e-5) << L;
    EXPECT_GT(s, prev);
    prev = s;
  }
}

TEST(SlopeFit, Synthetic) {
  std::vector<double> x{25, 50, 100, 200}, e;
  for (double v : x) e.push_back(3.7 / v);
  EXPECT_NEAR(convergence_slope_fit(x, e, FitAxes::loglog), -1.0, 1e-6);
  std::vector<double> L{4, 6, 8, 10}, f;
  for (double v : L) f.push_back(2.0 * std::exp(-0.8 * v));
  EXPECT_NEAR(convergence_slope_fit(L, f, FitAxes::semilog), -0.8, 1e-12);
  EXPECT_THROW(convergence_slope_fit({1, 2, 3}, {1, 2, 3}, FitAxes::loglog), DomainError);
  EXPECT_THROW(convergence_slope_fit({2, 2, 2, 2}, {1, 2, 3, 4}, FitAxes::loglog), DomainError);
  EXPECT_THROW(convergence_slope_fit({1, 2, 3, 4}, {1, 0, 3, 4}, FitAxes::loglog), DomainError);
}
