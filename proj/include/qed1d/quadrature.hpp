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
#ifndef QED1D_QUADRATURE_HPP
#define QED1D_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstdio>
#include <queue>
#include <string>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core.hpp"

namespace qed1d {

struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_refinements = 20;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw DomainError("QuadSpec: tolerances must be > 0");
    if (max_refinements < 1) throw DomainError("QuadSpec: max_refinements must be >= 1");
  }
};

enum class Decay { algebraic, exponential };

inline std::string detail_format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

template <class V>
struct QuadResult {
  V value{};
  double error = 0.0;
  bool converged = true;
  int evaluations = 0;

  const V& value_or_throw(const char* what) const {
    if (!converged) {
      throw NumericalError(std::string(what) + ": quadrature did not converge (error estimate " +
                           detail_format(error) + ")");
    }
    return value;
  }
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const cplx& v) { return std::abs(v); }
template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().maxCoeff();
}

template <class V>
V zero_like(const V& v) {
  if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, cplx>) {
    return V{};
  } else {
    return V::Zero(v.rows(), v.cols());
  }
}

// G10-K21 rule; boost stores the non-negative half of the abscissae.
struct KronrodTable {
  std::array<double, 11> x{};
  std::array<double, 11> wk{};
  std::array<double, 6> wg{};  // Gauss weights attached to x[1], x[3], ..., zero node excluded

  KronrodTable() {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& ax = gauss_kronrod<double, 21>::abscissa();
    const auto& w = gauss_kronrod<double, 21>::weights();
    const auto& gw = gauss<double, 10>::weights();
    for (std::size_t i = 0; i < 11; ++i) {
      x[i] = ax[i];
      wk[i] = w[i];
    }
    // the 10-point Gauss rule has no zero node; its nodes sit at odd Kronrod indices
    for (std::size_t i = 0; i < 5; ++i) wg[i] = gw[i];
    wg[5] = 0.0;
  }
};

inline const KronrodTable& kronrod_table() {
  static const KronrodTable table;
  return table;
}

template <class V>
struct Panel {
  double a;
  double b;
  V value;
  double error;
  double l1;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class V, class F>
Panel<V> gk21(F& f, double a, double b, int depth) {
  const auto& t = kronrod_table();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const V f0 = f(mid);
  V kron = f0 * t.wk[0];
  V gauss = zero_like(f0);
  double l1 = magnitude(f0) * t.wk[0];
  for (std::size_t i = 1; i < 11; ++i) {
    const double dx = half * t.x[i];
    const V fl = f(mid - dx);
    const V fr = f(mid + dx);
    const V s = fl + fr;
    kron += s * t.wk[i];
    l1 += (magnitude(fl) + magnitude(fr)) * t.wk[i];
    if (i % 2 == 1) gauss += s * t.wg[i / 2];
  }
  kron *= half;
  gauss *= half;
  l1 *= std::abs(half);
  const double err = magnitude(V(kron - gauss));
  return Panel<V>{a, b, kron, err, l1, depth};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (10/21) on [a, b]. Works for double,
/// complex and fixed-size Eigen values; all components share the panels.
/// max_refinements bounds the bisection depth of every panel.
template <class F>
auto integrate(F&& f, double a, double b, const QuadSpec& spec = {}, int initial_panels = 1)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using V = std::decay_t<decltype(f(a))>;
  spec.validate();
  QuadResult<V> out;
  if (a == b) {
    out.value = detail::zero_like(f(a));
    return out;
  }
  initial_panels = std::max(1, initial_panels);
  std::priority_queue<detail::Panel<V>> active;
  std::vector<detail::Panel<V>> frozen;
  const double w = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * w;
    const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * w;
    active.push(detail::gk21<V>(f, lo, hi, 0));
  }
  int evaluations = 21 * initial_panels;
  const int budget = 200 * spec.max_refinements + initial_panels;
  int panels = initial_panels;

  auto totals = [&](V& value, double& err, double& l1) {
    value = detail::zero_like(active.top().value);
    err = 0.0;
    l1 = 0.0;
    std::vector<detail::Panel<V>> tmp;
    auto copy = active;
    while (!copy.empty()) {
      const auto& p = copy.top();
      value += p.value;
      err += p.error;
      l1 += p.l1;
      copy.pop();
    }
    for (const auto& p : frozen) {
      value += p.value;
      err += p.error;
      l1 += p.l1;
    }
  };

  V value{};
  double err = 0.0;
  double l1 = 0.0;
  totals(value, err, l1);
  auto tolerance = [&]() {
    return std::max({spec.abs_tol, spec.rel_tol * detail::magnitude(value),
                     100.0 * std::numeric_limits<double>::epsilon() * l1});
  };

  // running sums are refreshed from scratch every so often to limit drift
  int since_refresh = 0;
  while (err > tolerance() && !active.empty() && panels < budget) {
    auto worst = active.top();
    active.pop();
    if (worst.depth >= spec.max_refinements) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk21<V>(f, worst.a, mid, worst.depth + 1);
    auto right = detail::gk21<V>(f, mid, worst.b, worst.depth + 1);
    evaluations += 42;
    ++panels;
    value += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    active.push(std::move(left));
    active.push(std::move(right));
    if (++since_refresh == 64) {
      since_refresh = 0;
      totals(value, err, l1);
    }
  }
  if (active.empty() && frozen.empty()) throw NumericalError("integrate: no panels");
  if (!active.empty()) {
    totals(value, err, l1);
  } else {
    value = detail::zero_like(frozen.front().value);
    err = 0.0;
    l1 = 0.0;
    for (const auto& p : frozen) {
      value += p.value;
      err += p.error;
      l1 += p.l1;
    }
  }
  out.value = value;
  out.error = err;
  out.converged = err <= tolerance();
  out.evaluations = evaluations;
  return out;
}

/// Integral over the whole real line. Algebraic decay uses u = s tan(theta);
/// exponential decay truncates symmetrically where |f| drops below the
/// absolute tolerance per unit width.
template <class F>
auto integrate_real_line(F&& f, const QuadSpec& spec = {}, Decay decay = Decay::algebraic,
                         double scale = 1.0) -> QuadResult<std::decay_t<decltype(f(0.0))>> {
  using V = std::decay_t<decltype(f(0.0))>;
  if (!(scale > 0)) throw DomainError("integrate_real_line: scale must be > 0");
  if (decay == Decay::algebraic) {
    auto mapped = [&](double theta) -> V {
      const double c = std::cos(theta);
      return V(f(scale * std::tan(theta)) * (scale / (c * c)));
    };
    return integrate(mapped, -0.5 * pi, 0.5 * pi, spec, 4);
  }
  double X = scale;
  for (int i = 0; i < 200; ++i) {
    const double width = 2.0 * X;
    const double small = spec.abs_tol / width * 1e-2;
    if (detail::magnitude(V(f(X))) < small && detail::magnitude(V(f(-X))) < small &&
        detail::magnitude(V(f(2 * X))) < small && detail::magnitude(V(f(-2 * X))) < small) {
      break;
    }
    X *= 1.5;
  }
  return integrate(f, -X, X, spec, 8);
}

/// Integral over [a, infinity) with algebraic decay: u = a + s tan(theta).
template <class F>
auto integrate_half_line(F&& f, double a, const QuadSpec& spec = {}, double scale = 1.0)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using V = std::decay_t<decltype(f(a))>;
  if (!(scale > 0)) throw DomainError("integrate_half_line: scale must be > 0");
  auto mapped = [&](double theta) -> V {
    const double c = std::cos(theta);
    return V(f(a + scale * std::tan(theta)) * (scale / (c * c)));
  };
  return integrate(mapped, 0.0, 0.5 * pi, spec, 4);
}

/// Integral of h(t)/sqrt(t^2-1) over [1, infinity) with h exponentially
/// decaying; t = cosh(s) turns the weight into ds.
template <class F>
auto integrate_endpoint_singularity(F&& h, const QuadSpec& spec = {})
    -> QuadResult<std::decay_t<decltype(h(1.0))>> {
  using V = std::decay_t<decltype(h(1.0))>;
  auto mapped = [&](double s) -> V { return V(h(std::cosh(s))); };
  double S = 1.0;
  for (int i = 0; i < 200 && S < 700.0; ++i) {
    const double small = spec.abs_tol / S * 1e-2;
    if (detail::magnitude(mapped(S)) < small && detail::magnitude(mapped(1.5 * S)) < small) break;
    S *= 1.25;
  }
  return integrate(mapped, 0.0, S, spec, 4);
}

/// Integral over (0, X] of a function with at most a logarithmic singularity
/// at 0; x = X e^{-s} makes the integrand smooth and exponentially small.
template <class F>
auto integrate_from_origin(F&& f, double X, const QuadSpec& spec = {}, double depth = 45.0)
    -> QuadResult<std::decay_t<decltype(f(X))>> {
  using V = std::decay_t<decltype(f(X))>;
  if (!(X > 0)) throw DomainError("integrate_from_origin: X must be > 0");
  auto mapped = [&](double s) -> V {
    const double x = X * std::exp(-s);
    return V(f(x) * x);
  };
  return integrate(mapped, 0.0, depth, spec, 8);
}

/// Composite Simpson on a uniform grid; an even sample count closes the last
/// interval with the three-point quadratic rule, two samples fall back to
/// the trapezoid.
template <class V>
V composite_grid_integral(std::span<const V> samples, double h) {
  const std::size_t n = samples.size();
  if (n < 2) throw DomainError("composite_grid_integral: need at least 2 samples");
  if (n == 2) return V((samples[0] + samples[1]) * (0.5 * h));
  const std::size_t m = (n % 2 == 1) ? n : n - 1;
  V acc = V(samples[0] + samples[m - 1]);
  for (std::size_t i = 1; i + 1 < m; ++i) acc += samples[i] * ((i % 2 == 1) ? 4.0 : 2.0);
  acc *= h / 3.0;
  if (m != n) {
    acc += (samples[n - 1] * 5.0 + samples[n - 2] * 8.0 - samples[n - 3]) * (h / 12.0);
  }
  return acc;
}

template <class V>
V composite_grid_integral(const std::vector<V>& samples, double h) {
  return composite_grid_integral(std::span<const V>(samples), h);
}

/// Same rule on a strictly increasing, possibly non-uniform grid.
template <class V>
V composite_grid_integral(std::span<const double> x, std::span<const V> f) {
  const std::size_t n = x.size();
  if (n != f.size()) throw DomainError("composite_grid_integral: size mismatch");
  if (n < 2) throw DomainError("composite_grid_integral: need at least 2 samples");
  if (n == 2) return V((f[0] + f[1]) * (0.5 * (x[1] - x[0])));
  const std::size_t m = (n % 2 == 1) ? n : n - 1;
  V acc = detail::zero_like(f[0]);
  for (std::size_t i = 0; i + 2 <= m - 1; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    const double s = h0 + h1;
    acc += (f[i] * (2.0 - h1 / h0) + f[i + 1] * (s * s / (h0 * h1)) + f[i + 2] * (2.0 - h0 / h1)) *
           (s / 6.0);
  }
  if (m != n) {
    // quadratic through the last three samples, integrated over the last interval
    const double x0 = x[n - 3], x1 = x[n - 2], x2 = x[n - 1];
    const double a = x1 - x0, b = x2 - x1;
    const double w0 = -b * b * b / (6.0 * a * (a + b));
    const double w1 = b * (3.0 * a + b) / (6.0 * a);
    const double w2 = b * (3.0 * a + 2.0 * b) / (6.0 * (a + b));
    acc += f[n - 3] * w0 + f[n - 2] * w1 + f[n - 1] * w2;
  }
  return acc;
}

template <class V>
V composite_grid_integral(const std::vector<double>& x, const std::vector<V>& f) {
  return composite_grid_integral(std::span<const double>(x), std::span<const V>(f));
}

}  // namespace qed1d

#endif  // QED1D_QUADRATURE_HPP
