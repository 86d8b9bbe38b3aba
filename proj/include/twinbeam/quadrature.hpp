#pragma once

// One-dimensional quadrature used by the numerical oracle: globally adaptive
// Gauss-Kronrod (G10/K21), a fixed trapezoid rule, and Euler/van Wijngaarden
// acceleration for alternating tails.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

#include "twinbeam/errors.hpp"

namespace twinbeam {

enum class QuadratureMethod { adaptive_gauss_kronrod, trapezoid };

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::adaptive_gauss_kronrod;
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  /// Upper truncation of semi-infinite radial integrals (rad/m). Unset means
  /// the integrand decides from its own Gaussian envelope.
  std::optional<double> q_max;
  int max_subdivisions = 200000;
  /// Panels used by the trapezoid method.
  int trapezoid_panels = 4096;

  void validate() const;
};

template <class T>
struct QuadratureResult {
  T value{};
  double abs_error = 0.0;
  /// Integral of |f|, the scale against which round-off is judged.
  double abs_integral = 0.0;
  long evaluations = 0;
  int subdivisions = 0;
};

namespace detail {

inline constexpr double gk21_nodes[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double gk21_kronrod_weights[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452012, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7, 9).
inline constexpr double gk21_gauss_weights[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
  double abs_value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> gk21(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kronrod = fc * gk21_kronrod_weights[10];
  T gauss{};
  double abs_k = std::abs(fc) * gk21_kronrod_weights[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = h * gk21_nodes[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    const T s = f1 + f2;
    kronrod += s * gk21_kronrod_weights[j];
    abs_k += (std::abs(f1) + std::abs(f2)) * gk21_kronrod_weights[j];
    if (j % 2 == 1) gauss += s * gk21_gauss_weights[j / 2];
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h), abs_k * std::abs(h)};
}

template <class T>
struct CompensatedSum {
  T sum{};
  T carry{};
  void add(T x) {
    const T y = x - carry;
    const T t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

/// Integrates f over [a, b]. `breakpoints` (any order, values outside (a, b)
/// ignored) seed the initial partition; oscillatory integrands should pass one
/// breakpoint per half-period or so. Throws ConvergenceError with the best
/// estimate when max_subdivisions is exhausted.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec, std::span<const double> breakpoints = {})
    -> QuadratureResult<std::invoke_result_t<F&, double>> {
  using T = std::invoke_result_t<F&, double>;
  QuadratureResult<T> out;
  if (a == b) return out;
  if (!(b > a)) throw DomainError("integrate: expected a < b");

  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  long evals = 0;
  auto counted = [&](double x) -> T {
    ++evals;
    return f(x);
  };

  if (spec.method == QuadratureMethod::trapezoid) {
    detail::CompensatedSum<T> sum;
    double abs_sum = 0.0;
    const int panels = std::max(1, spec.trapezoid_panels);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double h = (cuts[s + 1] - cuts[s]) / panels;
      for (int i = 0; i <= panels; ++i) {
        const double w = (i == 0 || i == panels) ? 0.5 * h : h;
        const T v = counted(cuts[s] + i * h);
        sum.add(v * w);
        abs_sum += std::abs(v) * w;
      }
    }
    out.value = sum.sum;
    out.abs_integral = abs_sum;
    out.evaluations = evals;
    out.abs_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  std::priority_queue<detail::Panel<T>> heap;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) heap.push(detail::gk21<T>(counted, cuts[s], cuts[s + 1]));

  T total{};
  double total_err = 0.0;
  double total_abs = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      total += copy.top().value;
      total_err += copy.top().error;
      total_abs += copy.top().abs_value;
      copy.pop();
    }
  }

  int subdivisions = 0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= target || total_err <= 50.0 * eps * total_abs) break;
    if (subdivisions >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "integrate: no convergence after " << subdivisions << " subdivisions (error " << total_err
          << ", target " << target << ")";
      throw ConvergenceError(msg.str(), std::abs(total), total_err);
    }
    const detail::Panel<T> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval can no longer be split in double precision
      heap.push(worst);
      break;
    }
    const auto left = detail::gk21<T>(counted, worst.a, mid);
    const auto right = detail::gk21<T>(counted, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  // Re-sum from scratch in a fixed (positional) order so the result does not
  // carry incremental cancellation error.
  std::vector<detail::Panel<T>> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  detail::CompensatedSum<T> sum;
  out.abs_error = 0.0;
  out.abs_integral = 0.0;
  for (const auto& p : panels) {
    sum.add(p.value);
    out.abs_error += p.error;
    out.abs_integral += p.abs_value;
  }
  out.value = sum.sum;
  out.evaluations = evals;
  out.subdivisions = subdivisions;
  return out;
}

/// Limit of an alternating-type series from its partial sums by repeated
/// averaging (Euler / van Wijngaarden transform). Needs at least two sums.
template <class T>
T euler_limit(std::span<const T> partial_sums) {
  if (partial_sums.size() < 2) throw DomainError("euler_limit: need at least two partial sums");
  std::vector<T> s(partial_sums.begin(), partial_sums.end());
  while (s.size() > 1) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
    s.pop_back();
  }
  return s.front();
}

}  // namespace twinbeam
