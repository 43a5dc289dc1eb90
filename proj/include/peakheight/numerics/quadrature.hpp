#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace peakheight::numerics {

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  /// Infinite Gaussian-weighted domains are cut at this many standard
  /// deviations; the neglected mass is below 1e-22 at the default.
  double truncation_radius = 10.0;
  int max_subdivisions = 2000;

  /// Throws std::invalid_argument naming the violated bound.
  void validate() const;
  /// Same config with both tolerances multiplied by `factor`.
  QuadConfig scaled(double factor) const;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int n_intervals = 0;
  bool converged = false;

  /// Returns value, or throws QuadratureError carrying the achieved error.
  double value_or_throw(const std::string& context) const;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& context, const QuadResult& result);
  const QuadResult& result() const { return result_; }

 private:
  QuadResult result_;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// xgk[1], xgk[3], xgk[5] are the Gauss abscissae; xgk[7] = 0.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

// One G7/K15 pass with the QUADPACK error heuristic.
template <class F>
Panel gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, value, err};
}

// Globally adaptive bisection starting from the partition `breaks`
// (strictly increasing, finite). Always splits the panel with the largest
// error estimate; ties resolve by position, so the result is a pure
// function of (f, breaks, cfg).
template <class F>
QuadResult adaptive(F& f, std::span<const double> breaks, const QuadConfig& cfg) {
  auto worse = [](const Panel& x, const Panel& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  };
  std::vector<Panel> heap;
  heap.reserve(static_cast<std::size_t>(cfg.max_subdivisions) + breaks.size());
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    heap.push_back(gk15(f, breaks[i], breaks[i + 1]));
    total += heap.back().value;
    total_err += heap.back().error;
  }
  std::make_heap(heap.begin(), heap.end(), worse);
  int n = static_cast<int>(heap.size());
  std::vector<Panel> frozen;  // panels too narrow to bisect further
  while (!heap.empty()) {
    if (total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
      return {total, total_err, n, true};
    }
    if (n >= cfg.max_subdivisions) break;
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
    ++n;
  }
  // Recompute sums from panels to shed accumulated update roundoff.
  total = 0.0;
  total_err = 0.0;
  for (const auto& p : heap) {
    total += p.value;
    total_err += p.error;
  }
  for (const auto& p : frozen) {
    total += p.value;
    total_err += p.error;
  }
  const bool ok = total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
  return {total, total_err, n, ok};
}

}  // namespace detail

/// Adaptive G7/K15 quadrature of f over [lo, hi]. Infinite limits use the
/// transform x = a + (1 - s)/s on s in (0, 1] (and its mirror), with the
/// doubly infinite case folded onto [0, inf).
template <class F>
QuadResult integrate(F&& f, double lo, double hi, const QuadConfig& cfg) {
  cfg.validate();
  if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("integrate: NaN limit");
  if (lo == hi) return {0.0, 0.0, 0, true};
  if (lo > hi) {
    QuadResult r = integrate(f, hi, lo, cfg);
    r.value = -r.value;
    return r;
  }
  const double unit[2] = {0.0, 1.0};
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) {
    const double ab[2] = {lo, hi};
    return detail::adaptive(f, ab, cfg);
  }
  if (lo_inf && hi_inf) {
    auto g = [&f](double s) {
      const double x = (1.0 - s) / s;
      return (f(x) + f(-x)) / (s * s);
    };
    return detail::adaptive(g, unit, cfg);
  }
  if (hi_inf) {
    auto g = [&f, lo](double s) { return f(lo + (1.0 - s) / s) / (s * s); };
    return detail::adaptive(g, unit, cfg);
  }
  auto g = [&f, hi](double s) { return f(hi - (1.0 - s) / s) / (s * s); };
  return detail::adaptive(g, unit, cfg);
}

/// Finite-interval quadrature with user breakpoints (kinks, support edges).
template <class F>
QuadResult integrate_with_breaks(F&& f, std::span<const double> breaks, const QuadConfig& cfg) {
  cfg.validate();
  return detail::adaptive(f, breaks, cfg);
}

/// Type-erased entry point.
QuadResult integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                        const QuadConfig& cfg = {});

}  // namespace peakheight::numerics
