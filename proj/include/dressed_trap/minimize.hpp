#pragma once

// Derivative-free minimizers: Nelder-Mead simplex for N dimensions and
// golden-section search for one.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace dressed_trap {

struct NelderMeadOptions {
  double initial_scale = 1.0;    // simplex edge, same units as x
  double x_tolerance = 1e-4;     // simplex diameter
  double f_tolerance = 1e-9;     // (f_max - f_min) relative to |f_min|
  int max_iterations = 2000;
};

template <std::size_t N>
struct NelderMeadResult {
  std::array<double, N> x{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& f, const std::array<double, N>& start,
                                const NelderMeadOptions& opt = {}) {
  using Point = std::array<double, N>;
  constexpr double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;

  std::array<Point, N + 1> p;
  std::array<double, N + 1> fv;
  p[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    p[i + 1] = start;
    p[i + 1][i] += opt.initial_scale;
  }
  for (std::size_t i = 0; i <= N; ++i) fv[i] = f(p[i]);

  auto along = [](const Point& from, const Point& to, double s) {
    Point r;
    for (std::size_t k = 0; k < N; ++k) r[k] = from[k] + s * (to[k] - from[k]);
    return r;
  };

  NelderMeadResult<N> res;
  for (int it = 0;; ++it) {
    std::array<std::size_t, N + 1> order;
    for (std::size_t i = 0; i <= N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    {
      std::array<Point, N + 1> sp;
      std::array<double, N + 1> sf;
      for (std::size_t i = 0; i <= N; ++i) {
        sp[i] = p[order[i]];
        sf[i] = fv[order[i]];
      }
      p = sp;
      fv = sf;
    }

    double diameter = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < N; ++k) d2 += (p[i][k] - p[0][k]) * (p[i][k] - p[0][k]);
      diameter = std::max(diameter, std::sqrt(d2));
    }
    const double spread = fv[N] - fv[0];
    const double scale = std::abs(fv[0]) > 0.0 ? std::abs(fv[0]) : 1.0;

    res.iterations = it;
    if (diameter < opt.x_tolerance && spread <= opt.f_tolerance * scale) {
      res.converged = true;
      break;
    }
    if (it >= opt.max_iterations) break;

    Point centroid{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) centroid[k] += p[i][k] / static_cast<double>(N);

    const Point xr = along(centroid, p[N], -reflect);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const Point xe = along(centroid, p[N], -expand);
      const double fe = f(xe);
      if (fe < fr) {
        p[N] = xe;
        fv[N] = fe;
      } else {
        p[N] = xr;
        fv[N] = fr;
      }
      continue;
    }
    if (fr < fv[N - 1]) {
      p[N] = xr;
      fv[N] = fr;
      continue;
    }
    // Outside contraction when the reflection improved on the worst point.
    const bool outside = fr < fv[N];
    const Point xc = outside ? along(centroid, xr, contract) : along(centroid, p[N], contract);
    const double fc = f(xc);
    if (fc < (outside ? fr : fv[N])) {
      p[N] = xc;
      fv[N] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= N; ++i) {
      p[i] = along(p[0], p[i], shrink);
      fv[i] = f(p[i]);
    }
  }
  res.x = p[0];
  res.value = fv[0];
  return res;
}

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
};

/// Minimum of a unimodal f on [a, b], bracket width reduced below `tolerance`.
template <class F>
GoldenResult golden_section(F&& f, double a, double b, double tolerance) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 500 && std::abs(b - a) > tolerance; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

}  // namespace dressed_trap
