#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fskjcr {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = true;
};

namespace detail {

// 15-point Kronrod nodes on [0, 1] (symmetric), with the embedded 7-point Gauss weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[static_cast<std::size_t>(j)];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b]:
/// the interval with the largest error estimate is bisected until the summed
/// estimate drops below abs_tol or max_intervals is reached.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10,
                                    int max_intervals = 4000) {
  struct Piece {
    double a, b, value, error;
  };
  QuadratureResult res;
  if (a == b) return res;

  std::vector<Piece> pieces;
  {
    auto [v, e] = detail::gk15(f, a, b);
    pieces.push_back({a, b, v, e});
  }
  for (;;) {
    double total = 0.0;
    double err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      total += pieces[i].value;
      err += pieces[i].error;
      if (pieces[i].error > pieces[worst].error) worst = i;
    }
    res.value = total;
    res.error = err;
    res.intervals = static_cast<int>(pieces.size());
    if (err <= abs_tol) return res;
    if (static_cast<int>(pieces.size()) >= max_intervals) {
      res.converged = false;
      return res;
    }
    const Piece p = pieces[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) {
      res.converged = false;
      return res;
    }
    auto [v1, e1] = detail::gk15(f, p.a, mid);
    auto [v2, e2] = detail::gk15(f, mid, p.b);
    pieces[worst] = {p.a, mid, v1, e1};
    pieces.push_back({mid, p.b, v2, e2});
  }
}

}  // namespace fskjcr
