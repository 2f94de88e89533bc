#pragma once

#include <cmath>
#include <utility>

#include "randrho/errors.hpp"

namespace randrho {

// 7-15 Gauss-Kronrod pair on [-1, 1].
namespace gk {

inline constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss weights attach to the odd Kronrod nodes (indices 1, 3, 5, 7).
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

}  // namespace gk

struct QuadPanel {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
QuadPanel gauss_kronrod_15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * gk::kNodes[i];
    const double fsum =
        (i == 7) ? f(mid) : f(mid - dx) + f(mid + dx);
    kron += gk::kWeights[i] * fsum;
    if (i % 2 == 1) gauss += gk::kGaussWeights[i / 2] * fsum;
  }
  QuadPanel panel;
  panel.value = kron * half;
  panel.error = std::abs((kron - gauss) * half);
  return panel;
}

// Adaptive bisection; a panel is accepted once its Gauss/Kronrod discrepancy
// drops below abs_tol.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10,
                          int max_depth = 48) {
  if (!(b > a)) return 0.0;
  struct Segment {
    double a, b;
    int depth;
  };
  double total = 0.0;
  Segment stack[256];
  int top = 0;
  stack[top++] = {a, b, 0};
  while (top > 0) {
    const Segment seg = stack[--top];
    const QuadPanel panel = gauss_kronrod_15(f, seg.a, seg.b);
    if (panel.error < abs_tol || seg.depth >= max_depth) {
      total += panel.value;
      continue;
    }
    if (top + 2 > 256)
      throw numeric_error("integrate_adaptive: subdivision stack overflow");
    const double mid = 0.5 * (seg.a + seg.b);
    stack[top++] = {seg.a, mid, seg.depth + 1};
    stack[top++] = {mid, seg.b, seg.depth + 1};
  }
  return total;
}

// Integral of f over [lo, x] where f may behave like (t - lo)^(-alpha) near
// lo; substituting t = lo + u^(1/(1-alpha)) removes the singularity.  Also
// handles the benign alpha = 0 case (plain adaptive integration).
template <class F>
double integrate_from_singular_lo(F&& f, double lo, double x, double alpha,
                                  double abs_tol = 1e-11) {
  if (!(x > lo)) return 0.0;
  if (alpha <= 0.0) return integrate_adaptive(f, lo, x, abs_tol);
  const double p = 1.0 - alpha;  // u = (t-lo)^p
  const double inv_p = 1.0 / p;
  auto g = [&](double u) {
    const double t = lo + std::pow(u, inv_p);
    return f(t) * inv_p * std::pow(u, inv_p - 1.0);
  };
  return integrate_adaptive(g, 0.0, std::pow(x - lo, p), abs_tol);
}

// Integral of f over [x, hi] with square-root behavior at hi (either a
// (hi-t)^(-1/2) divergence or a (hi-t)^(1/2) branch point); u = sqrt(hi - t).
template <class F>
double integrate_to_sqrt_hi(F&& f, double x, double hi,
                            double abs_tol = 1e-11) {
  if (!(hi > x)) return 0.0;
  auto g = [&](double u) { return f(hi - u * u) * 2.0 * u; };
  return integrate_adaptive(g, 0.0, std::sqrt(hi - x), abs_tol);
}

// Full-support integral with a power singularity at lo and square-root
// behavior at hi, split at the midpoint.
template <class F>
double integrate_support(F&& f, double lo, double hi, double alpha_lo,
                         double abs_tol = 1e-11) {
  const double mid = 0.5 * (lo + hi);
  return integrate_from_singular_lo(f, lo, mid, alpha_lo, abs_tol) +
         integrate_to_sqrt_hi(f, mid, hi, abs_tol);
}

}  // namespace randrho
