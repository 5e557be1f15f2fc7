#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "arithvol/errors.hpp"

namespace arithvol {

struct QuadratureResult {
  double value = 0;
  double error = 0;  // accumulated local error estimates
  std::size_t panels = 0;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1].
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(F& f, double lo, double hi, double& kronrod, double& err) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double fk = 0, fg = 0;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGK15Nodes[i];
    const double fv = f(c - dx) + f(c + dx);
    fk += kGK15WeightsK[i] * fv;
    if (i % 2 == 1) fg += kGK15WeightsG[i / 2] * fv;
  }
  const double fc = f(c);
  fk += kGK15WeightsK[7] * fc;
  fg += kGK15WeightsG[3] * fc;
  kronrod = h * fk;
  err = std::abs(kronrod - h * fg);
}

}  // namespace detail

// Adaptive bisection with a Gauss-Kronrod 15(7) panel rule.  abs_tol is
// divided across subintervals in proportion to their length.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, double abs_tol,
                           std::size_t max_panels = 400000) {
  if (!(hi >= lo)) throw DomainError("integrate: inverted interval");
  QuadratureResult out;
  if (hi == lo) return out;
  const double total = hi - lo;
  struct Panel {
    double lo, hi;
  };
  std::vector<Panel> stack{{lo, hi}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    if (++out.panels > max_panels)
      throw QuadratureNotConverged("integrate: panel budget exhausted");
    double k, e;
    detail::gk15(f, p.lo, p.hi, k, e);
    const double width = p.hi - p.lo;
    const double local_tol = abs_tol * (width / total);
    const double mid = 0.5 * (p.lo + p.hi);
    if (e <= local_tol || !(mid > p.lo && mid < p.hi)) {
      out.value += k;
      out.error += e;
    } else {
      stack.push_back({p.lo, mid});
      stack.push_back({mid, p.hi});
    }
  }
  return out;
}

}  // namespace arithvol
