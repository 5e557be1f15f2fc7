#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "arithvol/characteristic.hpp"
#include "arithvol/norms.hpp"
#include "arithvol/theta.hpp"
#include "arithvol/volume.hpp"

namespace arithvol {

namespace detail {

inline Rational exact_of(double v) { return Rational(v); }

// 2-D orientation of exact points: > 0 when (a, b, c) is counterclockwise
inline Rational orient2(const std::pair<Rational, Rational>& a,
                        const std::pair<Rational, Rational>& b,
                        const std::pair<Rational, Rational>& c) {
  return (b.first - a.first) * (c.second - a.second) -
         (b.second - a.second) * (c.first - a.first);
}

// Piecewise-linear concave envelope over the convex hull of the input
// points, built from exact rational coordinates (float input promoted to
// its exact dyadic value).  n = 1 keeps the upper concave chain; n = 2
// keeps the upper-hull facets of the lifted points, computed by an
// advancing front with exact orientation tests.  Ties in the lifted
// direction are broken by a symbolic perturbation of the values,
// eps_0 >> eps_1 >> ..., which yields one deterministic triangulation of
// flat patches.
class EnvelopeModel {
 public:
  EnvelopeModel(const std::vector<SimplexPoint>& pts,
                const std::vector<double>& vals) {
    if (pts.empty() || pts.size() != vals.size())
      throw WrongDimension("envelope: points and values must match");
    n_ = pts[0].n();
    if (n_ < 1 || n_ > 2) throw WrongDimension("envelope supports n <= 2");
    for (const SimplexPoint& p : pts)
      if (p.n() != n_) throw WrongDimension("envelope: mixed dimensions");
    xs_.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const SimplexPoint& p = pts[i];
      xs_.emplace_back(p.exact() ? p.xq(0) : exact_of(p.x(0)),
                       n_ == 2 ? (p.exact() ? p.xq(1) : exact_of(p.x(1)))
                               : Rational(0));
      vq_.push_back(exact_of(vals[i]));
      vd_.push_back(vals[i]);
    }
    if (n_ == 1)
      build_chain();
    else
      build_facets();
  }

  int n() const { return n_; }
  const std::vector<std::size_t>& chain() const { return chain_; }
  const std::vector<std::array<std::size_t, 3>>& facets() const {
    return facets_;
  }
  bool degenerate() const { return degenerate_; }

  // value and barycentric support weights at x; OutsideHull when x is not
  // in the convex hull of the base points
  std::pair<double, std::vector<std::pair<std::size_t, Rational>>> eval(
      const SimplexPoint& x) const {
    if (x.n() != n_) throw WrongDimension("envelope eval: dimension mismatch");
    const std::pair<Rational, Rational> q{
        x.exact() ? x.xq(0) : exact_of(x.x(0)),
        n_ == 2 ? (x.exact() ? x.xq(1) : exact_of(x.x(1))) : Rational(0)};
    if (n_ == 1) return eval_chain(q.first);
    return eval_facets(q);
  }

  // integral of the envelope over the hull, before the (n+1)!/2 scale
  double raw_integral() const {
    if (degenerate_) throw DegenerateHull("envelope: hull has no volume");
    double total = 0;
    if (n_ == 1) {
      for (std::size_t k = 0; k + 1 < chain_.size(); ++k) {
        const std::size_t i = chain_[k], j = chain_[k + 1];
        total += to_double(xs_[j].first - xs_[i].first) * 0.5 *
                 (vd_[i] + vd_[j]);
      }
    } else {
      for (const auto& f : facets_) {
        const Rational area2 =
            orient2(xs_[f[0]], xs_[f[1]], xs_[f[2]]);
        total += to_double(area2) / 2 * (vd_[f[0]] + vd_[f[1]] + vd_[f[2]]) / 3;
      }
    }
    return total;
  }

 private:
  using Pt = std::pair<Rational, Rational>;

  void build_chain() {
    std::vector<std::size_t> order(xs_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      if (xs_[i].first != xs_[j].first) return xs_[i].first < xs_[j].first;
      if (vq_[i] != vq_[j]) return vq_[i] > vq_[j];
      return i < j;
    });
    // keep only the highest value per x
    std::vector<std::size_t> distinct;
    for (std::size_t i : order)
      if (distinct.empty() || xs_[distinct.back()].first != xs_[i].first)
        distinct.push_back(i);
    if (distinct.size() < 2) {
      degenerate_ = true;
      chain_ = std::move(distinct);
      return;
    }
    for (std::size_t i : distinct) {
      while (chain_.size() >= 2) {
        const Pt a{xs_[chain_[chain_.size() - 2]].first,
                   vq_[chain_[chain_.size() - 2]]};
        const Pt b{xs_[chain_.back()].first, vq_[chain_.back()]};
        const Pt c{xs_[i].first, vq_[i]};
        if (orient2(a, b, c) >= 0)
          chain_.pop_back();
        else
          break;
      }
      chain_.push_back(i);
    }
  }

  std::pair<double, std::vector<std::pair<std::size_t, Rational>>> eval_chain(
      const Rational& x) const {
    if (chain_.empty()) throw DegenerateHull("envelope: no points");
    if (degenerate_) {
      if (x == xs_[chain_[0]].first)
        return {vd_[chain_[0]], {{chain_[0], Rational(1)}}};
      throw OutsideHull("envelope eval: x outside the hull");
    }
    if (x < xs_[chain_.front()].first || x > xs_[chain_.back()].first)
      throw OutsideHull("envelope eval: x outside the hull");
    std::size_t lo = 0, hi = chain_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (xs_[chain_[mid]].first <= x)
        lo = mid;
      else
        hi = mid;
    }
    const std::size_t i = chain_[lo], j = chain_[hi];
    const Rational width = xs_[j].first - xs_[i].first;
    const Rational lam = (xs_[j].first - x) / width;  // weight on i
    const double value = to_double(lam) * vd_[i] + to_double(1 - lam) * vd_[j];
    std::vector<std::pair<std::size_t, Rational>> sup;
    if (lam > 0) sup.emplace_back(i, lam);
    if (lam < 1) sup.emplace_back(j, 1 - lam);
    return {value, std::move(sup)};
  }

  // sign of "d lies above the plane through a, b, c" for the lifted points,
  // with the symbolic value perturbation breaking exact coplanarity
  int lifted_above(std::size_t a, std::size_t b, std::size_t c,
                   std::size_t d) const {
    const Rational m_acd = orient2(xs_[a], xs_[c], xs_[d]);
    const Rational m_abd = orient2(xs_[a], xs_[b], xs_[d]);
    const Rational m_abc = orient2(xs_[a], xs_[b], xs_[c]);
    const Rational det = (vq_[b] - vq_[a]) * m_acd - (vq_[c] - vq_[a]) * m_abd +
                         (vq_[d] - vq_[a]) * m_abc;
    if (det != 0) return det > 0 ? 1 : -1;
    const Rational m_bcd = m_acd - m_abd + m_abc;  // orient2(b, c, d)
    const std::array<std::pair<std::size_t, Rational>, 4> coef{
        {{a, -m_bcd}, {b, m_acd}, {c, -m_abd}, {d, m_abc}}};
    std::array<int, 4> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int u, int v) {
      return coef[static_cast<std::size_t>(u)].first <
             coef[static_cast<std::size_t>(v)].first;
    });
    for (int k : idx) {
      const Rational& kc = coef[static_cast<std::size_t>(k)].second;
      if (kc != 0) return kc > 0 ? 1 : -1;
    }
    return 0;
  }

  void build_facets() {
    const std::size_t r = xs_.size();
    // drop duplicate base points, keeping the larger value
    std::map<Pt, std::size_t> rep;
    for (std::size_t i = 0; i < r; ++i) {
      auto [it, fresh] = rep.try_emplace(xs_[i], i);
      if (!fresh && vq_[i] > vq_[it->second]) it->second = i;
    }
    std::vector<std::size_t> live;
    live.reserve(rep.size());
    for (const auto& [pt, i] : rep) live.push_back(i);

    // base hull, counterclockwise (monotone chain; map order is lex already)
    std::vector<std::size_t> hull;
    if (live.size() >= 3) {
      std::vector<std::size_t> lower, upper;
      for (std::size_t i : live) {
        while (lower.size() >= 2 &&
               orient2(xs_[lower[lower.size() - 2]], xs_[lower.back()],
                       xs_[i]) <= 0)
          lower.pop_back();
        lower.push_back(i);
      }
      for (auto it = live.rbegin(); it != live.rend(); ++it) {
        while (upper.size() >= 2 &&
               orient2(xs_[upper[upper.size() - 2]], xs_[upper.back()],
                       xs_[*it]) <= 0)
          upper.pop_back();
        upper.push_back(*it);
      }
      hull = std::move(lower);
      hull.insert(hull.end(), upper.begin() + 1, upper.end() - 1);
    }
    if (hull.size() < 3) {
      degenerate_ = true;
      return;
    }

    // seed: refine every hull edge into its 1-D upper chain along the edge
    std::set<std::pair<std::size_t, std::size_t>> done;
    std::deque<std::pair<std::size_t, std::size_t>> queue;
    for (std::size_t k = 0; k < hull.size(); ++k) {
      const std::size_t u = hull[k], v = hull[(k + 1) % hull.size()];
      std::vector<std::size_t> on_edge;
      for (std::size_t i : live) {
        if (i == u || i == v) continue;
        if (orient2(xs_[u], xs_[v], xs_[i]) != 0) continue;
        // between u and v?
        const Rational dx = xs_[v].first - xs_[u].first;
        const Rational dy = xs_[v].second - xs_[u].second;
        const Rational t = (xs_[i].first - xs_[u].first) * dx +
                           (xs_[i].second - xs_[u].second) * dy;
        if (t > 0 && t < dx * dx + dy * dy) on_edge.push_back(i);
      }
      // 1-D upper chain over (t, value) from u to v
      const Rational dx = xs_[v].first - xs_[u].first;
      const Rational dy = xs_[v].second - xs_[u].second;
      const auto param = [&](std::size_t i) {
        return (xs_[i].first - xs_[u].first) * dx +
               (xs_[i].second - xs_[u].second) * dy;
      };
      std::sort(on_edge.begin(), on_edge.end(),
                [&](std::size_t i, std::size_t j) { return param(i) < param(j); });
      std::vector<std::size_t> chain{u};
      for (std::size_t i : on_edge) {
        while (chain.size() >= 2) {
          const Pt a{param(chain[chain.size() - 2]), vq_[chain[chain.size() - 2]]};
          const Pt b{param(chain.back()), vq_[chain.back()]};
          const Pt c{param(i), vq_[i]};
          if (orient2(a, b, c) >= 0)
            chain.pop_back();
          else
            break;
        }
        chain.push_back(i);
      }
      while (chain.size() >= 2) {
        const Pt a{param(chain[chain.size() - 2]), vq_[chain[chain.size() - 2]]};
        const Pt b{param(chain.back()), vq_[chain.back()]};
        const Pt c{param(v), vq_[v]};
        if (orient2(a, b, c) >= 0)
          chain.pop_back();
        else
          break;
      }
      chain.push_back(v);
      for (std::size_t k2 = 0; k2 + 1 < chain.size(); ++k2) {
        queue.emplace_back(chain[k2], chain[k2 + 1]);
        done.insert({chain[k2 + 1], chain[k2]});  // nothing outside the hull
      }
    }

    // advancing front: find the facet left of each directed edge
    while (!queue.empty()) {
      const auto [u, v] = queue.front();
      queue.pop_front();
      if (done.count({u, v})) continue;
      std::size_t best = r;
      for (std::size_t i : live) {
        if (i == u || i == v) continue;
        if (orient2(xs_[u], xs_[v], xs_[i]) <= 0) continue;
        if (best == r || lifted_above(u, v, best, i) > 0) best = i;
      }
      if (best == r)
        throw DegenerateHull("envelope: advancing front found no apex");
      std::array<std::size_t, 3> f{u, v, best};
      std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
      facets_.push_back(f);
      done.insert({u, v});
      done.insert({v, best});
      done.insert({best, u});
      queue.emplace_back(best, v);
      queue.emplace_back(u, best);
    }
    std::sort(facets_.begin(), facets_.end());
    facets_.erase(std::unique(facets_.begin(), facets_.end()), facets_.end());
  }

  std::pair<double, std::vector<std::pair<std::size_t, Rational>>> eval_facets(
      const Pt& q) const {
    if (degenerate_) throw DegenerateHull("envelope: hull has no area");
    for (const auto& f : facets_) {
      const Rational area = orient2(xs_[f[0]], xs_[f[1]], xs_[f[2]]);
      const Rational l0 = orient2(q, xs_[f[1]], xs_[f[2]]);
      const Rational l1 = orient2(xs_[f[0]], q, xs_[f[2]]);
      const Rational l2 = orient2(xs_[f[0]], xs_[f[1]], q);
      if (l0 < 0 || l1 < 0 || l2 < 0) continue;
      const Rational w0 = l0 / area, w1 = l1 / area, w2 = l2 / area;
      const double value = to_double(w0) * vd_[f[0]] + to_double(w1) * vd_[f[1]] +
                           to_double(w2) * vd_[f[2]];
      std::vector<std::pair<std::size_t, Rational>> sup;
      if (w0 > 0) sup.emplace_back(f[0], w0);
      if (w1 > 0) sup.emplace_back(f[1], w1);
      if (w2 > 0) sup.emplace_back(f[2], w2);
      return {value, std::move(sup)};
    }
    throw OutsideHull("envelope eval: point outside the hull");
  }

  int n_ = 1;
  std::vector<Pt> xs_;
  std::vector<Rational> vq_;
  std::vector<double> vd_;
  std::vector<std::size_t> chain_;
  std::vector<std::array<std::size_t, 3>> facets_;
  bool degenerate_ = false;
};

}  // namespace detail

// Envelope value at x for explicit (point, value) pairs.
inline double envelope_eval(const std::vector<SimplexPoint>& points,
                            const std::vector<double>& values,
                            const SimplexPoint& x) {
  return detail::EnvelopeModel(points, values).eval(x).first;
}

// ((n+1)!/2) * integral of the envelope of explicit values over the hull.
inline double envelope_integral(const std::vector<SimplexPoint>& points,
                                const std::vector<double>& values) {
  if (points.empty()) throw WrongDimension("envelope_integral: no points");
  const detail::EnvelopeModel model(points, values);
  double scale = 1;
  for (int i = 2; i <= points[0].n() + 1; ++i) scale *= i;
  return scale / 2 * model.raw_integral();
}

// Same, with the values taken from phi_tilde at the points.
inline double envelope_integral(const CoeffVector& a,
                                const std::vector<SimplexPoint>& points) {
  std::vector<double> values;
  values.reserve(points.size());
  for (const SimplexPoint& p : points) values.push_back(phi_tilde(a, p));
  return envelope_integral(points, values);
}

struct EnvelopeCert {
  CoeffVector a;
  double epsilon = 0;  // requested gap
  long q = 0;          // final grid denominator
  std::vector<SimplexPoint> points;
  std::vector<double> values;
  std::vector<std::vector<std::size_t>> facets;  // segments or triangles
  double integral = 0;
  double vol = 0;
  double gap = 0;  // vol - integral, the achieved gap
  std::vector<std::pair<long, double>> trace;  // (q, integral) per step
};

// Certificate loop: double the interior grid denominator until the
// envelope integral comes within epsilon of the volume.
inline EnvelopeCert approximate(const CoeffVector& a, double epsilon) {
  if (a.sum_vs_one() <= 0) throw NotBig("approximate needs |a| > 1");
  if (!(epsilon > 0)) throw DomainError("approximate: epsilon must be > 0");
  if (a.n() > 2) throw WrongDimension("approximate supports n <= 2");
  // the reference volume only has to resolve the epsilon comparison; the
  // planar quadrature gets expensive well before 1e-9
  const double vol =
      vol_hat(a, a.n() == 1 ? std::min(1e-9, epsilon / 100) : epsilon / 100);
  const ThetaRegion T(a);
  EnvelopeCert cert{a};
  cert.epsilon = epsilon;
  cert.vol = vol;
  for (long q = 4; q <= (1L << 14); q *= 2) {
    std::vector<SimplexPoint> pts = interior_rational_points(T, q);
    if (pts.size() < static_cast<std::size_t>(a.n()) + 1) continue;
    std::vector<double> vals;
    vals.reserve(pts.size());
    for (const SimplexPoint& p : pts) vals.push_back(phi_tilde(a, p));
    double integral;
    try {
      const detail::EnvelopeModel model(pts, vals);
      double scale = 1;
      for (int i = 2; i <= a.n() + 1; ++i) scale *= i;
      integral = scale / 2 * model.raw_integral();
      cert.trace.emplace_back(q, integral);
      if (integral > vol - epsilon) {
        cert.q = q;
        cert.points = std::move(pts);
        cert.values = std::move(vals);
        cert.integral = integral;
        cert.gap = vol - integral;
        if (a.n() == 1) {
          const std::vector<std::size_t>& ch = model.chain();
          for (std::size_t k = 0; k + 1 < ch.size(); ++k)
            cert.facets.push_back({ch[k], ch[k + 1]});
        } else {
          for (const auto& f : model.facets())
            cert.facets.push_back({f[0], f[1], f[2]});
        }
        return cert;
      }
    } catch (const DegenerateHull&) {
      continue;  // too few independent points at this resolution yet
    }
  }
  throw ResolutionExceeded("approximate: grid cap reached without certificate");
}

// Largest dyadic delta = 2^{-k}, k <= 40, such that (a) every point stays
// strictly inside the shrunk region: phi_tilde(x_i) - delta > 0, and
// (b) the envelope of the shifted values phi_tilde - delta still beats
// vol_hat - epsilon.
inline double select_delta(const CoeffVector& a,
                           const std::vector<SimplexPoint>& points,
                           double epsilon) {
  if (points.empty()) throw WrongDimension("select_delta: no points");
  if (!(epsilon > 0)) throw DomainError("select_delta: epsilon must be > 0");
  std::vector<double> vals;
  vals.reserve(points.size());
  double vmin = 1e300;
  for (const SimplexPoint& p : points) {
    vals.push_back(phi_tilde(a, p));
    vmin = std::min(vmin, vals.back());
  }
  const double vol = vol_hat(a, a.n() == 1 ? 1e-9 : epsilon / 100);
  for (int k = 0; k <= 40; ++k) {
    const double delta = std::ldexp(1.0, -k);
    if (!(vmin - delta > 0)) continue;
    std::vector<double> shifted(vals);
    for (double& v : shifted) v -= delta;
    double integral;
    try {
      integral = envelope_integral(points, shifted);
    } catch (const DegenerateHull&) {
      throw NoFeasibleDelta("select_delta: degenerate point set");
    }
    if (integral > vol - epsilon) return delta;
  }
  throw NoFeasibleDelta("select_delta: no dyadic delta satisfies (a) and (b)");
}

// Scalar shadow of the section norm bound: at x = e/l inside the hull with
// support weights lambda, both
//   LHS = -l * sum lambda_i phi_i     (envelope exponent)
//   RHS = sum lambda_i (l/l0) log sup_norm_sq(a, l0, l0 x_i)
// collapse to the same number; verify they agree within 1e-9.
inline bool envelope_norm_bound_check(const CoeffVector& a,
                                      const std::vector<SimplexPoint>& points,
                                      long l, const ExponentVector& e) {
  if (points.empty()) throw WrongDimension("norm bound check: no points");
  BigInt l0 = 1;
  for (const SimplexPoint& p : points) {
    if (!p.exact())
      throw DomainError("norm bound check: points must be exact rationals");
    for (int i = 0; i < p.n(); ++i)
      l0 = boost::multiprecision::lcm(
          l0, boost::multiprecision::denominator(p.xq(i)));
  }
  if (l < 1 || l0 > l || BigInt(l) % l0 != 0)
    throw BadLevel("norm bound check: l must be a positive multiple of l0");
  const long l0l = l0.convert_to<long>();

  std::vector<double> vals;
  vals.reserve(points.size());
  for (const SimplexPoint& p : points) vals.push_back(phi_tilde(a, p));
  const detail::EnvelopeModel model(points, vals);
  std::vector<Rational> xq;
  xq.reserve(static_cast<std::size_t>(e.n()));
  for (long ei : e.e) xq.emplace_back(ei, l);
  const auto [env, support] = model.eval(SimplexPoint(std::move(xq)));
  const double lhs_log = -static_cast<double>(l) * env;

  double rhs_log = 0;
  for (const auto& [idx, lam] : support) {
    std::vector<long> scaled(static_cast<std::size_t>(points[idx].n()));
    for (int i = 0; i < points[idx].n(); ++i) {
      const Rational ki = points[idx].xq(i) * l0;
      scaled[static_cast<std::size_t>(i)] =
          boost::multiprecision::numerator(ki).convert_to<long>();
    }
    const double log_sup =
        std::log(sup_norm_sq(a, l0l, ExponentVector(std::move(scaled))));
    rhs_log += to_double(lam) * (static_cast<double>(l) / static_cast<double>(l0l)) * log_sup;
  }
  return std::abs(lhs_log - rhs_log) <= 1e-9 * std::max(1.0, std::abs(lhs_log));
}

}  // namespace arithvol
