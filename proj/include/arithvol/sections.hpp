#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "arithvol/norms.hpp"
#include "arithvol/theta.hpp"

namespace arithvol {

struct SectionSearchBudget {
  std::uint64_t max_nodes = 4'000'000;  // DFS steps before giving up
  std::uint64_t max_scans = 30'000;     // dense sup scans before giving up
  std::size_t max_results = 200'000;    // accepted vectors before giving up
  std::size_t max_basis = 48;           // basis size cap for the search
};

struct SmallSection {
  std::vector<long> coeff;  // coordinates in the lattice-point basis
  double sup_sq = 0;        // square of the sup norm
  bool boundary = false;    // sup_sq within 1e-6 of 1
};

struct SmallSectionList {
  long l = 0;
  std::vector<ExponentVector> basis;   // lattice points of l * Theta
  std::vector<SmallSection> sections;  // includes zero, lex order on coeff
};

namespace detail {

// Norm evaluation for integer combinations sum c_e z^e at level l, n = 1,
// in homogeneous coordinates: with beta_e(t) = t^e (1-t)^{l-e} and
// D(t) = a_0 (1-t)^2 + a_1 t^2,
//   |s|^2 exp(-l g_a) = |sum c_e beta_e(t) e^{i e psi}|^2 / D(t)^l .
// Real coefficients make psi -> -psi a symmetry, so psi ranges over
// [0, pi].  The class precomputes beta_e / D^{l/2} on a 257-radius grid.
class SupEvaluator1 {
 public:
  static constexpr int kT = 257;    // radius grid
  static constexpr int kPsi = 64;   // phase grid
  static constexpr int kStride = 8; // coarse scan uses every 8th radius

  SupEvaluator1(const CoeffVector& a, long l,
                const std::vector<ExponentVector>& basis)
      : l_(l), m_(basis.size()), av0_(to_double(a.a(0))),
        av1_(to_double(a.a(1))) {
    const double a0 = av0_, a1 = av1_;
    deg_.reserve(m_);
    for (const ExponentVector& e : basis) deg_.push_back(e.e[0]);
    w_.assign(m_, std::vector<double>(kT));
    for (std::size_t i = 0; i < m_; ++i) {
      const double e = static_cast<double>(deg_[i]);
      for (int r = 0; r < kT; ++r) {
        const double t = static_cast<double>(r) / (kT - 1);
        const double beta =
            std::pow(t, e) * std::pow(1 - t, static_cast<double>(l_) - e);
        const double den = a0 * (1 - t) * (1 - t) + a1 * t * t;
        w_[i][static_cast<std::size_t>(r)] =
            beta / std::pow(den, static_cast<double>(l_) / 2);
      }
    }
    ct_.assign(static_cast<std::size_t>(l_) + 1, std::vector<double>(kPsi));
    st_.assign(static_cast<std::size_t>(l_) + 1, std::vector<double>(kPsi));
    for (long e = 0; e <= l_; ++e)
      for (int j = 0; j < kPsi; ++j) {
        const double psi = std::numbers::pi * j / (kPsi - 1);
        ct_[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)] =
            std::cos(e * psi);
        st_[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)] =
            std::sin(e * psi);
      }
  }

  std::size_t m() const { return m_; }
  // normalized weight of basis element i at radius index r
  double weight(std::size_t i, int r) const {
    return w_[i][static_cast<std::size_t>(r)];
  }

  // amplitude bound sup <= max_t ( sum |c_e| beta_e / D^{l/2} )^2
  double amplitude_bound(const std::vector<long>& c) const {
    double best = 0;
    for (int r = 0; r < kT; ++r) {
      double amp = 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (c[i] != 0)
          amp += std::abs(static_cast<double>(c[i])) * w_[i][static_cast<std::size_t>(r)];
      best = std::max(best, amp * amp);
    }
    return best;
  }

  double value_at(const std::vector<long>& c, int r, int j) const {
    double re = 0, im = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (c[i] == 0) continue;
      const double amp = static_cast<double>(c[i]) * w_[i][static_cast<std::size_t>(r)];
      const std::size_t e = static_cast<std::size_t>(deg_[i]);
      re += amp * ct_[e][static_cast<std::size_t>(j)];
      im += amp * st_[e][static_cast<std::size_t>(j)];
    }
    return re * re + im * im;
  }

  // coarse scan; returns a value > threshold as soon as one is seen
  double coarse_max(const std::vector<long>& c, double threshold) const {
    double best = 0;
    for (int r = 0; r < kT; r += kStride)
      for (int j = 0; j < kPsi; ++j) {
        const double v = value_at(c, r, j);
        if (v > best) {
          best = v;
          if (best > threshold) return best;
        }
      }
    return best;
  }

  // dense scan plus local pattern refinement of the maximum; bails out
  // early once reject_above is exceeded
  double sup(const std::vector<long>& c, double reject_above) const {
    double best = 0;
    int bt = 0;
    double bpsi = 0;
    for (int r = 0; r < kT; ++r)
      for (int j = 0; j < kPsi; ++j) {
        const double v = value_at(c, r, j);
        if (v > best) {
          best = v;
          bt = r;
          bpsi = std::numbers::pi * j / (kPsi - 1);
          if (best > reject_above) return best;
        }
      }
    // continuous refinement around the best grid node
    double t = static_cast<double>(bt) / (kT - 1);
    double ht = 1.0 / (kT - 1), hpsi = std::numbers::pi / (kPsi - 1);
    const auto value_c = [&](double tc, double psic) {
      double re = 0, im = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (c[i] == 0) continue;
        const double e = static_cast<double>(deg_[i]);
        const double beta = std::pow(tc, e) *
                            std::pow(1 - tc, static_cast<double>(l_) - e);
        const double amp = static_cast<double>(c[i]) * beta;
        re += amp * std::cos(e * psic);
        im += amp * std::sin(e * psic);
      }
      const double den = av0_ * (1 - tc) * (1 - tc) + av1_ * tc * tc;
      return (re * re + im * im) / std::pow(den, static_cast<double>(l_));
    };
    best = value_c(t, bpsi);
    for (int it = 0; it < 60; ++it) {
      bool moved = false;
      for (const double tc : {std::max(0.0, t - ht), std::min(1.0, t + ht)})
        if (const double v = value_c(tc, bpsi); v > best) {
          best = v;
          t = tc;
          moved = true;
        }
      for (const double pc : {bpsi - hpsi, bpsi + hpsi})
        if (const double v = value_c(t, pc); v > best) {
          best = v;
          bpsi = pc;
          moved = true;
        }
      if (!moved) {
        ht /= 2;
        hpsi /= 2;
      }
      if (best > reject_above) return best;
    }
    return best;
  }

 private:
  long l_;
  std::size_t m_;
  double av0_ = 0, av1_ = 0;
  std::vector<long> deg_;
  std::vector<std::vector<double>> w_;
  std::vector<std::vector<double>> ct_, st_;  // cos/sin tables per degree
};

}  // namespace detail

// All integer combinations of the lattice-point monomials whose sup norm is
// <= 1 (within a 1e-9 acceptance band).  The search tree runs inside the
// exact L2 ellipsoid sum c^2 g_e <= 1 and prunes along the way with the
// angular mean value sum c_e^2 w_e(t)^2 <= sup^2 at sampled radii.  At the
// leaves, single monomials are decided exactly via c^2 e^e <= l^l a^e;
// mixed vectors go through an accept-by-amplitude-bound / reject-by-coarse-
// scan / dense-scan cascade.  Only n = 1 is in scope; larger searches stop
// with BudgetExceeded.
inline SmallSectionList small_sections(const CoeffVector& a, long l,
                                       const SectionSearchBudget& budget = {}) {
  if (a.n() != 1) throw WrongDimension("small_sections supports n = 1");
  if (l < 1) throw BadLevel("small_sections: level must be >= 1");
  SmallSectionList out;
  out.l = l;
  out.basis = lattice_points(ThetaRegion(a), l);
  const std::size_t m = out.basis.size();
  if (m > budget.max_basis)
    throw BudgetExceeded("small_sections: basis exceeds the search budget");
  if (m == 0) {
    out.sections.push_back({{}, 0.0, false});
    return out;
  }

  std::vector<double> gram_d(m);
  std::vector<Rational> sup_exact(m);
  for (std::size_t i = 0; i < m; ++i) {
    gram_d[i] = to_double(inner_product(a, l, out.basis[i], out.basis[i]));
    sup_exact[i] = sup_norm_sq_exact(a, l, out.basis[i]);
  }

  detail::SupEvaluator1 eval(a, l, out.basis);
  constexpr double kBand = 1e-9;
  constexpr int kT = detail::SupEvaluator1::kT;
  constexpr int kStride = detail::SupEvaluator1::kStride;
  constexpr int kR = (kT - 1) / kStride + 1;  // pruning radii

  std::vector<long> c(m, 0);
  std::vector<double> rms_acc(kR, 0.0);
  std::uint64_t nodes = 0, scans = 0;
  std::vector<SmallSection> accepted;

  const auto dense_sup = [&](double reject_above) {
    if (++scans > budget.max_scans)
      throw BudgetExceeded("small_sections: scan budget exhausted");
    return eval.sup(c, reject_above);
  };

  const auto leaf = [&]() {
    int nonzero = -1, count = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (c[i] != 0) {
        ++count;
        nonzero = static_cast<int>(i);
      }
    if (count == 0) return;
    if (count == 1) {
      const long ci = c[static_cast<std::size_t>(nonzero)];
      const Rational v =
          Rational(ci) * ci * sup_exact[static_cast<std::size_t>(nonzero)];
      if (v > 1) return;
      const double sup = to_double(v);
      accepted.push_back({c, sup, sup > 1 - 1e-6});
    } else {
      double sup;
      if (eval.amplitude_bound(c) <= 1 + kBand) {
        sup = dense_sup(2.0);  // certainly a section; measure the sup
      } else {
        if (eval.coarse_max(c, 1 + kBand) > 1 + kBand) return;
        sup = dense_sup(1 + kBand);
        if (sup > 1 + kBand) return;
      }
      accepted.push_back({c, sup, sup > 1 - 1e-6});
    }
    if (accepted.size() > budget.max_results)
      throw BudgetExceeded("small_sections: too many sections");
  };

  // DFS over coefficients; first nonzero entry is kept positive and the
  // mirror image is appended afterwards
  const auto dfs = [&](auto&& self, std::size_t pos, double used,
                       bool zero_prefix) -> void {
    if (pos == m) {
      leaf();
      return;
    }
    const double head = (1 + 1e-6 - used) / gram_d[pos];
    const long cmax =
        head > 0 ? static_cast<long>(std::floor(std::sqrt(head) + 1e-9)) : 0;
    const long cmin = zero_prefix ? 0 : -cmax;
    for (long v = cmin; v <= cmax; ++v) {
      if (++nodes > budget.max_nodes)
        throw BudgetExceeded("small_sections: node budget exhausted");
      c[pos] = v;
      if (v == 0) {
        self(self, pos + 1, used, zero_prefix);
        continue;
      }
      const double vv = static_cast<double>(v) * static_cast<double>(v);
      bool ok = true;
      for (int r = 0; r < kR; ++r) {
        const double w = eval.weight(pos, r * kStride);
        rms_acc[static_cast<std::size_t>(r)] += vv * w * w;
        if (rms_acc[static_cast<std::size_t>(r)] > 1 + 1e-6) ok = false;
      }
      if (ok) self(self, pos + 1, used + vv * gram_d[pos], false);
      for (int r = 0; r < kR; ++r) {
        const double w = eval.weight(pos, r * kStride);
        rms_acc[static_cast<std::size_t>(r)] -= vv * w * w;
      }
    }
    c[pos] = 0;
  };
  dfs(dfs, 0, 0.0, true);

  out.sections.reserve(2 * accepted.size() + 1);
  out.sections.push_back({std::vector<long>(m, 0), 0.0, false});
  for (const SmallSection& s : accepted) {
    out.sections.push_back(s);
    SmallSection neg = s;
    for (long& ci : neg.coeff) ci = -ci;
    out.sections.push_back(std::move(neg));
  }
  std::sort(out.sections.begin(), out.sections.end(),
            [](const SmallSection& x, const SmallSection& y) {
              return x.coeff < y.coeff;
            });
  return out;
}

// Whether any global section of norm <= 1 other than zero exists at level l:
// equivalent to l * Theta_a containing a lattice point.
inline bool h0_nonzero(const CoeffVector& a, long l) {
  return !lattice_points(ThetaRegion(a), l).empty();
}

// The monomial sections z^e with sup norm <= 1 at level l; they generate
// everything the lattice sees.  Throws when there are none.
inline std::vector<ExponentVector> generators(const CoeffVector& a, long l) {
  std::vector<ExponentVector> pts = lattice_points(ThetaRegion(a), l);
  if (pts.empty()) throw NoSections("no nonzero sections at this level");
  return pts;
}

enum class CountMode { Exact, Bracket };

struct EllipsoidCount {
  long l = 0;
  std::size_t m = 0;
  CountMode mode = CountMode::Bracket;
  double lower_log = 0;  // log of a count lower bound
  double upper_log = 0;  // log of a count upper bound
  BigInt count;          // exact mode only
};

namespace detail {

inline BigInt ellipsoid_count_rec(const GramMatrix& G, std::size_t pos,
                                  const Rational& used, std::uint64_t& nodes,
                                  std::uint64_t max_nodes) {
  if (pos == G.m()) return BigInt(1);
  const Rational head = (Rational(1) - used) / G.diag(pos);
  long cmax =
      static_cast<long>(std::floor(std::sqrt(std::max(0.0, to_double(head)))));
  while (Rational(cmax + 1) * (cmax + 1) <= head) ++cmax;
  while (cmax > 0 && Rational(cmax) * cmax > head) --cmax;
  BigInt total = 0;
  for (long v = -cmax; v <= cmax; ++v) {
    if (++nodes > max_nodes)
      throw BudgetExceeded("count_ellipsoid_lattice: node budget exhausted");
    total += ellipsoid_count_rec(G, pos + 1,
                                 used + Rational(v) * v * G.diag(pos), nodes,
                                 max_nodes);
  }
  return total;
}

}  // namespace detail

// Lattice points of the diagonal ellipsoid sum c_i^2 g_i <= 1.  Exact mode
// walks the tree with exact bounds (small ranks only); bracket mode returns
//   sum (1/2) log(1/g_i) + log V_m - m log 2   <=   log #
//   sum (1/2) log(1/g_i) + m log 3             >=   log #
// and the upper line requires every g_i <= 1.
inline EllipsoidCount count_ellipsoid_lattice(const GramMatrix& G,
                                              CountMode mode) {
  EllipsoidCount out;
  out.l = G.l();
  out.m = G.m();
  out.mode = mode;
  if (mode == CountMode::Exact) {
    if (G.m() > 8)
      throw ModeBudget("count_ellipsoid_lattice: exact mode needs m <= 8");
    std::uint64_t nodes = 0;
    out.count =
        detail::ellipsoid_count_rec(G, 0, Rational(0), nodes, 50'000'000);
    const double lc = static_cast<double>(log(BigFloat(out.count)));
    out.lower_log = lc;
    out.upper_log = lc;
    return out;
  }
  double s = 0;
  for (std::size_t i = 0; i < G.m(); ++i) {
    if (G.diag(i) > 1)
      throw UpperBoundInvalid(
          "count_ellipsoid_lattice: a diagonal entry exceeds 1");
    s += -0.5 * G.log_diag(i);
  }
  const double md = static_cast<double>(G.m());
  out.lower_log = s + log_ball_volume(G.m()) - md * std::log(2.0);
  out.upper_log = s + md * std::log(3.0);
  return out;
}

struct VolumeEstimateRow {
  long l = 0;
  std::size_t m = 0;
  double lower_log = 0;
  double upper_log = 0;
  double norm_lower = 0;  // (n+1)! lower_log / l^{n+1}
  double norm_upper = 0;
};

// Bracket the section count at each level and normalize by l^{n+1}/(n+1)!,
// giving a two-sided estimate sequence for the volume.
inline std::vector<VolumeEstimateRow> volume_estimate_sequence(
    const CoeffVector& a, const std::vector<long>& levels) {
  if (a.sum_vs_one() <= 0)
    throw NotBig("volume_estimate_sequence needs |a| > 1");
  std::vector<VolumeEstimateRow> rows;
  rows.reserve(levels.size());
  const double fact = to_double(Rational(factorial(a.n() + 1)));
  for (long l : levels) {
    const GramMatrix G(a, l, GramDomain::Theta);
    const EllipsoidCount c = count_ellipsoid_lattice(G, CountMode::Bracket);
    const double scale =
        fact / std::pow(static_cast<double>(l), static_cast<double>(a.n()) + 1);
    rows.push_back({l, G.m(), c.lower_log, c.upper_log, scale * c.lower_log,
                    scale * c.upper_log});
  }
  return rows;
}

}  // namespace arithvol
