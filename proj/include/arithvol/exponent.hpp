#pragma once

#include <compare>
#include <numeric>
#include <vector>

#include "arithvol/errors.hpp"

namespace arithvol {

// Monomial exponent vector (e_1, ..., e_n), entries >= 0.  lifted(l)
// prepends e_0 = l - |e|, turning it into a composition of the level l.
struct ExponentVector {
  std::vector<long> e;

  ExponentVector() = default;
  explicit ExponentVector(std::vector<long> v) : e(std::move(v)) {
    for (long ei : e)
      if (ei < 0) throw BadExponent("negative exponent");
  }

  int n() const { return static_cast<int>(e.size()); }
  long sum() const { return std::accumulate(e.begin(), e.end(), 0L); }

  std::vector<long> lifted(long l) const {
    const long s = sum();
    if (s > l) throw BadExponent("degree exceeds level");
    std::vector<long> k;
    k.reserve(e.size() + 1);
    k.push_back(l - s);
    k.insert(k.end(), e.begin(), e.end());
    return k;
  }

  auto operator<=>(const ExponentVector&) const = default;
};

}  // namespace arithvol
