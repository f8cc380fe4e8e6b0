#pragma once

// Shared test utilities: random fixtures and independent oracles used by
// both the unit suites and the acceptance runner.

#include <cmath>
#include <complex>
#include <vector>

#include "masim/beamforming.hpp"
#include "masim/channel.hpp"
#include "masim/rng.hpp"
#include "masim/types.hpp"

namespace masim::testutil {

inline Apv random_apv(int n, double a, double dmin, Rng& rng) {
  std::vector<Vec2> pts;
  while (static_cast<int>(pts.size()) < n) {
    Vec2 p{rng.uniform(-a / 2, a / 2), rng.uniform(-a / 2, a / 2)};
    bool ok = true;
    for (const auto& q : pts) ok = ok && (p - q).norm() >= dmin;
    if (ok) pts.push_back(p);
  }
  return Apv(pts, a, dmin);
}

inline Vec random_cvec(int n, Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cnormal(1.0);
  return v;
}

// Brute-force oracle for the convex subproblem with N=2, K=1:
// maximize Re{c^H w} over ||w||^2 <= p, |h1^H w| <= sqrt(gamma), where
// c = h0 (h0^H w_anchor). With one disk constraint the optimum splits over
// the orthonormal basis {h1-direction, its complement}: the objective
// separates into |c1| a + |c2| b with a = |component along h1| capped by
// sqrt(gamma)/||h1|| and a^2 + b^2 <= p, optimal phases aligned with c.
// The remaining one-dimensional concave problem is solved by a dense grid.
inline double p2i_oracle_value(const Vec& h0, const Vec& h1,
                               const Vec& w_anchor, double p, double gamma,
                               int grid = 200000) {
  const Vec c = h0 * h0.dot(w_anchor);
  const Vec e1 = h1 / h1.norm();
  Vec e2(2);
  e2 << -std::conj(e1(1)), std::conj(e1(0));  // orthonormal complement in C^2
  const double c1 = std::abs(e1.dot(c));
  const double c2 = std::abs(e2.dot(c));
  const double a_hi = std::min(std::sqrt(gamma) / h1.norm(), std::sqrt(p));
  double best = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double a = a_hi * i / grid;
    const double b = std::sqrt(std::max(0.0, p - a * a));
    best = std::max(best, c1 * a + c2 * b);
  }
  return best;
}

// Objective used by the subproblem: the linearized surrogate Re{c^H w}.
inline double surrogate_value(const Vec& h0, const Vec& w_anchor,
                              const Vec& w) {
  const Vec c = h0 * h0.dot(w_anchor);
  return c.dot(w).real();
}

}  // namespace masim::testutil
