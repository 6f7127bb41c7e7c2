#pragma once

#include <functional>

#include "rational.hpp"

namespace evalpres::exact {

// Requested absolute error bound 2^-k.
struct Precision {
  long k = 0;

  explicit Precision(long kk) : k(kk) {}
  Rational eps() const { return pow2(-k); }

  Precision operator+(long d) const { return Precision(k + d); }
  friend bool operator==(Precision a, Precision b) { return a.k == b.k; }
  friend bool operator<(Precision a, Precision b) { return a.k < b.k; }
};

// Closed rational interval; houses the strict two-sided bounds of diagrams.
struct Interval {
  Rational lo;
  Rational hi;

  Interval(Rational l, Rational h);
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool intersects(const Interval& other) const { return lo <= other.hi && other.lo <= hi; }

  // Interval around an oracle answer q at precision k.
  static Interval around(const Rational& q, Precision k);
};

// A complex disk certified to contain its target: any z with
// |z - value| <= radius.  The radius is an exact rational, so worst-case
// error propagation introduces no rounding of its own.
struct Approximation {
  GaussianRational value;
  Rational radius;

  Approximation() : radius(0) {}
  Approximation(GaussianRational v, Rational r);

  static Approximation exact(GaussianRational v) { return Approximation(std::move(v), Rational(0)); }
  static Approximation at(GaussianRational v, Precision k) {
    return Approximation(std::move(v), k.eps());
  }

  bool meets(Precision k) const { return radius <= k.eps(); }
  bool contains(const GaussianRational& z) const {
    return (z - value).norm_sq() <= radius * radius;
  }
};

Approximation approx_add(const Approximation& a, const Approximation& b);
Approximation approx_sub(const Approximation& a, const Approximation& b);
Approximation approx_mul(const Approximation& a, const Approximation& b);
Approximation approx_conj(const Approximation& a);
// |z| as a real approximation; 1-Lipschitz, so the disk radius carries over.
Approximation approx_abs(const Approximation& a);

// Runs `refine` until the produced disk is within 2^-k, then returns its
// center.  The stream must keep shrinking; a stream that stalls past the
// iteration cap is reported as an oracle-contract violation.
struct TightenOptions {
  long extra_steps = 64;
};
GaussianRational tighten(Approximation current,
                         Precision k,
                         const std::function<Approximation()>& refine,
                         const TightenOptions& options = {});

}  // namespace evalpres::exact
