#include "approx.hpp"

#include "error.hpp"

namespace evalpres::exact {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo > hi) throw Error::bad_argument("interval endpoints out of order");
}

Interval Interval::around(const Rational& q, Precision k) {
  return Interval(q - k.eps(), q + k.eps());
}

Approximation::Approximation(GaussianRational v, Rational r)
    : value(std::move(v)), radius(std::move(r)) {
  if (radius < 0) throw Error::bad_argument("negative approximation radius");
}

Approximation approx_add(const Approximation& a, const Approximation& b) {
  return Approximation(a.value + b.value, a.radius + b.radius);
}

Approximation approx_sub(const Approximation& a, const Approximation& b) {
  return Approximation(a.value - b.value, a.radius + b.radius);
}

Approximation approx_mul(const Approximation& a, const Approximation& b) {
  // |ab' - a'b'| style worst case: |a| db + |b| da + da db.
  Rational r = a.value.abs_upper() * b.radius + b.value.abs_upper() * a.radius +
               a.radius * b.radius;
  return Approximation(a.value * b.value, r);
}

Approximation approx_conj(const Approximation& a) {
  return Approximation(a.value.conj(), a.radius);
}

Approximation approx_abs(const Approximation& a) {
  if (a.value.is_real() || a.value.re == 0) {
    // Modulus of a real or purely imaginary center is exact.
    return Approximation(GaussianRational(a.value.abs_upper()), a.radius);
  }
  // Rational approximation of the center's modulus, folded into the radius.
  long k = 4;
  if (a.radius > 0) {
    long rk = ceil_log2(1 / a.radius);
    if (rk + 4 > k) k = rk + 4;
  } else {
    k = 64;
  }
  Rational center = a.value.abs_approx(k);
  return Approximation(GaussianRational(center), a.radius + pow2(-k));
}

GaussianRational tighten(Approximation current,
                         Precision k,
                         const std::function<Approximation()>& refine,
                         const TightenOptions& options) {
  Rational target = k.eps();
  long steps = 0;
  Rational best = current.radius;
  while (current.radius > target) {
    if (++steps > k.k + options.extra_steps)
      throw Error::oracle_violation(
          "tighten: refinement stream failed to reach 2^-" + std::to_string(k.k) +
          " within the iteration cap");
    Approximation next = refine();
    if (next.radius < best) best = next.radius;
    current = next;
  }
  return current.value;
}

}  // namespace evalpres::exact
