#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "approx.hpp"
#include "rational.hpp"

namespace evalpres::poly {

using exact::Approximation;
using exact::GaussianRational;
using exact::Integer;
using exact::Rational;

// One generator occurrence inside a monomial: x_var, optionally starred.
struct Literal {
  unsigned long var = 0;
  bool star = false;

  unsigned long code() const { return 2 * var + (star ? 1 : 0); }
  friend bool operator==(const Literal& a, const Literal& b) {
    return a.var == b.var && a.star == b.star;
  }
  friend bool operator<(const Literal& a, const Literal& b) { return a.code() < b.code(); }
};

// Commutative monomial: multiset of literals, kept sorted by literal code.
using Monomial = std::vector<Literal>;

struct Term {
  GaussianRational coeff;
  Monomial mono;
};

// Rational *-polynomial in commutative normal form: terms sorted by monomial
// code, monomials distinct, zero coefficients dropped.
class StarPoly {
public:
  StarPoly() = default;

  static StarPoly constant(GaussianRational c);
  static StarPoly generator(unsigned long var, bool star = false);
  static StarPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Largest variable index used, or nullopt for constants / zero.
  std::optional<unsigned long> max_var() const;
  unsigned long degree() const;

  StarPoly adjoint() const;
  StarPoly scaled(const GaussianRational& c) const;

  friend StarPoly operator+(const StarPoly& a, const StarPoly& b);
  friend StarPoly operator-(const StarPoly& a, const StarPoly& b);
  friend StarPoly operator*(const StarPoly& a, const StarPoly& b);
  friend bool operator==(const StarPoly& a, const StarPoly& b);
  friend bool operator!=(const StarPoly& a, const StarPoly& b) { return !(a == b); }

private:
  std::vector<Term> terms_;
};

// --- Effective enumeration --------------------------------------------------
//
// Codes are graded by description size, so generators, small monomials and
// low-height coefficients all appear at small indices.  Layers:
//   naturals <-> digit strings in bijective base B;
//   monomial = literal-gap list, one alphabet letter as separator;
//   polynomial = term chunks (monomial-code gap, optional coefficient part)
//   joined by a term separator; a chunk without a coefficient part means
//   coefficient one.
// Every natural decodes to exactly one normal-form polynomial and back.

Integer monomial_code(const Monomial& mono);
Monomial monomial_from_code(const Integer& code);

Integer index_of(const StarPoly& p);
StarPoly poly_from_index(const Integer& index);
// Fast path used by candidate searches; valid for any index < 2^62.
StarPoly poly_from_index_u64(unsigned long long index);

// Calkin-Wilf based codes, shared with the enumeration and the manifests.
Integer cw_index(const Rational& positive);
Rational cw_value(const Integer& index);
Integer rational_code(const Rational& q);
Rational rational_decode(const Integer& n);
Integer gaussian_code(const GaussianRational& z);
GaussianRational gaussian_decode(const Integer& n);

// --- Text format -------------------------------------------------------------
//
// Sum of terms "coef*x<j>[*]...", e.g. "3/2*x1*x2* - 1/1*x0".  Printing is
// canonical (normal-form term order, explicit num/den coefficients) and
// round-trips bit-exactly.

std::string poly_to_string(const StarPoly& p);
StarPoly poly_from_string(const std::string& text);

// --- Bounds and evaluation ----------------------------------------------------

// Sup-norm / Lipschitz data for the distinguished generators.  x0 is the unit
// when unit_is_x0; all later generators share the uniform bounds unless a
// per-variable override is installed (used by the power-function fixtures).
struct GeneratorBounds {
  Rational sup_bound{1};
  Rational lip_bound{1};
  bool unit_is_x0 = true;
  std::function<std::pair<Rational, Rational>(unsigned long)> var_override;

  std::pair<Rational, Rational> var_bounds(unsigned long var) const;
};

// (B, L) with sup|p[gens]| <= B and p[gens] L-Lipschitz, by the term-wise
// product rule.  Total.
std::pair<Rational, Rational> bounds_of(const StarPoly& p, const GeneratorBounds& gb);

// Interval-sound evaluation; stars act as conjugation.  The argument callback
// returns nullopt for unbound variables, which is reported as an error.
Approximation eval_poly(const StarPoly& p,
                        const std::function<std::optional<Approximation>(unsigned long)>& args);

}  // namespace evalpres::poly
