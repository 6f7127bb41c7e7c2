#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace evalpres::exact {

using Rational = mpq_class;
using Integer = mpz_class;

// 2^k and 2^-k as exact rationals.
Rational pow2(long k);

// Smallest integer e with 2^e >= q (q > 0).  Used for precision bookkeeping.
long ceil_log2(const Rational& q);

// Upper bound helpers for precision chains: ceil(log2(max(1, q))).
long clog2_at_least_one(const Rational& q);

// r with |r - sqrt(q)| <= 2^-k, q >= 0.  Exact integer square roots underneath.
Rational sqrt_approx(const Rational& q, long k);

// Serialization: canonical "num/den" with den > 0, always slash-separated.
std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& text);

// Complex scalar with rational real and imaginary parts.  All arithmetic is
// exact; nothing in this type rounds.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_real() const { return im == 0; }
  bool is_zero() const { return re == 0 && im == 0; }

  GaussianRational conj() const { return {re, -im}; }

  // |z|^2, exact.
  Rational norm_sq() const { return re * re + im * im; }

  // Rational upper bound on |z| (L1 bound; exact when z is real or imaginary).
  Rational abs_upper() const;

  // |r - |z|| <= 2^-k.
  Rational abs_approx(long k) const;

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }
};

// "a/b" for real values, "a/b+c/di" / "a/b-c/di" otherwise.
std::string gaussian_to_string(const GaussianRational& z);
GaussianRational gaussian_from_string(const std::string& text);

}  // namespace evalpres::exact
