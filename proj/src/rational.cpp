#include "rational.hpp"

#include <cctype>

#include "error.hpp"

namespace evalpres::exact {

Rational pow2(long k) {
  Rational r(1);
  if (k >= 0) {
    mpz_mul_2exp(r.get_num().get_mpz_t(), Integer(1).get_mpz_t(), static_cast<unsigned long>(k));
  } else {
    mpz_mul_2exp(r.get_den().get_mpz_t(), Integer(1).get_mpz_t(), static_cast<unsigned long>(-k));
  }
  r.canonicalize();
  return r;
}

long ceil_log2(const Rational& q) {
  if (q <= 0) throw Error::bad_argument("ceil_log2 requires a positive rational");
  // Smallest e with q <= 2^e.  The bit-length estimate is off by at most one
  // either way; settle exactly.
  long e = static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
  while (pow2(e) < q) ++e;
  while (pow2(e - 1) >= q) --e;
  return e;
}

long clog2_at_least_one(const Rational& q) {
  if (q <= 1) return 0;
  return ceil_log2(q);
}

Rational sqrt_approx(const Rational& q, long k) {
  if (q < 0) throw Error::bad_argument("sqrt_approx of a negative rational");
  if (q == 0) return Rational(0);
  // sqrt(n/d) = sqrt(n*d)/d; scale by 4^k so the integer sqrt carries 2^-k.
  Integer n = q.get_num(), d = q.get_den();
  Integer scaled = n * d;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(2 * k));
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational r(root, d);
  r /= pow2(k);
  r.canonicalize();
  return r;
}

std::string rational_to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rational_from_string(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  if (s.empty()) throw Error::parse("empty rational literal");
  if (s.find('/') == std::string::npos) s += "/1";
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw Error::parse("unreadable rational literal: " + text);
  if (q.get_den() == 0) throw Error::parse("zero denominator in rational literal: " + text);
  q.canonicalize();
  return q;
}

Rational GaussianRational::abs_upper() const {
  if (im == 0) return abs(re);
  if (re == 0) return abs(im);
  return abs(re) + abs(im);
}

Rational GaussianRational::abs_approx(long k) const {
  if (im == 0) return abs(re);
  if (re == 0) return abs(im);
  return sqrt_approx(norm_sq(), k);
}

std::string gaussian_to_string(const GaussianRational& z) {
  if (z.is_real()) return rational_to_string(z.re);
  std::string s = rational_to_string(z.re);
  if (z.im >= 0)
    s += "+" + rational_to_string(z.im) + "i";
  else
    s += "-" + rational_to_string(-z.im) + "i";
  return s;
}

GaussianRational gaussian_from_string(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw Error::parse("empty complex literal");
  if (s.back() != 'i') return GaussianRational(rational_from_string(s));
  s.pop_back();
  // Split at the sign separating the two parts.  A sign at position 0 or
  // right after '/' belongs to a component, not to the split.
  std::size_t split = std::string::npos;
  for (std::size_t pos = 1; pos < s.size(); ++pos) {
    if ((s[pos] == '+' || s[pos] == '-') && s[pos - 1] != '/' && s[pos - 1] != '+' &&
        s[pos - 1] != '-')
      split = pos;  // keep the last candidate: imaginary part follows it
  }
  if (split == std::string::npos) {
    // Pure imaginary, e.g. "1/2i".
    return GaussianRational(Rational(0), rational_from_string(s));
  }
  Rational re = rational_from_string(s.substr(0, split));
  std::string im_text = s.substr(split);
  if (im_text == "+" || im_text == "-") im_text += "1";
  return GaussianRational(re, rational_from_string(im_text));
}

}  // namespace evalpres::exact
