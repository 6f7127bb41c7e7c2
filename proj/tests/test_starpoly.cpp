#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "error.hpp"
#include "starpoly.hpp"

using namespace evalpres;
using namespace evalpres::poly;
using exact::Approximation;
using exact::GaussianRational;
using exact::Rational;

namespace {

struct SplitMix {
  unsigned long long state;
  explicit SplitMix(unsigned long long seed) : state(seed) {}
  unsigned long long next() {
    unsigned long long z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  unsigned long long below(unsigned long long n) { return next() % n; }
};

std::optional<Approximation> bind_exact(unsigned long var, const std::vector<Rational>& vals) {
  if (var == 0) return Approximation::exact(GaussianRational(Rational(1)));
  if (var - 1 < vals.size())
    return Approximation::exact(GaussianRational(vals[var - 1]));
  return std::nullopt;
}

// Total binding: wraps the value table around for large variable indices.
std::optional<Approximation> bind_wrapped(unsigned long var, const std::vector<Rational>& vals) {
  if (var == 0) return Approximation::exact(GaussianRational(Rational(1)));
  return Approximation::exact(GaussianRational(vals[(var - 1) % vals.size()]));
}

}  // namespace

TEST_CASE("enumeration endpoints") {
  CHECK(poly_from_index(exact::Integer(0)).is_zero());
  // By convention x0 is the unit slot; the enumeration reaches it immediately.
  CHECK(poly_from_index(exact::Integer(2)) == StarPoly::generator(0));
  CHECK(index_of(StarPoly()) == 0);
}

TEST_CASE("enumeration bijectivity on the first 10^4 indices") {
  for (unsigned long n = 0; n < 10000; ++n) {
    StarPoly p = poly_from_index(exact::Integer(n));
    CHECK(index_of(p) == exact::Integer(n));
    // The 64-bit decoder agrees with the general one.
    CHECK(poly_from_index_u64(n) == p);
  }
}

TEST_CASE("index round trip through construction") {
  std::vector<StarPoly> polys = {
      StarPoly::generator(3),
      StarPoly::generator(1, true),
      poly_from_string("3/2*x1*x2* - 1/1*x0"),
      poly_from_string("(1/2+1/3i)*x4 + 2/1"),
      StarPoly::generator(1) * StarPoly::generator(1) - StarPoly::generator(0),
  };
  for (const auto& p : polys) CHECK(poly_from_index(index_of(p)) == p);
}

TEST_CASE("evaluation examples") {
  // p = x1 at exact 1/2 carries the argument through.
  auto half = [&](unsigned long var) { return bind_exact(var, {Rational(1, 2)}); };
  Approximation r = eval_poly(StarPoly::generator(1), half);
  CHECK(r.value.re == Rational(1, 2));

  // zz* = |z|^2 for z = i/2.
  StarPoly m = StarPoly::generator(1) * StarPoly::generator(1, true);
  auto imag = [&](unsigned long var) -> std::optional<Approximation> {
    if (var == 1)
      return Approximation::exact(GaussianRational(Rational(0), Rational(1, 2)));
    return std::nullopt;
  };
  Approximation rr = eval_poly(m, imag);
  CHECK(rr.value.re == Rational(1, 4));
  CHECK(rr.value.im == 0);
  CHECK(rr.radius == 0);

  // 2 x1 - x2 at (1/4, 1/2) cancels exactly.
  StarPoly p = StarPoly::generator(1).scaled(GaussianRational(Rational(2))) -
               StarPoly::generator(2);
  auto two = [&](unsigned long var) {
    return bind_exact(var, {Rational(1, 4), Rational(1, 2)});
  };
  CHECK(eval_poly(p, two).value.is_zero());

  // Unbound variables are reported.
  CHECK_THROWS_AS(eval_poly(StarPoly::generator(9), half), Error);
}

TEST_CASE("interval soundness of evaluation at inflated radii") {
  SplitMix rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    StarPoly p = poly_from_index_u64(rng.below(3000));
    std::vector<Rational> vals;
    for (int v = 0; v < 12; ++v) {
      Rational q(static_cast<long>(rng.below(9)) - 4, 1 + static_cast<long>(rng.below(5)));
      q.canonicalize();
      vals.push_back(q);
    }
    // Exact evaluation.
    auto exact_args = [&](unsigned long var) { return bind_wrapped(var, vals); };
    GaussianRational truth = eval_poly(p, exact_args).value;
    // Same arguments carried as disks of positive radius.
    auto fuzzy = [&](unsigned long var) -> std::optional<Approximation> {
      auto base = bind_wrapped(var, vals);
      if (!base) return std::nullopt;
      return Approximation(base->value, Rational(1, 64));
    };
    CHECK(eval_poly(p, fuzzy).contains(truth));
  }
}

TEST_CASE("bounds_of on the stated examples") {
  GeneratorBounds gb{Rational(1), Rational(1), true, nullptr};
  auto [b0, l0] = bounds_of(StarPoly::generator(0), gb);
  CHECK(b0 == 1);
  CHECK(l0 == 0);
  auto [b1, l1] = bounds_of(StarPoly::generator(1), gb);
  CHECK(b1 == 1);
  CHECK(l1 == 1);
  auto [b2, l2] = bounds_of(StarPoly::generator(1) * StarPoly::generator(2), gb);
  CHECK(b2 == 1);
  CHECK(l2 == 2);
}

TEST_CASE("bounds_of dominates grid estimates") {
  // Generators modelled as x_j(t) = |t - c_j| on [0,1]: 1-Lipschitz, bounded
  // by one, matching the uniform bounds fed to bounds_of.
  GeneratorBounds gb{Rational(1), Rational(1), true, nullptr};
  SplitMix rng(29);
  std::vector<Rational> anchors = {Rational(0), Rational(1), Rational(1, 2), Rational(1, 4),
                                   Rational(3, 4), Rational(1, 8), Rational(3, 8),
                                   Rational(5, 8), Rational(7, 8), Rational(1, 16)};
  for (int trial = 0; trial < 100; ++trial) {
    StarPoly p = poly_from_index_u64(rng.below(2000));
    if (p.max_var() && *p.max_var() > anchors.size()) continue;
    auto [bound, lip] = bounds_of(p, gb);
    const int grid = 64;
    std::vector<Rational> values_sq;
    std::vector<GaussianRational> values;
    for (int t = 0; t <= grid; ++t) {
      Rational x(t, grid);
      x.canonicalize();
      auto args = [&](unsigned long var) -> std::optional<Approximation> {
        if (var == 0) return Approximation::exact(GaussianRational(Rational(1)));
        return Approximation::exact(
            GaussianRational(Rational(abs(x - anchors[(var - 1) % anchors.size()]))));
      };
      GaussianRational v = eval_poly(p, args).value;
      values.push_back(v);
      values_sq.push_back(v.norm_sq());
      CHECK(v.norm_sq() <= bound * bound);
    }
    for (int t = 0; t < grid; ++t) {
      GaussianRational diff = values[t + 1] - values[t];
      // |p(x+h) - p(x)| <= L h with h = 1/grid.
      CHECK(diff.norm_sq() <= (lip * lip) * Rational(1, grid * grid));
    }
  }
}

TEST_CASE("combine operations") {
  StarPoly x1 = StarPoly::generator(1);
  CHECK(x1.adjoint() == StarPoly::generator(1, true));
  CHECK((x1 - x1).is_zero());
  StarPoly lhs = (x1 + StarPoly::generator(0)) * (x1 - StarPoly::generator(0));
  StarPoly rhs = x1 * x1 - StarPoly::generator(0) * StarPoly::generator(0);
  CHECK(lhs == rhs);
  // Adjoint conjugates coefficients.
  StarPoly c = StarPoly::constant(GaussianRational(Rational(0), Rational(1)));
  CHECK((c * x1).adjoint() ==
        StarPoly::generator(1, true).scaled(GaussianRational(Rational(0), Rational(-1))));
}

TEST_CASE("text format round trips bit-exactly") {
  std::vector<std::string> texts = {
      "0",
      "1/1*x0",
      "-3/4*x2",
      "1/1*x0 + 1/2*x1",
      "3/2*x1*x2* - 1/1*x0",
      "(0/1+1/1i)*x3*x3",
  };
  for (const auto& t : texts) {
    StarPoly p = poly_from_string(t);
    std::string canon = poly_to_string(p);
    CHECK(poly_from_string(canon) == p);
    CHECK(poly_to_string(poly_from_string(canon)) == canon);
  }
  CHECK_THROWS_AS(poly_from_string("x"), Error);
  CHECK_THROWS_AS(poly_from_string("1/1*"), Error);
}

TEST_CASE("rational codes") {
  CHECK(cw_index(Rational(1)) == 1);
  CHECK(cw_value(exact::Integer(2)) == Rational(1, 2));
  for (unsigned long n = 0; n < 500; ++n) {
    Rational q = rational_decode(exact::Integer(n));
    CHECK(rational_code(q) == exact::Integer(n));
    GaussianRational z = gaussian_decode(exact::Integer(n));
    CHECK(gaussian_code(z) == exact::Integer(n));
  }
}
