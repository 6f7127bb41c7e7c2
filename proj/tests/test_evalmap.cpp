#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "error.hpp"
#include "evalmap.hpp"

using namespace evalpres;
using namespace evalpres::evalmap;
using exact::Approximation;
using exact::GaussianRational;
using exact::pow2;
using exact::Precision;
using exact::Rational;
using poly::StarPoly;

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

GaussianRational exact_at(const StarPoly& p, const Rational& x) {
  auto args = [&](unsigned long var) -> std::optional<Approximation> {
    if (var == 0) return Approximation::exact(GaussianRational(Rational(1)));
    return Approximation::exact(
        GaussianRational(Rational(abs(x - space::unit_interval_point(var - 1)))));
  };
  return poly::eval_poly(p, args).value;
}

}  // namespace

TEST_CASE("evaluation examples") {
  auto ui = space::builtin_space("unit_interval");
  auto a = cstar::PresentedCStar::induce(ui);
  auto half = space::builtin_point_name(ui, Rational(1, 2));

  // The unit evaluates to one everywhere.
  Approximation u = evaluate(a, ProductName{a.unit_name(), half}, Precision(8));
  CHECK((u.value - GaussianRational(Rational(1))).norm_sq() <= pow2(-16));

  // f1 = d(0,.) at 1/2.
  auto f1 = cstar::VectorName::of_poly(StarPoly::generator(1));
  Approximation v = evaluate(a, ProductName{f1, half}, Precision(8));
  CHECK((v.value - GaussianRational(Rational(1, 2))).norm_sq() <= pow2(-16));

  // x1*x1 - x0 at 1/2 -> -3/4.
  auto f = cstar::VectorName::of_poly(poly::poly_from_string("1/1*x1*x1 - 1/1*x0"));
  Approximation w = evaluate(a, ProductName{f, half}, Precision(8));
  CHECK((w.value - GaussianRational(Rational(-3, 4))).norm_sq() <= pow2(-16));
  CHECK(w.radius <= pow2(-8));
}

TEST_CASE("evaluation soundness on sampled pairs (k<=10)") {
  auto ui = space::builtin_space("unit_interval");
  auto a = cstar::PresentedCStar::induce(ui);
  SplitMix rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    StarPoly p = poly::poly_from_index_u64(rng.below(3000));
    unsigned long den = 8 + static_cast<unsigned long>(rng.below(56));
    Rational x(static_cast<unsigned long>(rng.below(den + 1)), den);
    x.canonicalize();
    GaussianRational truth = exact_at(p, x);
    auto nm = space::builtin_point_name(ui, x);
    auto f = cstar::VectorName::of_poly(p);
    for (long k = 0; k <= 10; ++k) {
      Approximation got = evaluate(a, ProductName{f, nm}, Precision(k));
      CHECK((got.value - truth).norm_sq() <= pow2(-2 * k));
    }
  }
}

TEST_CASE("product-name symmetry: any names of the same pair agree") {
  auto ui = space::builtin_space("unit_interval");
  auto a = cstar::PresentedCStar::induce(ui);
  Rational x(1, 3);
  // Two different names of 1/3: the built-in one and a distance-search one.
  auto nm1 = space::builtin_point_name(ui, x);
  auto dist = [&](std::size_t n, Precision) -> Rational {
    return abs(space::unit_interval_point(n) - x);
  };
  auto nm2 = space::point_name_from_distances(ui, dist);
  // Two names of the same vector: the constant one and a padded one.
  StarPoly p = poly::poly_from_string("1/1*x1*x1");
  auto v1 = cstar::VectorName::of_poly(p);
  auto v2 = cstar::VectorName([p](Precision k) {
    // A lawful name that stabilizes after echoing a coarse approximant.
    if (k.k == 0) return poly::index_of(StarPoly::generator(1));
    return poly::index_of(p);
  });
  GaussianRational truth = exact_at(p, x);
  for (long k = 2; k <= 8; ++k) {
    for (const auto& vec : {v1, v2})
      for (const auto& pt : {nm1, nm2}) {
        Approximation got = evaluate(a, ProductName{vec, pt}, Precision(k));
        CHECK((got.value - truth).norm_sq() <= pow2(-2 * k));
      }
  }
}

TEST_CASE("point functionals") {
  auto ui = space::builtin_space("unit_interval");
  auto a = cstar::PresentedCStar::induce(ui);
  auto at_zero = point_functional(a, space::builtin_point_name(ui, Rational(0)));
  CHECK((at_zero(a.unit_name(), Precision(6)).value - GaussianRational(Rational(1))).norm_sq() <=
        pow2(-12));
  auto f1 = cstar::VectorName::of_poly(StarPoly::generator(1));
  CHECK(at_zero(f1, Precision(6)).value.norm_sq() <= pow2(-12));
  // p-hat_m(d(p_n, .)) recovers the metric on distinguished points.
  for (std::size_t n = 0; n < 5; ++n)
    for (std::size_t m = 0; m < 5; ++m) {
      auto ph = point_functional(a, space::PointName::constant(m));
      auto g = cstar::VectorName::of_poly(StarPoly::generator(n + 1));
      Approximation got = ph(g, Precision(8));
      CHECK(abs(got.value.re - ui.exact_metric(n, m)) <= pow2(-8));
    }
}

TEST_CASE("vector_as_map moduli hold on a grid") {
  auto ui = space::builtin_space("unit_interval");
  auto a = cstar::PresentedCStar::induce(ui);
  struct Case {
    StarPoly p;
    long expected_modulus_at_4;
  };
  std::vector<Case> cases = {
      {StarPoly::generator(0), 5},                              // constant: anything works
      {StarPoly::generator(1), 5},                              // 1-Lipschitz
      {poly::poly_from_string("1/1*x1*x1"), 6},                 // Lipschitz 2
  };
  for (const auto& c : cases) {
    ScalarMap m = vector_as_map(a, cstar::VectorName::of_poly(c.p));
    CHECK(m.modulus(4) == c.expected_modulus_at_4);
    // Sampled modulus validity: d(x,y) <= 2^-m(4) forces |f(x)-f(y)| <= 2^-4.
    long mod = m.modulus(4);
    for (int t = 0; t < (1 << 6); ++t) {
      Rational x(t, 1 << 6), y = x + pow2(-mod);
      if (y > 1) continue;
      x.canonicalize();
      y.canonicalize();
      GaussianRational diff = exact_at(c.p, x) - exact_at(c.p, y);
      CHECK(diff.norm_sq() <= pow2(-8));
    }
  }
}

TEST_CASE("vector search round trip") {
  auto ui = space::builtin_space("unit_interval");
  auto a = cstar::PresentedCStar::induce(ui);
  VectorSearchOptions opt;
  opt.budget = 100000;
  opt.k_limit = 3;

  // vector_as_map then search recovers a name of the same vector.  Distance
  // upper bounds are read at the certified level itself, which adds the
  // oracle and name slacks on top of the true distance.
  for (const char* text : {"1/1*x1", "1/1*x0 + -1/2*x1"}) {
    auto v = cstar::VectorName::of_poly(poly::poly_from_string(text));
    auto res = vector_name_from_map(a, vector_as_map(a, v), opt);
    REQUIRE(res.certified_k >= 3);
    for (long k = 0; k <= res.certified_k; ++k) {
      Rational d = cstar::name_distance_upper(a, res.name, v, Precision(k));
      CHECK(d <= 5 * pow2(-k));
    }
  }

  // The constant-one map lands on the unit vector.
  ScalarMap one;
  one.source_label = "unit_interval";
  one.eval = [](const space::PointName&, Precision) {
    return Approximation::exact(GaussianRational(Rational(1)));
  };
  one.modulus = [](long t) { return t; };
  auto res_one = vector_name_from_map(a, one, opt);
  REQUIRE(res_one.certified_k >= 3);
  Rational d = cstar::name_distance_upper(a, res_one.name, a.unit_name(), Precision(3));
  CHECK(d <= pow2(-1));

  // d(p_0, .) is found as a distance generator (or a norm-equivalent).
  ScalarMap dist0;
  dist0.source_label = "unit_interval";
  dist0.eval = [ui, a](const space::PointName& pt, Precision k) {
    return evaluate(a, ProductName{cstar::VectorName::of_poly(StarPoly::generator(1)), pt}, k);
  };
  dist0.modulus = [](long t) { return t + 1; };
  auto res_d = vector_name_from_map(a, dist0, opt);
  REQUIRE(res_d.certified_k >= 3);
  CHECK(cstar::name_distance_upper(a, res_d.name,
                                   cstar::VectorName::of_poly(StarPoly::generator(1)),
                                   Precision(3)) <= pow2(-1));

  // Beyond the certified depth the name reports exhaustion.
  CHECK_THROWS_AS(res_d.name.at(Precision(9)), Error);
}

TEST_CASE("built-in point maps") {
  auto ui = space::builtin_space("unit_interval");
  auto one_minus = builtin_point_map("one_minus_x", ui);
  auto sq = builtin_point_map("x_squared", ui);
  auto idm = builtin_point_map("identity", ui);
  SplitMix rng(59);
  for (int trial = 0; trial < 40; ++trial) {
    unsigned long den = 4 + static_cast<unsigned long>(rng.below(60));
    Rational x(static_cast<unsigned long>(rng.below(den + 1)), den);
    x.canonicalize();
    auto nm = space::builtin_point_name(ui, x);
    for (long k : {2L, 6L, 9L}) {
      Rational r1 = space::unit_interval_point(one_minus.transform(nm).at(Precision(k)));
      CHECK(abs(r1 - (1 - x)) <= pow2(-k));
      Rational r2 = space::unit_interval_point(sq.transform(nm).at(Precision(k)));
      CHECK(abs(r2 - x * x) <= pow2(-k));
      Rational r3 = space::unit_interval_point(idm.transform(nm).at(Precision(k)));
      CHECK(abs(r3 - x) <= pow2(-k));
    }
  }
  CHECK_THROWS_AS(builtin_point_map("swirl", ui), Error);
}
