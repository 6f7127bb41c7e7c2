#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cantor.hpp"
#include "error.hpp"

using namespace evalpres;
using namespace evalpres::cantor;
using exact::pow2;
using exact::Precision;
using exact::Rational;

TEST_CASE("initial covers on the standard presentation") {
  auto cs = space::builtin_space("cantor_standard");
  CylinderAssignment h0 = initial_cover(cs, 0);
  REQUIRE(h0.entries.size() == 2);  // the two depth-1 cylinders
  CHECK(h0.entries[0].sigma == "0");
  CHECK(h0.entries[1].sigma == "1");
  auto rep = check_conditions(cs, h0, nullptr);
  CHECK(rep.all());

  CylinderAssignment h1 = initial_cover(cs, 1);
  CHECK(h1.entries.size() == 4);  // depth-2 cylinder balls
  CHECK(check_conditions(cs, h1, nullptr).all());
}

TEST_CASE("refinement splits standard cylinders in two") {
  auto cs = space::builtin_space("cantor_standard");
  CylinderAssignment h0 = initial_cover(cs, 0);
  CylinderAssignment h1 = refine(cs, h0);
  CHECK(h1.entries.size() == 4);
  // Every parent got exactly two children, labels extend the parent's.
  for (const auto& e : h1.entries) {
    REQUIRE(e.parent < h0.entries.size());
    const auto& p = h0.entries[e.parent];
    CHECK(e.sigma.size() == 2);
    CHECK(e.sigma.compare(0, p.sigma.size(), p.sigma) == 0);
    // (c2)/(c4): certified containment in the parent ball.
    CHECK(space::set_inclusion(cs, e.ball, p.ball) == space::Cert::yes);
  }
  CHECK(check_conditions(cs, h1, &h0).all());
}

TEST_CASE("variant branch counts vary with the level") {
  auto cv = space::builtin_space("cantor_variant");
  CylinderAssignment v0 = initial_cover(cv, 0);
  CHECK(v0.entries.size() <= 3);
  CHECK(check_conditions(cv, v0, nullptr).all());
  CylinderAssignment v1 = refine(cv, v0);
  CHECK(check_conditions(cv, v1, &v0).all());
  CylinderAssignment v2 = refine(cv, v1);
  CHECK(check_conditions(cv, v2, &v1).all());
  // The metric decays by thirds, so some rounds keep a branch whole while
  // others split it; by level two the tree must have grown.
  CHECK(v1.entries.size() >= v0.entries.size());
  CHECK(v2.entries.size() > v0.entries.size());
}

TEST_CASE("chain diameters shrink level by level") {
  auto cv = space::builtin_space("cantor_variant");
  Homeomorphism h = build_homeomorphism(cv, 4);
  REQUIRE(h.levels.size() == 5);
  for (std::size_t s = 0; s < h.levels.size(); ++s) {
    CHECK(h.levels[s].diameter_bound <= pow2(-static_cast<long>(s)));
    if (s > 0) CHECK(h.levels[s].diameter_bound <= h.levels[s - 1].diameter_bound);
  }
}

TEST_CASE("the cylinder-to-ball map is injective with separated images") {
  auto cv = space::builtin_space("cantor_variant");
  Homeomorphism h = build_homeomorphism(cv, 4);
  const auto& leaves = h.levels.back().entries;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      CHECK(leaves[i].sigma != leaves[j].sigma);
      auto sep = space::separation_lower_bound(cv, leaves[i].ball, leaves[j].ball);
      REQUIRE(sep.has_value());
      CHECK(*sep > 0);
    }
}

TEST_CASE("the induced map tracks cylinder membership") {
  auto cv = space::builtin_space("cantor_variant");
  Homeomorphism h = build_homeomorphism(cv, 4);
  // phi(0^w) and phi(10^w) land in separated balls.
  auto p0 = h.map.transform(space::PointName::constant(0));
  auto p1 = h.map.transform(space::PointName::constant(1));
  std::size_t i0 = p0.at(Precision(3)), i1 = p1.at(Precision(3));
  CHECK(cv.exact_metric(i0, i1) > 0);
  // Deeper queries stay inside the matching chain: consecutive precisions
  // stay within the stated name tolerance.
  for (long k = 0; k + 1 <= 3; ++k) {
    Rational d = cv.exact_metric(p0.at(Precision(k)), p0.at(Precision(k + 1)));
    CHECK(d <= pow2(-k) + pow2(-k - 1));
  }
  // Beyond the built depth the map reports its certified precision.
  CHECK_THROWS_AS(p0.at(Precision(12)), Error);
  // The modulus is the cylinder depth consulted for that precision.
  CHECK(h.map.modulus(3) >= 1);
  CHECK(h.map.modulus(3) <= 8);
}

TEST_CASE("standard depth-4 map is distance-friendly on cylinders") {
  auto cs = space::builtin_space("cantor_standard");
  Homeomorphism h = build_homeomorphism(cs, 4);
  // On the standard presentation the search rediscovers nested cylinders, so
  // the map moves points by at most the level diameter.
  for (unsigned long w : {0ULL, 1ULL, 2ULL, 5ULL, 11ULL}) {
    std::size_t idx = space::cantor_index_of_word("cantor_standard", w);
    auto img = h.map.transform(space::PointName::constant(idx));
    std::size_t got = img.at(Precision(4));
    CHECK(cs.exact_metric(got, idx) <= pow2(-4));
  }
}

TEST_CASE("assignment serialization") {
  auto cs = space::builtin_space("cantor_standard");
  CylinderAssignment h0 = initial_cover(cs, 0);
  std::string json = assignment_to_json(h0);
  CHECK(json.find("\"level\":0") != std::string::npos);
  CHECK(json.find("\"sigma\":\"0\"") != std::string::npos);
  CHECK(json.find("\"radius\":\"3/4\"") != std::string::npos);
}
