#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "error.hpp"
#include "space.hpp"

using namespace evalpres;
using namespace evalpres::space;
using exact::pow2;
using exact::Precision;
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

}  // namespace

TEST_CASE("built-in fixtures") {
  auto seg = builtin_space("segments");
  // J_0 = [3/4, 5/4]; its endpoints are distinguished.
  CHECK(segments_point(builtin_index_of_value(seg, Rational(3, 4))) == Rational(3, 4));
  CHECK(segments_point(builtin_index_of_value(seg, Rational(5, 4))) == Rational(5, 4));
  CHECK(seg.diam_bound() == Rational(5, 4));
  // 0 is distinguished and d(0, 2^-n) = 2^-n.
  CHECK(segments_point(0) == 0);
  for (long n = 0; n <= 6; ++n) {
    std::size_t idx = builtin_index_of_value(seg, pow2(-n));
    CHECK(seg.exact_metric(0, idx) == pow2(-n));
  }
  auto cs = builtin_space("cantor_standard");
  CHECK(cs.exact_metric(0, 1) == 1);  // 000... vs 100...
  CHECK(cs.exact_metric(0, 2) == Rational(1, 2));
  auto cv = builtin_space("cantor_variant");
  CHECK(cv.exact_metric(0, 1) == 1);
  CHECK(cv.exact_metric(0, 2) == Rational(1, 3));
  CHECK_THROWS_AS(builtin_space("banana"), Error);
}

TEST_CASE("metric oracle quantization honors the precision contract") {
  SplitMix rng(5);
  for (const auto& label : builtin_space_labels()) {
    auto s = builtin_space(label);
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t i = rng.below(40), j = rng.below(40);
      long k = static_cast<long>(rng.below(12));
      Rational q = s.metric(i, j, Precision(k));
      CHECK(abs(q - s.exact_metric(i, j)) <= pow2(-k));
    }
    // Symmetry and the triangle inequality within oracle tolerance.
    for (int trial = 0; trial < 50; ++trial) {
      std::size_t i = rng.below(20), j = rng.below(20), l = rng.below(20);
      CHECK(abs(s.metric(i, j, Precision(8)) - s.metric(j, i, Precision(8))) <= 2 * pow2(-8));
      CHECK(s.metric(i, l, Precision(8)) <=
            s.metric(i, j, Precision(8)) + s.metric(j, l, Precision(8)) + 3 * pow2(-8));
    }
  }
}

TEST_CASE("total boundedness functions cover (exact check, j<=10)") {
  // unit_interval and segments: covering verified by interval arithmetic on
  // the real line; cantor spaces: by cylinder exhaustion.
  for (long j = 0; j <= 10; ++j) {
    auto ui = builtin_space("unit_interval");
    std::vector<Rational> centers;
    for (auto n : ui.net(j)) centers.push_back(unit_interval_point(n));
    std::sort(centers.begin(), centers.end());
    CHECK(centers.front() == 0);
    CHECK(centers.back() == 1);
    for (std::size_t t = 1; t < centers.size(); ++t)
      CHECK(centers[t] - centers[t - 1] < 2 * pow2(-j));
  }
  for (long j = 0; j <= 10; ++j) {
    auto seg = builtin_space("segments");
    std::vector<Rational> centers;
    for (auto n : seg.net(j)) centers.push_back(segments_point(n));
    std::sort(centers.begin(), centers.end());
    // Each segment J_n with n <= j is covered by consecutive centers; the
    // tail collapses into the ball around zero.
    CHECK(centers.front() == 0);
    CHECK(centers.back() == Rational(5, 4));
    for (long n = 0; n <= j; ++n) {
      Rational left = 3 * pow2(-n - 2), right = 5 * pow2(-n - 2);
      Rational prev(-1);
      bool saw_left = false, saw_right = false;
      for (const auto& c : centers) {
        if (c < left || c > right) continue;
        if (c == left) saw_left = true;
        if (c == right) saw_right = true;
        if (prev >= 0) CHECK(c - prev < 2 * pow2(-j));
        prev = c;
      }
      CHECK(saw_left);
      CHECK(saw_right);
    }
    // Tail: everything in segments beyond J_j is within 2^-j of zero.
    CHECK(5 * pow2(-(j + 1) - 2) < pow2(-j));
  }
  for (long j = 0; j <= 10; ++j) {
    for (const char* label : {"cantor_standard", "cantor_variant"}) {
      auto c = builtin_space(label);
      auto net = c.net(j);
      // The net must hit every cylinder of the depth matching radius 2^-j.
      int depth = 1;
      if (std::string(label) == "cantor_standard") {
        depth = static_cast<int>(j) + 1;
      } else {
        exact::Integer p3 = 3;
        while (Rational(exact::Integer(1), p3) >= pow2(-j)) {
          p3 *= 3;
          ++depth;
        }
      }
      if (depth > 14) continue;
      std::set<unsigned long long> patterns;
      for (auto n : net)
        patterns.insert(cantor_word(label, n) & ((1ULL << depth) - 1));
      CHECK(patterns.size() == (1ULL << depth));
    }
  }
}

TEST_CASE("diagram examples and soundness") {
  auto ui = builtin_space("unit_interval");
  auto entries = diagram_emit(ui, 400);
  CHECK(entries.size() == 400);
  bool found_example = false;
  for (const auto& e : entries) {
    CHECK(e.r < e.r2);
    Rational d = ui.exact_metric(e.j, e.k);
    CHECK(e.r < d);
    CHECK(d < e.r2);
    CHECK(e.j != e.k);  // r > 0 entries never mention the diagonal
    if (e.r == Rational(1, 2) && e.j == 0 && e.k == 1 && e.r2 == Rational(2))
      found_example = true;
  }
  CHECK(found_example);

  // Cantor: an entry certifying d = 1/2 between points differing first at
  // coordinate one.
  auto cs = builtin_space("cantor_standard");
  auto centries = diagram_emit(cs, 4000);
  bool cantor_example = false;
  for (const auto& e : centries) {
    Rational d = cs.exact_metric(e.j, e.k);
    CHECK(e.r < d);
    CHECK(d < e.r2);
    if (e.r == Rational(1, 4) && e.r2 == Rational(1) && d == Rational(1, 2))
      cantor_example = true;
  }
  CHECK(cantor_example);

  CHECK(diagram_emit(ui, 0).empty());
}

TEST_CASE("formal inclusion and disjointness") {
  auto ui = builtin_space("unit_interval");
  // d(p,p) = 0, so the certificate holds as soon as the oracle slack drops
  // below the radius gap.
  for (long k = 3; k <= 14; ++k)
    CHECK(formal_inclusion(ui, {0, Rational(1, 4)}, {0, Rational(1, 2)}, Precision(k)) ==
          Cert::yes);
  for (long k = 1; k <= 12; ++k)
    CHECK(formal_inclusion(ui, {0, Rational(1, 2)}, {1, Rational(1, 2)}, Precision(k)) ==
          Cert::unknown);
  // 1/4 + 1/8 < 1/2 exactly; the oracle slack costs one extra level, so the
  // certificate lands from precision 4 on.
  std::size_t quarter = unit_interval_index(Rational(1, 4));
  CHECK(formal_inclusion(ui, {quarter, Rational(1, 8)}, {0, Rational(1, 2)}, Precision(4)) ==
        Cert::yes);
  CHECK(formally_disjoint(ui, {0, Rational(1, 8)}, {1, Rational(1, 8)}, Precision(3)) ==
        Cert::yes);
  CHECK(formally_disjoint(ui, {0, Rational(1, 2)}, {2, Rational(1, 4)}, Precision(10)) ==
        Cert::unknown);
  auto cs = builtin_space("cantor_standard");
  CHECK(formally_disjoint(cs, {0, Rational(1, 4)}, {1, Rational(1, 4)}, Precision(3)) ==
        Cert::yes);
}

TEST_CASE("formal inclusion implies set inclusion (sampled)") {
  SplitMix rng(31);
  for (const char* label : {"unit_interval", "cantor_standard"}) {
    auto s = builtin_space(label);
    int verified = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      RationalBall inner{static_cast<std::size_t>(rng.below(24)),
                         Rational(1 + static_cast<unsigned long>(rng.below(8)), 16UL)};
      RationalBall outer{static_cast<std::size_t>(rng.below(24)),
                         Rational(1 + static_cast<unsigned long>(rng.below(12)), 16UL)};
      if (formal_inclusion(s, inner, outer, Precision(10)) != Cert::yes) continue;
      ++verified;
      // Exhaustive check over a fine net of witnesses.
      for (auto n : s.net(8)) {
        if (s.exact_metric(n, inner.center) < inner.radius)
          CHECK(s.exact_metric(n, outer.center) < outer.radius);
      }
    }
    CHECK(verified > 10);
  }
}

TEST_CASE("verify_cover") {
  auto ui = builtin_space("unit_interval");
  CHECK(verify_cover(ui, {{0, Rational(3, 4)}, {1, Rational(3, 4)}}) == Cert::yes);
  CHECK(verify_cover(ui, {{0, Rational(1, 4)}}) == Cert::unknown);
  auto cs = builtin_space("cantor_standard");
  CHECK(verify_cover(cs, {{0, Rational(3, 4)}, {1, Rational(3, 4)}}) == Cert::yes);
}

TEST_CASE("max_over_space") {
  auto ui = builtin_space("unit_interval");
  // g = d(0, .) has max 1.
  ScalarOnSpace g;
  g.value = [&](std::size_t i, Precision k) { return ui.metric(0, i, k); };
  g.modulus = [](long t) { return t; };
  Rational q = max_over_space(ui, g, Precision(3));
  CHECK(abs(q - 1) <= pow2(-3));
  // constant zero
  ScalarOnSpace z;
  z.value = [](std::size_t, Precision) { return Rational(0); };
  z.modulus = [](long t) { return t; };
  CHECK(abs(max_over_space(ui, z, Precision(6))) <= pow2(-6));
}

TEST_CASE("point names from distance oracles") {
  auto ui = builtin_space("unit_interval");
  // The named point is p5 itself.
  auto self = [&](std::size_t n, Precision k) { return ui.metric(n, 5, k); };
  PointName nm = point_name_from_distances(ui, self);
  for (long k = 0; k <= 8; ++k)
    CHECK(ui.exact_metric(nm.at(Precision(k)), 5) <= pow2(-k));

  // x = 1/3 with exact distances; name(2) lands within 1/4.
  Rational third(1, 3);
  auto dist = [&](std::size_t n, Precision) -> Rational {
    return abs(unit_interval_point(n) - third);
  };
  PointName t = point_name_from_distances(ui, dist);
  CHECK(abs(unit_interval_point(t.at(Precision(2))) - third) <= Rational(1, 4));
  // Consecutive-index invariant.
  for (long k = 0; k <= 9; ++k) {
    Rational d = ui.exact_metric(t.at(Precision(k)), t.at(Precision(k + 1)));
    CHECK(d <= pow2(-k) + pow2(-k - 1));
  }

  // Cantor: naming 010101... by its distance oracle; prefixes must agree.
  auto cs = builtin_space("cantor_standard");
  auto cdist = [&](std::size_t n, Precision) -> Rational {
    unsigned long long w = cantor_word("cantor_standard", n);
    int first = 0;
    while (first < 40 && ((w >> first) & 1ULL) == ((first % 2 == 0) ? 0ULL : 1ULL)) ++first;
    if (first >= 40) return Rational(0);
    return pow2(-first);
  };
  PointName cn = point_name_from_distances(cs, cdist);
  for (long k = 1; k <= 6; ++k) {
    unsigned long long w = cantor_word("cantor_standard", cn.at(Precision(k)));
    for (int i = 0; i <= k; ++i)
      CHECK(((w >> i) & 1ULL) == ((i % 2 == 0) ? 0ULL : 1ULL));
  }
}

TEST_CASE("positive separation certificates") {
  auto cs = builtin_space("cantor_standard");
  auto sep = separation_lower_bound(cs, {0, Rational(3, 4)}, {1, Rational(3, 4)});
  REQUIRE(sep.has_value());
  CHECK(*sep > 0);
  // Overlapping balls never get a certificate.
  auto ui = builtin_space("unit_interval");
  CHECK(!separation_lower_bound(ui, {0, Rational(1, 2)}, {2, Rational(1, 2)}));
}

TEST_CASE("missing tbf is reported") {
  PresentedSpace::Data d;
  d.label = "bare";
  d.diam_bound = Rational(1);
  d.metric = [](std::size_t, std::size_t, Precision) { return Rational(0); };
  PresentedSpace bare(std::move(d));
  CHECK_THROWS_AS(bare.tbf(), Error);
  CHECK_THROWS_AS(verify_cover(bare, {{0, Rational(1)}}), Error);
}
