#include "accept.hpp"

#include <chrono>
#include <sstream>

#include "cantor.hpp"
#include "cstar.hpp"
#include "duality.hpp"
#include "error.hpp"
#include "evalmap.hpp"
#include "space.hpp"
#include "starpoly.hpp"

namespace evalpres::accept {

namespace {

using exact::Approximation;
using exact::GaussianRational;
using exact::Integer;
using exact::pow2;
using exact::Precision;
using exact::Rational;
using poly::StarPoly;
using space::PresentedSpace;

// Deterministic pseudo-random stream for the sampled checks.
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

// Exact value of p[gens] at a rational point of an induced presentation over
// unit_interval or segments (generators are the unit and distance functions).
GaussianRational exact_value_at(const StarPoly& p, const std::string& space_label,
                                const Rational& x) {
  auto arg = [&](unsigned long var) -> std::optional<Approximation> {
    if (var == 0) return Approximation::exact(GaussianRational(Rational(1)));
    Rational pv = space_label == "segments" ? space::segments_point(var - 1)
                                            : space::unit_interval_point(var - 1);
    return Approximation::exact(GaussianRational(Rational(abs(x - pv))));
  };
  Approximation v = poly::eval_poly(p, arg);
  return v.value;  // exact: all inputs have zero radius
}

// Brute-force sup-norm oracle: exact grid maximum plus a Lipschitz tail.
struct GridNorm {
  Rational lower;  // max over the grid (a true lower bound)
  Rational upper;  // lower + L * (covering radius)
};

GridNorm grid_norm_unit_interval(const StarPoly& p, long grid_log2) {
  Rational best_sq(0);
  long steps = 1L << grid_log2;
  for (long t = 0; t <= steps; ++t) {
    Rational x(t);
    x /= pow2(grid_log2);
    x.canonicalize();
    GaussianRational v = exact_value_at(p, "unit_interval", x);
    Rational sq = v.norm_sq();
    if (sq > best_sq) best_sq = sq;
  }
  // |.| from |.|^2 within 2^-24.
  Rational lower = exact::sqrt_approx(best_sq, 24) - pow2(-24);
  if (lower < 0) lower = 0;
  auto [sup, lip] = poly::bounds_of(p, poly::GeneratorBounds{Rational(1), Rational(1), true, nullptr});
  (void)sup;
  GridNorm g;
  g.lower = lower;
  g.upper = lower + 2 * pow2(-24) + lip * pow2(-(grid_log2 + 1));
  return g;
}

std::string ratstr(const Rational& q) { return exact::rational_to_string(q); }

// --- Criterion 1: evaluation soundness ------------------------------------------

CriterionResult criterion_evaluation() {
  CriterionResult res{1, "evaluation-soundness", false, "", 0};
  SplitMix rng(0x1001);
  int checked = 0;
  for (const std::string& label : {std::string("unit_interval"), std::string("segments")}) {
    PresentedSpace x = space::builtin_space(label);
    auto a = cstar::PresentedCStar::induce(x);
    for (int trial = 0; trial < 50; ++trial) {
      StarPoly p = poly::poly_from_index_u64(rng.below(4000));
      Rational pt;
      if (label == "unit_interval") {
        unsigned long den = 16 + static_cast<unsigned long>(rng.below(48));
        pt = Rational(static_cast<unsigned long>(rng.below(den + 1)), den);
        pt.canonicalize();
      } else {
        unsigned long seg = static_cast<unsigned long>(rng.below(4));
        Rational off(static_cast<unsigned long>(rng.below(33)), 32UL);
        off.canonicalize();
        pt = 3 * pow2(-static_cast<long>(seg) - 2) + off * pow2(-static_cast<long>(seg) - 1);
        pt.canonicalize();
      }
      GaussianRational truth = exact_value_at(p, label, pt);
      space::PointName nm = space::builtin_point_name(x, pt);
      auto f = cstar::VectorName::of_poly(p);
      for (long k = 0; k <= 10; ++k) {
        Approximation got =
            evalmap::evaluate(a, evalmap::ProductName{f, nm}, Precision(k));
        Rational err_sq = (got.value - truth).norm_sq();
        if (err_sq > pow2(-2 * k)) {
          res.detail = "failed at space=" + label + " poly=" + poly::poly_to_string(p) +
                       " point=" + ratstr(pt) + " k=" + std::to_string(k);
          return res;
        }
      }
      ++checked;
    }
  }
  res.passed = true;
  res.detail = std::to_string(checked) + " (poly, point) pairs sound for k<=10";
  return res;
}

// --- Criterion 2: norm soundness ---------------------------------------------------

CriterionResult criterion_norms() {
  CriterionResult res{2, "norm-soundness", false, "", 0};
  PresentedSpace ui = space::builtin_space("unit_interval");
  auto a = cstar::PresentedCStar::induce(ui);
  for (unsigned long j = 0; j < 200; ++j) {
    StarPoly p = poly::poly_from_index_u64(j);
    Rational got = a.norm_poly(p, Precision(8));
    GridNorm g = grid_norm_unit_interval(p, 12);
    // |got - ||p||| <= 2^-8 and ||p|| in [g.lower, g.upper].
    if (got + pow2(-8) < g.lower || got - pow2(-8) > g.upper) {
      res.detail = "norm mismatch at index " + std::to_string(j) + ": got " + ratstr(got) +
                   " grid [" + ratstr(g.lower) + ", " + ratstr(g.upper) + "]";
      return res;
    }
  }
  Rational unit_norm = a.norm_poly(StarPoly::generator(0), Precision(10));
  if (abs(unit_norm - 1) > pow2(-10)) {
    res.detail = "unit norm " + ratstr(unit_norm);
    return res;
  }
  auto seg = cstar::PresentedCStar::induce(space::builtin_space("segments"));
  Rational s1 = seg.norm_poly(StarPoly::generator(1), Precision(8));
  if (abs(s1 - Rational(5, 4)) > pow2(-8)) {
    res.detail = "segments generator norm " + ratstr(s1) + " (want 5/4)";
    return res;
  }
  res.passed = true;
  res.detail = "200 norms within 2^-8 of the 2^-12 grid oracle; |1|=1; segments t-norm=5/4";
  return res;
}

// --- Criterion 3: diagram soundness ---------------------------------------------------

CriterionResult criterion_diagrams() {
  CriterionResult res{3, "diagram-soundness", false, "", 0};
  // Metric diagrams over every built-in, checked against the exact metric.
  for (const std::string& label : space::builtin_space_labels()) {
    PresentedSpace x = space::builtin_space(label);
    auto entries = space::diagram_emit(x, 500);
    for (const auto& e : entries) {
      Rational d = x.exact_metric(e.j, e.k);
      if (!(e.r < d && d < e.r2)) {
        res.detail = "metric diagram violation on " + label;
        return res;
      }
    }
    if (entries.size() < 500) {
      res.detail = label + " produced only " + std::to_string(entries.size()) + " entries";
      return res;
    }
  }
  // Algebra diagram over unit_interval against the grid oracle.
  auto a = cstar::PresentedCStar::induce(space::builtin_space("unit_interval"));
  auto entries = cstar::algebra_diagram_emit(a, 500);
  if (entries.size() < 500) {
    res.detail = "algebra diagram produced only " + std::to_string(entries.size());
    return res;
  }
  for (const auto& e : entries) {
    if (!e.j.fits_ulong_p()) {
      res.detail = "unexpectedly large index emitted";
      return res;
    }
    StarPoly p = poly::poly_from_index(e.j);
    GridNorm g = grid_norm_unit_interval(p, 12);
    // Strict bounds must be compatible with the certified norm interval.
    if (e.r >= g.upper || e.r2 <= g.lower) {
      res.detail = "algebra diagram violation at j=" + e.j.get_str() + " r=" + ratstr(e.r) +
                   " r2=" + ratstr(e.r2) + " grid [" + ratstr(g.lower) + "," + ratstr(g.upper) +
                   "]";
      return res;
    }
  }
  res.passed = true;
  res.detail = "500 metric entries per built-in and 500 algebra entries all sound";
  return res;
}

// --- Criterion 4: evaluative round-trip (translation) ------------------------------------

CriterionResult criterion_translate() {
  CriterionResult res{4, "evaluative-round-trip", false, "", 0};
  auto a_plus = cstar::PresentedCStar::induce(space::builtin_space("unit_interval"));
  auto a_op = cstar::permuted_opaque_copy(a_plus);
  duality::TranslateOptions opt;
  opt.k_limit = 5;
  opt.budget = 200000;

  std::vector<std::pair<std::string, cstar::VectorName>> cases;
  cases.emplace_back("unit", a_op.unit_name());
  cases.emplace_back("gen0", a_op.generator_names()[0]);
  cases.emplace_back("gen1", a_op.generator_names()[1]);
  cases.emplace_back("gen0 + 1/2*unit",
                     cstar::name_add(a_op, a_op.generator_names()[0],
                                     cstar::name_scale(a_op, GaussianRational(Rational(1, 2)),
                                                       a_op.unit_name())));
  auto unit = a_op.unit_name();
  auto gens = a_op.generator_names();
  auto binding = [unit, gens](unsigned long var) -> cstar::VectorName {
    if (var == 0) return unit;
    if (var - 1 < gens.size()) return gens[var - 1];
    throw Error::budget_exhausted("unbound generator");
  };
  for (auto& [label, v] : cases) {
    duality::TranslateResult tr = duality::translate_name(a_op, a_plus, v, opt);
    if (tr.certified_k < 5) {
      res.detail = label + " certified only to k=" + std::to_string(tr.certified_k);
      return res;
    }
    for (long k = 0; k <= 5; ++k) {
      // Independent re-check: substitute the translated approximant back and
      // measure the distance through the opaque oracle.
      StarPoly w = tr.name.poly_at(Precision(k));
      cstar::VectorName back = cstar::substitute_names(a_op, w, binding);
      Rational dist = cstar::name_distance_upper(a_op, back, v, Precision(k + 4));
      if (dist > pow2(-k) + pow2(-(k + 2))) {
        res.detail = label + " round-trip distance " + ratstr(dist) + " at k=" +
                     std::to_string(k);
        return res;
      }
    }
  }
  res.passed = true;
  res.detail = "4 vectors translate with norm-identity certificates for k<=5";
  return res;
}

// --- Criterion 5: effective Banach-Stone ---------------------------------------------------

CriterionResult criterion_banach_stone() {
  CriterionResult res{5, "banach-stone", false, "", 0};
  PresentedSpace ui = space::builtin_space("unit_interval");
  auto a = cstar::PresentedCStar::induce(ui);

  struct Case {
    std::string psi;
    std::vector<Rational> samples;
  };
  std::vector<Case> cases;
  cases.push_back({"one_minus_x",
                   {Rational(0), Rational(1), Rational(1, 2), Rational(1, 4), Rational(3, 4),
                    Rational(1, 8), Rational(3, 8), Rational(5, 8), Rational(7, 8),
                    Rational(5, 16)}});
  cases.push_back({"x_squared",
                   {Rational(0), Rational(1), Rational(1, 2), Rational(1, 64),
                    Rational(1, 128), Rational(3, 512), Rational(129, 256),
                    Rational(255, 512), Rational(511, 512), Rational(1023, 1024)}});

  for (const auto& c : cases) {
    evalmap::PointMap psi = evalmap::builtin_point_map(c.psi, ui);
    // Composition certificates must reach k >= 3 on a generator.
    evalmap::VectorSearchOptions copt;
    copt.budget = 200000;
    copt.k_limit = 3;
    duality::CompositionResult comp = duality::composition_operator(
        psi, a, a, cstar::VectorName::of_poly(StarPoly::generator(1)), copt);
    if (comp.certified_k < 3) {
      res.detail = c.psi + ": composition certified only to k=" +
                   std::to_string(comp.certified_k);
      return res;
    }
    duality::IsoOracle t = duality::iso_from_composition(psi, a, a, 4000000);
    for (const Rational& p : c.samples) {
      space::PointName lam = space::builtin_point_name(ui, p);
      space::PointName img = duality::spatial_realization(t, a, a, lam);
      std::size_t idx = img.at(Precision(6));
      Rational got = space::unit_interval_point(idx);
      Rational want = c.psi == "one_minus_x" ? Rational(1 - p) : Rational(p * p);
      if (abs(got - want) > pow2(-6)) {
        res.detail = c.psi + " at p=" + ratstr(p) + ": got " + ratstr(got) + " want " +
                     ratstr(want);
        return res;
      }
    }
  }
  res.passed = true;
  res.detail = "psi in {1-x, x^2} reproduced within 2^-6 at 10 samples each; "
               "composition certificates reach k>=3";
  return res;
}

// --- Criterion 6: Cantor homeomorphism -------------------------------------------------------

CriterionResult criterion_cantor() {
  CriterionResult res{6, "cantor-homeomorphism", false, "", 0};
  PresentedSpace cv = space::builtin_space("cantor_variant");
  cantor::Homeomorphism h = cantor::build_homeomorphism(cv, 4);
  for (std::size_t s = 0; s < h.levels.size(); ++s) {
    const cantor::CylinderAssignment* prev = s == 0 ? nullptr : &h.levels[s - 1];
    cantor::ConditionReport rep = cantor::check_conditions(cv, h.levels[s], prev);
    if (!rep.all()) {
      res.detail = "conditions failed at level " + std::to_string(s) +
                   " (partition=" + std::to_string(rep.sigma_partition) +
                   " separated=" + std::to_string(rep.balls_separated) +
                   " diam=" + std::to_string(rep.diameters_ok) +
                   " cover=" + std::to_string(rep.covers) +
                   " parents=" + std::to_string(rep.parents_ok) + ")";
      return res;
    }
  }
  // Images of distinct depth-4 cylinders stay positively separated.
  const auto& leaves = h.levels.back().entries;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j)
      if (!space::separation_lower_bound(cv, leaves[i].ball, leaves[j].ball)) {
        res.detail = "leaf balls " + std::to_string(i) + "," + std::to_string(j) +
                     " not certifiably separated";
        return res;
      }
  res.passed = true;
  res.detail = "depth-4 refinement of cantor_variant passes all level conditions; " +
               std::to_string(leaves.size()) + " separated leaf balls";
  return res;
}

// --- Criterion 7: compactness transport -------------------------------------------------------

CriterionResult criterion_transport() {
  CriterionResult res{7, "compactness-transport", false, "", 0};
  // Along the reflection on [0,1].
  PresentedSpace ui = space::builtin_space("unit_interval");
  evalmap::PointMap refl = evalmap::builtin_point_map("one_minus_x", ui);
  space::TotalBoundednessFunction t1 = duality::transport_tbf(refl, ui, ui);
  for (long j = 0; j <= 6; ++j) {
    std::vector<space::RationalBall> balls;
    for (std::size_t c : t1.cover(j)) balls.push_back(space::RationalBall{c, pow2(-j)});
    if (space::verify_cover(ui, balls) != space::Cert::yes) {
      res.detail = "reflection transport fails verify_cover at j=" + std::to_string(j);
      return res;
    }
  }
  // Along the Cantor cover-refinement map.  The variant's cylinder schedule
  // reaches output diameter 2^-8 (needed for j<=6) at refinement depth 8.
  PresentedSpace cv = space::builtin_space("cantor_variant");
  PresentedSpace cs = space::builtin_space("cantor_standard");
  cantor::Homeomorphism h = cantor::build_homeomorphism(cv, 8);
  space::TotalBoundednessFunction t2 = duality::transport_tbf(h.map, cs, cv);
  for (long j = 0; j <= 6; ++j) {
    std::vector<space::RationalBall> balls;
    for (std::size_t c : t2.cover(j)) balls.push_back(space::RationalBall{c, pow2(-j)});
    if (space::verify_cover(cv, balls) != space::Cert::yes) {
      res.detail = "cantor transport fails verify_cover at j=" + std::to_string(j);
      return res;
    }
  }
  res.passed = true;
  res.detail = "transported nets cover for j<=6 along 1-x and the depth-8 cantor map";
  return res;
}

// --- Criterion 8: C*-identity -------------------------------------------------------------------

CriterionResult criterion_cstar_identity() {
  CriterionResult res{8, "cstar-identity", false, "", 0};
  auto a = cstar::PresentedCStar::induce(space::builtin_space("unit_interval"));
  SplitMix rng(0x8008);
  for (int trial = 0; trial < 50; ++trial) {
    StarPoly u = poly::poly_from_index_u64(rng.below(3000));
    Rational nu = a.norm_poly(u, Precision(7));
    Rational nuu = a.norm_poly(u.adjoint() * u, Precision(7));
    Rational lhs = abs(nuu - nu * nu);
    Rational allowed = 2 * pow2(-5) * (nu + 1);
    if (lhs > allowed) {
      res.detail = "C*-identity gap " + ratstr(lhs) + " > " + ratstr(allowed) + " for " +
                   poly::poly_to_string(u);
      return res;
    }
  }
  res.passed = true;
  res.detail = "50 random vectors satisfy ||u*u|| = ||u||^2 within 2*2^-5*(||u||+1)";
  return res;
}

// --- Criterion 9: unit-name honesty ---------------------------------------------------------------

CriterionResult criterion_unit_honesty() {
  CriterionResult res{9, "unit-name-honesty", false, "", 0};
  // A syntactically valid opaque manifest with no unit name.
  std::string manifest = R"({"label":"no-unit","norm_table":[{"j":1,"k":8,"q":"1/1"}]})";
  auto a_op = cstar::opaque_from_manifest_json(manifest);
  if (a_op.has_unit_name()) {
    res.detail = "manifest without unit_name still reports one";
    return res;
  }
  auto a_plus = cstar::PresentedCStar::induce(space::builtin_space("unit_interval"));
  try {
    duality::translate_name(a_op, a_plus, cstar::rational_vector_name(Integer(1)), {});
    res.detail = "translation proceeded without a unit name";
    return res;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::bad_manifest) {
      res.detail = std::string("wrong error class: ") + e.what();
      return res;
    }
  }
  res.passed = true;
  res.detail = "operations refuse opaque presentations lacking an explicit unit name";
  return res;
}

}  // namespace

std::vector<int> all_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9}; }

CriterionResult run_criterion(int id) {
  auto start = std::chrono::steady_clock::now();
  CriterionResult res;
  switch (id) {
    case 1: res = criterion_evaluation(); break;
    case 2: res = criterion_norms(); break;
    case 3: res = criterion_diagrams(); break;
    case 4: res = criterion_translate(); break;
    case 5: res = criterion_banach_stone(); break;
    case 6: res = criterion_cantor(); break;
    case 7: res = criterion_transport(); break;
    case 8: res = criterion_cstar_identity(); break;
    case 9: res = criterion_unit_honesty(); break;
    default: throw Error::bad_argument("unknown criterion " + std::to_string(id));
  }
  auto end = std::chrono::steady_clock::now();
  res.seconds = std::chrono::duration<double>(end - start).count();
  return res;
}

std::string report_json(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  out << "{\"criteria\":[";
  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i) out << ",";
    const auto& r = results[i];
    all = all && r.passed;
    out << "{\"id\":" << r.id << ",\"name\":\"" << r.name << "\",\"passed\":"
        << (r.passed ? "true" : "false") << ",\"detail\":\"" << r.detail << "\"}";
  }
  out << "],\"all_passed\":" << (all ? "true" : "false") << "}";
  return out.str();
}

}  // namespace evalpres::accept
