#include "evalmap.hpp"

#include <algorithm>

#include "error.hpp"

namespace evalpres::evalmap {

namespace {

using exact::GaussianRational;
using exact::pow2;

long lip_log(const StarPoly& p, const poly::GeneratorBounds& gb) {
  auto [sup, lip] = poly::bounds_of(p, gb);
  (void)sup;
  return exact::clog2_at_least_one(lip);
}

}  // namespace

Approximation evaluate(const PresentedCStar& a, const ProductName& pn, Precision k) {
  if (!a.induced()) throw Error::bad_argument("evaluate requires an induced presentation");
  StarPoly rho = pn.vec.poly_at(Precision(k.k + 1));
  long ll = lip_log(rho, a.gb());
  std::size_t i = pn.pt.at(Precision(k.k + 2 + ll));
  Approximation at_point = a.eval_at_point(rho, i, Precision(k.k + 2));
  // value error: poly eval radius + Lipschitz drift + name tail.
  Rational radius = at_point.radius + pow2(-(k.k + 2)) + pow2(-(k.k + 1));
  return Approximation(at_point.value, radius);
}

std::function<Approximation(const VectorName&, Precision)> point_functional(
    const PresentedCStar& a, const PointName& pt) {
  return [a, pt](const VectorName& f, Precision k) {
    return evaluate(a, ProductName{f, pt}, k);
  };
}

ScalarMap vector_as_map(const PresentedCStar& a, const VectorName& v) {
  ScalarMap m;
  m.source_label = a.induced() ? a.base().label() : a.label();
  m.eval = [a, v](const PointName& pt, Precision k) {
    return evaluate(a, ProductName{v, pt}, k);
  };
  poly::GeneratorBounds gb = a.gb();
  VectorName vv = v;
  m.modulus = [vv, gb](long k) {
    StarPoly rho = vv.poly_at(Precision(k + 2));
    return k + 1 + lip_log(rho, gb);
  };
  return m;
}

std::optional<Integer> search_vector_at_level(const PresentedCStar& a, const ScalarMap& g,
                                              long k, unsigned long long budget) {
  if (!a.induced())
    throw Error::bad_argument("vector search requires an induced presentation");
  const PresentedSpace& x = a.base();
  poly::GeneratorBounds gb = a.gb();

  // Sample points used to reject candidates before the full net certificate.
  std::vector<std::size_t> samples = x.net(2);
  if (samples.size() > 8) samples.resize(8);
  long sample_prec = k + 3;
  std::vector<Approximation> gs;
  gs.reserve(samples.size());
  for (std::size_t s : samples)
    gs.push_back(g.eval(PointName::constant(s), Precision(sample_prec)));

  Rational threshold = pow2(-k);
  Rational cert_slack = pow2(-(k + 2));
  for (unsigned long long m = 0; m < budget; ++m) {
    StarPoly cand = poly::poly_from_index_u64(m);
    // Cheap rejection: a certified sample gap of at least 2^-k means the
    // full certificate cannot pass either.  max(|re|, |im|) is an exact
    // lower bound on the modulus.
    bool rejected = false;
    for (std::size_t si = 0; si < samples.size(); ++si) {
      Approximation cv = a.eval_at_point(cand, samples[si], Precision(sample_prec));
      Approximation diff = exact::approx_sub(cv, gs[si]);
      Rational zlow = abs(diff.value.re);
      Rational imlow = abs(diff.value.im);
      if (imlow > zlow) zlow = imlow;
      if (zlow - diff.radius >= threshold) {
        rejected = true;
        break;
      }
    }
    if (rejected) continue;
    // Full certificate: sup |cand - g| < 2^-k through the net.
    long cand_ll = lip_log(cand, gb);
    space::ScalarOnSpace diff_map;
    diff_map.value = [&a, &cand, &g](std::size_t i, Precision t) -> Rational {
      Approximation cv = a.eval_at_point(cand, i, Precision(t.k + 1));
      Approximation gv = g.eval(PointName::constant(i), Precision(t.k + 1));
      Approximation diff = exact::approx_abs(exact::approx_sub(cv, gv));
      return diff.value.re;
    };
    diff_map.modulus = [cand_ll, &g](long t) {
      return std::max(t + 1 + cand_ll, g.modulus(t + 1));
    };
    Rational q = space::max_over_space(x, diff_map, Precision(k + 2));
    if (q + cert_slack < threshold) return Integer(static_cast<unsigned long>(m));
  }
  return std::nullopt;
}

VectorSearchResult vector_name_from_map(const PresentedCStar& a, const ScalarMap& g,
                                        const VectorSearchOptions& options) {
  std::vector<Integer> found;
  for (long k = 0; k <= options.k_limit; ++k) {
    std::optional<Integer> winner = search_vector_at_level(a, g, k, options.budget);
    if (!winner) break;
    found.push_back(*winner);
  }
  VectorSearchResult out;
  out.certified_k = static_cast<long>(found.size()) - 1;
  if (found.empty())
    throw Error::budget_exhausted("vector search found no certificate at precision 2^0 within " +
                                  std::to_string(options.budget) + " candidates");
  auto levels = std::make_shared<std::vector<Integer>>(std::move(found));
  long certified = out.certified_k;
  out.name = VectorName([levels, certified](Precision k) -> Integer {
    long kk = k.k < 0 ? 0 : k.k;
    if (kk < static_cast<long>(levels->size())) return (*levels)[kk];
    throw Error::budget_exhausted("vector name certified only to 2^-" +
                                  std::to_string(certified));
  });
  return out;
}

// --- Built-in point maps -----------------------------------------------------------

namespace {

PointMap make_rational_poly_map(const PresentedSpace& domain,
                                std::function<Rational(const Rational&)> fn, long lip_log2,
                                const std::string& label) {
  if (domain.label() != "unit_interval")
    throw Error::bad_argument("map '" + label + "' is defined on unit_interval");
  PointMap m;
  m.source_label = domain.label();
  m.target_label = domain.label();
  m.modulus = [lip_log2](long k) { return k + lip_log2; };
  m.transform = [fn, lip_log2](const PointName& pt) {
    return PointName([fn, lip_log2, pt](Precision k) {
      std::size_t i = pt.at(Precision(k.k + 1 + lip_log2));
      Rational v = fn(space::unit_interval_point(i));
      // Nearest dyadic at level k+1: total error <= 2^-(k+1) + 2^-(k+1).
      long level = k.k + 1;
      Rational scaled = v * pow2(level);
      exact::Integer mnum;
      mpz_fdiv_q(mnum.get_mpz_t(),
                 exact::Integer(2 * scaled.get_num() + scaled.get_den()).get_mpz_t(),
                 exact::Integer(2 * scaled.get_den()).get_mpz_t());
      if (mnum < 0) mnum = 0;
      Rational q(mnum);
      q /= pow2(level);
      q.canonicalize();
      if (q > 1) q = 1;
      return space::unit_interval_index(q);
    });
  };
  return m;
}

}  // namespace

PointMap builtin_point_map(const std::string& label, const PresentedSpace& domain) {
  if (label == "identity") {
    PointMap m;
    m.source_label = domain.label();
    m.target_label = domain.label();
    m.modulus = [](long k) { return k; };
    m.transform = [](const PointName& pt) { return pt; };
    return m;
  }
  if (label == "one_minus_x")
    return make_rational_poly_map(
        domain, [](const Rational& v) -> Rational { return 1 - v; }, 0, label);
  if (label == "x_squared")
    return make_rational_poly_map(
        domain, [](const Rational& v) -> Rational { return v * v; }, 1, label);
  throw Error::bad_argument("unknown built-in map: " + label);
}

bool is_builtin_point_map(const std::string& label) {
  return label == "identity" || label == "one_minus_x" || label == "x_squared";
}

}  // namespace evalpres::evalmap
