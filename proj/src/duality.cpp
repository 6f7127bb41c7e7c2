#include "duality.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "error.hpp"
#include "starpoly.hpp"

namespace evalpres::duality {

namespace {

using exact::pow2;
using poly::StarPoly;
using space::PointName;

evalmap::ScalarMap composed_evaluation(const evalmap::PointMap& psi, const PresentedCStar& a0,
                                       const VectorName& f) {
  evalmap::ScalarMap g;
  g.source_label = psi.source_label;
  g.eval = [psi, a0, f](const PointName& pt, Precision k) {
    return evalmap::evaluate(a0, evalmap::ProductName{f, psi.transform(pt)}, k);
  };
  evalmap::ScalarMap fm = evalmap::vector_as_map(a0, f);
  auto f_modulus = fm.modulus;
  auto psi_modulus = psi.modulus;
  g.modulus = [f_modulus, psi_modulus](long t) { return psi_modulus(f_modulus(t)); };
  return g;
}

}  // namespace

VectorName IsoOracle::image(const VectorName& v) const {
  auto ap = apply;
  return VectorName([ap, v](Precision k) { return ap(v, k); });
}

IsoOracle iso_from_composition(const evalmap::PointMap& psi, const PresentedCStar& a0,
                               const PresentedCStar& a1, unsigned long long budget) {
  struct Memo {
    std::mutex mu;
    // Keyed by name identity, or by index for constant names (those are
    // semantically identified by the index and recur across calls).
    std::map<std::pair<unsigned long long, long>, std::optional<Integer>> by_identity;
    std::map<std::pair<Integer, long>, std::optional<Integer>> by_constant;
  };
  auto memo = std::make_shared<Memo>();
  IsoOracle t;
  t.label = "compose(" + psi.target_label + "<-" + psi.source_label + ")";
  t.apply = [memo, psi, a0, a1, budget](const VectorName& v, Precision k) -> Integer {
    std::optional<Integer> constant = v.constant_index();
    {
      std::lock_guard<std::mutex> lock(memo->mu);
      const std::optional<Integer>* hit = nullptr;
      if (constant) {
        auto it = memo->by_constant.find(std::make_pair(*constant, k.k));
        if (it != memo->by_constant.end()) hit = &it->second;
      } else {
        auto it = memo->by_identity.find(std::make_pair(v.id(), k.k));
        if (it != memo->by_identity.end()) hit = &it->second;
      }
      if (hit) {
        if (*hit) return **hit;
        throw Error::budget_exhausted("composition search exhausted (cached) at 2^-" +
                                      std::to_string(k.k));
      }
    }
    evalmap::ScalarMap g = composed_evaluation(psi, a0, v);
    std::optional<Integer> res = evalmap::search_vector_at_level(a1, g, k.k, budget);
    {
      std::lock_guard<std::mutex> lock(memo->mu);
      if (constant)
        memo->by_constant[std::make_pair(*constant, k.k)] = res;
      else
        memo->by_identity[std::make_pair(v.id(), k.k)] = res;
    }
    if (!res)
      throw Error::budget_exhausted("composition search exhausted at precision 2^-" +
                                    std::to_string(k.k));
    return *res;
  };
  return t;
}

space::PointName spatial_realization(const IsoOracle& t, const PresentedCStar& a0,
                                     const PresentedCStar& a1, const space::PointName& lambda,
                                     const space::SearchLimits& limits) {
  if (!a0.induced() || !a1.induced())
    throw Error::bad_argument("spatial_realization expects induced presentations");
  // Cache of T-images of the distance generators d(p_{0,n}, .).
  struct Gens {
    std::mutex mu;
    std::map<std::size_t, VectorName> images;
  };
  auto gens = std::make_shared<Gens>();
  IsoOracle tt = t;
  auto image_of = [gens, tt](std::size_t n) {
    std::lock_guard<std::mutex> lock(gens->mu);
    auto it = gens->images.find(n);
    if (it != gens->images.end()) return it->second;
    VectorName g = VectorName::of_poly(StarPoly::generator(static_cast<unsigned long>(n) + 1));
    VectorName img = tt.image(g);
    gens->images.emplace(n, img);
    return img;
  };
  PresentedCStar a1c = a1;
  space::PointName lam = lambda;
  auto dist = [image_of, a1c, lam](std::size_t n, Precision k) -> Rational {
    exact::Approximation v =
        evalmap::evaluate(a1c, evalmap::ProductName{image_of(n), lam}, k);
    return v.value.re;
  };
  return space::point_name_from_distances(a0.base(), dist, limits);
}

CompositionResult composition_operator(const evalmap::PointMap& psi, const PresentedCStar& a0,
                                       const PresentedCStar& a1, const VectorName& f,
                                       const evalmap::VectorSearchOptions& options) {
  evalmap::ScalarMap g = composed_evaluation(psi, a0, f);
  evalmap::VectorSearchResult res = evalmap::vector_name_from_map(a1, g, options);
  return CompositionResult{res.name, res.certified_k};
}

TranslateResult translate_name(const PresentedCStar& a_opaque, const PresentedCStar& a_plus,
                               const VectorName& v, const TranslateOptions& options) {
  if (!a_plus.induced()) throw Error::bad_argument("translate_name targets an induced presentation");
  // Bindings: x0 |-> unit name, x_{n+1} |-> name of d(p_n, .).  Both live in
  // the opaque presentation and must be supplied explicitly.
  VectorName unit = a_opaque.unit_name();
  if (!a_opaque.has_generator_names())
    throw Error::bad_manifest("opaque presentation '" + a_opaque.label() +
                              "' lacks generator names required for translation");
  const std::vector<VectorName>& gens = a_opaque.generator_names();
  auto binding = [unit, gens](unsigned long var) -> VectorName {
    if (var == 0) return unit;
    if (var - 1 < gens.size()) return gens[var - 1];
    throw Error::budget_exhausted("no name supplied for generator x" + std::to_string(var));
  };

  std::vector<Integer> found;
  for (long k = 0; k <= options.k_limit; ++k) {
    std::optional<Integer> winner;
    for (unsigned long long m = 0; m < options.budget; ++m) {
      StarPoly cand = poly::poly_from_index_u64(m);
      try {
        VectorName w = cstar::substitute_names(a_opaque, cand, binding);
        Rational dist = cstar::name_distance_upper(a_opaque, w, v, Precision(k + 2));
        if (dist < pow2(-k)) {
          winner = Integer(static_cast<unsigned long>(m));
          break;
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::budget_exhausted) continue;  // unbindable candidate
        throw;
      }
    }
    if (!winner) break;
    found.push_back(*winner);
  }
  TranslateResult out;
  out.certified_k = static_cast<long>(found.size()) - 1;
  if (found.empty())
    throw Error::budget_exhausted("translation found no certificate at precision 2^0");
  auto levels = std::make_shared<std::vector<Integer>>(std::move(found));
  long certified = out.certified_k;
  out.name = VectorName([levels, certified](Precision k) -> Integer {
    long kk = k.k < 0 ? 0 : k.k;
    if (kk < static_cast<long>(levels->size())) return (*levels)[kk];
    throw Error::budget_exhausted("translated name certified only to 2^-" +
                                  std::to_string(certified));
  });
  return out;
}

space::TotalBoundednessFunction transport_tbf(const evalmap::PointMap& phi,
                                              const space::PresentedSpace& x_plus,
                                              const space::PresentedSpace& x_sharp) {
  (void)x_sharp;
  if (!x_plus.has_tbf())
    throw Error::missing_tbf("transport_tbf requires a tbf on the source space");
  struct Memo {
    std::mutex mu;
    std::map<long, std::vector<std::size_t>> covers;
  };
  auto memo = std::make_shared<Memo>();
  space::PresentedSpace src = x_plus;
  evalmap::PointMap map = phi;
  return space::TotalBoundednessFunction{[memo, src, map](long j) {
    {
      std::lock_guard<std::mutex> lock(memo->mu);
      auto it = memo->covers.find(j);
      if (it != memo->covers.end()) return it->second;
    }
    long src_level = map.modulus(j + 2);
    if (src_level < 0) src_level = 0;
    std::vector<std::size_t> out;
    for (std::size_t c : src.net(src_level)) {
      space::PointName img = map.transform(space::PointName::constant(c));
      out.push_back(img.at(Precision(j + 2)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    {
      std::lock_guard<std::mutex> lock(memo->mu);
      memo->covers[j] = out;
    }
    return out;
  }};
}

}  // namespace evalpres::duality
