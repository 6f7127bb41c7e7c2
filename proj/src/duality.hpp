#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "cstar.hpp"
#include "evalmap.hpp"
#include "space.hpp"

namespace evalpres::duality {

using cstar::PresentedCStar;
using cstar::VectorName;
using exact::Integer;
using exact::Precision;
using exact::Rational;

// A computable isometric isomorphism consumed as a name transformer: apply
// answers a PolyIndex j with ||p_j[A1] - T(v)|| <= 2^-k.
struct IsoOracle {
  std::function<Integer(const VectorName&, Precision)> apply;
  std::string label;

  // T(v) as a vector name of the target presentation.
  VectorName image(const VectorName& v) const;
};

// T(f) = f∘psi realized through per-level certified searches; answers are
// memoized per (input name, precision), including failures.
IsoOracle iso_from_composition(const evalmap::PointMap& psi, const PresentedCStar& a0,
                               const PresentedCStar& a1,
                               unsigned long long budget = 200000);

// Effective Banach-Stone: from T and a name of p in X1, a name of psi(p) in
// X0 via the distance oracle n |-> (T d(p_{0,n}, .))(p).
space::PointName spatial_realization(const IsoOracle& t, const PresentedCStar& a0,
                                     const PresentedCStar& a1, const space::PointName& lambda,
                                     const space::SearchLimits& limits = {});

struct CompositionResult {
  VectorName name;
  long certified_k = -1;
};

// Names f∘psi by searching rational vectors of A1 against the evaluation of
// f at psi(p); budgets are per precision level and exhaustion at high
// precision is reported, not hidden.
CompositionResult composition_operator(const evalmap::PointMap& psi, const PresentedCStar& a0,
                                       const PresentedCStar& a1, const VectorName& f,
                                       const evalmap::VectorSearchOptions& options = {});

struct TranslateOptions {
  unsigned long long budget = 200000;
  long k_limit = 3;
};

struct TranslateResult {
  VectorName name;
  long certified_k = -1;
};

// Reads a vector of an opaque presentation as a rational-vector name of the
// induced one, certified entirely through the opaque norm oracle after
// substituting the supplied unit/generator names.
TranslateResult translate_name(const PresentedCStar& a_opaque, const PresentedCStar& a_plus,
                               const VectorName& v, const TranslateOptions& options = {});

// Pushes a total boundedness function forward along a surjective computable
// map: centers are images of the source net at matching precision.
space::TotalBoundednessFunction transport_tbf(const evalmap::PointMap& phi,
                                              const space::PresentedSpace& x_plus,
                                              const space::PresentedSpace& x_sharp);

}  // namespace evalpres::duality
