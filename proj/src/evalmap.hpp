#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cstar.hpp"
#include "space.hpp"
#include "starpoly.hpp"

namespace evalpres::evalmap {

using cstar::PresentedCStar;
using cstar::VectorName;
using exact::Approximation;
using exact::Integer;
using exact::Precision;
using exact::Rational;
using poly::StarPoly;
using space::PointName;
using space::PresentedSpace;

// Name of a pair (f, p) in the product presentation, with metric
// max{||u - v||, d(p, q)}.
struct ProductName {
  VectorName vec;
  PointName pt;
};

// Computable map between presented spaces: a point-name transformer with an
// explicit modulus of continuity (d <= 2^-modulus(k) forces output distance
// <= 2^-k).
struct PointMap {
  std::function<PointName(const PointName&)> transform;
  std::function<long(long)> modulus;
  std::string source_label;
  std::string target_label;
};

// Computable map into the scalars, same modulus contract.
struct ScalarMap {
  std::function<Approximation(const PointName&, Precision)> eval;
  std::function<long(long)> modulus;
  std::string source_label;
};

// |result.value - f(p)| <= 2^-k for the pair (f, p) named by pn.
Approximation evaluate(const PresentedCStar& a, const ProductName& pn, Precision k);

// The character p-hat: f |-> f(p).
std::function<Approximation(const VectorName&, Precision)> point_functional(
    const PresentedCStar& a, const PointName& pt);

// A named vector read as a map X -> C.
ScalarMap vector_as_map(const PresentedCStar& a, const VectorName& v);

struct VectorSearchOptions {
  unsigned long long budget = 200000;  // candidate indices per precision level
  long k_limit = 3;
};

struct VectorSearchResult {
  VectorName name;
  long certified_k = -1;  // deepest precision with a certificate
};

// Least PolyIndex certified within 2^-k of g (sup norm through the net), or
// nullopt when the budget runs out.
std::optional<Integer> search_vector_at_level(const PresentedCStar& a, const ScalarMap& g,
                                              long k, unsigned long long budget);

// Fair search for rational vectors approximating g, certified through the
// computable-compactness norm.  The returned name answers queries up to the
// certified precision and reports budget exhaustion beyond it.
VectorSearchResult vector_name_from_map(const PresentedCStar& a, const ScalarMap& g,
                                        const VectorSearchOptions& options = {});

// Built-in unit-interval homeomorphisms: identity, one_minus_x, x_squared.
PointMap builtin_point_map(const std::string& label, const PresentedSpace& domain);
bool is_builtin_point_map(const std::string& label);

}  // namespace evalpres::evalmap
