#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "space.hpp"
#include "starpoly.hpp"

namespace evalpres::cstar {

using exact::Approximation;
using exact::GaussianRational;
using exact::Integer;
using exact::Precision;
using exact::Rational;
using poly::StarPoly;

// Fast-Cauchy vector name: k |-> index j with ||p_j[A] - v|| <= 2^-k.
class VectorName {
public:
  VectorName() = default;
  explicit VectorName(std::function<Integer(Precision)> fn);
  static VectorName constant(Integer index);
  static VectorName of_poly(const StarPoly& p);

  Integer at(Precision k) const;
  StarPoly poly_at(Precision k) const { return poly::poly_from_index(at(k)); }
  // Process-unique identity, stable for copies of the same underlying name.
  unsigned long long id() const;
  // Set for names that return one index at every precision; such names are
  // semantically identified by that index (used by memo tables).
  std::optional<Integer> constant_index() const;
  bool valid() const { return state_ != nullptr; }

private:
  struct State {
    std::function<Integer(Precision)> fn;
    std::map<long, Integer> memo;
    std::mutex mu;
    unsigned long long serial = 0;
    std::optional<Integer> constant;
  };
  std::shared_ptr<State> state_;
};

struct AlgebraDiagramEntry {
  Rational r;
  Integer j;
  Rational r2;
};

// Presentation of C*(X): either induced by a presented space (unit plus the
// distance functions d(p_n, .)) or opaque behind a norm oracle with
// explicitly supplied names.
class PresentedCStar {
public:
  using NormOracle = std::function<Rational(const Integer&, Precision)>;

  static PresentedCStar induce(const space::PresentedSpace& base);

  struct OpaqueData {
    std::string label;
    NormOracle norm_oracle;
    std::optional<VectorName> unit_name;
    std::vector<VectorName> generator_names;
    poly::GeneratorBounds gb;
  };
  static PresentedCStar opaque(OpaqueData data);

  const std::string& label() const { return data_->label; }
  bool induced() const { return data_->induced; }
  const space::PresentedSpace& base() const;
  const poly::GeneratorBounds& gb() const { return data_->gb; }

  // |result - ||p_j[A]|| | <= 2^-k.
  Rational norm_index(const Integer& j, Precision k) const;
  Rational norm_poly(const StarPoly& p, Precision k) const;

  bool has_unit_name() const;
  VectorName unit_name() const;
  bool has_generator_names() const { return !data_->generator_names.empty(); }
  const std::vector<VectorName>& generator_names() const { return data_->generator_names; }

  // Induced presentations only: evaluation of p[gens] at the i-th
  // distinguished point, certified to radius <= 2^-t.
  Approximation eval_at_point(const StarPoly& p, std::size_t i, Precision t) const;

  // |p[gens]| as a real map on the base space (induced only).
  space::ScalarOnSpace abs_value_map(const StarPoly& p) const;

private:
  struct Data {
    std::string label;
    bool induced = false;
    std::optional<space::PresentedSpace> base;
    NormOracle norm_oracle;
    std::optional<VectorName> unit;
    std::vector<VectorName> generator_names;
    poly::GeneratorBounds gb;
  };
  explicit PresentedCStar(Data d) : data_(std::make_shared<Data>(std::move(d))) {}
  std::shared_ptr<Data> data_;
};

// --- Diagram ---------------------------------------------------------------

std::vector<AlgebraDiagramEntry> algebra_diagram_emit(const PresentedCStar& a,
                                                      std::size_t budget);
std::string algebra_entry_jsonl(const AlgebraDiagramEntry& e);

// --- Algebra operations on names ---------------------------------------------

VectorName name_add(const PresentedCStar& a, const VectorName& u, const VectorName& v);
VectorName name_mul(const PresentedCStar& a, const VectorName& u, const VectorName& v);
VectorName name_scale(const PresentedCStar& a, const GaussianRational& c, const VectorName& u);
VectorName name_adjoint(const PresentedCStar& a, const VectorName& u);
VectorName rational_vector_name(const Integer& j);

// Certified upper bound on the named vector's norm.
Rational name_norm_upper(const PresentedCStar& a, const VectorName& u, Precision t);
// Certified upper bound on ||u - v||.
Rational name_distance_upper(const PresentedCStar& a, const VectorName& u, const VectorName& v,
                             Precision t);

// Name of p[w_0, w_1, ...] where binding(v) names the vector substituted for
// x_v.  Used to read rational vectors of one presentation inside another.
VectorName substitute_names(const PresentedCStar& a, const StarPoly& p,
                            std::function<VectorName(unsigned long)> binding);

// --- Opaque fixtures and manifests ----------------------------------------------

// Opaque copy of an induced presentation with distinguished vectors permuted
// by the involution n <-> n^1.  The unit is no longer at slot zero.
PresentedCStar permuted_opaque_copy(const PresentedCStar& induced);

// Manifest format: {"label": ..., "norm_table": [{"j":., "k":., "q":"a/b"}],
// "unit_name": [j0, j1, ...], "generator_names": [[...], ...]}.  unit_name
// and generator_names are optional; operations needing them fail cleanly.
PresentedCStar opaque_from_manifest_json(const std::string& json_text);

// --- Segments fixtures -----------------------------------------------------------

// Indicator of J_0 ∪ ... ∪ J_m ∪ {0} evaluated at a distinguished point.
bool segments_indicator(unsigned long m, const Rational& point_value);
// Norm of (p[gens] · Ind_m) over the segments space within 2^-k.
Rational segments_indicator_norm(const PresentedCStar& a, const StarPoly& p, unsigned long m,
                                 Precision k);

}  // namespace evalpres::cstar
