#include "cstar.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include "error.hpp"
#include "json.hpp"

namespace evalpres::cstar {

namespace {

using exact::pow2;
using space::Cert;

StarPoly rename_vars(const StarPoly& p, const std::function<unsigned long(unsigned long)>& fn) {
  std::vector<poly::Term> out;
  for (const auto& term : p.terms()) {
    poly::Monomial m;
    m.reserve(term.mono.size());
    for (const auto& lit : term.mono) m.push_back(poly::Literal{fn(lit.var), lit.star});
    out.push_back(poly::Term{term.coeff, std::move(m)});
  }
  return StarPoly::from_terms(std::move(out));
}

}  // namespace

namespace {
std::atomic<unsigned long long> name_serial{1};
}

VectorName::VectorName(std::function<Integer(Precision)> fn)
    : state_(std::make_shared<State>()) {
  state_->fn = std::move(fn);
  state_->serial = name_serial.fetch_add(1);
}

unsigned long long VectorName::id() const {
  if (!state_) return 0;
  return state_->serial;
}

VectorName VectorName::constant(Integer index) {
  VectorName v([index](Precision) { return index; });
  v.state_->constant = index;
  return v;
}

std::optional<Integer> VectorName::constant_index() const {
  if (!state_) return std::nullopt;
  return state_->constant;
}

VectorName VectorName::of_poly(const StarPoly& p) {
  return constant(poly::index_of(p));
}

Integer VectorName::at(Precision k) const {
  if (!state_) throw Error::bad_argument("empty vector name");
  std::lock_guard<std::mutex> lock(state_->mu);
  auto it = state_->memo.find(k.k);
  if (it != state_->memo.end()) return it->second;
  Integer v = state_->fn(k);
  state_->memo.emplace(k.k, v);
  return v;
}

// --- Presentation construction ------------------------------------------------

PresentedCStar PresentedCStar::induce(const space::PresentedSpace& base) {
  if (!base.has_tbf())
    throw Error::missing_tbf("induce requires a computably compact presentation (no tbf on '" +
                             base.label() + "')");
  Data d;
  d.label = "C*(" + base.label() + ")";
  d.induced = true;
  d.base = base;
  Rational sup = base.diam_bound() < 1 ? Rational(1) : base.diam_bound();
  d.gb = poly::GeneratorBounds{sup, Rational(1), true, nullptr};
  d.unit = VectorName::of_poly(StarPoly::generator(0));
  return PresentedCStar(std::move(d));
}

PresentedCStar PresentedCStar::opaque(OpaqueData data) {
  Data d;
  d.label = data.label.empty() ? "opaque" : data.label;
  d.induced = false;
  d.norm_oracle = std::move(data.norm_oracle);
  d.unit = std::move(data.unit_name);
  d.generator_names = std::move(data.generator_names);
  d.gb = std::move(data.gb);
  if (!d.norm_oracle) throw Error::bad_manifest("opaque presentation requires a norm oracle");
  return PresentedCStar(std::move(d));
}

const space::PresentedSpace& PresentedCStar::base() const {
  if (!data_->base)
    throw Error::bad_argument("presentation '" + data_->label + "' has no base space");
  return *data_->base;
}

bool PresentedCStar::has_unit_name() const { return data_->unit.has_value(); }

VectorName PresentedCStar::unit_name() const {
  if (!data_->unit)
    throw Error::bad_manifest("opaque presentation '" + data_->label +
                              "' lacks an explicit unit name; it cannot be synthesized");
  return *data_->unit;
}

Approximation PresentedCStar::eval_at_point(const StarPoly& p, std::size_t i, Precision t) const {
  if (!data_->induced)
    throw Error::bad_argument("eval_at_point requires an induced presentation");
  const space::PresentedSpace& x = *data_->base;
  // Analytic argument precision: the worst-case sensitivity of p to argument
  // error eps is bounded by sum_terms |c| * deg * max(1,D)^(deg-1) * eps.
  Rational dmax = data_->gb.sup_bound < 1 ? Rational(1) : data_->gb.sup_bound;
  Rational sens(0);
  for (const auto& term : p.terms()) {
    if (term.mono.empty()) continue;
    Rational factor = term.coeff.abs_upper() * static_cast<unsigned long>(term.mono.size());
    for (std::size_t d = 1; d < term.mono.size(); ++d) factor *= dmax;
    sens += factor;
  }
  long arg_prec = t.k + 2 + exact::clog2_at_least_one(sens < 1 ? Rational(1) : sens);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Precision a(arg_prec);
    auto args = [&](unsigned long var) -> std::optional<Approximation> {
      if (var == 0) return Approximation::exact(GaussianRational(Rational(1)));
      Rational q = x.metric(var - 1, i, a);
      return Approximation(GaussianRational(q), a.eps());
    };
    Approximation out = poly::eval_poly(p, args);
    if (out.radius <= t.eps()) return out;
    arg_prec += 4;
  }
  throw Error::oracle_violation("eval_at_point failed to reach the requested radius");
}

space::ScalarOnSpace PresentedCStar::abs_value_map(const StarPoly& p) const {
  if (!data_->induced)
    throw Error::bad_argument("abs_value_map requires an induced presentation");
  PresentedCStar self = *this;
  auto [sup, lip] = poly::bounds_of(p, data_->gb);
  (void)sup;
  long lip_log = exact::clog2_at_least_one(lip);
  space::ScalarOnSpace g;
  g.value = [self, p](std::size_t i, Precision k) -> Rational {
    Approximation v = self.eval_at_point(p, i, Precision(k.k + 1));
    Approximation a = exact::approx_abs(v);
    if (a.radius > k.eps())
      throw Error::oracle_violation("abs_value_map precision bookkeeping failed");
    return a.value.re;
  };
  g.modulus = [lip_log](long t) { return t + lip_log; };
  return g;
}

Rational PresentedCStar::norm_poly(const StarPoly& p, Precision k) const {
  if (!data_->induced) return data_->norm_oracle(poly::index_of(p), k);
  return space::max_over_space(*data_->base, abs_value_map(p), k);
}

Rational PresentedCStar::norm_index(const Integer& j, Precision k) const {
  if (!data_->induced) return data_->norm_oracle(j, k);
  return norm_poly(poly::poly_from_index(j), k);
}

// --- Diagram ---------------------------------------------------------------------

std::vector<AlgebraDiagramEntry> algebra_diagram_emit(const PresentedCStar& a,
                                                      std::size_t budget) {
  std::vector<AlgebraDiagramEntry> out;
  if (budget == 0) return out;
  std::set<std::tuple<Rational, Integer, Rational>> seen;
  std::map<std::pair<unsigned long, long>, Rational> norm_memo;
  auto norm_at = [&](unsigned long j, long m) -> Rational {
    auto key = std::make_pair(j, m);
    auto it = norm_memo.find(key);
    if (it != norm_memo.end()) return it->second;
    Rational q = a.norm_index(Integer(j), Precision(m));
    norm_memo.emplace(key, q);
    return q;
  };
  for (unsigned long total = 0; total <= 64; ++total) {
    for (unsigned long a1 = 0; a1 <= total; ++a1)
      for (unsigned long a2 = 0; a2 + a1 <= total; ++a2)
        for (unsigned long a3 = 0; a3 + a2 + a1 <= total; ++a3) {
          unsigned long a4 = total - a1 - a2 - a3;
          // Norm probes beyond this precision are not worth their net cost;
          // entries needing finer margins simply stay unemitted.
          if (a4 > 12) continue;
          Rational r = poly::cw_value(Integer(a1 + 1));
          Rational r2 = poly::cw_value(Integer(a3 + 1));
          if (r >= r2) continue;
          long m = static_cast<long>(a4);
          Rational q = norm_at(a2, m);
          if (r < q - pow2(-m) && q + pow2(-m) < r2) {
            auto key = std::make_tuple(r, Integer(a2), r2);
            if (seen.insert(key).second) {
              out.push_back(AlgebraDiagramEntry{r, Integer(a2), r2});
              if (out.size() == budget) return out;
            }
          }
        }
  }
  return out;
}

std::string algebra_entry_jsonl(const AlgebraDiagramEntry& e) {
  return "{\"r\":\"" + exact::rational_to_string(e.r) + "\",\"j\":" + e.j.get_str() +
         ",\"r2\":\"" + exact::rational_to_string(e.r2) + "\"}";
}

// --- Algebra operations on names ----------------------------------------------------

VectorName name_add(const PresentedCStar& a, const VectorName& u, const VectorName& v) {
  (void)a;
  return VectorName([u, v](Precision k) {
    StarPoly pu = u.poly_at(Precision(k.k + 1));
    StarPoly pv = v.poly_at(Precision(k.k + 1));
    return poly::index_of(pu + pv);
  });
}

Rational name_norm_upper(const PresentedCStar& a, const VectorName& u, Precision t) {
  Integer j = u.at(t);
  Rational q = a.norm_index(j, t);
  return q + 2 * t.eps();
}

Rational name_distance_upper(const PresentedCStar& a, const VectorName& u, const VectorName& v,
                             Precision t) {
  StarPoly diff = u.poly_at(t) - v.poly_at(t);
  Rational q = a.norm_poly(diff, t);
  return q + 3 * t.eps();
}

VectorName name_mul(const PresentedCStar& a, const VectorName& u, const VectorName& v) {
  return VectorName([a, u, v](Precision k) {
    Rational nu = name_norm_upper(a, u, Precision(2));
    Rational nv = name_norm_upper(a, v, Precision(2));
    Rational s = 1 + nu + nv;
    long t = k.k + 1 + exact::clog2_at_least_one(s);
    StarPoly pu = u.poly_at(Precision(t));
    StarPoly pv = v.poly_at(Precision(t));
    return poly::index_of(pu * pv);
  });
}

VectorName name_scale(const PresentedCStar& a, const GaussianRational& c, const VectorName& u) {
  (void)a;
  return VectorName([c, u](Precision k) {
    Rational mag = c.abs_upper();
    long t = k.k + exact::clog2_at_least_one(mag);
    return poly::index_of(u.poly_at(Precision(t)).scaled(c));
  });
}

VectorName name_adjoint(const PresentedCStar& a, const VectorName& u) {
  (void)a;
  return VectorName([u](Precision k) { return poly::index_of(u.poly_at(k).adjoint()); });
}

VectorName rational_vector_name(const Integer& j) { return VectorName::constant(j); }

VectorName substitute_names(const PresentedCStar& a, const StarPoly& p,
                            std::function<VectorName(unsigned long)> binding) {
  return VectorName([a, p, binding](Precision k) {
    // Collect the variables and their names.
    std::vector<unsigned long> vars;
    for (const auto& term : p.terms())
      for (const auto& lit : term.mono)
        if (std::find(vars.begin(), vars.end(), lit.var) == vars.end()) vars.push_back(lit.var);
    Rational mmax(1);
    std::map<unsigned long, VectorName> names;
    for (unsigned long v : vars) {
      names.emplace(v, binding(v));
      Rational nb = name_norm_upper(a, names.at(v), Precision(2)) + 1;
      if (nb > mmax) mmax = nb;
    }
    // Sensitivity of p to argument perturbations bounded by
    // sum |c| * deg * mmax^(deg-1).
    Rational sens(0);
    for (const auto& term : p.terms()) {
      if (term.mono.empty()) continue;
      Rational f = term.coeff.abs_upper() * static_cast<unsigned long>(term.mono.size());
      for (std::size_t d = 1; d < term.mono.size(); ++d) f *= mmax;
      sens += f;
    }
    long t = k.k + 1 + exact::clog2_at_least_one(sens < 1 ? Rational(1) : sens);
    std::map<unsigned long, StarPoly> approx;
    for (unsigned long v : vars) approx.emplace(v, names.at(v).poly_at(Precision(t)));
    // Symbolic substitution.
    StarPoly out;
    for (const auto& term : p.terms()) {
      StarPoly acc = StarPoly::constant(term.coeff);
      for (const auto& lit : term.mono) {
        StarPoly factor = approx.at(lit.var);
        if (lit.star) factor = factor.adjoint();
        acc = acc * factor;
      }
      out = out + acc;
    }
    return poly::index_of(out);
  });
}

// --- Opaque fixtures and manifests ------------------------------------------------------

PresentedCStar permuted_opaque_copy(const PresentedCStar& induced) {
  if (!induced.induced()) throw Error::bad_argument("permuted_opaque_copy expects induced input");
  auto swap_var = [](unsigned long v) { return v ^ 1UL; };
  PresentedCStar::OpaqueData d;
  d.label = induced.label() + "#swapped";
  d.norm_oracle = [induced, swap_var](const Integer& j, Precision k) {
    StarPoly p = rename_vars(poly::poly_from_index(j), swap_var);
    return induced.norm_poly(p, k);
  };
  d.unit_name = VectorName::of_poly(StarPoly::generator(1));
  // Distance generator d_{p_n} sits at distinguished slot (n+1)^1.
  for (unsigned long n = 0; n < 8; ++n)
    d.generator_names.push_back(VectorName::of_poly(StarPoly::generator((n + 1) ^ 1UL)));
  d.gb = induced.gb();
  d.gb.unit_is_x0 = false;
  return PresentedCStar::opaque(std::move(d));
}

PresentedCStar opaque_from_manifest_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error::bad_manifest(std::string("unreadable manifest: ") + e.what());
  }
  if (!doc.is_object()) throw Error::bad_manifest("manifest must be a JSON object");
  PresentedCStar::OpaqueData d;
  d.label = doc.value("label", std::string("opaque"));
  if (!doc.contains("norm_table") || !doc["norm_table"].is_array())
    throw Error::bad_manifest("manifest lacks a norm_table array");
  // j -> (k -> q), answering any request at or below the recorded precision.
  auto table = std::make_shared<std::map<unsigned long, std::map<long, Rational>>>();
  for (const auto& row : doc["norm_table"]) {
    if (!row.contains("j") || !row.contains("k") || !row.contains("q"))
      throw Error::bad_manifest("norm_table rows need j, k, q");
    (*table)[row["j"].get<unsigned long>()][row["k"].get<long>()] =
        exact::rational_from_string(row["q"].get<std::string>());
  }
  std::string label = d.label;
  d.norm_oracle = [table, label](const Integer& j, Precision k) -> Rational {
    if (!j.fits_ulong_p())
      throw Error::budget_exhausted("norm table of '" + label + "' has no entry for index " +
                                    j.get_str());
    auto it = table->find(j.get_ui());
    if (it != table->end()) {
      // Any recorded precision at least as fine as requested is valid.
      auto kit = it->second.lower_bound(k.k);
      if (kit != it->second.end()) return kit->second;
    }
    throw Error::budget_exhausted("norm table of '" + label + "' exhausted at j=" +
                                  j.get_str() + ", k=" + std::to_string(k.k));
  };
  auto name_from_array = [](const nlohmann::json& arr) {
    auto values = std::make_shared<std::vector<Integer>>();
    for (const auto& v : arr) values->push_back(Integer(v.get<unsigned long>()));
    if (values->empty()) throw Error::bad_manifest("empty name array");
    return VectorName([values](Precision k) -> Integer {
      std::size_t idx = static_cast<std::size_t>(k.k < 0 ? 0 : k.k);
      if (idx < values->size()) return (*values)[idx];
      throw Error::budget_exhausted("manifest name prefix exhausted at precision 2^-" +
                                    std::to_string(k.k));
    });
  };
  if (doc.contains("unit_name")) d.unit_name = name_from_array(doc["unit_name"]);
  if (doc.contains("generator_names"))
    for (const auto& arr : doc["generator_names"]) d.generator_names.push_back(name_from_array(arr));
  d.gb = poly::GeneratorBounds{Rational(1), Rational(1), false, nullptr};
  if (doc.contains("sup_bound"))
    d.gb.sup_bound = exact::rational_from_string(doc["sup_bound"].get<std::string>());
  return PresentedCStar::opaque(std::move(d));
}

// --- Segments fixtures ---------------------------------------------------------------------

bool segments_indicator(unsigned long m, const Rational& point_value) {
  if (point_value == 0) return true;
  for (unsigned long seg = 0; seg <= m; ++seg) {
    Rational left = 3 * pow2(-static_cast<long>(seg) - 2);
    Rational right = 5 * pow2(-static_cast<long>(seg) - 2);
    if (point_value >= left && point_value <= right) return true;
  }
  return false;
}

Rational segments_indicator_norm(const PresentedCStar& a, const StarPoly& p, unsigned long m,
                                 Precision k) {
  if (!a.induced() || a.base().label() != "segments")
    throw Error::bad_argument("indicator norms are a segments fixture");
  PresentedCStar self = a;
  auto [sup, lip] = poly::bounds_of(p, a.gb());
  // Across the gap between J_(m+1) and J_m the product jumps by at most
  // sup|p|; the gap is 2^-(m+3) wide.
  Rational gap_lip = sup * pow2(static_cast<long>(m) + 3);
  Rational worst = lip > gap_lip ? lip : gap_lip;
  long lip_log = exact::clog2_at_least_one(worst);
  space::ScalarOnSpace g;
  g.value = [self, p, m](std::size_t i, Precision kk) -> Rational {
    if (!segments_indicator(m, space::segments_point(i))) return Rational(0);
    Approximation v = self.eval_at_point(p, i, Precision(kk.k + 1));
    Approximation av = exact::approx_abs(v);
    return av.value.re;
  };
  g.modulus = [lip_log](long t) { return t + lip_log; };
  return space::max_over_space(a.base(), g, k);
}

}  // namespace evalpres::cstar
