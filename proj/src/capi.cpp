#include "evalpres/evalpres.h"

#include <cstring>
#include <sstream>
#include <string>

#include "accept.hpp"
#include "cantor.hpp"
#include "cstar.hpp"
#include "duality.hpp"
#include "error.hpp"
#include "evalmap.hpp"
#include "json.hpp"
#include "space.hpp"
#include "starpoly.hpp"

using namespace evalpres;

struct evp_space {
  space::PresentedSpace impl;
};
struct evp_algebra {
  cstar::PresentedCStar impl;
};
struct evp_point {
  space::PointName impl;
};
struct evp_map {
  evalmap::PointMap impl;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

evp_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::oracle_violation: return EVP_ERR_ORACLE_VIOLATION;
    case ErrorCode::budget_exhausted: return EVP_ERR_BUDGET_EXHAUSTED;
    case ErrorCode::bad_manifest: return EVP_ERR_BAD_MANIFEST;
    case ErrorCode::missing_tbf: return EVP_ERR_MISSING_TBF;
    case ErrorCode::missing_variable: return EVP_ERR_MISSING_VARIABLE;
    case ErrorCode::parse_error: return EVP_ERR_PARSE;
    case ErrorCode::bad_argument: return EVP_ERR_BAD_ARGUMENT;
    case ErrorCode::io_error: return EVP_ERR_IO;
  }
  return EVP_ERR_UNKNOWN;
}

template <class Fn>
evp_status guarded(Fn&& fn) {
  try {
    fn();
    return EVP_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EVP_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return EVP_ERR_UNKNOWN;
  }
}

exact::Precision prec_of(long k) {
  if (k < 0) throw Error::bad_argument("precision must be nonnegative");
  if (k > 64) throw Error::bad_argument("precision beyond the configured cap of 64");
  return exact::Precision(k);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

extern "C" {

const char* evp_status_name(evp_status status) {
  switch (status) {
    case EVP_OK: return "ok";
    case EVP_ERR_ORACLE_VIOLATION: return "oracle-contract-violation";
    case EVP_ERR_BUDGET_EXHAUSTED: return "budget-exhausted";
    case EVP_ERR_BAD_MANIFEST: return "bad-manifest";
    case EVP_ERR_MISSING_TBF: return "missing-tbf";
    case EVP_ERR_MISSING_VARIABLE: return "missing-variable";
    case EVP_ERR_PARSE: return "parse-error";
    case EVP_ERR_BAD_ARGUMENT: return "bad-argument";
    case EVP_ERR_IO: return "io-error";
    case EVP_ERR_UNKNOWN: break;
  }
  return "unknown";
}

const char* evp_last_error(void) { return g_last_error.c_str(); }

void evp_string_free(char* s) { std::free(s); }

/* --- Spaces -------------------------------------------------------------- */

evp_status evp_space_builtin(const char* label, evp_space** out) {
  return guarded([&] {
    if (!label || !out) throw Error::bad_argument("null argument");
    *out = new evp_space{space::builtin_space(label)};
  });
}

void evp_space_free(evp_space* s) { delete s; }

evp_status evp_space_describe(const evp_space* s, size_t sample_points, char** json_out) {
  return guarded([&] {
    if (!s || !json_out) throw Error::bad_argument("null argument");
    std::ostringstream o;
    o << "{\"label\":" << quoted(s->impl.label()) << ",\"diam_bound\":"
      << quoted(exact::rational_to_string(s->impl.diam_bound()))
      << ",\"has_tbf\":" << (s->impl.has_tbf() ? "true" : "false") << ",\"points\":[";
    for (size_t i = 0; i < sample_points; ++i) {
      if (i) o << ",";
      o << quoted(s->impl.point_text(i));
    }
    o << "]}";
    *json_out = dup_string(o.str());
  });
}

evp_status evp_space_metric(const evp_space* s, size_t i, size_t j, long prec,
                            char** rational_out) {
  return guarded([&] {
    if (!s || !rational_out) throw Error::bad_argument("null argument");
    *rational_out = dup_string(exact::rational_to_string(s->impl.metric(i, j, prec_of(prec))));
  });
}

evp_status evp_space_diagram(const evp_space* s, size_t budget, char** jsonl_out) {
  return guarded([&] {
    if (!s || !jsonl_out) throw Error::bad_argument("null argument");
    std::ostringstream o;
    for (const auto& e : space::diagram_emit(s->impl, budget))
      o << space::diagram_entry_jsonl(e) << "\n";
    *jsonl_out = dup_string(o.str());
  });
}

evp_status evp_space_point_text(const evp_space* s, size_t index, char** out) {
  return guarded([&] {
    if (!s || !out) throw Error::bad_argument("null argument");
    *out = dup_string(s->impl.point_text(index));
  });
}

/* --- Points ----------------------------------------------------------------- */

evp_status evp_point_of_rational(const evp_space* s, const char* rational, evp_point** out) {
  return guarded([&] {
    if (!s || !rational || !out) throw Error::bad_argument("null argument");
    *out = new evp_point{
        space::builtin_point_name(s->impl, exact::rational_from_string(rational))};
  });
}

evp_status evp_point_from_json(const evp_space* s, const char* json_array, evp_point** out) {
  return guarded([&] {
    if (!s || !json_array || !out) throw Error::bad_argument("null argument");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_array);
    } catch (const std::exception& e) {
      throw Error::parse(std::string("unreadable point name: ") + e.what());
    }
    if (!doc.is_array() || doc.empty())
      throw Error::parse("a point name is a nonempty JSON array of indices");
    auto indices = std::make_shared<std::vector<size_t>>();
    for (const auto& v : doc) indices->push_back(v.get<size_t>());
    *out = new evp_point{space::PointName([indices](exact::Precision k) {
      size_t i = k.k < 0 ? 0 : static_cast<size_t>(k.k);
      // The final entry asserts the point exactly.
      if (i >= indices->size()) i = indices->size() - 1;
      return (*indices)[i];
    })};
  });
}

evp_status evp_point_index_at(const evp_point* p, long prec, size_t* index_out) {
  return guarded([&] {
    if (!p || !index_out) throw Error::bad_argument("null argument");
    *index_out = p->impl.at(prec_of(prec));
  });
}

void evp_point_free(evp_point* p) { delete p; }

/* --- Algebras ------------------------------------------------------------------ */

evp_status evp_algebra_induce(const evp_space* s, evp_algebra** out) {
  return guarded([&] {
    if (!s || !out) throw Error::bad_argument("null argument");
    *out = new evp_algebra{cstar::PresentedCStar::induce(s->impl)};
  });
}

evp_status evp_algebra_from_manifest(const char* json_text, evp_algebra** out) {
  return guarded([&] {
    if (!json_text || !out) throw Error::bad_argument("null argument");
    *out = new evp_algebra{cstar::opaque_from_manifest_json(json_text)};
  });
}

evp_status evp_algebra_permuted_copy(const evp_algebra* induced, evp_algebra** out) {
  return guarded([&] {
    if (!induced || !out) throw Error::bad_argument("null argument");
    *out = new evp_algebra{cstar::permuted_opaque_copy(induced->impl)};
  });
}

void evp_algebra_free(evp_algebra* a) { delete a; }

evp_status evp_algebra_describe(const evp_algebra* a, char** json_out) {
  return guarded([&] {
    if (!a || !json_out) throw Error::bad_argument("null argument");
    const auto& gb = a->impl.gb();
    std::ostringstream o;
    o << "{\"label\":" << quoted(a->impl.label())
      << ",\"induced\":" << (a->impl.induced() ? "true" : "false")
      << ",\"sup_bound\":" << quoted(exact::rational_to_string(gb.sup_bound))
      << ",\"lip_bound\":" << quoted(exact::rational_to_string(gb.lip_bound))
      << ",\"unit_is_x0\":" << (gb.unit_is_x0 ? "true" : "false")
      << ",\"has_unit_name\":" << (a->impl.has_unit_name() ? "true" : "false") << "}";
    *json_out = dup_string(o.str());
  });
}

evp_status evp_algebra_norm(const evp_algebra* a, const char* poly_text, long prec,
                            char** rational_out) {
  return guarded([&] {
    if (!a || !poly_text || !rational_out) throw Error::bad_argument("null argument");
    poly::StarPoly p = poly::poly_from_string(poly_text);
    *rational_out =
        dup_string(exact::rational_to_string(a->impl.norm_poly(p, prec_of(prec))));
  });
}

evp_status evp_algebra_norm_index(const evp_algebra* a, uint64_t index, long prec,
                                  char** rational_out) {
  return guarded([&] {
    if (!a || !rational_out) throw Error::bad_argument("null argument");
    *rational_out = dup_string(exact::rational_to_string(a->impl.norm_index(
        exact::Integer(static_cast<unsigned long>(index)), prec_of(prec))));
  });
}

evp_status evp_algebra_indicator_norm(const evp_algebra* a, const char* poly_text,
                                      unsigned long level, long prec, char** rational_out) {
  return guarded([&] {
    if (!a || !poly_text || !rational_out) throw Error::bad_argument("null argument");
    poly::StarPoly p = poly::poly_from_string(poly_text);
    *rational_out = dup_string(exact::rational_to_string(
        cstar::segments_indicator_norm(a->impl, p, level, prec_of(prec))));
  });
}

evp_status evp_algebra_diagram(const evp_algebra* a, size_t budget, char** jsonl_out) {
  return guarded([&] {
    if (!a || !jsonl_out) throw Error::bad_argument("null argument");
    std::ostringstream o;
    for (const auto& e : cstar::algebra_diagram_emit(a->impl, budget))
      o << cstar::algebra_entry_jsonl(e) << "\n";
    *jsonl_out = dup_string(o.str());
  });
}

/* --- Polynomials ----------------------------------------------------------------- */

evp_status evp_poly_canonical(const char* text, char** canonical_out) {
  return guarded([&] {
    if (!text || !canonical_out) throw Error::bad_argument("null argument");
    *canonical_out = dup_string(poly::poly_to_string(poly::poly_from_string(text)));
  });
}

evp_status evp_poly_index(const char* text, char** index_decimal_out) {
  return guarded([&] {
    if (!text || !index_decimal_out) throw Error::bad_argument("null argument");
    *index_decimal_out =
        dup_string(poly::index_of(poly::poly_from_string(text)).get_str());
  });
}

evp_status evp_poly_from_index(const char* index_decimal, char** text_out) {
  return guarded([&] {
    if (!index_decimal || !text_out) throw Error::bad_argument("null argument");
    exact::Integer n;
    if (mpz_set_str(n.get_mpz_t(), index_decimal, 10) != 0)
      throw Error::parse(std::string("unreadable index: ") + index_decimal);
    *text_out = dup_string(poly::poly_to_string(poly::poly_from_index(n)));
  });
}

/* --- Evaluation --------------------------------------------------------------------- */

evp_status evp_eval(const evp_algebra* induced, const char* poly_text, const evp_point* pt,
                    long prec, char** out) {
  return guarded([&] {
    if (!induced || !poly_text || !pt || !out) throw Error::bad_argument("null argument");
    poly::StarPoly p = poly::poly_from_string(poly_text);
    exact::Approximation v = evalmap::evaluate(
        induced->impl, evalmap::ProductName{cstar::VectorName::of_poly(p), pt->impl},
        prec_of(prec));
    *out = dup_string(exact::gaussian_to_string(v.value) + " ± 2^-" + std::to_string(prec));
  });
}

/* --- Maps and duality ------------------------------------------------------------------ */

evp_status evp_map_builtin(const char* label, const evp_space* domain, evp_map** out) {
  return guarded([&] {
    if (!label || !domain || !out) throw Error::bad_argument("null argument");
    *out = new evp_map{evalmap::builtin_point_map(label, domain->impl)};
  });
}

void evp_map_free(evp_map* m) { delete m; }

evp_status evp_map_apply(const evp_map* m, const evp_point* p, long prec, size_t* index_out) {
  return guarded([&] {
    if (!m || !p || !index_out) throw Error::bad_argument("null argument");
    *index_out = m->impl.transform(p->impl).at(prec_of(prec));
  });
}

evp_status evp_compose(const evp_map* psi, const evp_algebra* a0, const evp_algebra* a1,
                       const char* poly_text, long k_limit, uint64_t budget,
                       char** report_json) {
  return guarded([&] {
    if (!psi || !a0 || !a1 || !poly_text || !report_json)
      throw Error::bad_argument("null argument");
    evalmap::VectorSearchOptions opt;
    if (k_limit >= 0) opt.k_limit = k_limit;
    if (budget > 0) opt.budget = budget;
    poly::StarPoly p = poly::poly_from_string(poly_text);
    duality::CompositionResult res = duality::composition_operator(
        psi->impl, a0->impl, a1->impl, cstar::VectorName::of_poly(p), opt);
    std::ostringstream o;
    o << "{\"certified_k\":" << res.certified_k << ",\"levels\":[";
    for (long k = 0; k <= res.certified_k; ++k) {
      if (k) o << ",";
      exact::Integer idx = res.name.at(exact::Precision(k));
      o << "{\"k\":" << k << ",\"index\":" << quoted(idx.get_str()) << ",\"poly\":"
        << quoted(poly::poly_to_string(poly::poly_from_index(idx))) << "}";
    }
    o << "]}";
    *report_json = dup_string(o.str());
  });
}

evp_status evp_banach_stone(const evp_map* psi, const evp_algebra* a0, const evp_algebra* a1,
                            const evp_point* lambda, long prec, uint64_t budget,
                            char** report_json) {
  return guarded([&] {
    if (!psi || !a0 || !a1 || !lambda || !report_json)
      throw Error::bad_argument("null argument");
    exact::Precision k = prec_of(prec);
    duality::IsoOracle t =
        duality::iso_from_composition(psi->impl, a0->impl, a1->impl, budget ? budget : 200000);
    space::PointName out = duality::spatial_realization(t, a0->impl, a1->impl, lambda->impl);
    const space::PresentedSpace& x0 = a0->impl.base();
    std::vector<size_t> prefix;
    for (long kk = 0; kk <= k.k; ++kk) prefix.push_back(out.at(exact::Precision(kk)));
    bool consecutive_ok = true;
    for (long kk = 0; kk + 1 <= k.k; ++kk) {
      exact::Rational d = x0.metric(prefix[kk], prefix[kk + 1], exact::Precision(k.k + 4));
      if (d - exact::pow2(-(k.k + 4)) > exact::pow2(-kk) + exact::pow2(-(kk + 1)))
        consecutive_ok = false;
    }
    std::ostringstream o;
    o << "{\"prec\":" << k.k << ",\"name\":[";
    for (size_t i = 0; i < prefix.size(); ++i) {
      if (i) o << ",";
      o << prefix[i];
    }
    o << "],\"points\":[";
    for (size_t i = 0; i < prefix.size(); ++i) {
      if (i) o << ",";
      o << quoted(x0.point_text(prefix[i]));
    }
    o << "],\"consecutive_ok\":" << (consecutive_ok ? "true" : "false") << "}";
    *report_json = dup_string(o.str());
  });
}

evp_status evp_translate(const evp_algebra* opaque, const evp_algebra* induced,
                         const char* vector_spec, long k_limit, uint64_t budget,
                         char** report_json) {
  return guarded([&] {
    if (!opaque || !induced || !vector_spec || !report_json)
      throw Error::bad_argument("null argument");
    std::string spec = vector_spec;
    cstar::VectorName v;
    if (spec == "unit") {
      v = opaque->impl.unit_name();
    } else if (spec.rfind("gen", 0) == 0) {
      size_t n = std::stoul(spec.substr(3));
      if (!opaque->impl.has_generator_names() ||
          n >= opaque->impl.generator_names().size())
        throw Error::bad_manifest("no generator name " + spec + " in the opaque presentation");
      v = opaque->impl.generator_names()[n];
    } else if (spec.rfind("poly:", 0) == 0) {
      v = cstar::VectorName::of_poly(poly::poly_from_string(spec.substr(5)));
    } else {
      throw Error::bad_argument("vector spec must be unit, gen<N>, or poly:<text>");
    }
    duality::TranslateOptions opt;
    if (k_limit >= 0) opt.k_limit = k_limit;
    if (budget > 0) opt.budget = budget;
    duality::TranslateResult res = duality::translate_name(opaque->impl, induced->impl, v, opt);
    std::ostringstream o;
    o << "{\"certified_k\":" << res.certified_k << ",\"levels\":[";
    for (long k = 0; k <= res.certified_k; ++k) {
      if (k) o << ",";
      exact::Integer idx = res.name.at(exact::Precision(k));
      o << "{\"k\":" << k << ",\"index\":" << quoted(idx.get_str()) << ",\"poly\":"
        << quoted(poly::poly_to_string(poly::poly_from_index(idx))) << "}";
    }
    o << "]}";
    *report_json = dup_string(o.str());
  });
}

/* --- Cantor ------------------------------------------------------------------------------ */

evp_status evp_cantor_homeo(const evp_space* xc, long depth, char** jsonl_out) {
  return guarded([&] {
    if (!xc || !jsonl_out) throw Error::bad_argument("null argument");
    if (depth < 0 || depth > 12) throw Error::bad_argument("depth must be in [0, 12]");
    cantor::Homeomorphism h = cantor::build_homeomorphism(xc->impl, depth);
    std::ostringstream o;
    for (const auto& level : h.levels) o << cantor::assignment_to_json(level) << "\n";
    o << "{\"checks\":[";
    for (size_t s = 0; s < h.levels.size(); ++s) {
      const cantor::CylinderAssignment* prev = s == 0 ? nullptr : &h.levels[s - 1];
      cantor::ConditionReport rep = cantor::check_conditions(xc->impl, h.levels[s], prev);
      if (s) o << ",";
      o << (rep.all() ? "true" : "false");
    }
    o << "]}\n";
    *jsonl_out = dup_string(o.str());
  });
}

/* --- Acceptance ----------------------------------------------------------------------------- */

evp_status evp_acceptance_run(const char* criteria_csv, char** report_json) {
  return guarded([&] {
    if (!report_json) throw Error::bad_argument("null argument");
    std::vector<int> ids;
    if (!criteria_csv || !*criteria_csv) {
      ids = accept::all_criteria();
    } else {
      std::stringstream ss(criteria_csv);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) ids.push_back(std::stoi(tok));
    }
    std::vector<accept::CriterionResult> results;
    for (int id : ids) results.push_back(accept::run_criterion(id));
    *report_json = dup_string(accept::report_json(results));
  });
}

}  // extern "C"
