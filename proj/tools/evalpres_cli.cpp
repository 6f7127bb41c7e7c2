// Command-line front end for the evalpres shared library.  Every subcommand
// is deterministic: identical invocations produce byte-identical output, all
// numbers are exact rationals, and structured errors go to stderr as JSON.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "evalpres/evalpres.h"

namespace {

struct StringOut {
  char* value = nullptr;
  ~StringOut() { evp_string_free(value); }
  std::string str() const { return value ? value : ""; }
};

[[noreturn]] void fail(evp_status status) {
  std::cerr << "{\"error\":\"" << evp_status_name(status) << "\",\"message\":\""
            << evp_last_error() << "\"}\n";
  std::exit(2 + static_cast<int>(status));
}

void check(evp_status status) {
  if (status != EVP_OK) fail(status);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "{\"error\":\"io-error\",\"message\":\"cannot open " << out_path << "\"}\n";
    std::exit(2 + EVP_ERR_IO);
  }
  f << text;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "{\"error\":\"io-error\",\"message\":\"cannot read " << path << "\"}\n";
    std::exit(2 + EVP_ERR_IO);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

using SpacePtr = std::unique_ptr<evp_space, decltype(&evp_space_free)>;
using AlgebraPtr = std::unique_ptr<evp_algebra, decltype(&evp_algebra_free)>;
using PointPtr = std::unique_ptr<evp_point, decltype(&evp_point_free)>;
using MapPtr = std::unique_ptr<evp_map, decltype(&evp_map_free)>;

SpacePtr open_space(const std::string& label) {
  evp_space* s = nullptr;
  check(evp_space_builtin(label.c_str(), &s));
  return SpacePtr(s, &evp_space_free);
}

AlgebraPtr induce(const evp_space* s) {
  evp_algebra* a = nullptr;
  check(evp_algebra_induce(s, &a));
  return AlgebraPtr(a, &evp_algebra_free);
}

PointPtr load_point(const evp_space* s, const std::string& file, const std::string& value) {
  evp_point* p = nullptr;
  if (!file.empty())
    check(evp_point_from_json(s, slurp(file).c_str(), &p));
  else
    check(evp_point_of_rational(s, value.c_str(), &p));
  return PointPtr(p, &evp_point_free);
}

uint64_t env_budget_cap(uint64_t requested) {
  const char* cap = std::getenv("EVALPRES_BUDGET_CAP");
  if (!cap || !*cap) return requested;
  uint64_t limit = std::strtoull(cap, nullptr, 10);
  return (limit > 0 && requested > limit) ? limit : requested;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computable-analysis toolkit: presented spaces, induced "
               "C*(X) presentations, evaluation, spatial realizations"};
  app.require_subcommand(1);

  std::string space_label = "unit_interval", space0, space1, psi_label = "identity";
  std::string poly_text, point_file, point_value, manifest, fixture, vector_spec = "unit";
  std::string out_path, criteria;
  long prec = 6, depth = 4, k_limit = 3;
  std::size_t count = 16, points = 8;
  std::uint64_t budget = 200000;
  unsigned long indicator = 0;
  bool with_indicator = false;

  // space describe / diagram
  auto* sp = app.add_subcommand("space", "inspect a presented space");
  auto* sp_desc = sp->add_subcommand("describe", "label, bounds, sample points");
  sp_desc->add_option("--space", space_label);
  sp_desc->add_option("--points", points);
  sp_desc->add_option("--out", out_path);
  auto* sp_diag = sp->add_subcommand("diagram", "certified strict metric diagram entries");
  sp_diag->add_option("--space", space_label);
  sp_diag->add_option("--count", count);
  sp_diag->add_option("--out", out_path);

  // algebra induce / norm / diagram
  auto* al = app.add_subcommand("algebra", "induced C*(X) presentations");
  auto* al_ind = al->add_subcommand("induce", "describe the induced presentation");
  al_ind->add_option("--space", space_label);
  al_ind->add_option("--out", out_path);
  auto* al_norm = al->add_subcommand("norm", "certified norm of a rational vector");
  al_norm->add_option("--space", space_label);
  al_norm->add_option("--poly", poly_text)->required();
  al_norm->add_option("--prec", prec);
  auto* ind_opt = al_norm->add_option("--indicator", indicator,
                                      "segments fixture: multiply by Ind_<m>");
  al_norm->add_option("--out", out_path);
  auto* al_diag = al->add_subcommand("diagram", "certified strict norm diagram entries");
  al_diag->add_option("--space", space_label);
  al_diag->add_option("--count", count);
  al_diag->add_option("--out", out_path);

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a named vector at a named point");
  ev->add_option("--space", space_label);
  ev->add_option("--poly", poly_text)->required();
  ev->add_option("--point", point_file, "point-name file (JSON index array)");
  ev->add_option("--value", point_value, "exact rational point instead of a file");
  ev->add_option("--prec", prec);
  ev->add_option("--out", out_path);

  // banach-stone
  auto* bs = app.add_subcommand("banach-stone", "spatial realization of composition by psi");
  bs->add_option("--space0", space0)->required();
  bs->add_option("--space1", space1)->required();
  bs->add_option("--psi", psi_label)->required();
  bs->add_option("--point", point_file, "name of p in X1 (JSON index array)");
  bs->add_option("--value", point_value, "exact rational point instead of a file");
  bs->add_option("--prec", prec);
  bs->add_option("--budget", budget);
  bs->add_option("--out", out_path);

  // compose
  auto* co = app.add_subcommand("compose", "name f∘psi by certified search");
  co->add_option("--space0", space0)->required();
  co->add_option("--space1", space1)->required();
  co->add_option("--psi", psi_label)->required();
  co->add_option("--poly", poly_text)->required();
  co->add_option("--prec", k_limit, "certify levels up to this k");
  co->add_option("--budget", budget);
  co->add_option("--out", out_path);

  // translate
  auto* tr = app.add_subcommand("translate",
                                "read an opaque vector as an induced rational-vector name");
  tr->add_option("--manifest", manifest, "opaque presentation manifest (JSON)");
  tr->add_option("--fixture", fixture, "built-in opaque fixture: permuted_<space>");
  tr->add_option("--space", space_label, "induced target space");
  tr->add_option("--vector", vector_spec, "unit | gen<N> | poly:<text>");
  tr->add_option("--prec", k_limit);
  tr->add_option("--budget", budget);
  tr->add_option("--out", out_path);

  // cantor-homeo
  auto* ch = app.add_subcommand("cantor-homeo", "cover-refinement homeomorphism levels");
  ch->add_option("--space", space_label);
  ch->add_option("--depth", depth);
  ch->add_option("--emit", out_path);

  // accept
  auto* ac = app.add_subcommand("accept", "run the acceptance suite");
  ac->add_option("--criteria", criteria, "comma-separated ids, default all");
  ac->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);
  budget = env_budget_cap(budget);

  if (sp_desc->parsed()) {
    SpacePtr s = open_space(space_label);
    StringOut o;
    check(evp_space_describe(s.get(), points, &o.value));
    emit(o.str(), out_path);
  } else if (sp_diag->parsed()) {
    SpacePtr s = open_space(space_label);
    StringOut o;
    check(evp_space_diagram(s.get(), count, &o.value));
    emit(o.str(), out_path);
  } else if (al_ind->parsed()) {
    SpacePtr s = open_space(space_label);
    AlgebraPtr a = induce(s.get());
    StringOut o;
    check(evp_algebra_describe(a.get(), &o.value));
    emit(o.str(), out_path);
  } else if (al_norm->parsed()) {
    with_indicator = ind_opt->count() > 0;
    SpacePtr s = open_space(space_label);
    AlgebraPtr a = induce(s.get());
    StringOut o;
    if (with_indicator)
      check(evp_algebra_indicator_norm(a.get(), poly_text.c_str(), indicator, prec, &o.value));
    else
      check(evp_algebra_norm(a.get(), poly_text.c_str(), prec, &o.value));
    emit(o.str(), out_path);
  } else if (al_diag->parsed()) {
    SpacePtr s = open_space(space_label);
    AlgebraPtr a = induce(s.get());
    StringOut o;
    check(evp_algebra_diagram(a.get(), count, &o.value));
    emit(o.str(), out_path);
  } else if (ev->parsed()) {
    if (point_file.empty() && point_value.empty()) {
      std::cerr << "{\"error\":\"bad-argument\",\"message\":\"eval needs --point or --value\"}\n";
      return 2 + EVP_ERR_BAD_ARGUMENT;
    }
    SpacePtr s = open_space(space_label);
    AlgebraPtr a = induce(s.get());
    PointPtr p = load_point(s.get(), point_file, point_value);
    StringOut o;
    check(evp_eval(a.get(), poly_text.c_str(), p.get(), prec, &o.value));
    emit(o.str(), out_path);
  } else if (bs->parsed()) {
    SpacePtr s0 = open_space(space0);
    SpacePtr s1 = open_space(space1);
    AlgebraPtr a0 = induce(s0.get());
    AlgebraPtr a1 = induce(s1.get());
    MapPtr m(nullptr, &evp_map_free);
    {
      evp_map* mm = nullptr;
      check(evp_map_builtin(psi_label.c_str(), s1.get(), &mm));
      m.reset(mm);
    }
    if (point_file.empty() && point_value.empty()) {
      std::cerr << "{\"error\":\"bad-argument\",\"message\":\"banach-stone needs --point or "
                   "--value\"}\n";
      return 2 + EVP_ERR_BAD_ARGUMENT;
    }
    PointPtr p = load_point(s1.get(), point_file, point_value);
    StringOut o;
    check(evp_banach_stone(m.get(), a0.get(), a1.get(), p.get(), prec, budget, &o.value));
    emit(o.str(), out_path);
  } else if (co->parsed()) {
    SpacePtr s0 = open_space(space0);
    SpacePtr s1 = open_space(space1);
    AlgebraPtr a0 = induce(s0.get());
    AlgebraPtr a1 = induce(s1.get());
    MapPtr m(nullptr, &evp_map_free);
    {
      evp_map* mm = nullptr;
      check(evp_map_builtin(psi_label.c_str(), s1.get(), &mm));
      m.reset(mm);
    }
    StringOut o;
    check(evp_compose(m.get(), a0.get(), a1.get(), poly_text.c_str(), k_limit, budget,
                      &o.value));
    emit(o.str(), out_path);
  } else if (tr->parsed()) {
    SpacePtr s = open_space(space_label);
    AlgebraPtr a_plus = induce(s.get());
    AlgebraPtr a_op(nullptr, &evp_algebra_free);
    if (!manifest.empty()) {
      evp_algebra* aa = nullptr;
      check(evp_algebra_from_manifest(slurp(manifest).c_str(), &aa));
      a_op.reset(aa);
    } else if (fixture == "permuted_" + space_label) {
      evp_algebra* aa = nullptr;
      check(evp_algebra_permuted_copy(a_plus.get(), &aa));
      a_op.reset(aa);
    } else {
      std::cerr << "{\"error\":\"bad-argument\",\"message\":\"translate needs --manifest or "
                   "--fixture permuted_<space>\"}\n";
      return 2 + EVP_ERR_BAD_ARGUMENT;
    }
    StringOut o;
    check(evp_translate(a_op.get(), a_plus.get(), vector_spec.c_str(), k_limit, budget,
                        &o.value));
    emit(o.str(), out_path);
  } else if (ch->parsed()) {
    SpacePtr s = open_space(space_label);
    StringOut o;
    check(evp_cantor_homeo(s.get(), depth, &o.value));
    emit(o.str(), out_path);
  } else if (ac->parsed()) {
    StringOut o;
    check(evp_acceptance_run(criteria.empty() ? nullptr : criteria.c_str(), &o.value));
    emit(o.str(), out_path);
  }
  return 0;
}
