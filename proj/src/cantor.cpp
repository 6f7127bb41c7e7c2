#include "cantor.hpp"

#include <algorithm>

#include "error.hpp"

namespace evalpres::cantor {

namespace {

using exact::pow2;
using space::Cert;
using space::PointName;

// r_j pairwise incomparable suffixes exhausting one subtree: the leaves of a
// balanced binary split.
std::vector<std::string> leaf_suffixes(std::size_t r) {
  if (r == 0) throw Error::bad_argument("no leaves requested");
  if (r == 1) return {""};
  std::size_t left = (r + 1) / 2, right = r / 2;
  std::vector<std::string> out;
  for (const auto& s : leaf_suffixes(left)) out.push_back("0" + s);
  for (const auto& s : leaf_suffixes(right)) out.push_back("1" + s);
  return out;
}

// Candidate center horizon for level s searches.
std::vector<std::size_t> center_candidates(const PresentedSpace& xc, long level,
                                           const CantorSearchOptions& options) {
  long net_level = std::min<long>(level + 5, options.limits.max_net_level);
  std::vector<std::size_t> net = xc.net(net_level);
  std::size_t horizon = 0;
  for (std::size_t n : net) horizon = std::max(horizon, n);
  horizon = std::min(horizon + 1, options.center_budget);
  std::vector<std::size_t> out(horizon);
  for (std::size_t i = 0; i < horizon; ++i) out[i] = i;
  return out;
}

// Searches separated certified balls of formal radius ~2^-(level) covering
// `region` (or the whole space).  Returns them in discovery order.
std::vector<RationalBall> find_cover_balls(const PresentedSpace& xc, long level,
                                           const std::optional<RationalBall>& region,
                                           const CantorSearchOptions& options) {
  std::vector<RationalBall> accepted;
  std::vector<std::size_t> candidates = center_candidates(xc, level, options);
  Precision screen_prec(level + 6);
  for (int u = 0; u <= options.radius_steps; ++u) {
    Rational radius = 3 * pow2(-(level + 2 + u));
    for (std::size_t n : candidates) {
      // Quick screens: the center must sit inside the region and outside the
      // balls accepted so far.
      if (region) {
        exact::Interval d = xc.metric_interval(n, region->center, screen_prec);
        if (!(d.hi < region->radius)) continue;
      }
      bool inside_accepted = false;
      for (const auto& b : accepted) {
        exact::Interval d = xc.metric_interval(n, b.center, screen_prec);
        if (d.hi < b.radius) {
          inside_accepted = true;
          break;
        }
      }
      if (inside_accepted) continue;
      RationalBall cand{n, radius};
      if (region && space::set_inclusion(xc, cand, *region, options.limits) != Cert::yes)
        continue;
      bool separated = true;
      for (const auto& b : accepted) {
        if (!space::separation_lower_bound(xc, cand, b, options.limits)) {
          separated = false;
          break;
        }
      }
      if (!separated) continue;
      accepted.push_back(cand);
      Cert done = region ? space::covers_region(xc, *region, accepted, options.limits)
                         : space::verify_cover(xc, accepted, options.limits);
      if (done == Cert::yes) return accepted;
    }
  }
  throw Error::budget_exhausted(
      region ? "refinement found no separated sub-cover within budget"
             : "initial cover search exhausted (is the space presented as 2^omega?)");
}

Rational level_diameter_bound(const PresentedSpace& xc, const std::vector<CylinderEntry>& entries,
                              const CantorSearchOptions& options) {
  Rational bound(0);
  for (const auto& e : entries) {
    std::optional<Rational> d = space::set_diameter_upper_bound(xc, e.ball, options.limits);
    Rational b = d ? *d : 2 * e.ball.radius;
    if (b > bound) bound = b;
  }
  return bound;
}

}  // namespace

CylinderAssignment initial_cover(const PresentedSpace& xc, long s,
                                 const CantorSearchOptions& options) {
  if (!xc.has_tbf()) throw Error::missing_tbf("initial_cover needs a computably compact space");
  std::vector<RationalBall> balls = find_cover_balls(xc, s, std::nullopt, options);
  CylinderAssignment h;
  h.level = s;
  std::vector<std::string> sigmas = leaf_suffixes(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i)
    h.entries.push_back(CylinderEntry{sigmas[i], balls[i], 0});
  h.diameter_bound = level_diameter_bound(xc, h.entries, options);
  return h;
}

CylinderAssignment refine(const PresentedSpace& xc, const CylinderAssignment& h,
                          const CantorSearchOptions& options) {
  CylinderAssignment out;
  out.level = h.level + 1;
  for (std::size_t j = 0; j < h.entries.size(); ++j) {
    const CylinderEntry& parent = h.entries[j];
    std::vector<RationalBall> kids =
        find_cover_balls(xc, out.level, parent.ball, options);
    std::vector<std::string> suffixes = leaf_suffixes(kids.size());
    for (std::size_t k = 0; k < kids.size(); ++k)
      out.entries.push_back(CylinderEntry{parent.sigma + suffixes[k], kids[k], j});
  }
  out.diameter_bound = level_diameter_bound(xc, out.entries, options);
  return out;
}

ConditionReport check_conditions(const PresentedSpace& xc, const CylinderAssignment& h,
                                 const CylinderAssignment* previous,
                                 const CantorSearchOptions& options) {
  ConditionReport rep;
  // Incomparable sigmas exhausting the tree: sum of 2^-|sigma| must be one.
  bool incomparable = true;
  for (std::size_t i = 0; i < h.entries.size() && incomparable; ++i)
    for (std::size_t j = i + 1; j < h.entries.size(); ++j) {
      const std::string& a = h.entries[i].sigma;
      const std::string& b = h.entries[j].sigma;
      if (a.size() <= b.size() ? b.compare(0, a.size(), a) == 0
                               : a.compare(0, b.size(), b) == 0) {
        incomparable = false;
        break;
      }
    }
  Rational mass(0);
  for (const auto& e : h.entries) mass += pow2(-static_cast<long>(e.sigma.size()));
  rep.sigma_partition = incomparable && mass == 1;

  rep.balls_separated = true;
  for (std::size_t i = 0; i < h.entries.size() && rep.balls_separated; ++i)
    for (std::size_t j = i + 1; j < h.entries.size(); ++j)
      if (!space::separation_lower_bound(xc, h.entries[i].ball, h.entries[j].ball,
                                         options.limits)) {
        rep.balls_separated = false;
        break;
      }

  rep.diameters_ok = true;
  for (const auto& e : h.entries) {
    std::optional<Rational> d = space::set_diameter_upper_bound(xc, e.ball, options.limits);
    if (!d || *d > pow2(-h.level)) {
      rep.diameters_ok = false;
      break;
    }
  }

  std::vector<RationalBall> balls;
  for (const auto& e : h.entries) balls.push_back(e.ball);
  rep.covers = space::verify_cover(xc, balls, options.limits) == Cert::yes;

  if (previous) {
    rep.parents_ok = true;
    for (const auto& e : h.entries) {
      if (e.parent >= previous->entries.size()) {
        rep.parents_ok = false;
        break;
      }
      const CylinderEntry& p = previous->entries[e.parent];
      bool prefix = e.sigma.size() >= p.sigma.size() &&
                    e.sigma.compare(0, p.sigma.size(), p.sigma) == 0;
      if (!prefix ||
          space::set_inclusion(xc, e.ball, p.ball, options.limits) != Cert::yes) {
        rep.parents_ok = false;
        break;
      }
    }
  }
  return rep;
}

Homeomorphism build_homeomorphism(const PresentedSpace& xc, long depth,
                                  const CantorSearchOptions& options) {
  Homeomorphism out;
  out.levels.push_back(initial_cover(xc, 0, options));
  for (long s = 1; s <= depth; ++s)
    out.levels.push_back(refine(xc, out.levels.back(), options));

  auto levels = std::make_shared<std::vector<CylinderAssignment>>(out.levels);
  std::string target = xc.label();

  // Level used for output precision 2^-k: first with a certified diameter
  // bound at or below it.
  auto level_for = [levels](long k) -> std::size_t {
    Rational eps = pow2(-k);
    for (std::size_t s = 0; s < levels->size(); ++s)
      if ((*levels)[s].diameter_bound <= eps) return s;
    throw Error::budget_exhausted(
        "cylinder map certified only to diameter " +
        exact::rational_to_string(levels->back().diameter_bound) + "; deepen the refinement");
  };
  auto sigma_depth = [levels](std::size_t s) {
    std::size_t d = 0;
    for (const auto& e : (*levels)[s].entries) d = std::max(d, e.sigma.size());
    return d;
  };

  evalmap::PointMap map;
  map.source_label = "cantor_standard";
  map.target_label = target;
  map.modulus = [level_for, sigma_depth](long k) -> long {
    return static_cast<long>(sigma_depth(level_for(k)));
  };
  map.transform = [levels, level_for, sigma_depth](const PointName& pt) {
    return PointName([levels, level_for, sigma_depth, pt](Precision k) -> std::size_t {
      std::size_t s = level_for(k.k);
      long t = static_cast<long>(sigma_depth(s));
      std::size_t idx = pt.at(Precision(t));
      unsigned long long word = space::cantor_word("cantor_standard", idx);
      for (const auto& e : (*levels)[s].entries) {
        bool match = true;
        for (std::size_t i = 0; i < e.sigma.size(); ++i) {
          int bit = static_cast<int>((word >> i) & 1ULL);
          if (e.sigma[i] - '0' != bit) {
            match = false;
            break;
          }
        }
        if (match) return e.ball.center;
      }
      throw Error::oracle_violation("cylinder assignment does not exhaust the tree");
    });
  };
  out.map = map;
  return out;
}

std::string assignment_to_json(const CylinderAssignment& h) {
  std::string s = "{\"level\":" + std::to_string(h.level) + ",\"entries\":[";
  bool first = true;
  for (const auto& e : h.entries) {
    if (!first) s += ",";
    s += "{\"sigma\":\"" + e.sigma + "\",\"center\":" + std::to_string(e.ball.center) +
         ",\"radius\":\"" + exact::rational_to_string(e.ball.radius) + "\"}";
    first = false;
  }
  s += "]}";
  return s;
}

}  // namespace evalpres::cantor
