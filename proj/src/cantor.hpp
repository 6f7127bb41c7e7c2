#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evalmap.hpp"
#include "space.hpp"

namespace evalpres::cantor {

using exact::Precision;
using exact::Rational;
using space::PresentedSpace;
using space::RationalBall;

// One level of the cover-refinement map h_s: pairwise incomparable binary
// strings whose cylinders partition 2^omega, each assigned a certified ball
// of the presented space.
struct CylinderEntry {
  std::string sigma;
  RationalBall ball;
  std::size_t parent = 0;  // index into the previous level's entries
};

struct CylinderAssignment {
  long level = 0;
  std::vector<CylinderEntry> entries;
  // Certified upper bound on every ball's set diameter at this level.
  Rational diameter_bound{1};
};

struct CantorSearchOptions {
  std::size_t center_budget = 100000;
  int radius_steps = 8;  // radii 3*2^-(s+2-u) downward
  space::SearchLimits limits;
};

// Level-s cover of a Cantor-space presentation by separated certified balls
// with incomparable cylinder labels.
CylinderAssignment initial_cover(const PresentedSpace& xc, long s,
                                 const CantorSearchOptions& options = {});

// One refinement round: each ball splits into separated children covering it,
// with cylinder labels extending the parent's.
CylinderAssignment refine(const PresentedSpace& xc, const CylinderAssignment& h,
                          const CantorSearchOptions& options = {});

// Machine checks for one level (and its predecessor when given):
// incomparability/exhaustion of the labels, pairwise positive separation,
// certified diameters, cover, and parent containment.
struct ConditionReport {
  bool sigma_partition = false;
  bool balls_separated = false;
  bool diameters_ok = false;
  bool covers = false;
  bool parents_ok = true;  // vacuous at level 0
  bool all() const {
    return sigma_partition && balls_separated && diameters_ok && covers && parents_ok;
  }
};
ConditionReport check_conditions(const PresentedSpace& xc, const CylinderAssignment& h,
                                 const CylinderAssignment* previous,
                                 const CantorSearchOptions& options = {});

// The homeomorphism from standard Cantor space onto xc defined by the nested
// assignment chain; also exposes the levels for inspection.
struct Homeomorphism {
  std::vector<CylinderAssignment> levels;
  evalmap::PointMap map;  // standard 2^omega -> xc
};
Homeomorphism build_homeomorphism(const PresentedSpace& xc, long depth,
                                  const CantorSearchOptions& options = {});

std::string assignment_to_json(const CylinderAssignment& h);

}  // namespace evalpres::cantor
