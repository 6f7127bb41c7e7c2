#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "approx.hpp"
#include "rational.hpp"

namespace evalpres::space {

using exact::Approximation;
using exact::Interval;
using exact::Precision;
using exact::Rational;

// j |-> indices of distinguished points whose 2^-j balls cover the space.
struct TotalBoundednessFunction {
  std::function<std::vector<std::size_t>(long)> cover;
};

struct RationalBall {
  std::size_t center = 0;
  Rational radius{1};
};

// Certified strict bounds r < d(p_j, p_k) < r2.
struct MetricDiagramEntry {
  Rational r;
  std::size_t j = 0;
  std::size_t k = 0;
  Rational r2;
};

// A compact Polish space presented by a metric oracle over distinguished
// points.  Oracle answers q satisfy |q - d(p_i, p_j)| <= 2^-k.  Built-in
// spaces also expose their exact metric for brute-force checks.
class PresentedSpace {
public:
  using MetricOracle = std::function<Rational(std::size_t, std::size_t, Precision)>;
  using ExactMetric = std::function<Rational(std::size_t, std::size_t)>;

  struct Data {
    std::string label;
    Rational diam_bound{1};
    MetricOracle metric;
    ExactMetric exact_metric;                      // optional
    std::optional<TotalBoundednessFunction> tbf;
    std::function<std::string(std::size_t)> point_text;  // optional printer
  };

  explicit PresentedSpace(Data data) : data_(std::make_shared<Data>(std::move(data))) {}

  const std::string& label() const { return data_->label; }
  const Rational& diam_bound() const { return data_->diam_bound; }

  Rational metric(std::size_t i, std::size_t j, Precision k) const {
    return data_->metric(i, j, k);
  }
  Interval metric_interval(std::size_t i, std::size_t j, Precision k) const {
    return Interval::around(metric(i, j, k), k);
  }

  bool has_tbf() const { return data_->tbf.has_value(); }
  const TotalBoundednessFunction& tbf() const;
  std::vector<std::size_t> net(long j) const { return tbf().cover(j); }

  bool has_exact_metric() const { return static_cast<bool>(data_->exact_metric); }
  Rational exact_metric(std::size_t i, std::size_t j) const;

  std::string point_text(std::size_t i) const;

private:
  std::shared_ptr<Data> data_;
};

// Fast-Cauchy name: k |-> distinguished index with d(p_{f(k)}, x) <= 2^-k.
// Memoized so repeated queries are stable.
class PointName {
public:
  PointName() = default;
  explicit PointName(std::function<std::size_t(Precision)> fn);
  static PointName constant(std::size_t index);

  std::size_t at(Precision k) const;
  // Process-unique identity, stable for copies of the same underlying name.
  unsigned long long id() const;
  bool valid() const { return state_ != nullptr; }

private:
  struct State {
    std::function<std::size_t(Precision)> fn;
    std::map<long, std::size_t> memo;
    std::mutex mu;
    unsigned long long serial = 0;
  };
  std::shared_ptr<State> state_;
};

enum class Cert { yes, unknown };

struct SearchLimits {
  long max_net_level = 12;     // finest TBF level consulted
  long max_precision = 20;     // finest oracle precision consulted
  std::size_t name_horizon = 4096;  // candidate cap in distance-name searches
};

// --- Certified relations on coded balls -------------------------------------

// yes only if the upper endpoint at precision k certifies d + r < r'.
Cert formal_inclusion(const PresentedSpace& s, const RationalBall& inner,
                      const RationalBall& outer, Precision k);

// yes only if the lower endpoint certifies d - r - r' > 0.
Cert formally_disjoint(const PresentedSpace& s, const RationalBall& a,
                       const RationalBall& b, Precision k);

// Positive lower bound on inf{d(x,y) : x in ball a, y in ball b}, via a
// TBF net.  Strictly stronger than the code-level relation above; needed for
// cylinder covers, where ball codes touch even though the sets are separated.
std::optional<Rational> separation_lower_bound(const PresentedSpace& s, const RationalBall& a,
                                               const RationalBall& b,
                                               const SearchLimits& limits = {});

// Certified set containment inner ⊆ outer: code-level inclusion when it
// holds, otherwise every net ball touching `inner` must be formally included
// in `outer`.
Cert set_inclusion(const PresentedSpace& s, const RationalBall& inner,
                   const RationalBall& outer, const SearchLimits& limits = {});

// Certified upper bound on the set diameter of a ball.
std::optional<Rational> set_diameter_upper_bound(const PresentedSpace& s, const RationalBall& b,
                                                 const SearchLimits& limits = {});

// yes iff some net level is entirely formally included in the listed balls.
Cert verify_cover(const PresentedSpace& s, const std::vector<RationalBall>& balls,
                  const SearchLimits& limits = {});

// Restriction of verify_cover to one region: every net ball touching
// `region` must be formally included in one of `parts`.
Cert covers_region(const PresentedSpace& s, const RationalBall& region,
                   const std::vector<RationalBall>& parts, const SearchLimits& limits = {});

// --- Diagram ------------------------------------------------------------------

std::vector<MetricDiagramEntry> diagram_emit(const PresentedSpace& s, std::size_t budget);
std::string diagram_entry_jsonl(const MetricDiagramEntry& e);

// --- Maximization and names ------------------------------------------------------

// Real-valued map on the space given by approximations at distinguished
// points plus a modulus of continuity (d <= 2^-modulus(t) forces |g(x)-g(y)|
// <= 2^-t).
struct ScalarOnSpace {
  std::function<Rational(std::size_t, Precision)> value;
  std::function<long(long)> modulus;
};

// q with |q - max_X g| <= 2^-k, über the net at level modulus(k+1).
Rational max_over_space(const PresentedSpace& s, const ScalarOnSpace& g, Precision k);

// Builds a point name from a distance oracle (n, k) |-> approximation of
// d(x, p_n).  Candidates failing with budget errors are skipped.
PointName point_name_from_distances(const PresentedSpace& s,
                                    std::function<Rational(std::size_t, Precision)> dist,
                                    const SearchLimits& limits = {});

// --- Built-in spaces ----------------------------------------------------------------

// Labels: unit_interval, cantor_standard, cantor_variant, segments.
PresentedSpace builtin_space(const std::string& label);
bool is_builtin_space(const std::string& label);
std::vector<std::string> builtin_space_labels();

// Index helpers for the built-ins (also used by fixtures and tests).
Rational unit_interval_point(std::size_t index);
std::size_t unit_interval_index(const Rational& dyadic);
// Eventually-zero word of the point, coordinate i = bit i.
unsigned long long cantor_word(const std::string& space_label, std::size_t index);
std::size_t cantor_index_of_word(const std::string& space_label, unsigned long long word);
Rational segments_point(std::size_t index);
// Smallest index of an exact rational point of a built-in (throws if the
// value is not a distinguished point).
std::size_t builtin_index_of_value(const PresentedSpace& s, const Rational& value);

// Exact point name of a rational element of a built-in space (searches
// distinguished points; works for any member, distinguished or not).
PointName builtin_point_name(const PresentedSpace& s, const Rational& value);

}  // namespace evalpres::space
