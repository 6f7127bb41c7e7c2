#include "space.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include "error.hpp"
#include "starpoly.hpp"

namespace evalpres::space {

namespace {

using exact::Integer;
using exact::pow2;

// Oracle answers are exact metrics snapped to the 2^-(k+2) grid, so generic
// interval reasoning is exercised even on the built-ins.
Rational quantize(const Rational& d, Precision k) {
  Integer num = d.get_num(), den = d.get_den();
  Integer scaled_num = num;
  mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(),
               static_cast<unsigned long>(k.k + 2));
  // floor(scaled/den + 1/2) = floor((2*scaled + den) / (2*den))
  Integer t = 2 * scaled_num + den;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), Integer(2 * den).get_mpz_t());
  Rational out(q);
  out /= pow2(k.k + 2);
  out.canonicalize();
  return out;
}

Integer cantor_pair(const Integer& a, const Integer& b) {
  Integer s = a + b;
  return s * (s + 1) / 2 + b;
}

void cantor_unpair(const Integer& n, Integer& a, Integer& b) {
  Integer t = 8 * n + 1, r;
  mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
  Integer w = (r - 1) / 2;
  b = n - w * (w + 1) / 2;
  a = w - b;
}

unsigned long long block_bit_reverse(unsigned long long n) {
  if (n == 0) return 0;
  int width = 63;
  while (!((n >> width) & 1ULL)) --width;
  // n = 2^width + r; reverse the low `width` bits of r.
  unsigned long long r = n - (1ULL << width);
  unsigned long long rev = 0;
  for (int i = 0; i < width; ++i)
    if ((r >> i) & 1ULL) rev |= 1ULL << (width - 1 - i);
  return (1ULL << width) + rev;
}

int count_trailing_zeros(unsigned long long v) {
  int t = 0;
  while (!(v & 1ULL)) {
    v >>= 1;
    ++t;
  }
  return t;
}

Rational pow3_inverse(int t) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 3, static_cast<unsigned long>(t));
  return Rational(Integer(1), p);
}

// Smallest depth m >= 1 with 3^-m < 2^-j, i.e. 3^m > 2^j.
long variant_depth_for(long j) {
  Integer p3 = 3, p2;
  mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(j));
  long m = 1;
  while (p3 <= p2) {
    p3 *= 3;
    ++m;
  }
  return m;
}

std::string cantor_point_text(unsigned long long word) {
  if (word == 0) return "0^w";
  std::string bits;
  unsigned long long w = word;
  while (w) {
    bits.push_back((w & 1ULL) ? '1' : '0');
    w >>= 1;
  }
  return bits + "0^w";
}

}  // namespace

const TotalBoundednessFunction& PresentedSpace::tbf() const {
  if (!data_->tbf)
    throw Error::missing_tbf("space '" + data_->label +
                             "' carries no total boundedness function");
  return *data_->tbf;
}

Rational PresentedSpace::exact_metric(std::size_t i, std::size_t j) const {
  if (!data_->exact_metric)
    throw Error::bad_argument("space '" + data_->label + "' has no exact metric");
  return data_->exact_metric(i, j);
}

std::string PresentedSpace::point_text(std::size_t i) const {
  if (data_->point_text) return data_->point_text(i);
  return "p" + std::to_string(i);
}

namespace {
std::atomic<unsigned long long> point_name_serial{1};
}

PointName::PointName(std::function<std::size_t(Precision)> fn)
    : state_(std::make_shared<State>()) {
  state_->fn = std::move(fn);
  state_->serial = point_name_serial.fetch_add(1);
}

unsigned long long PointName::id() const {
  if (!state_) return 0;
  return state_->serial;
}

PointName PointName::constant(std::size_t index) {
  return PointName([index](Precision) { return index; });
}

std::size_t PointName::at(Precision k) const {
  if (!state_) throw Error::bad_argument("empty point name");
  std::lock_guard<std::mutex> lock(state_->mu);
  auto it = state_->memo.find(k.k);
  if (it != state_->memo.end()) return it->second;
  std::size_t v = state_->fn(k);
  state_->memo.emplace(k.k, v);
  return v;
}

// --- Certified ball relations -----------------------------------------------------

Cert formal_inclusion(const PresentedSpace& s, const RationalBall& inner,
                      const RationalBall& outer, Precision k) {
  Interval d = s.metric_interval(inner.center, outer.center, k);
  return (d.hi + inner.radius < outer.radius) ? Cert::yes : Cert::unknown;
}

Cert formally_disjoint(const PresentedSpace& s, const RationalBall& a,
                       const RationalBall& b, Precision k) {
  Interval d = s.metric_interval(a.center, b.center, k);
  return (d.lo - a.radius - b.radius > 0) ? Cert::yes : Cert::unknown;
}

std::optional<Rational> separation_lower_bound(const PresentedSpace& s, const RationalBall& a,
                                               const RationalBall& b,
                                               const SearchLimits& limits) {
  // Code-level disjointness already gives a bound.
  Interval direct = s.metric_interval(a.center, b.center, Precision(limits.max_precision));
  if (direct.lo - a.radius - b.radius > 0) return direct.lo - a.radius - b.radius;
  if (!s.has_tbf()) return std::nullopt;
  for (long level = 2; level <= limits.max_net_level; ++level) {
    Precision prec(level + 2);
    Rational eps = pow2(-level);
    std::optional<Rational> bound;
    bool all_positive = true;
    for (std::size_t n : s.net(level)) {
      Interval da = s.metric_interval(n, a.center, prec);
      if (da.lo >= eps + a.radius) continue;  // net ball certainly misses a
      Interval db = s.metric_interval(n, b.center, prec);
      Rational low = db.lo - eps - b.radius;
      if (low <= 0) {
        all_positive = false;
        break;
      }
      if (!bound || low < *bound) bound = low;
    }
    if (all_positive && bound) return bound;
  }
  return std::nullopt;
}

Cert set_inclusion(const PresentedSpace& s, const RationalBall& inner,
                   const RationalBall& outer, const SearchLimits& limits) {
  if (formal_inclusion(s, inner, outer, Precision(limits.max_precision)) == Cert::yes)
    return Cert::yes;
  if (!s.has_tbf()) return Cert::unknown;
  for (long level = 2; level <= limits.max_net_level; ++level) {
    Precision prec(level + 2);
    Rational eps = pow2(-level);
    bool ok = true;
    for (std::size_t n : s.net(level)) {
      Interval di = s.metric_interval(n, inner.center, prec);
      if (di.lo >= eps + inner.radius) continue;  // misses inner
      RationalBall net_ball{n, eps};
      if (formal_inclusion(s, net_ball, outer, prec) != Cert::yes &&
          formal_inclusion(s, net_ball, outer, Precision(limits.max_precision)) != Cert::yes) {
        ok = false;
        break;
      }
    }
    if (ok) return Cert::yes;
  }
  return Cert::unknown;
}

std::optional<Rational> set_diameter_upper_bound(const PresentedSpace& s, const RationalBall& b,
                                                 const SearchLimits& limits) {
  if (!s.has_tbf()) return 2 * b.radius;
  std::optional<Rational> best;
  for (long level = 2; level <= limits.max_net_level; ++level) {
    Precision prec(level + 2);
    Rational eps = pow2(-level);
    std::vector<std::size_t> touching;
    for (std::size_t n : s.net(level)) {
      Interval d = s.metric_interval(n, b.center, prec);
      if (d.lo < eps + b.radius) touching.push_back(n);
    }
    if (touching.empty() || touching.size() > 512) continue;
    Rational bound(0);
    for (std::size_t i = 0; i < touching.size(); ++i)
      for (std::size_t j = i + 1; j < touching.size(); ++j) {
        Interval d = s.metric_interval(touching[i], touching[j], prec);
        if (d.hi > bound) bound = d.hi;
      }
    bound += 2 * eps;
    if (!best || bound < *best) best = bound;
  }
  Rational code_diam = 2 * b.radius;
  if (!best || code_diam < *best) return code_diam;
  return best;
}

Cert verify_cover(const PresentedSpace& s, const std::vector<RationalBall>& balls,
                  const SearchLimits& limits) {
  if (!s.has_tbf())
    throw Error::missing_tbf("verify_cover requires a total boundedness function");
  for (long level = 0; level <= limits.max_net_level; ++level) {
    Rational eps = pow2(-level);
    bool ok = true;
    for (std::size_t n : s.net(level)) {
      RationalBall net_ball{n, eps};
      bool covered = false;
      for (const auto& ball : balls) {
        if (formal_inclusion(s, net_ball, ball, Precision(level + 2)) == Cert::yes ||
            formal_inclusion(s, net_ball, ball, Precision(limits.max_precision)) == Cert::yes) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        ok = false;
        break;
      }
    }
    if (ok) return Cert::yes;
  }
  return Cert::unknown;
}

Cert covers_region(const PresentedSpace& s, const RationalBall& region,
                   const std::vector<RationalBall>& parts, const SearchLimits& limits) {
  if (!s.has_tbf())
    throw Error::missing_tbf("covers_region requires a total boundedness function");
  for (long level = 1; level <= limits.max_net_level; ++level) {
    Precision prec(level + 2);
    Rational eps = pow2(-level);
    bool ok = true;
    for (std::size_t n : s.net(level)) {
      Interval d = s.metric_interval(n, region.center, prec);
      if (d.lo >= eps + region.radius) continue;  // misses the region
      RationalBall net_ball{n, eps};
      bool covered = false;
      for (const auto& part : parts) {
        if (formal_inclusion(s, net_ball, part, prec) == Cert::yes ||
            formal_inclusion(s, net_ball, part, Precision(limits.max_precision)) == Cert::yes) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        ok = false;
        break;
      }
    }
    if (ok) return Cert::yes;
  }
  return Cert::unknown;
}

// --- Diagram -------------------------------------------------------------------------

namespace {

Rational positive_rational(unsigned long n) {
  return poly::cw_value(Integer(n + 1));
}

}  // namespace

std::vector<MetricDiagramEntry> diagram_emit(const PresentedSpace& s, std::size_t budget) {
  std::vector<MetricDiagramEntry> out;
  if (budget == 0) return out;
  std::set<std::tuple<Rational, std::size_t, std::size_t, Rational>> seen;
  // Fair dovetailing: tuples (r, j, k, r2, precision) graded by total weight.
  for (unsigned long total = 0; total <= 64; ++total) {
    for (unsigned long a1 = 0; a1 <= total; ++a1)
      for (unsigned long a2 = 0; a2 + a1 <= total; ++a2)
        for (unsigned long a3 = 0; a3 + a2 + a1 <= total; ++a3)
          for (unsigned long a4 = 0; a4 + a3 + a2 + a1 <= total; ++a4) {
            unsigned long a5 = total - a1 - a2 - a3 - a4;
            Rational r = positive_rational(a1);
            std::size_t j = a2, k = a3;
            Rational r2 = positive_rational(a4);
            if (r >= r2) continue;
            Precision m(static_cast<long>(a5));
            Interval d = s.metric_interval(j, k, m);
            if (r < d.lo && d.hi < r2) {
              auto key = std::make_tuple(r, j, k, r2);
              if (seen.insert(key).second) {
                out.push_back(MetricDiagramEntry{r, j, k, r2});
                if (out.size() == budget) return out;
              }
            }
          }
  }
  return out;
}

std::string diagram_entry_jsonl(const MetricDiagramEntry& e) {
  return "{\"r\":\"" + exact::rational_to_string(e.r) + "\",\"j\":" + std::to_string(e.j) +
         ",\"k\":" + std::to_string(e.k) + ",\"r2\":\"" + exact::rational_to_string(e.r2) +
         "\"}";
}

// --- Maximization and names ------------------------------------------------------------

Rational max_over_space(const PresentedSpace& s, const ScalarOnSpace& g, Precision k) {
  long level = g.modulus(k.k + 1);
  if (level < 0) level = 0;
  std::vector<std::size_t> net = s.net(level);
  if (net.empty()) throw Error::oracle_violation("empty total boundedness net");
  std::optional<Rational> best;
  Precision val_prec(k.k + 1);
  for (std::size_t n : net) {
    Rational v = g.value(n, val_prec);
    if (!best || v > *best) best = v;
  }
  return *best;
}

PointName point_name_from_distances(const PresentedSpace& s,
                                    std::function<Rational(std::size_t, Precision)> dist,
                                    const SearchLimits& limits) {
  (void)s;
  return PointName([dist, limits](Precision k) -> std::size_t {
    for (long t = k.k + 2; t <= k.k + 10; ++t) {
      std::size_t horizon = std::min<std::size_t>(
          limits.name_horizon, static_cast<std::size_t>(64) << (t - k.k - 2));
      for (std::size_t n = 0; n < horizon; ++n) {
        Rational q;
        try {
          q = dist(n, Precision(t));
        } catch (const Error& e) {
          if (e.code() == ErrorCode::budget_exhausted) continue;  // skip candidate
          throw;
        }
        if (q + pow2(-t) <= pow2(-k.k)) return n;
      }
    }
    throw Error::budget_exhausted("distance-name search exhausted at precision 2^-" +
                                  std::to_string(k.k));
  });
}

// --- Built-in spaces ---------------------------------------------------------------------

// Dyadic enumeration of [0,1]: 0, 1, 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ...
Rational unit_interval_point(std::size_t index) {
  if (index == 0) return Rational(0);
  if (index == 1) return Rational(1);
  std::size_t v = index - 1;  // v >= 1
  long level = 0;
  while ((static_cast<std::size_t>(1) << level) <= v) ++level;
  // v in [2^(level-1), 2^level): position within the level.
  std::size_t pos = v - (static_cast<std::size_t>(1) << (level - 1));
  unsigned long num = 2 * static_cast<unsigned long>(pos) + 1;
  Rational q(num);
  q /= pow2(level);
  q.canonicalize();
  return q;
}

std::size_t unit_interval_index(const Rational& dyadic) {
  if (dyadic == 0) return 0;
  if (dyadic == 1) return 1;
  if (dyadic < 0 || dyadic > 1)
    throw Error::bad_argument("unit interval point out of range: " +
                              exact::rational_to_string(dyadic));
  Integer num = dyadic.get_num(), den = dyadic.get_den();
  // den must be a power of two (canonical form, num odd).
  unsigned long level = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
  Integer check;
  mpz_ui_pow_ui(check.get_mpz_t(), 2, level);
  if (check != den)
    throw Error::bad_argument("not a dyadic rational: " + exact::rational_to_string(dyadic));
  if (level >= 62) throw Error::bad_argument("dyadic level too deep to index");
  if (!num.fits_ulong_p()) throw Error::bad_argument("dyadic numerator too large");
  unsigned long n = num.get_ui();
  return (static_cast<std::size_t>(1) << (level - 1)) + (n - 1) / 2 + 1;
}

unsigned long long cantor_word(const std::string& space_label, std::size_t index) {
  unsigned long long n = static_cast<unsigned long long>(index);
  if (space_label == "cantor_standard") return n;
  if (space_label == "cantor_variant") return block_bit_reverse(n);
  throw Error::bad_argument("not a Cantor space: " + space_label);
}

std::size_t cantor_index_of_word(const std::string& space_label, unsigned long long word) {
  if (space_label == "cantor_standard") return static_cast<std::size_t>(word);
  if (space_label == "cantor_variant")
    return static_cast<std::size_t>(block_bit_reverse(word));  // involution
  throw Error::bad_argument("not a Cantor space: " + space_label);
}

Rational segments_point(std::size_t index) {
  if (index == 0) return Rational(0);
  Integer n, u;
  cantor_unpair(Integer(static_cast<unsigned long>(index - 1)), n, u);
  if (!n.fits_ulong_p() || !u.fits_ulong_p())
    throw Error::bad_argument("segments index too large");
  unsigned long seg = n.get_ui();
  Rational offset = unit_interval_point(u.get_ui());
  // J_seg = [3*2^-(seg+2), 5*2^-(seg+2)], length 2^-(seg+1).
  Rational left = 3 * pow2(-static_cast<long>(seg) - 2);
  Rational len = pow2(-static_cast<long>(seg) - 1);
  Rational q = left + offset * len;
  q.canonicalize();
  return q;
}

namespace {

std::size_t segments_index(unsigned long seg, std::size_t unit_idx) {
  Integer c = cantor_pair(Integer(seg), Integer(static_cast<unsigned long>(unit_idx)));
  if (!c.fits_ulong_p()) throw Error::bad_argument("segments index overflow");
  return c.get_ui() + 1;
}

PresentedSpace make_unit_interval() {
  PresentedSpace::Data d;
  d.label = "unit_interval";
  d.diam_bound = Rational(1);
  d.exact_metric = [](std::size_t i, std::size_t j) -> Rational {
    return abs(unit_interval_point(i) - unit_interval_point(j));
  };
  auto exact = d.exact_metric;
  d.metric = [exact](std::size_t i, std::size_t j, Precision k) {
    return quantize(exact(i, j), k);
  };
  d.tbf = TotalBoundednessFunction{[](long j) {
    if (j < 0) j = 0;
    if (j > 30) throw Error::bad_argument("net level too deep");
    std::vector<std::size_t> out;
    std::size_t steps = static_cast<std::size_t>(1) << j;
    out.reserve(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) {
      Rational q(static_cast<unsigned long>(m));
      q /= pow2(j);
      q.canonicalize();
      out.push_back(unit_interval_index(q));
    }
    return out;
  }};
  d.point_text = [](std::size_t i) { return exact::rational_to_string(unit_interval_point(i)); };
  return PresentedSpace(std::move(d));
}

PresentedSpace make_cantor(bool variant) {
  PresentedSpace::Data d;
  d.label = variant ? "cantor_variant" : "cantor_standard";
  d.diam_bound = Rational(1);
  std::string label = d.label;
  d.exact_metric = [variant](std::size_t i, std::size_t j) -> Rational {
    if (i == j) return Rational(0);
    unsigned long long wi = variant ? block_bit_reverse(i) : i;
    unsigned long long wj = variant ? block_bit_reverse(j) : j;
    if (wi == wj) return Rational(0);
    int t = count_trailing_zeros(wi ^ wj);
    return variant ? pow3_inverse(t) : pow2(-t);
  };
  auto exact = d.exact_metric;
  d.metric = [exact](std::size_t i, std::size_t j, Precision k) {
    return quantize(exact(i, j), k);
  };
  d.tbf = TotalBoundednessFunction{[variant](long j) {
    if (j < 0) j = 0;
    long depth = variant ? variant_depth_for(j) : j + 1;
    if (depth > 24) throw Error::bad_argument("net level too deep");
    std::size_t count = static_cast<std::size_t>(1) << depth;
    std::vector<std::size_t> out;
    out.reserve(count);
    for (unsigned long long w = 0; w < count; ++w)
      out.push_back(variant ? static_cast<std::size_t>(block_bit_reverse(w))
                            : static_cast<std::size_t>(w));
    return out;
  }};
  d.point_text = [variant](std::size_t i) {
    return cantor_point_text(variant ? block_bit_reverse(i) : i);
  };
  return PresentedSpace(std::move(d));
}

PresentedSpace make_segments() {
  PresentedSpace::Data d;
  d.label = "segments";
  d.diam_bound = Rational(5, 4);
  d.exact_metric = [](std::size_t i, std::size_t j) -> Rational {
    return abs(segments_point(i) - segments_point(j));
  };
  auto exact = d.exact_metric;
  d.metric = [exact](std::size_t i, std::size_t j, Precision k) {
    return quantize(exact(i, j), k);
  };
  d.tbf = TotalBoundednessFunction{[](long j) {
    if (j < 0) j = 0;
    if (j > 24) throw Error::bad_argument("net level too deep");
    std::vector<std::size_t> out{0};  // the point 0 covers every J_n with n > j
    for (unsigned long seg = 0; seg <= static_cast<unsigned long>(j); ++seg) {
      long level = std::max<long>(0, j - static_cast<long>(seg));
      std::size_t steps = static_cast<std::size_t>(1) << level;
      for (std::size_t t = 0; t <= steps; ++t) {
        Rational q(static_cast<unsigned long>(t));
        q /= pow2(level);
        q.canonicalize();
        out.push_back(segments_index(seg, unit_interval_index(q)));
      }
    }
    return out;
  }};
  d.point_text = [](std::size_t i) { return exact::rational_to_string(segments_point(i)); };
  return PresentedSpace(std::move(d));
}

}  // namespace

PresentedSpace builtin_space(const std::string& label) {
  if (label == "unit_interval") return make_unit_interval();
  if (label == "cantor_standard") return make_cantor(false);
  if (label == "cantor_variant") return make_cantor(true);
  if (label == "segments") return make_segments();
  throw Error::bad_argument("unknown built-in space: " + label);
}

bool is_builtin_space(const std::string& label) {
  return label == "unit_interval" || label == "cantor_standard" ||
         label == "cantor_variant" || label == "segments";
}

std::vector<std::string> builtin_space_labels() {
  return {"unit_interval", "cantor_standard", "cantor_variant", "segments"};
}

std::size_t builtin_index_of_value(const PresentedSpace& s, const Rational& value) {
  if (s.label() == "unit_interval") return unit_interval_index(value);
  if (s.label() == "segments") {
    if (value == 0) return 0;
    for (unsigned long seg = 0; seg <= 80; ++seg) {
      Rational left = 3 * pow2(-static_cast<long>(seg) - 2);
      Rational right = 5 * pow2(-static_cast<long>(seg) - 2);
      if (value >= left && value <= right) {
        Rational offset = (value - left) / pow2(-static_cast<long>(seg) - 1);
        offset.canonicalize();
        return segments_index(seg, unit_interval_index(offset));
      }
      if (value > right) break;
    }
    throw Error::bad_argument("value is not a distinguished segments point: " +
                              exact::rational_to_string(value));
  }
  throw Error::bad_argument("no rational coordinates on space " + s.label());
}

PointName builtin_point_name(const PresentedSpace& s, const Rational& value) {
  if (s.label() == "unit_interval") {
    if (value < 0 || value > 1)
      throw Error::bad_argument("point outside [0,1]: " + exact::rational_to_string(value));
    return PointName([value](Precision k) {
      long level = k.k + 1;
      // Nearest grid point m/2^level.
      Rational scaled = value * pow2(level);
      Integer m;
      mpz_fdiv_q(m.get_mpz_t(), Integer(2 * scaled.get_num() + scaled.get_den()).get_mpz_t(),
                 Integer(2 * scaled.get_den()).get_mpz_t());
      if (m < 0) m = 0;
      Rational q(m);
      q /= pow2(level);
      q.canonicalize();
      if (q > 1) q = 1;
      return unit_interval_index(q);
    });
  }
  if (s.label() == "segments") {
    // Validate membership and pick nearest grid points per precision.
    if (value != 0) builtin_index_of_value(s, value);
    return PointName([value](Precision k) -> std::size_t {
      if (value <= pow2(-k.k - 1)) {
        // Near the accumulation point; 0 itself names it well enough
        // whenever the value is that small.
        if (value == 0) return 0;
        if (value <= pow2(-k.k)) return 0;
      }
      for (unsigned long seg = 0; seg <= 80; ++seg) {
        Rational left = 3 * pow2(-static_cast<long>(seg) - 2);
        Rational right = 5 * pow2(-static_cast<long>(seg) - 2);
        if (value >= left && value <= right) {
          long level = std::max<long>(0, k.k - static_cast<long>(seg));
          Rational offset = (value - left) / pow2(-static_cast<long>(seg) - 1);
          // Nearest grid point at 2^-level spacing within the segment.
          Rational scaled = offset * pow2(level);
          Integer m;
          mpz_fdiv_q(m.get_mpz_t(),
                     Integer(2 * scaled.get_num() + scaled.get_den()).get_mpz_t(),
                     Integer(2 * scaled.get_den()).get_mpz_t());
          if (m < 0) m = 0;
          Rational q(m);
          q /= pow2(level);
          q.canonicalize();
          if (q > 1) q = 1;
          return segments_index(seg, unit_interval_index(q));
        }
        if (value > right) break;
      }
      throw Error::bad_argument("value is not in the segments space");
    });
  }
  throw Error::bad_argument("rational point names unsupported on " + s.label());
}

}  // namespace evalpres::space
