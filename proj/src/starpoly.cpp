#include "starpoly.hpp"

#include <algorithm>
#include <cctype>

#include "error.hpp"

namespace evalpres::poly {

namespace {

// Letters are integers 1..alphabet; a string is its bijective base-A numeral,
// most significant letter first.
Integer string_value(const std::vector<int>& letters, int alphabet) {
  Integer v = 0;
  for (int d : letters) v = v * alphabet + d;
  return v;
}

std::vector<int> string_letters(Integer v, int alphabet) {
  std::vector<int> out;
  while (v > 0) {
    Integer r = (v - 1) % alphabet;
    int d = static_cast<int>(r.get_ui()) + 1;
    out.push_back(d);
    v = (v - d) / alphabet;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void append_number(std::vector<int>& out, Integer n, int base) {
  std::vector<int> digits;
  while (n > 0) {
    Integer r = (n - 1) % base;
    int d = static_cast<int>(r.get_ui()) + 1;
    digits.push_back(d);
    n = (n - d) / base;
  }
  out.insert(out.end(), digits.rbegin(), digits.rend());
}

Integer read_number(const std::vector<int>& letters, std::size_t begin, std::size_t end,
                    int base) {
  Integer v = 0;
  for (std::size_t i = begin; i < end; ++i) v = v * base + letters[i];
  return v;
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

// Alphabet letter roles.
constexpr int kMonoSep = 4;   // monomial alphabet {1,2,3,sep}
constexpr int kCoeffSep = 5;  // polynomial alphabet {1,2,3,4,coeff-sep,term-sep}
constexpr int kTermSep = 6;

// Explicit coefficient codes skip zero (never stored) and one (implicit).
Integer explicit_to_gcode(const Integer& c) {
  if (c == 0) return Integer(1);
  return c + 2;
}

Integer gcode_to_explicit(const Integer& g) {
  if (g == 1) return Integer(0);
  return g - 2;
}

unsigned long to_ulong_checked(const Integer& n, const char* what) {
  if (!n.fits_ulong_p())
    throw Error::bad_argument(std::string("enumeration component too large for ") + what);
  return n.get_ui();
}

}  // namespace

// --- Normal form ---------------------------------------------------------------

StarPoly StarPoly::constant(GaussianRational c) {
  return from_terms({Term{std::move(c), {}}});
}

StarPoly StarPoly::generator(unsigned long var, bool star) {
  return from_terms({Term{GaussianRational(Rational(1)), {Literal{var, star}}}});
}

StarPoly StarPoly::from_terms(std::vector<Term> terms) {
  std::vector<std::pair<Integer, Term>> tagged;
  tagged.reserve(terms.size());
  for (auto& t : terms) {
    if (t.coeff.is_zero()) continue;
    Monomial m = std::move(t.mono);
    std::sort(m.begin(), m.end());
    Integer code = monomial_code(m);
    tagged.emplace_back(std::move(code), Term{std::move(t.coeff), std::move(m)});
  }
  std::sort(tagged.begin(), tagged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  StarPoly out;
  for (auto& [code, term] : tagged) {
    if (!out.terms_.empty() && out.terms_.back().mono == term.mono) {
      out.terms_.back().coeff = out.terms_.back().coeff + term.coeff;
      if (out.terms_.back().coeff.is_zero()) out.terms_.pop_back();
    } else {
      out.terms_.push_back(std::move(term));
    }
  }
  return out;
}

std::optional<unsigned long> StarPoly::max_var() const {
  std::optional<unsigned long> best;
  for (const auto& t : terms_)
    for (const auto& lit : t.mono)
      if (!best || lit.var > *best) best = lit.var;
  return best;
}

unsigned long StarPoly::degree() const {
  unsigned long d = 0;
  for (const auto& t : terms_) d = std::max(d, static_cast<unsigned long>(t.mono.size()));
  return d;
}

StarPoly StarPoly::adjoint() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m = t.mono;
    for (auto& lit : m) lit.star = !lit.star;
    out.push_back(Term{t.coeff.conj(), std::move(m)});
  }
  return from_terms(std::move(out));
}

StarPoly StarPoly::scaled(const GaussianRational& c) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(Term{c * t.coeff, t.mono});
  return from_terms(std::move(out));
}

StarPoly operator+(const StarPoly& a, const StarPoly& b) {
  std::vector<Term> out = a.terms_;
  out.insert(out.end(), b.terms_.begin(), b.terms_.end());
  return StarPoly::from_terms(std::move(out));
}

StarPoly operator-(const StarPoly& a, const StarPoly& b) {
  return a + b.scaled(GaussianRational(Rational(-1)));
}

StarPoly operator*(const StarPoly& a, const StarPoly& b) {
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      Monomial m = ta.mono;
      m.insert(m.end(), tb.mono.begin(), tb.mono.end());
      out.push_back(Term{ta.coeff * tb.coeff, std::move(m)});
    }
  return StarPoly::from_terms(std::move(out));
}

bool operator==(const StarPoly& a, const StarPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].coeff == b.terms_[i].coeff) || a.terms_[i].mono != b.terms_[i].mono)
      return false;
  return true;
}

// --- Calkin-Wilf rational codes --------------------------------------------------

Integer cw_index(const Rational& positive) {
  if (positive <= 0) throw Error::bad_argument("cw_index requires a positive rational");
  Integer a = positive.get_num(), b = positive.get_den();
  // Path bits leaf-to-root, run-length compressed.
  std::vector<std::pair<int, unsigned long>> runs;
  unsigned long total = 0;
  while (!(a == 1 && b == 1)) {
    Integer steps;
    int bit;
    if (a > b) {
      steps = (a - 1) / b;
      a -= steps * b;
      bit = 1;
    } else {
      steps = (b - 1) / a;
      b -= steps * a;
      bit = 0;
    }
    unsigned long s = to_ulong_checked(steps, "rational enumeration");
    total += s;
    if (total > 4000000)
      throw Error::bad_argument("rational too tall for the enumeration");
    runs.emplace_back(bit, s);
  }
  Integer idx = 1;
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    mpz_mul_2exp(idx.get_mpz_t(), idx.get_mpz_t(), it->second);
    if (it->first == 1) {
      Integer mask = 1;
      mpz_mul_2exp(mask.get_mpz_t(), mask.get_mpz_t(), it->second);
      idx += mask - 1;
    }
  }
  return idx;
}

Rational cw_value(const Integer& index) {
  if (index < 1) throw Error::bad_argument("cw_value requires a positive index");
  std::size_t bits = mpz_sizeinbase(index.get_mpz_t(), 2);
  Integer a = 1, b = 1;
  for (std::size_t pos = bits - 1; pos-- > 0;) {
    if (mpz_tstbit(index.get_mpz_t(), pos))
      a += b;
    else
      b += a;
  }
  return Rational(a, b);
}

Integer rational_code(const Rational& q) {
  if (q == 0) return Integer(0);
  if (q > 0) return 2 * cw_index(q) - 1;
  return 2 * cw_index(-q);
}

Rational rational_decode(const Integer& n) {
  if (n == 0) return Rational(0);
  if (mpz_odd_p(n.get_mpz_t())) return cw_value((n + 1) / 2);
  return -cw_value(n / 2);
}

Integer gaussian_code(const GaussianRational& z) {
  if (z.im == 0) return 2 * rational_code(z.re);
  return 1 + 2 * cantor_pair(rational_code(z.re), rational_code(z.im) - 1);
}

GaussianRational gaussian_decode(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return GaussianRational(rational_decode(n / 2));
  Integer a, b;
  cantor_unpair((n - 1) / 2, a, b);
  return GaussianRational(rational_decode(a), rational_decode(b + 1));
}

// --- Monomial and polynomial codes ------------------------------------------------

Integer monomial_code(const Monomial& mono) {
  if (mono.empty()) return Integer(0);
  std::vector<int> letters;
  unsigned long prev = 0;
  bool first = true;
  for (const auto& lit : mono) {
    if (!first) letters.push_back(kMonoSep);
    unsigned long code = lit.code();
    append_number(letters, Integer(code - (first ? 0 : prev)), 3);
    prev = code;
    first = false;
  }
  return 1 + string_value(letters, 4);
}

Monomial monomial_from_code(const Integer& code) {
  if (code == 0) return {};
  std::vector<int> letters = string_letters(code - 1, 4);
  Monomial mono;
  Integer acc = 0;
  std::size_t start = 0;
  bool first = true;
  for (std::size_t i = 0; i <= letters.size(); ++i) {
    if (i == letters.size() || letters[i] == kMonoSep) {
      Integer diff = read_number(letters, start, i, 3);
      acc = first ? diff : acc + diff;
      first = false;
      unsigned long lit = to_ulong_checked(acc, "literal code");
      mono.push_back(Literal{lit / 2, (lit & 1) != 0});
      start = i + 1;
    }
  }
  return mono;
}

Integer index_of(const StarPoly& p) {
  if (p.is_zero()) return Integer(0);
  std::vector<int> letters;
  Integer prev_code = 0;
  bool first = true;
  for (const auto& term : p.terms()) {
    if (!first) letters.push_back(kTermSep);
    Integer code = monomial_code(term.mono);
    Integer gap = first ? code : code - prev_code - 1;
    append_number(letters, gap, 4);
    if (!(term.coeff == GaussianRational(Rational(1)))) {
      letters.push_back(kCoeffSep);
      Integer c = gcode_to_explicit(gaussian_code(term.coeff));
      append_number(letters, c, 5);
    }
    prev_code = code;
    first = false;
  }
  return 1 + string_value(letters, 6);
}

StarPoly poly_from_index(const Integer& index) {
  if (index < 0) throw Error::bad_argument("negative polynomial index");
  if (index == 0) return StarPoly();
  if (index.fits_ulong_p() && sizeof(unsigned long) >= 8) {
    unsigned long v = index.get_ui();
    if (v < (1ULL << 62)) return poly_from_index_u64(v);
  }
  std::vector<int> letters = string_letters(index - 1, 6);
  std::vector<Term> terms;
  Integer mono_code_acc = 0;
  bool first = true;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= letters.size(); ++i) {
    if (i != letters.size() && letters[i] != kTermSep) continue;
    // Chunk [start, i): e-part up to the first coeff separator, coeff after.
    std::size_t sep = i;
    for (std::size_t j = start; j < i; ++j) {
      if (letters[j] == kCoeffSep) {
        sep = j;
        break;
      }
    }
    Integer gap = read_number(letters, start, sep, 4);
    GaussianRational coeff(Rational(1));
    if (sep != i) {
      Integer c = read_number(letters, sep + 1, i, 5);
      coeff = gaussian_decode(explicit_to_gcode(c));
    }
    mono_code_acc = first ? gap : mono_code_acc + gap + 1;
    first = false;
    terms.push_back(Term{coeff, monomial_from_code(mono_code_acc)});
    start = i + 1;
  }
  // Construction yields strictly increasing monomial codes and nonzero
  // coefficients, so the term list is already in normal form.
  StarPoly out = StarPoly::from_terms(std::move(terms));
  return out;
}

// Hot path for candidate searches: pure 64-bit decode.  Complex coefficients
// (odd Gaussian codes) are rare there and fall back to the big-int decoder.
StarPoly poly_from_index_u64(unsigned long long index) {
  using u64 = unsigned long long;
  if (index == 0) return StarPoly();
  int letters[64];
  int len = 0;
  u64 v = index - 1;
  while (v > 0) {
    u64 r = (v - 1) % 6;
    letters[len++] = static_cast<int>(r) + 1;
    v = (v - (r + 1)) / 6;
  }
  // Most significant letter first.
  std::reverse(letters, letters + len);

  std::vector<Term> terms;
  u64 mono_acc = 0;
  bool first = true;
  int start = 0;
  for (int i = 0; i <= len; ++i) {
    if (i != len && letters[i] != kTermSep) continue;
    int sep = i;
    for (int j = start; j < i; ++j) {
      if (letters[j] == kCoeffSep) {
        sep = j;
        break;
      }
    }
    u64 gap = 0;
    for (int j = start; j < sep; ++j) gap = gap * 4 + static_cast<u64>(letters[j]);
    GaussianRational coeff(Rational(1));
    if (sep != i) {
      u64 c = 0;
      for (int j = sep + 1; j < i; ++j) c = c * 5 + static_cast<u64>(letters[j]);
      u64 g = (c == 0) ? 1 : c + 2;
      if ((g & 1) == 0) {
        // Real coefficient: Calkin-Wilf walk in 64-bit arithmetic.
        u64 n = g / 2;
        bool negative = (n & 1) == 0;
        u64 idx = negative ? n / 2 : (n + 1) / 2;
        u64 a = 1, b = 1;
        int bits = 63;
        while (bits >= 0 && !((idx >> bits) & 1)) --bits;
        for (int pos = bits - 1; pos >= 0; --pos) {
          if ((idx >> pos) & 1)
            a += b;
          else
            b += a;
        }
        Rational q(static_cast<unsigned long>(a), static_cast<unsigned long>(b));
        coeff = GaussianRational(negative ? -q : q);
      } else {
        coeff = gaussian_decode(Integer(static_cast<unsigned long>(g)));
      }
    }
    mono_acc = first ? gap : mono_acc + gap + 1;
    first = false;

    // Monomial decode, 64-bit.
    Monomial mono;
    if (mono_acc > 0) {
      int ml[64];
      int mlen = 0;
      u64 mv = mono_acc - 1;
      while (mv > 0) {
        u64 r = (mv - 1) % 4;
        ml[mlen++] = static_cast<int>(r) + 1;
        mv = (mv - (r + 1)) / 4;
      }
      std::reverse(ml, ml + mlen);
      u64 lit_acc = 0;
      bool mono_first = true;
      int mstart = 0;
      for (int j = 0; j <= mlen; ++j) {
        if (j != mlen && ml[j] != kMonoSep) continue;
        u64 diff = 0;
        for (int t = mstart; t < j; ++t) diff = diff * 3 + static_cast<u64>(ml[t]);
        lit_acc = mono_first ? diff : lit_acc + diff;
        mono_first = false;
        mono.push_back(
            Literal{static_cast<unsigned long>(lit_acc / 2), (lit_acc & 1) != 0});
        mstart = j + 1;
      }
    }
    terms.push_back(Term{coeff, std::move(mono)});
    start = i + 1;
  }
  return StarPoly::from_terms(std::move(terms));
}

// --- Text format -------------------------------------------------------------------

namespace {

std::string term_to_string(const GaussianRational& coeff, const Monomial& mono) {
  std::string s;
  if (coeff.is_real())
    s = exact::rational_to_string(coeff.re);
  else
    s = "(" + exact::gaussian_to_string(coeff) + ")";
  for (const auto& lit : mono) {
    s += "*x" + std::to_string(lit.var);
    if (lit.star) s += "*";
  }
  return s;
}

}  // namespace

std::string poly_to_string(const StarPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& term : p.terms()) {
    GaussianRational c = term.coeff;
    bool negative = c.is_real() && c.re < 0;
    if (first) {
      if (negative) {
        out += "-";
        c = -c;
      }
    } else {
      out += negative ? " - " : " + ";
      if (negative) c = -c;
    }
    out += term_to_string(c, term.mono);
    first = false;
  }
  return out;
}

namespace {

struct TermText {
  bool negative;
  std::string body;
};

std::vector<TermText> split_terms(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw Error::parse("empty polynomial text");
  std::vector<TermText> out;
  int depth = 0;
  std::string cur;
  bool cur_negative = false;
  bool at_term_start = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && (ch == '+' || ch == '-')) {
      char prev = i > 0 ? s[i - 1] : '\0';
      bool binds_to_component = (prev == '/' || prev == '(');
      if (at_term_start) {
        // Sign opening a term.
        if (!cur.empty()) throw Error::parse("misplaced sign in: " + text);
        cur_negative = (ch == '-') ? !cur_negative : cur_negative;
        continue;
      }
      if (!binds_to_component) {
        out.push_back({cur_negative, cur});
        cur.clear();
        cur_negative = (ch == '-');
        at_term_start = true;
        continue;
      }
    }
    cur.push_back(ch);
    at_term_start = false;
  }
  if (cur.empty()) throw Error::parse("dangling sign in polynomial text: " + text);
  out.push_back({cur_negative, cur});
  return out;
}

// Parses one term body: factors separated by '*'; a factor "x<j>" may carry a
// trailing '*' for the involution.
Term parse_term(const TermText& tt) {
  const std::string& s = tt.body;
  Term term;
  term.coeff = GaussianRational(Rational(tt.negative ? -1 : 1));
  std::size_t pos = 0;
  bool expect_factor = true;
  bool saw_factor = false;
  while (pos < s.size()) {
    if (!expect_factor) {
      if (s[pos] != '*') throw Error::parse("expected '*' in term: " + s);
      ++pos;
      expect_factor = true;
      continue;
    }
    if (s[pos] == 'x') {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) throw Error::parse("missing variable index in term: " + s);
      unsigned long var = std::stoul(s.substr(start, pos - start));
      bool star = false;
      // A '*' here is the involution if it ends the term or is followed by
      // another '*' (the factor separator).
      if (pos < s.size() && s[pos] == '*') {
        if (pos + 1 == s.size() || s[pos + 1] == '*') {
          star = true;
          ++pos;
        }
      }
      term.mono.push_back(Literal{var, star});
    } else if (s[pos] == '(') {
      std::size_t close = s.find(')', pos);
      if (close == std::string::npos) throw Error::parse("unbalanced '(' in term: " + s);
      term.coeff = term.coeff * exact::gaussian_from_string(s.substr(pos + 1, close - pos - 1));
      pos = close + 1;
    } else {
      std::size_t start = pos;
      while (pos < s.size() && s[pos] != '*') ++pos;
      term.coeff = term.coeff * exact::gaussian_from_string(s.substr(start, pos - start));
    }
    expect_factor = false;
    saw_factor = true;
  }
  if (!saw_factor || expect_factor) throw Error::parse("incomplete term: " + s);
  return term;
}

}  // namespace

StarPoly poly_from_string(const std::string& text) {
  std::string stripped;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) stripped.push_back(ch);
  if (stripped == "0") return StarPoly();
  std::vector<Term> terms;
  for (const auto& tt : split_terms(text)) terms.push_back(parse_term(tt));
  return StarPoly::from_terms(std::move(terms));
}

// --- Bounds and evaluation ----------------------------------------------------------

std::pair<Rational, Rational> GeneratorBounds::var_bounds(unsigned long var) const {
  if (var == 0 && unit_is_x0) return {Rational(1), Rational(0)};
  if (var_override) return var_override(var);
  return {sup_bound, lip_bound};
}

std::pair<Rational, Rational> bounds_of(const StarPoly& p, const GeneratorBounds& gb) {
  Rational total_b(0), total_l(0);
  for (const auto& term : p.terms()) {
    Rational b = term.coeff.abs_upper();
    Rational l(0);
    for (const auto& lit : term.mono) {
      auto [bv, lv] = gb.var_bounds(lit.var);
      Rational nb = b * bv;
      Rational nl = b * lv + bv * l;
      b = nb;
      l = nl;
    }
    total_b += b;
    total_l += l;
  }
  return {total_b, total_l};
}

Approximation eval_poly(const StarPoly& p,
                        const std::function<std::optional<Approximation>(unsigned long)>& args) {
  Approximation sum = Approximation::exact(GaussianRational(Rational(0)));
  for (const auto& term : p.terms()) {
    Approximation prod = Approximation::exact(term.coeff);
    for (const auto& lit : term.mono) {
      std::optional<Approximation> arg = args(lit.var);
      if (!arg)
        throw Error::missing_variable("eval_poly: no binding for x" + std::to_string(lit.var));
      Approximation factor = lit.star ? exact::approx_conj(*arg) : *arg;
      prod = exact::approx_mul(prod, factor);
    }
    sum = exact::approx_add(sum, prod);
  }
  return sum;
}

}  // namespace evalpres::poly
