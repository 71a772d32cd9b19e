#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace horo {

using Integer = mpz_class;
using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Rationals

Rational make_rational(const Integer& num, const Integer& den);
// gmpxx leaves Rational(a, b) unreduced and its arithmetic assumes reduced
// operands, so every public entry point normalises what it is given.
inline Rational canonical(Rational r) {
    r.canonicalize();
    return r;
}
inline Rational make_rational(long num, long den) { return make_rational(Integer(num), Integer(den)); }

// "p/q", or "p" when q = 1.
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);

// Accepts "p/q", "p", decimals ("1.25", "-0.5") and scientific ("1e-3").
// Decimals are read exactly: "1.2" is 6/5.
Rational parse_rational(std::string_view s);
Integer parse_integer(std::string_view s);

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);
Integer round_of(const Rational& x);  // floor(x + 1/2)
Rational frac(const Rational& x);     // x mod 1, in [0, 1)
Rational abs_of(const Rational& x);

// Natural log of a positive rational of any size (double precision).
double log_of(const Rational& x);
double to_double(const Rational& x);

// Exact rational value of a finite double.
Rational from_double(double v);

// ---------------------------------------------------------------------------
// Elementary arithmetic

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

struct Bezout {
    Integer g, x, y;  // a*x + b*y = g = gcd(a, b) >= 0
};
Bezout ext_gcd(const Integer& a, const Integer& b);

// Inverse of a modulo m (m >= 1) in [0, m); nullopt if gcd(a, m) != 1.
std::optional<Integer> mod_inverse(const Integer& a, const Integer& m);
// Non-negative remainder.
Integer mod(const Integer& a, const Integer& m);

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);
int moebius(std::uint64_t n);
std::uint64_t sigma1(std::uint64_t n);

// ---------------------------------------------------------------------------
// Continued fractions

struct Convergent {
    Integer p, q;
    Rational value() const { return make_rational(p, q); }
};

struct ContinuedFraction {
    Integer a0;
    std::vector<Integer> partials;
    std::vector<Convergent> convergents;  // p_0/q_0 = a0, then one per partial

    Rational value() const;
    Integer max_partial_quotient() const;  // 0 for an empty partial list
};

ContinuedFraction continued_fraction(const Rational& x);
ContinuedFraction from_partials(const Integer& a0, const std::vector<Integer>& partials);

// Intermediate fractions (p_{k-1} + t p_k)/(q_{k-1} + t q_k), 1 <= t < a_{k+1},
// together with the convergents, sorted by denominator.
std::vector<Convergent> convergents_and_intermediates(const ContinuedFraction& cf);

// Digit stream of an irrational (or long) continued fraction supplied by
// configuration: a0, an explicit prefix, then either a repeating period or
// the growth rule a_{k+1} = floor(q_k^(kappa - 1)) (at least 1).
struct CfDigits {
    Integer a0 = 0;
    std::vector<Integer> prefix;
    std::vector<Integer> period;
    std::optional<Rational> kappa;

    bool finite() const { return period.empty() && !kappa; }
    // Expand until q_k exceeds `min_q` (or the digits run out for finite streams),
    // with at least one further partial so that q_{k+1} is known.
    ContinuedFraction expand_until(const Integer& min_q) const;
    ContinuedFraction expand_terms(std::size_t terms) const;
    std::string describe() const;
};

// ---------------------------------------------------------------------------
// Certified comparisons

enum class Tri { no, yes, unknown };
const char* to_string(Tri t);

struct RationalInterval {
    Rational lo, hi;
    bool exact() const { return lo == hi; }
    double mid() const;
};

// A real translate x: a rational centre plus an exact error radius.
// Exact rationals have radius 0.
class Translate {
public:
    Translate() = default;
    static Translate rational(const Rational& x);
    // Centre p_K/q_K with q_K*q_{K+1} >= 1/max_radius.
    static Translate from_cf(const CfDigits& digits, const Rational& max_radius);
    // Decimal string; the radius is one unit in the last supplied digit.
    static Translate from_decimal(std::string_view s);
    // Any real in [center - radius, center + radius].
    static Translate interval(const Rational& center, const Rational& radius, std::string label);

    const Rational& center() const { return center_; }
    const Rational& radius() const { return radius_; }
    bool exact() const { return radius_ == 0; }
    const std::optional<CfDigits>& digits() const { return digits_; }
    double approx() const { return to_double(center_); }

    // Is |x - r| < bound ?
    Tri distance_less(const Rational& r, const Rational& bound) const;
    Translate shifted(const Rational& t) const;
    std::string describe() const;

private:
    Rational center_ = 0;
    Rational radius_ = 0;
    std::optional<CfDigits> digits_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// psi schedules and primitive psi-approximability

struct PsiSchedule {
    enum class Kind { power, c_over_n, n_log_n };
    Kind kind = Kind::c_over_n;
    Rational c = 1;
    Rational kappa = 1;  // power only: psi(n) = c * n^(-kappa)

    static PsiSchedule power(const Rational& c, const Rational& kappa);
    static PsiSchedule c_over_n(const Rational& c);
    static PsiSchedule n_log_n(const Rational& c);  // c / (n log n)

    // Exact when the value is rational, otherwise a relative width of 1e-14.
    RationalInterval value(std::uint64_t n) const;
    double approx(std::uint64_t n) const;
    std::string describe() const;
};

struct Witness {
    std::uint64_t n;
    Integer m;
    Tri status;  // yes, or unknown when the translate's radius straddles
};

// Every n in [n_min, N] with some m, gcd(m, n) = 1, |x - m/n| < psi(n)/n.
// Rejects psi values outside (0, 1/2) on that range.
std::vector<Witness> is_primitive_psi_approximable_upto(const Translate& x, const PsiSchedule& psi,
                                                        std::uint64_t N, std::uint64_t n_min = 1);

// Same search restricted to convergents and intermediate fractions.  Complete
// whenever psi(n) < 1/(2n) on the range (Legendre).
std::vector<Witness> psi_witnesses_by_convergents(const Translate& x, const PsiSchedule& psi,
                                                  std::uint64_t N, std::uint64_t n_min = 1);

}  // namespace horo
