#include "horo/numth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "horo/errors.hpp"

namespace horo {

Rational make_rational(const Integer& num, const Integer& den) {
    require(den != 0, "zero_denominator", "rational with denominator 0");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Integer pow10(unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view es = s.substr(e + 1);
        bool eneg = false;
        if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
            eneg = es[0] == '-';
            es.remove_prefix(1);
        }
        require(all_digits(es) && es.size() < 7, "bad_rational", "cannot parse '" + std::string(whole) + "'");
        exp10 = std::stol(std::string(es));
        if (eneg) exp10 = -exp10;
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        require((ip.empty() || all_digits(ip)) && (fp.empty() || all_digits(fp)) && !(ip.empty() && fp.empty()),
                "bad_rational", "cannot parse '" + std::string(whole) + "'");
        digits = std::string(ip) + std::string(fp);
        exp10 -= static_cast<long>(fp.size());
    } else {
        require(all_digits(s), "bad_rational", "cannot parse '" + std::string(whole) + "'");
        digits = std::string(s);
    }
    Integer mant(digits, 10);
    if (neg) mant = -mant;
    if (exp10 >= 0) return Rational(mant * pow10(static_cast<unsigned long>(exp10)));
    return make_rational(mant, pow10(static_cast<unsigned long>(-exp10)));
}

}  // namespace

Integer parse_integer(std::string_view s) {
    std::string_view t = trim(s);
    std::string_view body = t;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) body.remove_prefix(1);
    require(all_digits(body), "bad_integer", "cannot parse integer '" + std::string(s) + "'");
    std::string str(t);
    if (str[0] == '+') str.erase(0, 1);
    return Integer(str, 10);
}

Rational parse_rational(std::string_view s) {
    std::string_view t = trim(s);
    require(!t.empty(), "bad_rational", "empty rational");
    if (auto slash = t.find('/'); slash != std::string_view::npos) {
        Integer p = parse_integer(t.substr(0, slash));
        Integer q = parse_integer(t.substr(slash + 1));
        return make_rational(p, q);
    }
    return parse_decimal(t, s);
}

Integer floor_of(const Rational& x) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Integer ceil_of(const Rational& x) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Integer round_of(const Rational& x) { return floor_of(x + Rational(1, 2)); }

Rational frac(const Rational& x) { return x - Rational(floor_of(x)); }

Rational abs_of(const Rational& x) { return x < 0 ? Rational(-x) : x; }

namespace {
double log_of(const Integer& v) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, v.get_mpz_t());
    return std::log(m) + static_cast<double>(e) * std::log(2.0);
}
}  // namespace

double log_of(const Rational& x) {
    require(x > 0, "log_nonpositive", "log of a non-positive rational");
    return log_of(x.get_num()) - log_of(x.get_den());
}

double to_double(const Rational& x) {
    double d = x.get_d();
    if (std::isfinite(d) && (d != 0.0 || x == 0)) {
        if (std::fabs(d) > 1e-290) return d;
    }
    if (x == 0) return 0.0;
    double l = log_of(abs_of(x));
    return (x < 0 ? -1.0 : 1.0) * std::exp(l);
}

Rational from_double(double v) {
    require(std::isfinite(v), "non_finite", "non-finite value");
    Rational r;
    mpq_set_d(r.get_mpq_t(), v);
    return r;
}

Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Bezout ext_gcd(const Integer& a, const Integer& b) {
    Bezout r;
    mpz_gcdext(r.g.get_mpz_t(), r.x.get_mpz_t(), r.y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Integer mod(const Integer& a, const Integer& m) {
    require(m > 0, "bad_modulus", "modulus must be positive");
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

std::optional<Integer> mod_inverse(const Integer& a, const Integer& m) {
    require(m >= 1, "bad_modulus", "modulus must be positive");
    if (m == 1) return Integer(0);
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) return std::nullopt;
    return mod(r, m);
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    require(n >= 1, "n_positive", "factorize needs n >= 1");
    std::vector<std::pair<std::uint64_t, int>> f;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (auto [p, e] : factorize(n)) ps.push_back(p);
    return ps;
}

std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> ds{1};
    for (auto [p, e] : factorize(n)) {
        std::size_t cur = ds.size();
        std::uint64_t pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < cur; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

int moebius(std::uint64_t n) {
    int s = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        s = -s;
    }
    return s;
}

std::uint64_t sigma1(std::uint64_t n) {
    std::uint64_t s = 0;
    for (auto d : divisors(n)) s += d;
    return s;
}

// ---------------------------------------------------------------------------

Rational ContinuedFraction::value() const {
    if (convergents.empty()) return Rational(a0);
    return convergents.back().value();
}

Integer ContinuedFraction::max_partial_quotient() const {
    Integer m = 0;
    for (const auto& a : partials) m = std::max(m, a);
    return m;
}

ContinuedFraction from_partials(const Integer& a0, const std::vector<Integer>& partials) {
    ContinuedFraction cf;
    cf.a0 = a0;
    cf.partials = partials;
    Integer pm = 1, qm = 0, p = a0, q = 1;
    cf.convergents.push_back({p, q});
    for (const auto& a : partials) {
        require(a >= 1, "bad_partial", "partial quotients must be positive");
        Integer pn = a * p + pm, qn = a * q + qm;
        pm = p;
        qm = q;
        p = pn;
        q = qn;
        cf.convergents.push_back({p, q});
    }
    return cf;
}

ContinuedFraction continued_fraction(const Rational& x) {
    Integer num = x.get_num(), den = x.get_den();
    Integer a0 = floor_of(x);
    std::vector<Integer> partials;
    num -= a0 * den;
    // x - a0 = num/den in [0, 1)
    while (num != 0) {
        Integer a;
        mpz_fdiv_q(a.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
        Integer r = den - a * num;
        partials.push_back(a);
        den = num;
        num = r;
    }
    return from_partials(a0, partials);
}

std::vector<Convergent> convergents_and_intermediates(const ContinuedFraction& cf) {
    std::vector<Convergent> out(cf.convergents.begin(), cf.convergents.end());
    // (p_{-1}, q_{-1}) = (1, 0)
    for (std::size_t k = 0; k < cf.partials.size(); ++k) {
        Integer pm = k == 0 ? Integer(1) : cf.convergents[k - 1].p;
        Integer qm = k == 0 ? Integer(0) : cf.convergents[k - 1].q;
        const Convergent& c = cf.convergents[k];
        for (Integer t = 1; t < cf.partials[k]; ++t) out.push_back({pm + t * c.p, qm + t * c.q});
    }
    std::stable_sort(out.begin(), out.end(), [](const Convergent& a, const Convergent& b) { return a.q < b.q; });
    return out;
}

namespace {

// floor(q^(r/s)) for q >= 1, r >= 0, s >= 1.
Integer floor_power(const Integer& q, const Rational& e) {
    Integer qr;
    mpz_pow_ui(qr.get_mpz_t(), q.get_mpz_t(), e.get_num().get_ui());
    Integer root;
    mpz_root(root.get_mpz_t(), qr.get_mpz_t(), e.get_den().get_ui());
    return root;
}

}  // namespace

ContinuedFraction CfDigits::expand_until(const Integer& min_q) const {
    require(!kappa || (*kappa >= 1 && kappa->get_num().fits_ulong_p() && kappa->get_den().fits_ulong_p()),
            "bad_kappa", "kappa must be a rational >= 1");
    std::vector<Integer> parts;
    Integer qm = 0, q = 1;
    bool past = false;
    for (std::size_t k = 0;; ++k) {
        Integer a;
        if (k < prefix.size()) {
            a = prefix[k];
        } else if (!period.empty()) {
            a = period[(k - prefix.size()) % period.size()];
        } else if (kappa) {
            a = std::max(Integer(1), floor_power(q, *kappa - 1));
        } else {
            break;
        }
        require(a >= 1, "bad_partial", "partial quotients must be positive");
        parts.push_back(a);
        Integer qn = a * q + qm;
        qm = q;
        q = qn;
        if (past) break;
        if (q > min_q) past = true;
    }
    return from_partials(a0, parts);
}

ContinuedFraction CfDigits::expand_terms(std::size_t terms) const {
    std::vector<Integer> parts;
    Integer qm = 0, q = 1;
    for (std::size_t k = 0; k < terms; ++k) {
        Integer a;
        if (k < prefix.size()) a = prefix[k];
        else if (!period.empty()) a = period[(k - prefix.size()) % period.size()];
        else if (kappa) a = std::max(Integer(1), floor_power(q, *kappa - 1));
        else break;
        parts.push_back(a);
        Integer qn = a * q + qm;
        qm = q;
        q = qn;
    }
    return from_partials(a0, parts);
}

std::string CfDigits::describe() const {
    std::ostringstream os;
    os << "[" << a0.get_str() << ";";
    for (std::size_t i = 0; i < prefix.size(); ++i) os << (i ? "," : "") << prefix[i].get_str();
    if (!period.empty()) {
        os << (prefix.empty() ? "" : ",") << "(";
        for (std::size_t i = 0; i < period.size(); ++i) os << (i ? "," : "") << period[i].get_str();
        os << ")*";
    }
    if (kappa) os << (prefix.empty() ? "" : ",") << "q^(" << to_string(Rational(*kappa - 1)) << ")...";
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------

const char* to_string(Tri t) {
    switch (t) {
        case Tri::no: return "no";
        case Tri::yes: return "yes";
        default: return "unknown";
    }
}

double RationalInterval::mid() const { return to_double((lo + hi) / 2); }

Translate Translate::rational(const Rational& x) {
    Translate t;
    t.center_ = canonical(x);
    t.label_ = to_string(x);
    return t;
}

Translate Translate::from_cf(const CfDigits& digits, const Rational& max_radius_in) {
    Rational max_radius = canonical(max_radius_in);
    require(max_radius > 0, "bad_radius", "radius must be positive");
    Translate t;
    t.label_ = "cf" + digits.describe();
    if (digits.finite()) {
        ContinuedFraction cf = digits.expand_terms(digits.prefix.size());
        t.center_ = cf.value();
        t.label_ = to_string(t.center_);
        return t;
    }
    Integer need = ceil_of(1 / max_radius);
    // expand until q_K * q_{K+1} >= need
    ContinuedFraction cf = digits.expand_until(1);
    std::size_t terms = cf.partials.size();
    while (true) {
        const auto& cv = cf.convergents;
        std::size_t K = cv.size() - 2;
        if (cv[K].q * cv[K + 1].q >= need) {
            t.center_ = cv[K].value();
            t.radius_ = make_rational(1, cv[K].q * cv[K + 1].q);
            break;
        }
        terms += 1;
        cf = digits.expand_terms(terms);
    }
    t.digits_ = digits;
    return t;
}

Translate Translate::from_decimal(std::string_view s) {
    Translate t;
    std::string_view v = trim(s);
    t.center_ = parse_rational(v);
    t.label_ = std::string(v);
    auto dot = v.find('.');
    require(v.find_first_of("eE/") == std::string_view::npos, "bad_decimal", "plain decimal expected");
    std::size_t places = dot == std::string_view::npos ? 0 : v.size() - dot - 1;
    t.radius_ = make_rational(Integer(1), pow10(places));
    return t;
}

Translate Translate::interval(const Rational& center, const Rational& radius, std::string label) {
    require(radius >= 0, "bad_radius", "radius must be non-negative");
    Translate t;
    t.center_ = canonical(center);
    t.radius_ = canonical(radius);
    t.label_ = label.empty() ? to_string(center) : std::move(label);
    return t;
}

Tri Translate::distance_less(const Rational& r, const Rational& bound) const {
    Rational d = abs_of(center_ - r);
    if (d + radius_ < bound) return Tri::yes;
    if (d - radius_ >= bound) return Tri::no;
    return Tri::unknown;
}

Translate Translate::shifted(const Rational& s) const {
    Translate t = *this;
    t.center_ += s;
    if (t.digits_) t.digits_->a0 += floor_of(s);
    if (s.get_den() != 1) t.digits_.reset();
    t.label_ = label_ + "+" + to_string(s);
    return t;
}

std::string Translate::describe() const { return label_; }

// ---------------------------------------------------------------------------

PsiSchedule PsiSchedule::power(const Rational& c, const Rational& kappa) {
    require(c > 0 && kappa > 0, "bad_psi", "power schedule needs c > 0, kappa > 0");
    return {Kind::power, canonical(c), canonical(kappa)};
}
PsiSchedule PsiSchedule::c_over_n(const Rational& c) {
    require(c > 0, "bad_psi", "c/n schedule needs c > 0");
    return {Kind::c_over_n, canonical(c), 1};
}
PsiSchedule PsiSchedule::n_log_n(const Rational& c) {
    require(c > 0, "bad_psi", "c/(n log n) schedule needs c > 0");
    return {Kind::n_log_n, canonical(c), 1};
}

namespace {
RationalInterval widen(double v) {
    Rational r = from_double(v);
    Rational eps = from_double(1e-14);
    return {r * (1 - eps), r * (1 + eps)};
}
}  // namespace

RationalInterval PsiSchedule::value(std::uint64_t n) const {
    require(n >= 1, "n_positive", "psi(n) needs n >= 1");
    switch (kind) {
        case Kind::c_over_n: {
            Rational v = c / Rational(Integer(static_cast<unsigned long>(n)));
            return {v, v};
        }
        case Kind::power: {
            if (kappa.get_den() == 1 && kappa.get_num().fits_ulong_p()) {
                Integer p;
                mpz_ui_pow_ui(p.get_mpz_t(), n, kappa.get_num().get_ui());
                Rational v = c / Rational(p);
                return {v, v};
            }
            return widen(to_double(c) * std::pow(static_cast<double>(n), -to_double(kappa)));
        }
        case Kind::n_log_n: {
            require(n >= 2, "bad_psi", "c/(n log n) is undefined at n = 1");
            double nd = static_cast<double>(n);
            return widen(to_double(c) / (nd * std::log(nd)));
        }
    }
    return {0, 0};
}

double PsiSchedule::approx(std::uint64_t n) const { return value(n).mid(); }

std::string PsiSchedule::describe() const {
    switch (kind) {
        case Kind::c_over_n: return "c_over_n(" + to_string(c) + ")";
        case Kind::power: return "power(" + to_string(c) + "," + to_string(kappa) + ")";
        case Kind::n_log_n: return "n_log_n(" + to_string(c) + ")";
    }
    return "";
}

namespace {

void check_psi_range(const PsiSchedule& psi, std::uint64_t n_min, std::uint64_t N) {
    require(n_min >= 1 && N >= n_min, "bad_range", "need 1 <= n_min <= N");
    for (std::uint64_t n = n_min; n <= N; ++n) {
        RationalInterval v = psi.value(n);
        require(v.lo > 0 && v.hi < Rational(1, 2), "psi_out_of_range",
                "psi(" + std::to_string(n) + ") must lie in (0, 1/2)");
    }
}

// |x - m/n| < psi(n)/n, certified.
Tri witness_test(const Translate& x, const Integer& m, std::uint64_t n, const RationalInterval& psi) {
    Rational nn(Integer(static_cast<unsigned long>(n)));
    Rational r = make_rational(m, Integer(static_cast<unsigned long>(n)));
    Tri lo = x.distance_less(r, psi.lo / nn);
    if (lo == Tri::yes) return Tri::yes;
    Tri hi = x.distance_less(r, psi.hi / nn);
    if (hi == Tri::no) return Tri::no;
    return Tri::unknown;
}

}  // namespace

std::vector<Witness> is_primitive_psi_approximable_upto(const Translate& x, const PsiSchedule& psi,
                                                        std::uint64_t N, std::uint64_t n_min) {
    check_psi_range(psi, n_min, N);
    std::vector<Witness> out;
    for (std::uint64_t n = n_min; n <= N; ++n) {
        Integer base = floor_of(x.center() * Rational(Integer(static_cast<unsigned long>(n))));
        RationalInterval v = psi.value(n);
        for (int off = 0; off <= 1; ++off) {
            Integer m = base + off;
            if (gcd(m, Integer(static_cast<unsigned long>(n))) != 1) continue;
            Tri t = witness_test(x, m, n, v);
            if (t != Tri::no) {
                out.push_back({n, m, t});
                break;
            }
        }
    }
    return out;
}

std::vector<Witness> psi_witnesses_by_convergents(const Translate& x, const PsiSchedule& psi,
                                                  std::uint64_t N, std::uint64_t n_min) {
    check_psi_range(psi, n_min, N);
    Integer bound(static_cast<unsigned long>(N));
    ContinuedFraction cf =
        x.digits() ? x.digits()->expand_until(bound) : continued_fraction(x.center());
    std::vector<Witness> out;
    for (const auto& c : convergents_and_intermediates(cf)) {
        if (c.q > bound || c.q < n_min) continue;
        std::uint64_t n = c.q.get_ui();
        if (!out.empty() && out.back().n == n) continue;
        Tri t = witness_test(x, c.p, n, psi.value(n));
        if (t != Tri::no) out.push_back({n, c.p, t});
    }
    return out;
}

}  // namespace horo
