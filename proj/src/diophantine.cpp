#include "horo/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "horo/errors.hpp"
#include "horo/parallel.hpp"

namespace horo {

namespace {

Integer Z(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

std::vector<WindowEntry> window_entries(const Translate& x, const Integer& m, std::uint64_t n, const Rational& Y,
                                        const Rational& y) {
    Integer nn = Z(n);
    // true heights lie in [h (1 - delta), h / (1 - delta)] around the centre's
    Rational delta = x.radius() / y;
    require(delta < 1, "translate_precision", "translate radius too coarse for n = " + std::to_string(n));
    Rational shrink = 1 - delta;
    return parallel_map<WindowEntry>(n, [&](std::size_t j) {
        WindowEntry e;
        e.j = j;
        e.g = gcd(nn, m + Z(j));
        e.Yj = Rational(e.g * e.g) * Y;
        Rational h = orbit_height(ExactPoint(frac(x.center() + make_rational(Z(j), nn)), y));
        Rational lo = h * shrink, hi = h / shrink;
        e.in_window = lo > e.Yj && hi <= 2 * e.Yj;
        e.in_cusp = lo > Y;
        e.heights.push_back(std::move(h));
        return e;
    });
}

}  // namespace

HoroballCertificate horoball_criterion(const Translate& x, const Integer& m, std::uint64_t n, const Rational& Y_in) {
    const Rational Y = canonical(Y_in);
    require(n >= 1, "n_positive", "n must be >= 1");
    require(gcd(m, Z(n)) == 1, "gcd_m_n", "gcd(m, n) must be 1");
    require(Y >= 1, "Y_at_least_1", "Y must be >= 1");
    HoroballCertificate c;
    c.x = x;
    c.m = m;
    c.n = n;
    c.Y = Y;
    c.y = 1 / (2 * Y * Rational(Z(n) * Z(n)));
    Tri t = x.distance_less(make_rational(m, Z(n)), c.y);
    if (t != Tri::yes) {
        c.refused = true;
        c.refusal = t == Tri::no ? "approximation_hypothesis_fails" : "approximation_hypothesis_undecided";
        return c;
    }
    c.entries = window_entries(x, m, n, Y, c.y);
    c.verified = std::all_of(c.entries.begin(), c.entries.end(),
                             [](const WindowEntry& e) { return e.in_window && e.in_cusp; });
    return c;
}

bool verify_horoball_certificate(const HoroballCertificate& cert) {
    HoroballCertificate fresh;
    try {
        fresh = horoball_criterion(cert.x, cert.m, cert.n, cert.Y);
    } catch (const PreconditionError&) {
        return false;
    }
    if (fresh.refused != cert.refused || fresh.y != cert.y || fresh.verified != cert.verified) return false;
    if (fresh.entries.size() != cert.entries.size()) return false;
    for (std::size_t i = 0; i < fresh.entries.size(); ++i) {
        const auto &a = fresh.entries[i], &b = cert.entries[i];
        if (a.j != b.j || a.g != b.g || a.Yj != b.Yj || a.heights != b.heights || a.in_window != b.in_window ||
            a.in_cusp != b.in_cusp)
            return false;
    }
    return cert.verified;
}

double r_n_approx(const PsiSchedule& psi, const DecaySchedule& schedule, std::uint64_t n) {
    double p = psi.approx(n), y = to_double(schedule.y(n)), nd = static_cast<double>(n);
    return 0.5 * std::min(y / (p * p), 1.0 / (nd * nd * y));
}

std::vector<PredictedExcursion> predicted_excursions(const Translate& x, const PsiSchedule& psi,
                                                     const DecaySchedule& schedule, std::uint64_t N,
                                                     std::uint64_t n_min) {
    n_min = std::max(n_min, schedule.first_n());
    if (psi.kind == PsiSchedule::Kind::n_log_n) n_min = std::max<std::uint64_t>(n_min, 2);
    require(N >= n_min, "N_range", "N must be at least n_min");
    std::uint64_t from = std::max(n_min, N / 2);
    double prev = r_n_approx(psi, schedule, from);
    for (std::uint64_t n = from + 1; n <= N; ++n) {
        double r = r_n_approx(psi, schedule, n);
        require(r >= prev * (1 - 1e-12), "r_n_not_monotone",
                "r_n decreases at n = " + std::to_string(n) + "; schedule refused");
        prev = r;
    }
    std::vector<Witness> ws;
    for (const auto& w : is_primitive_psi_approximable_upto(x, psi, N, n_min))
        if (w.status == Tri::yes) ws.push_back(w);
    return parallel_map<PredictedExcursion>(ws.size(), [&](std::size_t i) {
        PredictedExcursion p;
        p.n = ws[i].n;
        p.m = ws[i].m;
        p.y = schedule.y(p.n);
        RationalInterval v = psi.value(p.n);
        Rational nn(Z(p.n));
        Rational cusp_term = 1 / (nn * nn * p.y);
        p.r_lo = std::min(Rational(p.y / (v.hi * v.hi)), cusp_term) / 2;
        p.r_hi = std::min(Rational(p.y / (v.lo * v.lo)), cusp_term) / 2;
        p.min_height = min_orbit_height(p.n, x, p.y);
        p.verified = p.min_height.lo > p.r_hi;
        double ll = std::log(std::log(static_cast<double>(p.n)));
        p.log_ratio = ll > 0 ? std::log(to_double(p.min_height.lo)) / ll : std::numeric_limits<double>::quiet_NaN();
        return p;
    });
}

std::vector<EcWitness> everywhere_nonequidistribution_check(const Translate& x, const Rational& c_in, std::uint64_t N) {
    const Rational c = canonical(c_in);
    check_Ec_parameter(c);
    std::vector<Witness> ws;
    for (const auto& w : is_primitive_psi_approximable_upto(x, PsiSchedule::c_over_n(c), N, 3))
        if (w.status == Tri::yes) ws.push_back(w);
    std::vector<EcWitness> out;
    for (const auto& w : ws) {
        EcWitness e;
        e.n = w.n;
        e.m = w.m;
        Rational nn(Z(w.n));
        Rational y = c / (nn * nn);
        Rational delta = x.radius() / y;
        require(delta < 1, "translate_precision", "translate radius too coarse for n = " + std::to_string(w.n));
        SampleSet s = sample(w.n, x, y, false);
        auto ok = parallel_map<char>(s.points.size(), [&](std::size_t i) {
            return static_cast<char>(x.exact() ? in_Ec(s.points[i], c) : in_Ec_certified(s.points[i], c, delta));
        });
        e.points_checked = s.points.size();
        e.verified = std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; });
        out.push_back(e);
    }
    return out;
}

CfDigits kappa_digits(const Rational& kappa) {
    require(kappa >= 1, "kappa_range", "kappa must be >= 1");
    CfDigits d;
    d.a0 = 0;
    d.kappa = kappa;
    return d;
}

CfDigits golden_digits() {
    CfDigits d;
    d.a0 = 0;
    d.period = {1};
    return d;
}

CfDigits sqrt2_minus_1_digits() {
    CfDigits d;
    d.a0 = 0;
    d.period = {2};
    return d;
}

ExponentCheck excursion_exponent_check(const Rational& kappa, const Rational& beta, std::uint64_t N,
                                       double tolerance) {
    require(beta > 2 && beta < 2 * kappa, "beta_range", "need 2 < beta < 2 kappa");
    require(N >= 2, "N_range", "N must be >= 2");
    DecaySchedule sched = DecaySchedule::power(1, beta);
    Translate x = Translate::from_cf(kappa_digits(kappa), sched.y(N) / 1000);
    ExponentCheck r;
    r.expected = std::min(to_double(2 * kappa - beta), to_double(beta - 2));
    std::vector<double> ns;
    for (const auto& w : is_primitive_psi_approximable_upto(x, PsiSchedule::power(1, kappa), N, 2)) {
        if (w.status != Tri::yes) continue;
        r.witnesses.push_back(w.n);
        r.heights.push_back(to_double(min_orbit_height(w.n, x, sched.y(w.n)).lo));
        ns.push_back(static_cast<double>(w.n));
    }
    require(ns.size() >= 2, "too_few_witnesses", "need at least two witnesses to fit an exponent");
    r.fitted = loglog_slope(ns, r.heights);
    r.within_tolerance = std::fabs(r.fitted - r.expected) <= tolerance;
    return r;
}

}  // namespace horo
