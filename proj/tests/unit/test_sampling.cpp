#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "horo/errors.hpp"
#include "horo/sampling.hpp"
#include "horo/symmetry.hpp"
#include "oracles.hpp"

using namespace horo;

namespace {
const TestFunction band = TestFunction::height_band(make_rational(6, 5), 2);

std::vector<Rational> res(const SampleSet& s) {
    std::vector<Rational> out;
    for (const auto& p : s.points) out.push_back(p.re);
    std::sort(out.begin(), out.end());
    return out;
}
}  // namespace

TEST_CASE("sample: defining point lists") {
    SampleSet a = sample(4, Rational(0), make_rational(1, 2), true);
    CHECK(res(a) == std::vector<Rational>{make_rational(1, 4), make_rational(3, 4)});
    CHECK(a.size() == euler_phi(4));

    SampleSet b = sample(1, make_rational(2, 7), make_rational(1, 3), false);
    REQUIRE(b.size() == 1);
    CHECK(b.points[0] == ExactPoint(make_rational(2, 7), make_rational(1, 3)));

    SampleSet c = sample(6, make_rational(1, 5), make_rational(1, 100), false);
    REQUIRE(c.size() == 6);
    std::vector<Rational> expect;
    for (long j = 0; j < 6; ++j) expect.push_back(frac(make_rational(1, 5) + make_rational(j, 6)));
    std::sort(expect.begin(), expect.end());
    CHECK(res(c) == expect);
    for (const auto& p : c.points) CHECK(p.im == make_rational(1, 100));

    CHECK_THROWS_AS(sample(0, Rational(0), Rational(1), false), PreconditionError);
    CHECK_THROWS_AS(sample(3, Rational(0), Rational(0), false), PreconditionError);
}

TEST_CASE("sample sizes") {
    for (std::uint64_t n = 1; n <= 60; ++n) {
        REQUIRE(sample(n, make_rational(1, 3), make_rational(1, 7), false).size() == n);
        REQUIRE(sample(n, make_rational(1, 3), make_rational(1, 7), true).size() == euler_phi(n));
    }
}

TEST_CASE("empirical means") {
    SampleSet s = sample(50, make_rational(1, 3), make_rational(1, 40), false);
    CHECK(empirical_mean(s, TestFunction::constant(1)).value == 1.0);
    double direct = 0;
    for (const auto& p : s.points) direct += evaluate(band, p);
    CHECK(empirical_mean(s, band).value == doctest::Approx(direct / 50).epsilon(1e-15));
}

TEST_CASE("equidistribution at n = 5000") {
    SampleSet s = sample(5000, Rational(0), make_rational(1, 5000), false);
    CHECK(std::fabs(empirical_mean(s, band).value - 1 / M_PI) <= 0.02);
}

TEST_CASE("trapped primitive set at n = 997") {
    SampleSet s = sample(997, make_rational(1, 3), make_rational(1, 997 * 997), true);
    CHECK(std::fabs(empirical_mean(s, band).value - horocycle_mean(band, make_rational(1, 9), 8192)) <= 0.02);
}

TEST_CASE("primitive and full means for prime n") {
    for (std::uint64_t n : {5, 13, 101}) {
        const Rational x = make_rational(2, 7), y = make_rational(1, static_cast<long>(n * 3));
        double full = empirical_mean(sample(n, x, y, false), band).value;
        double pr = empirical_mean(sample(n, x, y, true), band).value;
        double f0 = evaluate(band, ExactPoint(x, y));
        CHECK(pr == doctest::Approx((n * full - f0) / (n - 1)).epsilon(1e-12));
    }
}

TEST_CASE("shifting x by 1/n permutes the full set") {
    const std::uint64_t n = 40;
    const Rational x = make_rational(3, 11), y = make_rational(1, 300);
    SampleSet a = sample(n, x, y, false), b = sample(n, x + make_rational(1, 40), y, false);
    CHECK(res(a) == res(b));
    CHECK(empirical_mean(a, band).value == empirical_mean(b, band).value);
}

TEST_CASE("Riemann sums at fixed height") {
    auto f = TestFunction::smooth_band(1, 2, make_rational(1, 2));
    const Rational y = make_rational(3, 4);
    double ref = horocycle_mean(f, y, 1 << 14);
    double prev = 1e9;
    for (std::uint64_t n : {50, 400, 3200}) {
        double e = std::fabs(empirical_mean(sample(n, Rational(0), y, false), f).value - ref);
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("min_orbit_height") {
    CHECK(min_orbit_height(1, Translate::rational(0), 3).lo == 3);
    SampleSet s = sample(2, make_rational(1, 2), make_rational(1, 8), false);
    HeightBound h = min_orbit_height(s);
    CHECK(h.exact());
    Rational brute = oracle::max_height(s.points[0], 20);
    for (const auto& p : s.points) brute = std::min(brute, oracle::max_height(p, 20));
    CHECK(h.lo == brute);
    CHECK(h.lo > 1);
    CHECK(min_orbit_height(2, Translate::rational(make_rational(1, 2)), make_rational(1, 8)).lo == h.lo);
}

TEST_CASE("full escape for x = 1/3, y = 1/n^3") {
    const std::uint64_t n = 500;
    HeightBound h = min_orbit_height(n, Translate::rational(make_rational(1, 3)), make_rational(1, n * n * n));
    CHECK(h.lo > Rational(static_cast<long>(n)) / 9 - 1);
    CHECK(in_cusp_neighborhood(sample(n, make_rational(1, 3), make_rational(1, n * n * n), false).points[0],
                               Rational(static_cast<long>(n)) / 9 - 1));
}

TEST_CASE("irrational translates carry a certified bracket") {
    Translate x = Translate::from_decimal("0.41421356237");
    const Rational y = make_rational(1, 10000);
    HeightBound h = min_orbit_height(100, x, y);
    CHECK(h.lo < h.hi);
    HeightBound c = min_orbit_height(100, Translate::rational(x.center()), y);
    CHECK(h.lo <= c.lo);
    CHECK(c.lo <= h.hi);
    CHECK_THROWS_AS(min_orbit_height(100, Translate::from_decimal("0.4"), make_rational(1, 10000)), PreconditionError);
}

TEST_CASE("excursion_series at x = 0, y = 1/n^2 matches the reduced multiset") {
    auto rows = excursion_series(Translate::rational(0), DecaySchedule::power(1, 2), 40);
    REQUIRE(rows.size() == 38);
    for (const auto& r : rows) {
        auto pts = reduced_multiset(r.n, Rational(0), r.y, false);
        Rational lo = pts.front().im;
        for (const auto& p : pts) lo = std::min(lo, p.im);
        REQUIRE(r.min_height.lo == lo);
        REQUIRE(r.y == make_rational(1, static_cast<long>(r.n * r.n)));
    }
}

TEST_CASE("excursion_series flags verified predictions") {
    CfDigits d;
    d.period = {5};  // |x - p/q| < 1/(4 q^2) at every convergent 5, 26, 135, 701
    Translate x = Translate::from_cf(d, make_rational(1, 1000000000000LL));
    DecaySchedule s = DecaySchedule::power(make_rational(1, 4), 2);
    auto rows = excursion_series(x, s, 701);
    int flagged = 0;
    for (const auto& r : rows)
        if (r.flagged) {
            ++flagged;
            CHECK(r.prediction_verified);
            CHECK(r.min_height.lo > r.predicted_Y);
        }
    CHECK(flagged == 4);
}

TEST_CASE("discrepancy curves") {
    Translate x = Translate::rational(make_rational(1, 7));
    auto flat = horocycle_discrepancy_curve(x, DecaySchedule::power(1, 1), 1000, TestFunction::constant(1));
    for (const auto& p : flat) CHECK(p.abs_error == 0.0);

    Translate r2 = Translate::from_decimal("0.41421356237309504880168872");
    auto curve = horocycle_discrepancy_curve(r2, DecaySchedule::power(1, 1), 1 << 14,
                                             TestFunction::smooth_band(make_rational(6, 5), 2, make_rational(1, 5)));
    std::vector<double> ns, es;
    for (const auto& p : curve)
        if (p.n >= 16) {
            ns.push_back(double(p.n));
            es.push_back(std::max(p.abs_error, 1e-12));
        }
    CHECK(loglog_slope(ns, es) < 0);
}

TEST_CASE("geometric subsequences and schedules") {
    auto g = geometric_subsequence(100, 2.0);
    CHECK(g == std::vector<std::uint64_t>{1, 2, 4, 8, 16, 32, 64});
    auto h = geometric_subsequence(20, 1.5);
    CHECK(std::is_sorted(h.begin(), h.end()));
    CHECK(std::adjacent_find(h.begin(), h.end()) == h.end());

    CHECK(DecaySchedule::power(3, 2).y(5) == make_rational(3, 25));
    CHECK(DecaySchedule::custom({make_rational(1, 2), make_rational(1, 3)}).y(2) == make_rational(1, 3));
    double lp = to_double(DecaySchedule::log_power(1, 1).y(100));
    CHECK(lp == doctest::Approx(1.0 / (1e4 * std::log(100.0))).epsilon(1e-14));
    CHECK(loglog_slope({1, 2, 4, 8}, {1, 0.25, 0.0625, 0.015625}) == doctest::Approx(-2.0));
}
