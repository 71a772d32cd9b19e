#include <doctest.h>

#include <cmath>
#include <random>

#include "horo/errors.hpp"
#include "horo/numth.hpp"
#include "oracles.hpp"

using namespace horo;

TEST_CASE("euler_phi small values and Gauss identity") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    std::uint64_t s = 0;
    for (auto d : divisors(360)) s += euler_phi(360 / d);
    CHECK(s == 360);
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        std::uint64_t t = 0;
        for (auto d : divisors(n)) t += euler_phi(d);
        REQUIRE(t == n);
    }
}

TEST_CASE("euler_phi against a coprime count") {
    for (std::uint64_t n = 1; n <= 300; ++n) {
        std::uint64_t c = 0;
        for (std::uint64_t j = 1; j <= n; ++j) c += std::gcd(j, n) == 1;
        REQUIRE(euler_phi(n) == c);
    }
}

TEST_CASE("divisors") {
    CHECK(divisors(1) == std::vector<std::uint64_t>{1});
    CHECK(divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
    auto ds = divisors(36);
    Integer prod = 1;
    for (auto d : ds) prod *= Integer(static_cast<unsigned long>(d));
    // 36^(9/2) = 6^9
    Integer six9 = 1;
    for (int i = 0; i < 9; ++i) six9 *= 6;
    CHECK(ds.size() == 9);
    CHECK(prod == six9);
}

TEST_CASE("moebius and sigma1") {
    CHECK(moebius(1) == 1);
    CHECK(moebius(6) == 1);
    CHECK(moebius(12) == 0);
    CHECK(moebius(30) == -1);
    CHECK(sigma1(12) == 28);
}

TEST_CASE("continued fractions") {
    auto z = continued_fraction(Rational(0));
    CHECK(z.a0 == 0);
    CHECK(z.partials.empty());

    auto cf = continued_fraction(make_rational(355, 113));
    CHECK(cf.a0 == 3);
    REQUIRE(cf.partials.size() == 2);
    CHECK(cf.partials[0] == 7);
    CHECK(cf.partials[1] == 16);
    CHECK(cf.value() == make_rational(355, 113));
    CHECK(from_partials(cf.a0, cf.partials).value() == make_rational(355, 113));

    // last partial is at least 2
    auto h = continued_fraction(make_rational(3, 2));
    CHECK(h.a0 == 1);
    REQUIRE(h.partials.size() == 1);
    CHECK(h.partials[0] == 2);

    auto neg = continued_fraction(make_rational(-7, 3));
    CHECK(neg.a0 == -3);
    CHECK(neg.value() == make_rational(-7, 3));
}

TEST_CASE("convergents alternate and approximate") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> D(2, 1000000);
    for (int trial = 0; trial < 200; ++trial) {
        long q = D(rng);
        std::uniform_int_distribution<long> P(0, q - 1);
        Rational x = make_rational(P(rng), q);
        auto cf = continued_fraction(x);
        int prev_side = 0;
        for (std::size_t k = 0; k + 1 < cf.convergents.size(); ++k) {
            Rational c = cf.convergents[k].value();
            REQUIRE(gcd(cf.convergents[k].p, cf.convergents[k].q) == 1);
            // q_0 = q_1 = 1 when a_1 = 1
            if (k > 0) REQUIRE(cf.convergents[k + 1].q > cf.convergents[k].q);
            Rational err = abs_of(x - c);
            REQUIRE(err * cf.convergents[k].q * cf.convergents[k].q < 1);
            int side = c < x ? -1 : 1;
            if (prev_side != 0) REQUIRE(side == -prev_side);
            prev_side = side;
        }
        REQUIRE(cf.convergents.back().value() == x);
    }
}

TEST_CASE("rationals are kept in lowest terms") {
    Rational r = canonical(Rational(Integer(2), Integer(1000)));
    CHECK(r.get_num() == 1);
    CHECK(r.get_den() == 500);
    CHECK(make_rational(4, -6) == make_rational(-2, 3));
    CHECK(make_rational(4, -6).get_den() == 3);
    CHECK(parse_rational("1.2") == make_rational(6, 5));
    CHECK(parse_rational("-0.5") == make_rational(-1, 2));
    CHECK(parse_rational("1e-3") == make_rational(1, 1000));
    CHECK(parse_rational("10/4") == make_rational(5, 2));
    CHECK(to_string(make_rational(6, 3)) == "2");
    CHECK(to_string(make_rational(-1, 3)) == "-1/3");
    CHECK_THROWS_AS(make_rational(1, 0), PreconditionError);
    CHECK(floor_of(make_rational(-1, 2)) == -1);
    CHECK(frac(make_rational(-1, 3)) == make_rational(2, 3));
}

TEST_CASE("extended gcd and inverses") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> U(-100000, 100000);
    for (int i = 0; i < 500; ++i) {
        Integer a = U(rng), b = U(rng);
        Bezout bz = ext_gcd(a, b);
        REQUIRE(a * bz.x + b * bz.y == bz.g);
        REQUIRE(bz.g == gcd(a, b));
    }
    CHECK(*mod_inverse(3, 7) == 5);
    CHECK(!mod_inverse(2, 4).has_value());
    CHECK(mod(Integer(-3), Integer(5)) == 2);
}

namespace {

// Double loop over (m, n) with the coprimality test.
std::vector<std::pair<std::uint64_t, long>> brute_witnesses(const Rational& x, const Rational& c, long N, long nmin) {
    std::vector<std::pair<std::uint64_t, long>> out;
    for (long n = nmin; n <= N; ++n)
        for (long m = -2 * N; m <= 2 * N; ++m) {
            if (std::gcd(m, n) != 1) continue;
            Rational d = abs_of(x - make_rational(m, n));
            if (d * n * n < c) out.push_back({static_cast<std::uint64_t>(n), m});
        }
    return out;
}

std::vector<std::pair<std::uint64_t, long>> as_pairs(const std::vector<Witness>& ws) {
    std::vector<std::pair<std::uint64_t, long>> out;
    for (const auto& w : ws) {
        REQUIRE(w.status == Tri::yes);
        out.push_back({w.n, w.m.get_si()});
    }
    return out;
}

}  // namespace

TEST_CASE("witness search: x = 1/2 with psi = 1/(4n)") {
    auto ws = is_primitive_psi_approximable_upto(Translate::rational(make_rational(1, 2)),
                                                 PsiSchedule::c_over_n(make_rational(1, 4)), 10);
    auto got = as_pairs(ws);
    CHECK(got == brute_witnesses(make_rational(1, 2), make_rational(1, 4), 10, 1));
    CHECK(std::find(got.begin(), got.end(), std::make_pair<std::uint64_t, long>(2, 1)) != got.end());
}

TEST_CASE("witness search: golden ratio gives Fibonacci denominators") {
    CfDigits g;
    g.period = {1};
    Translate x = Translate::from_cf(g, make_rational(1, 1000000000));
    auto ws = is_primitive_psi_approximable_upto(x, PsiSchedule::power(make_rational(1, 2), 1), 100, 2);
    // |phi - m/n| < 1/(2 n^2) checked in long double
    const long double phi = (std::sqrt(5.0L) - 1) / 2;
    std::vector<std::uint64_t> expect;
    for (long n = 2; n <= 100; ++n)
        for (long m = 0; m <= n; ++m)
            if (std::gcd(m, n) == 1 && std::fabs(phi - (long double)m / n) < 1.0L / (2.0L * n * n)) expect.push_back(n);
    std::vector<std::uint64_t> got;
    for (const auto& w : ws) got.push_back(w.n);
    CHECK(got == expect);
    const std::vector<std::uint64_t> fib{1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
    for (auto n : got) CHECK(std::find(fib.begin(), fib.end(), n) != fib.end());
}

TEST_CASE("witness search: x = 0 has none past n = 2") {
    auto ws = is_primitive_psi_approximable_upto(Translate::rational(0), PsiSchedule::c_over_n(1), 50, 3);
    CHECK(ws.empty());
}

TEST_CASE("witness search agrees with brute force for small denominators") {
    const Rational c = make_rational(1, 3);
    for (long q = 1; q <= 50; ++q)
        for (long p = 0; p < q; p += 1 + q / 7) {
            if (std::gcd(p, q) != 1) continue;
            Rational x = make_rational(p, q);
            auto expect = brute_witnesses(x, c, 50, 1);
            REQUIRE(as_pairs(is_primitive_psi_approximable_upto(Translate::rational(x), PsiSchedule::c_over_n(c), 50)) ==
                    expect);
            REQUIRE(as_pairs(psi_witnesses_by_convergents(Translate::rational(x), PsiSchedule::c_over_n(c), 50)) ==
                    expect);
        }
}

TEST_CASE("psi outside (0, 1/2) is rejected") {
    CHECK_THROWS_AS(is_primitive_psi_approximable_upto(Translate::rational(0), PsiSchedule::c_over_n(1), 10),
                    PreconditionError);
}

TEST_CASE("translates") {
    Translate d = Translate::from_decimal("0.25");
    CHECK(d.center() == make_rational(1, 4));
    CHECK(d.radius() == make_rational(1, 100));
    Translate r = Translate::rational(make_rational(1, 3));
    CHECK(r.exact());
    CHECK(r.distance_less(make_rational(1, 3), make_rational(1, 10)) == Tri::yes);
    CHECK(d.distance_less(make_rational(1, 4), make_rational(1, 200)) == Tri::unknown);
    CHECK(d.distance_less(make_rational(1, 2), make_rational(1, 10)) == Tri::no);
}

TEST_CASE("psi schedule values") {
    auto p = PsiSchedule::power(1, 2);
    CHECK(p.value(3).lo == make_rational(1, 9));
    CHECK(p.value(3).exact());
    auto l = PsiSchedule::n_log_n(1);
    auto v = l.value(10);
    CHECK(v.lo <= v.hi);
    CHECK(v.mid() == doctest::Approx(1.0 / (10 * std::log(10.0))).epsilon(1e-12));
}
