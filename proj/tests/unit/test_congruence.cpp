#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "horo/congruence.hpp"
#include "horo/errors.hpp"
#include "oracles.hpp"

using namespace horo;

namespace {

// Image of Gamma_n in SL2(Z/n^2): upper triangular mod n^2.
struct Tri2 {
    long a, b, d;
};
std::vector<Tri2> image_group(long n) {
    long N = n * n;
    std::vector<Tri2> h;
    for (long a = 0; a < N; ++a)
        for (long d = 0; d < N; ++d) {
            if ((a * d) % N != 1 % N) continue;
            bool plus = a % n == 1 % n && d % n == 1 % n;
            bool minus = a % n == (n - 1) % n && d % n == (n - 1) % n;
            if (!plus && !minus) continue;
            for (long b = 0; b < N; ++b) h.push_back({a, b, d});
        }
    return h;
}

long sl2_order(long N) {
    long c = 0;
    for (long a = 0; a < N; ++a)
        for (long b = 0; b < N; ++b)
            for (long cc = 0; cc < N; ++cc)
                for (long d = 0; d < N; ++d) c += ((a * d - b * cc) % N + N) % N == 1 % N;
    return c;
}

// Orbits of the image group on primitive column vectors mod n^2, up to sign.
long cusp_orbits(long n) {
    long N = n * n;
    auto H = image_group(n);
    std::set<std::pair<long, long>> seen;
    long orbits = 0;
    for (long x = 0; x < N; ++x)
        for (long y = 0; y < N; ++y) {
            if (std::gcd(std::gcd(x, y), N) != 1 && N > 1) continue;
            if (seen.count({x, y})) continue;
            ++orbits;
            for (const auto& g : H) {
                long u = (g.a * x + g.b * y) % N, v = (g.d * y) % N;
                seen.insert({u, v});
                seen.insert({(N - u) % N, (N - v) % N});
            }
            if (N == 1) return 1;
        }
    return orbits;
}

// Smallest t > 0 with tau u_t tau^-1 in Gamma_n, by direct search.
long width_oracle(long n, const IntMatrix2& tau) {
    for (long t = 1; t <= n * n; ++t) {
        IntMatrix2 g = tau * IntMatrix2::T(t) * tau.adjugate();
        if (gamma_n_contains(std::uint64_t(n), g)) return t;
    }
    return -1;
}

}  // namespace

TEST_CASE("Gamma_n membership") {
    for (std::uint64_t n = 1; n <= 6; ++n) {
        CHECK(gamma_n_contains(n, IntMatrix2::identity()));
        CHECK(gamma_n_contains(n, IntMatrix2::T()));
    }
    CHECK(gamma_n_contains(3, IntMatrix2{4, 1, -9, -2}));
    CHECK(gamma_k(3, 1, true) == IntMatrix2{4, 1, -9, -2});
    CHECK(!gamma_n_contains(3, IntMatrix2::S()));
    CHECK(!gamma_n_contains(3, IntMatrix2{1, 0, 3, 1}));
    CHECK(gamma_n_contains(3, IntMatrix2{1, 0, 9, 1}));
    CHECK(gamma_n_contains(3, IntMatrix2{-1, 0, 0, -1}));
    CHECK(gamma_n_contains(3, IntMatrix2{2, 1, 9, 5}));    // a = d = -1 mod 3
    CHECK(!gamma_n_contains(5, IntMatrix2{2, 1, 25, 13}));  // a = 2 mod 5
    CHECK_THROWS_AS(gamma_n_contains(3, IntMatrix2{2, 0, 0, 1}), PreconditionError);
}

TEST_CASE("u_{j/n} normalises Gamma_n") {
    CHECK(normalizer_check(5, 0).holds);
    NormalizerReport r = normalizer_check(3, 1);
    CHECK(r.holds);
    RatMatrix2 c = conjugate_by_unipotent(IntMatrix2{4, 1, -9, -2}, 1, 3);
    // u^{-1} g u with u = (1, 1/3; 0, 1)
    RatMatrix2 u(1, make_rational(1, 3), 0, 1);
    RatMatrix2 expect = u.inverse() * RatMatrix2(IntMatrix2{4, 1, -9, -2}) * u;
    CHECK(c.a == expect.a);
    CHECK(c.b == expect.b);
    CHECK(c.c == expect.c);
    CHECK(c.d == expect.d);
    CHECK(c.is_integral());
    CHECK(gamma_n_contains(3, c));
    for (std::uint64_t n = 2; n <= 8; ++n)
        for (std::uint64_t j = 0; j < n; ++j) REQUIRE(normalizer_check(n, j).holds);
    // no such luck for Gamma_0(n)
    auto bad = gamma0_normalizer_counterexample(3, 1);
    REQUIRE(bad.has_value());
    CHECK(gamma0_contains(3, RatMatrix2(*bad)));
    CHECK(!gamma0_contains(3, conjugate_by_unipotent(*bad, 1, 3)));
}

TEST_CASE("index: formula and enumeration") {
    CHECK(index_formula(2) == 6);
    CHECK(index_formula(3) == 12);
    CHECK(index_formula(5) == 60);
    const long expect[] = {0, 1, 6, 12, 24, 60, 72};
    for (long n = 2; n <= 6; ++n) {
        CHECK(index_bruteforce(n) == std::uint64_t(expect[n]));
        CHECK(index_formula(n) == std::uint64_t(expect[n]));
    }
    // independent count for small n: |SL2(Z/n^2)| / |image|
    for (long n = 2; n <= 3; ++n)
        CHECK(sl2_order(n * n) / long(image_group(n).size()) == expect[n]);
}

TEST_CASE("cusps: counts") {
    auto two = enumerate_cusps(2);
    CHECK(two.size() == 3);
    std::set<std::size_t> classes;
    for (auto [m, l] : std::vector<std::pair<long, long>>{{1, 0}, {1, 2}, {1, 1}})
        classes.insert(cusp_class(2, two, m, l));
    CHECK(classes.size() == 3);

    for (std::uint64_t n = 3; n <= 8; ++n) CHECK(enumerate_cusps(n).size() == cusp_count_formula(n));
    for (long n = 1; n <= 8; ++n) CHECK(long(enumerate_cusps(n).size()) == cusp_orbits(n));
}

TEST_CASE("cusps: n = 3 widths") {
    auto c = enumerate_cusps(3);
    REQUIRE(c.size() == 4);
    auto inf = cusp_class(3, c, 1, 0);
    auto zero = cusp_class(3, c, 0, 1);
    CHECK(c[inf].width == 1);
    CHECK(c[zero].width == 9);
}

TEST_CASE("cusps: widths against the stabiliser") {
    for (long n = 1; n <= 5; ++n)
        for (const auto& c : enumerate_cusps(n)) {
            REQUIRE(c.tau.is_sl2());
            REQUIRE(mobius(c.tau, ExactPoint(0, 1000000)).im < 1000000 + 1);  // sanity
            Integer g = c.l == 0 ? Integer(n) : gcd(Integer(n), c.l);
            REQUIRE(c.width == Integer(n * n) / (g * g));
            REQUIRE(c.width == width_oracle(n, c.tau));
            REQUIRE(c.width == width_by_stabilizer(n, c.m, c.l));
            REQUIRE((Integer(n * n) % c.width) == 0);
            // tau * infinity = m/l
            REQUIRE(c.tau.a * c.l == c.tau.c * c.m);
            bool simple = (c.l == 0 ? Integer(n * n) : gcd(Integer(n * n), c.l)) % 1 == 0 &&
                          Integer(n) % (c.l == 0 ? Integer(n * n) : gcd(Integer(n * n), c.l)) == 0;
            REQUIRE(c.simple_type == simple);
        }
}

TEST_CASE("cusps: simple-type count for n = 10") {
    std::size_t k = 0;
    for (const auto& c : enumerate_cusps(10))
        if (c.simple_type && c.width >= 4) ++k;
    CHECK(k >= 8);
}

TEST_CASE("cusp keys are orbit invariants") {
    std::mt19937_64 rng(13);
    for (std::uint64_t n : {2, 3, 4, 6}) {
        auto cusps = enumerate_cusps(n);
        for (int t = 0; t < 100; ++t) {
            long m = long(rng() % 50) - 25, l = long(rng() % 50);
            if (std::gcd(m, l) != 1) continue;
            IntMatrix2 g = gamma_k(n, 1 + rng() % 3, rng() % 2) * IntMatrix2::T(long(rng() % 7) - 3);
            // g acts on m/l as a column vector
            Integer m2 = g.a * m + g.b * l, l2 = g.c * m + g.d * l;
            if (l2 < 0) m2 = -m2, l2 = -l2;
            REQUIRE(cusp_class(n, cusps, m, l) == cusp_class(n, cusps, m2, l2));
        }
    }
}

TEST_CASE("conjugation identity") {
    std::mt19937_64 rng(19);
    int done = 0;
    for (std::uint64_t n = 2; n <= 10 && done < 200; ++n) {
        auto cusps = enumerate_cusps(n);
        for (std::size_t i = 0; i < cusps.size() && done < 200; ++i)
            for (std::uint64_t j = 0; j < n && done < 200; ++j) {
                if (rng() % 3) continue;
                ConjugationResult r = conjugation_identity(n, cusps[i], j);
                REQUIRE(r.upper_triangular);
                REQUIRE(r.identity_holds);
                REQUIRE(r.lambda * r.lambda == r.width_ratio);
                ++done;
            }
    }
    CHECK(done >= 100);

    auto c1 = enumerate_cusps(4);
    ConjugationResult z = conjugation_identity(4, c1[0], 0);
    CHECK(z.upper_triangular);
    CHECK(z.lambda * z.lambda == 1);

    // n = 6, simple cusp m/(kl): ratio = gcd(m n/l + jk, n)^2 l^2/n^2
    for (const auto& c : enumerate_cusps(6)) {
        if (!c.simple_type || c.is_infinity()) continue;
        Integer l = gcd(Integer(6), c.l), k = c.l / l;
        for (long j = 0; j < 6; ++j) {
            ConjugationResult r = conjugation_identity(6, c, j);
            Integer g = gcd(c.m * (6 / l) + j * k, Integer(6));
            REQUIRE(r.width_ratio == Rational(g * g * l * l) / 36);
        }
    }
}

TEST_CASE("u_{1/n} permutes the cusp classes") {
    for (std::uint64_t n = 1; n <= 8; ++n) {
        auto cusps = enumerate_cusps(n);
        auto p = unipotent_cusp_permutation(n, cusps);
        REQUIRE(p.size() == cusps.size());
        std::vector<std::size_t> s = p;
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(s[i] == i);
    }
}

TEST_CASE("coset representatives") {
    for (std::uint64_t n = 1; n <= 4; ++n) {
        auto reps = coset_representatives(n);
        REQUIRE(reps.size() == index_formula(n));
        for (std::size_t a = 0; a < reps.size(); ++a)
            for (std::size_t b = a + 1; b < reps.size(); ++b)
                REQUIRE(!gamma_n_contains(n, reps[a] * reps[b].adjugate()));
    }
}

TEST_CASE("locating cusps and disjointness") {
    std::mt19937_64 rng(23);
    for (std::uint64_t n = 1; n <= 4; ++n) {
        auto cusps = enumerate_cusps(n);
        for (int t = 0; t < 200; ++t) {
            ExactPoint z(oracle::random_rational(rng, 20, 20), oracle::random_rational(rng, 1, 400, true));
            std::size_t k = count_cusp_certificates(n, cusps, z, make_rational(3, 2));
            REQUIRE(k <= 1);
            auto loc = locate_cusp(n, cusps, z, make_rational(3, 2));
            REQUIRE(loc.has_value() == (k == 1));
            REQUIRE(loc.has_value() == (orbit_height(z) > make_rational(3, 2)));
            if (loc) {
                const auto& c = cusps[loc->cusp_index];
                REQUIRE(verify_cusp_certificate(n, c, z, loc->certificate));
                REQUIRE(gamma_n_contains(n, loc->certificate.sigma));
                REQUIRE(mobius(loc->certificate.sigma * c.tau, loc->certificate.zpp) == z);
            }
        }
    }
}

TEST_CASE("excursion transfer") {
    auto two = enumerate_cusps(2);
    const Cusp& inf = two[cusp_class(2, two, 1, 0)];
    const Rational Y = 2;
    ExactPoint zpp(make_rational(1, 3), Y + 1);
    TransferResult r = excursion_transfer_check(2, inf, Y, zpp, CuspCertificate{IntMatrix2::identity(), zpp});
    CHECK(r.holds);
    REQUIRE(r.heights.size() == 2);
    for (const auto& h : r.heights) CHECK(h > Y);
    CHECK_THROWS_AS(excursion_transfer_check(2, inf, Y, zpp, std::nullopt), PreconditionError);

    auto five = enumerate_cusps(5);
    for (const auto& c : five) {
        if (c.is_infinity() || !c.simple_type) continue;
        ExactPoint zz(make_rational(2, 7), Rational(c.width) * Y + 1);
        ExactPoint z = mobius(c.tau, zz);
        TransferResult t = excursion_transfer_check(5, c, Y, z, CuspCertificate{IntMatrix2::identity(), zz});
        REQUIRE(t.holds);
        REQUIRE(t.heights.size() == 5);
        for (long j = 0; j < 5; ++j)
            REQUIRE(orbit_height(ExactPoint(z.re + make_rational(j, 5), z.im)) == t.heights[j]);
        break;
    }
}

TEST_CASE("cylinder volumes") {
    auto one = enumerate_cusps(1);
    CHECK(cylinder_volume(1, one[0], make_rational(6, 5), 2) == 1);  // 1/pi
    for (std::uint64_t n : {2, 3, 4, 5}) {
        auto cusps = enumerate_cusps(n);
        const Rational Y = make_rational(3, 2);
        Rational s = 0;
        for (const auto& c : cusps) s += cylinder_volume(n, c, Rational(c.width) * Y, 2 * Rational(c.width) * Y);
        CHECK(s == make_rational(3, 2) / Y * Rational(long(cusps.size())) / Rational(long(index_formula(n))));
    }
    auto two = enumerate_cusps(2);
    const Cusp& inf = two[cusp_class(2, two, 1, 0)];
    VolumeEstimate v = cylinder_volume_mc(2, inf, make_rational(6, 5), 2, 200000, 7);
    double exact = to_double(cylinder_volume(2, inf, make_rational(6, 5), 2)) / M_PI;
    CHECK(std::fabs(v.value - exact) <= 3 * v.stderr_ + 1e-12);
    CHECK_THROWS_AS(cylinder_volume(2, inf, 1, 2), PreconditionError);
}
