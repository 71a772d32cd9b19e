#include "horo/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "horo/errors.hpp"
#include "horo/measures.hpp"

namespace horo {

namespace {

Integer Z(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

bool pm_one_mod(const Integer& a, const Integer& d, const Integer& n) {
    Integer am = mod(a, n), dm = mod(d, n);
    Integer one = mod(Integer(1), n), minus = mod(Integer(-1), n);
    return (am == one && dm == one) || (am == minus && dm == minus);
}

std::vector<Integer> J_elements(std::uint64_t n) {
    Integer N = Z(n * n);
    std::set<Integer> s;
    for (std::uint64_t k = 0; k < n; ++k) {
        Integer a = 1 + Z(k) * Z(n);
        s.insert(mod(a, N));
        s.insert(mod(-a, N));
    }
    return {s.begin(), s.end()};
}

}  // namespace

bool gamma_n_contains(std::uint64_t n, const IntMatrix2& g) {
    require(g.det() == 1, "det_not_one", "membership test needs det = 1");
    require(n >= 1, "n_positive", "n must be >= 1");
    Integer N = Z(n * n);
    if (mod(g.c, N) != 0) return false;
    return pm_one_mod(g.a, g.d, Z(n));
}

bool gamma_n_contains(std::uint64_t n, const RatMatrix2& g) {
    if (!g.is_integral() || g.det() != 1) return false;
    return gamma_n_contains(n, g.to_int());
}

bool gamma0_contains(std::uint64_t N, const RatMatrix2& g) {
    if (!g.is_integral() || g.det() != 1) return false;
    return mod(g.c.get_num(), Z(N)) == 0;
}

IntMatrix2 gamma_k(std::uint64_t n, std::uint64_t k, bool plus) {
    Integer kn = Z(k) * Z(n);
    IntMatrix2 g{1 + kn, 1, -kn * kn, 1 - kn};
    if (!plus) g = {-g.a, -g.b, -g.c, -g.d};
    return g;
}

RatMatrix2 conjugate_by_unipotent(const IntMatrix2& g, std::uint64_t j, std::uint64_t n) {
    Rational t = make_rational(Z(j), Z(n));
    RatMatrix2 u(1, t, 0, 1), ui(1, -t, 0, 1);
    return ui * RatMatrix2(g) * u;
}

NormalizerReport normalizer_check(std::uint64_t n, std::uint64_t j) {
    require(n >= 1, "n_positive", "n must be >= 1");
    std::vector<IntMatrix2> gens;
    for (std::uint64_t k = 0; k < n; ++k) {
        gens.push_back(gamma_k(n, k, true));
        gens.push_back(gamma_k(n, k, false));
    }
    gens.push_back(IntMatrix2::T());
    gens.push_back({1, 0, Z(n * n), 1});
    NormalizerReport r;
    r.sample = gens;
    for (const auto& a : gens)
        for (const auto& b : gens) r.sample.push_back(a * b);
    for (const auto& g : r.sample) {
        RatMatrix2 c = conjugate_by_unipotent(g, j, n);
        r.conjugates.push_back(c);
        if (!gamma_n_contains(n, c)) r.holds = false;
    }
    return r;
}

std::optional<IntMatrix2> gamma0_normalizer_counterexample(std::uint64_t N, std::uint64_t j, long search) {
    Integer NN = Z(N);
    for (long c = -search; c <= search; ++c) {
        for (long d = -search; d <= search; ++d) {
            Integer cc = NN * c, dd = d;
            if (gcd(cc, dd) != 1) continue;
            Bezout bz = ext_gcd(cc, dd);  // cc*x + dd*y = 1
            IntMatrix2 g{bz.y, -bz.x, cc, dd};
            if (!gamma0_contains(N, RatMatrix2(g))) continue;
            if (!gamma0_contains(N, conjugate_by_unipotent(g, j, N))) return g;
        }
    }
    return std::nullopt;
}

std::uint64_t index_formula(std::uint64_t n) {
    require(n >= 1, "n_positive", "n must be >= 1");
    if (n == 1) return 1;
    if (n == 2) return 6;
    // n^3/2 * prod(1 - p^-2) = n^3/2 * prod (p^2-1)/p^2
    std::uint64_t v = n * n * n;
    for (auto p : prime_divisors(n)) v = v / (p * p) * (p * p - 1);
    return v / 2;
}

std::uint64_t cusp_count_formula(std::uint64_t n) {
    require(n >= 1, "n_positive", "n must be >= 1");
    if (n == 1) return 1;
    if (n == 2) return 3;
    std::uint64_t v = n * n;
    for (auto p : prime_divisors(n)) v = v / (p * p) * (p * p - 1);
    return v / 2;
}

std::uint64_t index_bruteforce(std::uint64_t n) {
    require(n >= 1 && n <= 8, "n_range", "brute-force index limited to n <= 8");
    const std::uint64_t N = n * n;
    std::uint64_t total = 0, image = 0;
    auto pm1 = [&](std::uint64_t a, std::uint64_t d) {
        std::uint64_t am = a % n, dm = d % n;
        return (am == 1 % n && dm == 1 % n) || (am == (n - 1) % n && dm == (n - 1) % n);
    };
    for (std::uint64_t a = 0; a < N; ++a)
        for (std::uint64_t b = 0; b < N; ++b)
            for (std::uint64_t c = 0; c < N; ++c)
                for (std::uint64_t d = 0; d < N; ++d) {
                    if ((a * d + N * N - (b * c) % N) % N != 1 % N) continue;
                    ++total;
                    if (c == 0 && pm1(a, d)) ++image;
                }
    return total / image;
}

// ---------------------------------------------------------------------------

bool CuspKey::operator<(const CuspKey& o) const {
    if (d != o.d) return d < o.d;
    if (l != o.l) return l < o.l;
    return m < o.m;
}

IntMatrix2 scaling_matrix(const Integer& m, const Integer& l) {
    require(gcd(m, l) == 1, "not_primitive", "cusp representative must be primitive");
    if (l == 0) {
        require(m == 1 || m == -1, "not_primitive", "infinity is 1/0");
        return IntMatrix2::identity();
    }
    require(l > 0, "bad_cusp", "cusp denominator must be non-negative");
    Integer d = *mod_inverse(m, l);
    Integer b = (m * d - 1) / l;
    return {m, b, l, d};
}

CuspKey cusp_key(std::uint64_t n, const Integer& m0, const Integer& l0) {
    Integer N = Z(n * n);
    Integer lr = mod(l0, N);
    Integer d = gcd(N, lr);
    Integer mr = mod(m0, d);
    CuspKey best{d, 0, 0};
    bool first = true;
    for (const Integer& a : J_elements(n)) {
        Integer ai = *mod_inverse(a, N);
        CuspKey k{d, mod(ai * lr, N), mod(a * mr, d)};
        if (first || k < best) best = k;
        first = false;
    }
    return best;
}

Cusp make_cusp(std::uint64_t n, const Integer& m0, const Integer& l0) {
    Integer m = m0, l = l0;
    if (l < 0 || (l == 0 && m < 0)) {
        m = -m;
        l = -l;
    }
    require(gcd(m, l) == 1, "not_primitive", "cusp representative must be primitive");
    Cusp c;
    c.m = m;
    c.l = l;
    c.tau = scaling_matrix(m, l);
    Integer g = gcd(Z(n), l);
    c.width = Z(n * n) / (g * g);
    c.simple_type = (Z(n) % gcd(Z(n * n), l)) == 0;
    return c;
}

std::vector<Cusp> enumerate_cusps(std::uint64_t n) {
    require(n >= 1, "n_positive", "n must be >= 1");
    std::uint64_t N = n * n;
    CuspKey inf_key = cusp_key(n, 1, 0);
    std::set<CuspKey> keys;
    for (std::uint64_t d : divisors(N)) {
        for (std::uint64_t l0 = 0; l0 < N; ++l0) {
            if (gcd(N, l0) != d) continue;
            for (std::uint64_t m0 = 0; m0 < d || (d == 1 && m0 == 0); ++m0) {
                if (gcd(m0, d) != 1) continue;
                keys.insert(cusp_key(n, Z(m0), Z(l0)));
                if (d == 1) break;
            }
        }
    }
    std::vector<Cusp> out;
    for (const CuspKey& k : keys) {
        if (k == inf_key) {
            out.push_back(make_cusp(n, 1, 0));
            continue;
        }
        Integer l = k.l == 0 ? Z(N) : k.l;
        Integer m = k.m;
        while (gcd(m, l) != 1) m += k.d;
        out.push_back(make_cusp(n, m, l));
    }
    return out;
}

std::size_t cusp_class(std::uint64_t n, const std::vector<Cusp>& cusps, const Integer& m, const Integer& l) {
    CuspKey k = cusp_key(n, m, l);
    for (std::size_t i = 0; i < cusps.size(); ++i)
        if (cusp_key(n, cusps[i].m, cusps[i].l) == k) return i;
    throw PreconditionError("unknown_cusp", "cusp class not found in table");
}

Integer width_by_stabilizer(std::uint64_t n, const Integer& m, const Integer& l) {
    Integer N = Z(n * n);
    for (Integer t = 1; t <= N; ++t) {
        IntMatrix2 g{1 - m * l * t, m * m * t, -l * l * t, 1 + m * l * t};
        if (gamma_n_contains(n, g)) return t;
    }
    throw PreconditionError("width", "no stabiliser element found up to n^2");
}

std::vector<IntMatrix2> coset_representatives(std::uint64_t n) {
    std::uint64_t N = n * n;
    Integer NN = Z(N);
    auto J = J_elements(n);
    std::set<std::pair<Integer, Integer>> seen;
    std::vector<IntMatrix2> reps;
    for (std::uint64_t c0 = 0; c0 < N; ++c0) {
        for (std::uint64_t d0 = 0; d0 < N; ++d0) {
            if (gcd(gcd(c0, d0), N) != 1) continue;
            std::pair<Integer, Integer> key{NN, NN};
            for (const Integer& a : J) {
                std::pair<Integer, Integer> k{mod(a * Z(c0), NN), mod(a * Z(d0), NN)};
                if (k < key) key = k;
            }
            if (!seen.insert(key).second) continue;
            Integer c = key.first == 0 ? NN : key.first;
            Integer d = key.second;
            while (gcd(c, d) != 1) d += NN;
            Bezout bz = ext_gcd(c, d);  // c x + d y = 1
            IntMatrix2 g{bz.y, -bz.x, c, d};
            reps.push_back(g);
        }
    }
    return reps;
}

ConjugationResult conjugation_identity(std::uint64_t n, const Cusp& c, std::uint64_t j) {
    ConjugationResult r;
    Rational t = make_rational(Z(j), Z(n));
    RatMatrix2 h(1, t, 0, 1);
    Cusp hc;
    if (c.is_infinity()) {
        hc = make_cusp(n, 1, 0);
    } else {
        Rational v = make_rational(c.m, c.l) + t;
        hc = make_cusp(n, v.get_num(), v.get_den());
    }
    r.matrix = RatMatrix2(hc.tau.adjugate()) * h * RatMatrix2(c.tau);
    r.upper_triangular = r.matrix.c == 0;
    r.lambda = r.matrix.a;
    r.width_ratio = make_rational(hc.width, c.width);
    r.identity_holds = r.upper_triangular && r.lambda * r.lambda == r.width_ratio;
    return r;
}

std::vector<std::size_t> unipotent_cusp_permutation(std::uint64_t n, const std::vector<Cusp>& cusps) {
    std::vector<std::size_t> perm;
    Rational t = make_rational(Integer(1), Z(n));
    for (const Cusp& c : cusps) {
        if (c.is_infinity()) {
            perm.push_back(cusp_class(n, cusps, 1, 0));
            continue;
        }
        Rational v = make_rational(c.m, c.l) + t;
        perm.push_back(cusp_class(n, cusps, v.get_num(), v.get_den()));
    }
    return perm;
}

namespace {

// sigma = M^{-1} T^s tau^{-1} in Gamma_n for some 0 <= s < n^2.
std::optional<IntMatrix2> find_sigma(std::uint64_t n, const IntMatrix2& M, const IntMatrix2& tau) {
    IntMatrix2 Mi = M.adjugate(), ti = tau.adjugate();
    for (std::uint64_t s = 0; s < n * n; ++s) {
        IntMatrix2 sigma = Mi * IntMatrix2::T(Z(s)) * ti;
        if (gamma_n_contains(n, sigma)) return sigma;
    }
    return std::nullopt;
}

}  // namespace

std::optional<CuspLocation> locate_cusp(std::uint64_t n, const std::vector<Cusp>& cusps, const ExactPoint& z,
                                        const Rational& Y_in) {
    const Rational Y = canonical(Y_in);
    require(Y >= 1, "Y_at_least_1", "cusp neighbourhoods need Y >= 1");
    ReducedPoint r = reduce(z);
    if (!(r.point.im > Y)) return std::nullopt;
    const IntMatrix2& M = r.matrix;
    // M^{-1} infinity = d/(-c)
    std::size_t idx = cusp_class(n, cusps, M.d, -M.c);
    auto sigma = find_sigma(n, M, cusps[idx].tau);
    require(sigma.has_value(), "cusp_certificate", "no Gamma_n certificate found");
    CuspCertificate cert{*sigma, mobius(RatMatrix2(cusps[idx].tau).inverse() * RatMatrix2(sigma->adjugate()), z)};
    return CuspLocation{idx, cert};
}

std::size_t count_cusp_certificates(std::uint64_t n, const std::vector<Cusp>& cusps, const ExactPoint& z,
                                    const Rational& Y) {
    require(Y >= 1, "Y_at_least_1", "cusp neighbourhoods need Y >= 1");
    ReducedPoint r = reduce(z);
    if (!(r.point.im > Y)) return 0;
    std::size_t count = 0;
    for (const Cusp& c : cusps)
        if (find_sigma(n, r.matrix, c.tau)) ++count;
    return count;
}

bool verify_cusp_certificate(std::uint64_t n, const Cusp& c, const ExactPoint& z, const CuspCertificate& cert) {
    if (cert.sigma.det() != 1 || !gamma_n_contains(n, cert.sigma)) return false;
    return mobius(cert.sigma * c.tau, cert.zpp) == z;
}

TransferResult excursion_transfer_check(std::uint64_t n, const Cusp& c, const Rational& Y, const ExactPoint& z,
                                        const std::optional<CuspCertificate>& cert) {
    require(Y >= 1, "Y_at_least_1", "excursion transfer needs Y >= 1");
    require(cert.has_value(), "missing_certificate", "a cusp certificate for z is required");
    require(verify_cusp_certificate(n, c, z, *cert), "bad_certificate", "certificate does not reproduce z");
    require(cert->zpp.im > Rational(c.width) * Y, "certificate_height",
            "certificate height does not exceed omega_c * Y");
    TransferResult r;
    r.holds = true;
    for (std::uint64_t j = 0; j < n; ++j) {
        Rational h = orbit_height(ExactPoint(z.re + make_rational(Z(j), Z(n)), z.im));
        r.heights.push_back(h);
        if (!(h > Y)) r.holds = false;
    }
    return r;
}

Rational cylinder_volume(std::uint64_t n, const Cusp& c, const Rational& Y_in, const Rational& Yp_in) {
    const Rational Y = canonical(Y_in);
    const Rational Yp = canonical(Yp_in);
    require(Y > 1 && Yp > Y, "cylinder_range", "cylinder needs Y' > Y > 1");
    return 3 * Rational(c.width) / Rational(Z(index_formula(n))) * (1 / Y - 1 / Yp);
}

VolumeEstimate cylinder_volume_mc(std::uint64_t n, const Cusp& c, const Rational& Y, const Rational& Yp,
                                  std::uint64_t samples, std::uint64_t seed) {
    require(Y > 1 && Yp > Y, "cylinder_range", "cylinder needs Y' > Y > 1");
    auto reps = coset_representatives(n);
    // gamma_i z lies in the cylinder iff h(z) in (Y, Y'] and
    // tau_c T^k gamma_i^{-1} in Gamma_n for some k.
    std::size_t matching = 0;
    for (const auto& g : reps) {
        for (std::uint64_t k = 0; k < n * n; ++k) {
            if (gamma_n_contains(n, c.tau * IntMatrix2::T(Z(k)) * g.adjugate())) {
                ++matching;
                break;
            }
        }
    }
    double lo = to_double(Y), hi = to_double(Yp);
    McEstimate e = mc_integrate([&](FloatPoint z) { return (z.im > lo && z.im <= hi) ? 1.0 : 0.0; }, samples, seed);
    double factor = static_cast<double>(matching) / static_cast<double>(reps.size());
    return {e.mean * factor, e.stderr_ * factor};
}

}  // namespace horo
