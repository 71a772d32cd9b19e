#include "horo/hecke.hpp"

#include <cmath>
#include <map>
#include <set>

#include "horo/errors.hpp"
#include "horo/parallel.hpp"

namespace horo {

namespace {

Integer Z(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

FloatPoint act(const RatMatrix2& g, FloatPoint z) {
    double a = to_double(g.a), b = to_double(g.b), c = to_double(g.c), d = to_double(g.d);
    double den_re = c * z.re + d, den_im = c * z.im;
    double num_re = a * z.re + b, num_im = a * z.im;
    double q = den_re * den_re + den_im * den_im;
    double det = a * d - b * c;
    return {(num_re * den_re + num_im * den_im) / q, det * z.im / q};
}

std::uint64_t umod(std::uint64_t a, std::uint64_t m) { return a % m; }

}  // namespace

double HeckeCosetSet::apply(const TestFunction& f, const ExactPoint& z) const {
    double s = 0;
    for (const auto& g : reps) s += evaluate(f, mobius(g, z));
    if (kind == Kind::classical) return s / std::sqrt(static_cast<double>(n));
    return s / static_cast<double>(reps.size());
}

double HeckeCosetSet::apply(const TestFunction& f, FloatPoint z) const {
    double s = 0;
    for (const auto& g : reps) s += evaluate(f, act(g, z));
    if (kind == Kind::classical) return s / std::sqrt(static_cast<double>(n));
    return s / static_cast<double>(reps.size());
}

HeckeCosetSet classical_cosets(std::uint64_t n) {
    require(n >= 1, "n_positive", "Hecke operators need n >= 1");
    HeckeCosetSet s;
    s.kind = HeckeCosetSet::Kind::classical;
    s.n = n;
    for (std::uint64_t d : divisors(n))
        for (std::uint64_t b = 0; b < d; ++b) s.reps.emplace_back(Rational(Z(n / d)), Rational(Z(b)), 0, Rational(Z(d)));
    return s;
}

std::vector<IntMatrix2> gamma0_coset_representatives(std::uint64_t N) {
    require(N >= 1, "n_positive", "need N >= 1");
    std::vector<std::uint64_t> units;
    for (std::uint64_t u = 1; u <= N; ++u)
        if (gcd(u, N) == 1) units.push_back(u % N);
    std::set<std::pair<std::uint64_t, std::uint64_t>> rows;
    for (std::uint64_t c = 0; c < N; ++c)
        for (std::uint64_t d = 0; d < N; ++d) {
            if (gcd(gcd(c, d), N) != 1 && N > 1) continue;
            std::pair<std::uint64_t, std::uint64_t> best{N, N};
            for (std::uint64_t u : units) best = std::min(best, std::make_pair(umod(u * c, N), umod(u * d, N)));
            rows.insert(best);
            if (N == 1) break;
        }
    std::vector<IntMatrix2> out;
    Integer NN = Z(N);
    for (auto [c0, d0] : rows) {
        Integer c = c0 == 0 ? NN : Z(c0);
        Integer d = Z(d0);
        while (gcd(c, d) != 1) d += NN;
        Bezout bz = ext_gcd(c, d);  // x c + y d = 1
        out.push_back(IntMatrix2{bz.y, -bz.x, c, d});
    }
    return out;
}

HeckeCosetSet double_cosets(std::uint64_t n) {
    require(n >= 1, "n_positive", "Hecke operators need n >= 1");
    HeckeCosetSet s;
    s.kind = HeckeCosetSet::Kind::double_coset;
    s.n = n;
    Rational nn(Z(n));
    for (const auto& g : gamma0_coset_representatives(n * n))
        s.reps.emplace_back(nn * g.a, nn * g.b, Rational(g.c) / nn, Rational(g.d) / nn);
    return s;
}

std::uint64_t nu(std::uint64_t n) {
    std::uint64_t v = n * n;
    for (std::uint64_t p : prime_divisors(n)) v = v / p * (p + 1);
    return v;
}

double classical_hecke_apply(std::uint64_t n, const TestFunction& f, const ExactPoint& z) {
    return classical_cosets(n).apply(f, z);
}

double double_coset_apply(std::uint64_t n, const TestFunction& f, const ExactPoint& z) {
    return double_cosets(n).apply(f, z);
}

HeckeRelation moebius_relation(std::uint64_t n, const TestFunction& f, const ExactPoint& z, double tol) {
    require(n >= 1, "n_positive", "need n >= 1");
    HeckeRelation r;
    r.lhs = static_cast<double>(n) * classical_hecke_apply(n * n, f, z);
    std::map<std::uint64_t, double> tt;
    for (std::uint64_t d : divisors(n)) {
        tt[d] = double_coset_apply(d, f, z);
        r.rhs += static_cast<double>(nu(d)) * tt[d];
    }
    r.inverted_lhs = tt[n];
    for (std::uint64_t d : divisors(n)) {
        int mu = moebius(d);
        if (mu == 0) continue;
        std::uint64_t m = (n / d) * (n / d);
        r.inverted_rhs += mu / static_cast<double>(d) * classical_hecke_apply(m, f, z);
    }
    r.inverted_rhs *= static_cast<double>(n) / static_cast<double>(nu(n));
    r.holds = std::fabs(r.lhs - r.rhs) <= tol && std::fabs(r.inverted_lhs - r.inverted_rhs) <= tol;
    return r;
}

bool moebius_relation_check(std::uint64_t n, const TestFunction& f, const ExactPoint& z, double tol) {
    return moebius_relation(n, f, z, tol).holds;
}

double second_moment_direct(std::uint64_t n, const Rational& y_in, const TestFunction& f, std::uint64_t grid,
                            bool primitive_only) {
    const Rational y = canonical(y_in);
    require(grid >= 1, "grid_positive", "grid must be >= 1");
    require(n >= 1 && y > 0, "bad_sample", "need n >= 1 and y > 0");
    double mu = area_mean(f).value;
    std::vector<std::uint64_t> js;
    for (std::uint64_t j = 0; j < n; ++j)
        if (!primitive_only || gcd(j, n) == 1) js.push_back(j);
    Integer G2 = Z(2 * grid), nn = Z(n);
    auto sq = parallel_map<double>(grid, [&](std::size_t g) {
        Rational x = make_rational(Z(2 * g + 1), G2);
        double s = 0;
        for (std::uint64_t j : js) s += evaluate(f, ExactPoint(frac(x + make_rational(Z(j), nn)), y));
        double dev = s / static_cast<double>(js.size()) - mu;
        return dev * dev;
    });
    double total = 0;
    for (double v : sq) total += v;
    return total / static_cast<double>(grid);
}

McEstimate second_moment_hecke(std::uint64_t n, const TestFunction& f, std::uint64_t samples, std::uint64_t seed) {
    require(samples >= 1000, "mc_samples", "second_moment_hecke needs at least 1000 samples");
    require(n >= 1, "n_positive", "need n >= 1");
    double mu = area_mean(f).value;
    std::vector<std::pair<double, HeckeCosetSet>> terms;
    for (std::uint64_t e : divisors(n))
        terms.emplace_back(static_cast<double>(euler_phi(e)) / static_cast<double>(n), double_cosets(e));
    return mc_integrate(
        [&](FloatPoint z) {
            double f0 = evaluate(f, z) - mu;
            if (f0 == 0.0) return 0.0;
            double s = 0;
            for (const auto& [w, cs] : terms) s += w * (cs.apply(f, z) - mu);
            return f0 * s;
        },
        samples, seed);
}

McEstimate hecke_inner_product(std::uint64_t n, const TestFunction& f, const TestFunction& g, std::uint64_t samples,
                               std::uint64_t seed) {
    HeckeCosetSet cs = double_cosets(n);
    return mc_integrate([&](FloatPoint z) { return evaluate(f, z) * cs.apply(g, z); }, samples, seed);
}

McEstimate centered_hecke_inner_product(std::uint64_t n, const TestFunction& f, std::uint64_t samples,
                                        std::uint64_t seed) {
    double mu = area_mean(f).value;
    HeckeCosetSet cs = double_cosets(n);
    return mc_integrate([&](FloatPoint z) { return (evaluate(f, z) - mu) * (cs.apply(f, z) - mu); }, samples, seed);
}

std::vector<MomentPoint> moment_decay_curve(const TestFunction& f,
                                            const std::vector<std::pair<std::uint64_t, Rational>>& schedule,
                                            std::uint64_t grid, bool primitive_only) {
    std::vector<MomentPoint> out;
    for (const auto& [n, y] : schedule) out.push_back({n, y, second_moment_direct(n, y, f, grid, primitive_only)});
    return out;
}

}  // namespace horo
