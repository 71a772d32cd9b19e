#include "horo/symmetry.hpp"

#include <algorithm>

#include "horo/errors.hpp"
#include "horo/sampling.hpp"

namespace horo {

namespace {

Integer Z(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

Integer inverse_or_zero(const Integer& a, const Integer& m) {
    if (m == 1) return 0;
    auto inv = mod_inverse(a, m);
    require(inv.has_value(), "not_invertible", "element is not a unit");
    return *inv;
}

// a * nd + b * k = 1 with 0 <= b < nd.
std::pair<Integer, Integer> canonical_bezout(const Integer& nd, const Integer& k) {
    Bezout bz = ext_gcd(nd, k);
    require(bz.g == 1, "bezout", "n/d and k must be coprime");
    Integer b = mod(bz.y, nd);
    Integer a = (1 - b * k) / nd;
    return {a, b};
}

}  // namespace

SymmetryWitness symmetry_point(const Integer& m, const Integer& k, const Integer& l, const Integer& n,
                               const Integer& j, const Rational& y_in) {
    const Rational y = canonical(y_in);
    require(k >= 1 && l >= 1 && n >= 1, "positive_params", "k, l, n must be positive");
    require(gcd(m, k * l) == 1, "gcd_m_kl", "gcd(m, kl) must be 1");
    require(n % l == 0, "l_divides_n", "l must divide n");
    require(gcd(k, n) == 1, "gcd_k_n", "gcd(k, n) must be 1");
    require(j >= 0 && j < n, "j_range", "need 0 <= j < n");
    require(y > 0, "y_positive", "y must be positive");

    SymmetryWitness w;
    w.m = m;
    w.k = k;
    w.l = l;
    w.n = n;
    w.j = j;
    w.y = y;
    Integer N1 = m * (n / l) + j * k;
    w.d = gcd(N1, n);
    Integer nd = n / w.d;
    auto [a, b] = canonical_bezout(nd, k);
    w.a = a;
    w.b = b;
    Integer inv_mn = inverse_or_zero(m * n, k);
    Integer t = N1 / w.d;
    Integer tstar = inverse_or_zero(t, nd);
    w.source = ExactPoint(make_rational(m, k * l) + make_rational(j, n), y);
    Rational re = -make_rational(w.d * l * inv_mn * a, k) - make_rational(tstar * b, nd);
    w.image = ExactPoint(re, make_rational(w.d * w.d, k * k * n * n) / y);

    // gamma = T^s (wv; -q p) sends p/q + iy to -wv/q + i/(q^2 y).
    Rational pq = make_rational(m, k * l) + make_rational(j, n);
    Integer p = pq.get_num(), q = pq.get_den();
    Integer winv = inverse_or_zero(p, q);
    Integer v = (1 - winv * p) / q;
    IntMatrix2 g{winv, v, -q, p};
    Rational shift = re + make_rational(winv, q);
    require(shift.get_den() == 1, "internal_symmetry", "image differs from the orbit point by a non-integer shift");
    w.gamma = IntMatrix2::T(shift.get_num()) * g;
    return w;
}

std::string SymmetryWitness::check() const {
    if (gamma.det() != 1) return "gamma_in_SL2";
    if (n <= 0 || l <= 0 || k <= 0) return "positive_params";
    if (gcd(m, k * l) != 1) return "gcd_m_kl";
    if (n % l != 0) return "l_divides_n";
    if (gcd(k, n) != 1) return "gcd_k_n";
    if (!(source == ExactPoint(make_rational(m, k * l) + make_rational(j, n), y))) return "source_point";
    if (d != gcd(m * (n / l) + j * k, n)) return "d_definition";
    if (a * (n / d) + b * k != 1) return "bezout_identity";
    if (mobius(gamma, source) != image) return "gamma_maps_source_to_image";
    if (image.im * Rational(k * k * n * n) * y != Rational(d * d)) return "height_covariance";
    if (reduced_point(source) != reduced_point(image)) return "reduce_equality";
    return "";
}

bool classical_symmetry_holds(const Integer& j, const Integer& n, const Rational& y_in) {
    const Rational y = canonical(y_in);
    require(n >= 1 && gcd(j, n) == 1, "gcd_j_n", "gcd(j, n) must be 1");
    Integer jbar = inverse_or_zero(j, n);
    ExactPoint a(make_rational(j, n), y);
    ExactPoint b(-make_rational(jbar, n), 1 / (Rational(n * n) * y));
    return reduced_point(a) == reduced_point(b);
}

bool in_Nq(const Integer& q, const Integer& n) { return n % gcd(n * n, q) == 0; }

std::map<std::uint64_t, DecompositionPart> decompose_rational_sampleset(const Integer& p, const Integer& q,
                                                                        std::uint64_t n, const Rational& y_in) {
    const Rational y = canonical(y_in);
    require(q >= 1 && gcd(p, q) == 1, "gcd_p_q", "p/q must be primitive with q >= 1");
    require(n >= 1 && y > 0, "positive_params", "need n >= 1 and y > 0");
    require(in_Nq(q, Z(n)), "n_not_in_Nq", "gcd(n^2, q) must divide n");
    Integer nn = Z(n);
    Integer l = gcd(nn, q), k = q / l;
    Integer inv_mn = inverse_or_zero(p * nn, k);
    std::map<std::uint64_t, DecompositionPart> out;
    for (std::uint64_t d : divisors(n)) {
        Integer dd = Z(d);
        auto [a, b] = canonical_bezout(nn / dd, k);
        Rational x = frac(-make_rational(dd * l * inv_mn * a, k));
        out[d] = {x, make_rational(dd * dd, k * k * nn * nn) / y};
    }
    return out;
}

DecompositionPart primitive_symmetry(const Integer& p, const Integer& q, std::uint64_t n, const Rational& y_in) {
    const Rational y = canonical(y_in);
    require(q >= 1 && gcd(p, q) == 1, "gcd_p_q", "p/q must be primitive with q >= 1");
    require(gcd(Z(n), q) == 1, "gcd_n_q", "gcd(n, q) must be 1");
    require(n >= 1 && y > 0, "positive_params", "need n >= 1 and y > 0");
    Integer nn = Z(n);
    auto [a, b] = canonical_bezout(nn, q);
    Integer inv_pn = inverse_or_zero(p * nn, q);
    return {frac(-make_rational(inv_pn * a, q)), 1 / (Rational(q * q * nn * nn) * y)};
}

std::vector<ExactPoint> reduced_multiset(std::uint64_t n, const Rational& x_in, const Rational& y_in, bool primitive_only) {
    const Rational x = canonical(x_in);
    const Rational y = canonical(y_in);
    SampleSet s = sample(n, x, y, primitive_only);
    std::vector<ExactPoint> out;
    out.reserve(s.points.size());
    for (const auto& z : s.points) out.push_back(reduced_point(z));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ExactPoint> reduced_union(const std::map<std::uint64_t, DecompositionPart>& parts, std::uint64_t n) {
    std::vector<ExactPoint> out;
    for (const auto& [d, part] : parts) {
        auto r = reduced_multiset(n / d, part.x, part.y, true);
        out.insert(out.end(), r.begin(), r.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool verify_rational_decomposition(const Integer& p, const Integer& q, std::uint64_t n, const Rational& y) {
    auto parts = decompose_rational_sampleset(p, q, n, y);
    return reduced_multiset(n, make_rational(p, q), y, false) == reduced_union(parts, n);
}

bool verify_primitive_symmetry(const Integer& p, const Integer& q, std::uint64_t n, const Rational& y) {
    DecompositionPart r = primitive_symmetry(p, q, n, y);
    return reduced_multiset(n, make_rational(p, q), y, true) == reduced_multiset(n, r.x, r.y, true);
}

std::optional<IntMatrix2> gamma_n_equivalence(std::uint64_t n, const ExactPoint& w1, const ExactPoint& w2) {
    ReducedPoint r1 = reduce(w1), r2 = reduce(w2);
    if (r1.point != r2.point) return std::nullopt;
    std::vector<IntMatrix2> stab{IntMatrix2::identity()};
    if (r1.point == ExactPoint(0, 1)) stab.push_back(IntMatrix2::S());
    for (const auto& g : stab) {
        IntMatrix2 sigma = r1.matrix.adjugate() * g * r2.matrix;
        if (gamma_n_contains(n, sigma)) return sigma;
    }
    return std::nullopt;
}

std::map<std::uint64_t, DecompositionPart> simple_type_decomposition(std::uint64_t n, const ExactPoint& z,
                                                                     const Cusp& c, const ExactPoint& zp) {
    require(n >= 1, "n_positive", "n must be >= 1");
    require(c.simple_type, "not_simple_type", "cusp " + c.rep() + " is not of simple type");
    require(gamma_n_equivalence(n, z, mobius(c.tau, zp)).has_value(), "not_equivalent",
            "Gamma_n z = Gamma_n tau_c z' could not be verified");
    std::map<std::uint64_t, DecompositionPart> out;
    if (n == 1) {
        out[1] = {frac(zp.re), zp.im};
        return out;
    }
    Integer nn = Z(n);
    Integer m = c.m, L = c.l;
    IntMatrix2 tau = c.tau;
    if (m == 0) {
        m += L;
        tau = IntMatrix2::T() * tau;
    }
    Integer l = gcd(nn, L), k = L / l;
    Rational omega = make_rational(nn * nn, l * l);
    Integer inv_mn = inverse_or_zero(m * nn, k);
    for (std::uint64_t d : divisors(n)) {
        Integer dd = Z(d);
        auto [e, f] = canonical_bezout(nn / dd, k);
        Rational x = make_rational(dd * dd * l * l, nn * nn) * zp.re + make_rational(dd * dd * l * tau.d, nn * nn * k) -
                     make_rational(dd * l * inv_mn * e, k);
        out[d] = {frac(x), Rational(dd * dd) * zp.im / omega};
    }
    return out;
}

bool verify_simple_type_decomposition(std::uint64_t n, const ExactPoint& z, const Cusp& c, const ExactPoint& zp) {
    auto parts = simple_type_decomposition(n, z, c, zp);
    return reduced_multiset(n, z.re, z.im, false) == reduced_union(parts, n);
}

}  // namespace horo
