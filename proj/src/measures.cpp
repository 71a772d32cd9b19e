#include "horo/measures.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "horo/errors.hpp"
#include "horo/parallel.hpp"

namespace horo {

namespace {

constexpr double kThreeOverPi = 3.0 / std::numbers::pi;

double smoothstep(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

double smooth_profile(const TestFunction& f, double h) {
    double Y = to_double(f.Y), Yp = to_double(f.Yp), w = to_double(f.taper);
    if (h <= Y || h > Yp) return 0.0;
    return std::min(smoothstep((h - Y) / w), smoothstep((Yp - h) / w));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace

TestFunction TestFunction::constant(double c) {
    TestFunction f;
    f.kind = Kind::constant;
    f.value = c;
    return f;
}

TestFunction TestFunction::height_band(const Rational& Y_in, const Rational& Yp_in) {
    const Rational Y = canonical(Y_in);
    const Rational Yp = canonical(Yp_in);
    require(Y >= 1 && Y < Yp, "band_range", "height_band needs 1 <= Y < Y'");
    TestFunction f;
    f.kind = Kind::height_band;
    f.Y = Y;
    f.Yp = Yp;
    return f;
}

TestFunction TestFunction::cusp_indicator(const Rational& Y) {
    require(Y >= 1, "Y_at_least_1", "cusp_indicator needs Y >= 1");
    TestFunction f;
    f.kind = Kind::cusp_indicator;
    f.Y = Y;
    return f;
}

TestFunction TestFunction::disk_indicator(const ExactPoint& center, double radius) {
    require(radius > 0 && std::isfinite(radius), "disk_radius", "disk radius must be positive");
    TestFunction f;
    f.kind = Kind::disk_indicator;
    f.center = reduced_point(center);
    f.radius = radius;
    return f;
}

TestFunction TestFunction::smooth_band(const Rational& Y_in, const Rational& Yp_in, const Rational& taper_in) {
    const Rational Y = canonical(Y_in);
    const Rational Yp = canonical(Yp_in);
    const Rational taper = canonical(taper_in);
    require(Y >= 1 && Y < Yp, "band_range", "smooth_band needs 1 <= Y < Y'");
    require(taper > 0 && 2 * taper <= Yp - Y, "taper_range", "smooth_band needs 0 < 2*taper <= Y' - Y");
    TestFunction f;
    f.kind = Kind::smooth_band;
    f.Y = Y;
    f.Yp = Yp;
    f.taper = taper;
    return f;
}

TestFunction TestFunction::parse(std::string_view spec) {
    auto p = split(spec, ':');
    const std::string& k = p[0];
    auto need = [&](std::size_t n) {
        require(p.size() == n, "bad_test_function", "wrong number of fields in '" + std::string(spec) + "'");
    };
    if (k == "const" || k == "constant") {
        need(2);
        return constant(std::stod(p[1]));
    }
    if (k == "band") {
        need(3);
        return height_band(parse_rational(p[1]), parse_rational(p[2]));
    }
    if (k == "cusp") {
        need(2);
        return cusp_indicator(parse_rational(p[1]));
    }
    if (k == "disk") {
        need(3);
        return disk_indicator(parse_point(p[1]), std::stod(p[2]));
    }
    if (k == "smooth") {
        need(4);
        return smooth_band(parse_rational(p[1]), parse_rational(p[2]), parse_rational(p[3]));
    }
    throw PreconditionError("bad_test_function", "unknown test function kind '" + k + "'");
}

std::string TestFunction::spec() const {
    char buf[64];
    switch (kind) {
        case Kind::constant:
            std::snprintf(buf, sizeof buf, "%.17g", value);
            return std::string("const:") + buf;
        case Kind::height_band: return "band:" + to_string(Y) + ":" + to_string(Yp);
        case Kind::cusp_indicator: return "cusp:" + to_string(Y);
        case Kind::disk_indicator:
            std::snprintf(buf, sizeof buf, "%.17g", radius);
            return "disk:" + center.str() + ":" + buf;
        case Kind::smooth_band: return "smooth:" + to_string(Y) + ":" + to_string(Yp) + ":" + to_string(taper);
    }
    return "";
}

double evaluate_reduced(const TestFunction& f, const ExactPoint& w) {
    switch (f.kind) {
        case TestFunction::Kind::constant: return f.value;
        case TestFunction::Kind::height_band: return (w.im > f.Y && w.im <= f.Yp) ? 1.0 : 0.0;
        case TestFunction::Kind::cusp_indicator: return w.im > f.Y ? 1.0 : 0.0;
        case TestFunction::Kind::disk_indicator: return hyperbolic_distance(w, f.center) < f.radius ? 1.0 : 0.0;
        case TestFunction::Kind::smooth_band: return smooth_profile(f, to_double(w.im));
    }
    return 0.0;
}

double evaluate_reduced(const TestFunction& f, FloatPoint w) {
    switch (f.kind) {
        case TestFunction::Kind::constant: return f.value;
        case TestFunction::Kind::height_band:
            return (w.im > to_double(f.Y) && w.im <= to_double(f.Yp)) ? 1.0 : 0.0;
        case TestFunction::Kind::cusp_indicator: return w.im > to_double(f.Y) ? 1.0 : 0.0;
        case TestFunction::Kind::disk_indicator: {
            FloatPoint c{to_double(f.center.re), to_double(f.center.im)};
            return hyperbolic_distance(w, c) < f.radius ? 1.0 : 0.0;
        }
        case TestFunction::Kind::smooth_band: return smooth_profile(f, w.im);
    }
    return 0.0;
}

double evaluate(const TestFunction& f, const ExactPoint& z) {
    if (f.kind == TestFunction::Kind::constant) return f.value;
    return evaluate_reduced(f, reduced_point(z));
}

double evaluate(const TestFunction& f, FloatPoint z) {
    if (f.kind == TestFunction::Kind::constant) return f.value;
    return evaluate_reduced(f, reduce(z));
}

CertifiedValue evaluate_certified(const TestFunction& f, const ExactPoint& z, const Rational& eps_in) {
    const Rational eps = canonical(eps_in);
    if (f.kind == TestFunction::Kind::constant) return {f.value, f.value};
    if (eps == 0) {
        double v = evaluate(f, z);
        return {v, v};
    }
    // The horizontal displacement has hyperbolic length <= delta.
    Rational delta = eps / z.im;
    double full_lo = 0.0, full_hi = 1.0;
    if (delta >= Rational(1, 2)) return {full_lo, full_hi};
    ReducedPoint r = reduce(z);
    const Rational& h = r.point.im;
    Rational hl = h * (1 - delta), hh = h / (1 - delta);  // orbit height is e^d-Lipschitz
    switch (f.kind) {
        case TestFunction::Kind::height_band:
            if (hl > f.Y && hh <= f.Yp) return {1, 1};
            if (hh <= f.Y || hl > f.Yp) return {0, 0};
            return {0, 1};
        case TestFunction::Kind::cusp_indicator:
            if (hl > f.Y) return {1, 1};
            if (hh <= f.Y) return {0, 0};
            return {0, 1};
        case TestFunction::Kind::smooth_band: {
            double a = smooth_profile(f, to_double(hl)), b = smooth_profile(f, to_double(hh));
            double lo = std::min(a, b), hi = std::max(a, b);
            if (hl <= f.Yp - f.taper && hh >= f.Y + f.taper) hi = 1.0;
            if (hl <= f.Y || hh > f.Yp) lo = 0.0;
            return {lo, hi};
        }
        case TestFunction::Kind::disk_indicator: {
            // The true point's representative is r.matrix * z' as long as the
            // hyperbolic delta-ball around r.point stays inside F.
            double d = to_double(delta);
            double x = to_double(r.point.re), y = to_double(r.point.im);
            double ec = y * std::cosh(d), er = y * std::sinh(d);
            double margin = 1e-12;
            bool inside = std::fabs(x) + er < 0.5 - margin && std::hypot(x, ec) - er > 1.0 + margin;
            if (!inside) return {full_lo, full_hi};
            double dist = hyperbolic_distance(r.point, f.center);
            if (dist + d < f.radius - margin) return {1, 1};
            if (dist - d > f.radius + margin) return {0, 0};
            return {0, 1};
        }
        default: break;
    }
    return {full_lo, full_hi};
}

// ---------------------------------------------------------------------------

namespace {

struct GslWorkspace {
    gsl_integration_workspace* w;
    explicit GslWorkspace(std::size_t n) : w(gsl_integration_workspace_alloc(n)) {}
    ~GslWorkspace() { gsl_integration_workspace_free(w); }
};

template <class F>
double gsl_trampoline(double x, void* p) {
    return (*static_cast<F*>(p))(x);
}

template <class F>
MeanEstimate integrate_1d(F fn, double a, double b, std::vector<double> breaks, double tol) {
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    GslWorkspace ws(2000);
    gsl_function G;
    G.function = &gsl_trampoline<F>;
    G.params = &fn;
    double result = 0, err = 0;
    int status;
    breaks.insert(breaks.begin(), a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    status = gsl_integration_qagp(&G, breaks.data(), breaks.size(), tol, 0.0, 2000, ws.w, &result, &err);
    gsl_set_error_handler(old);
    if (status != GSL_SUCCESS || err > tol)
        throw QuadratureError("quadrature tolerance unreachable: " + std::string(gsl_strerror(status)), err);
    return {result, err, "quadrature"};
}

MeanEstimate disk_area(const TestFunction& f, double tol) {
    double a = to_double(f.center.re), b = to_double(f.center.im);
    double yc = b * std::cosh(f.radius), R = b * std::sinh(f.radius);
    double lo = std::max(-0.5, a - R), hi = std::min(0.5, a + R);
    if (lo >= hi) return {0.0, 0.0, "exact"};
    auto inner = [=](double x) {
        double s2 = R * R - (x - a) * (x - a);
        if (s2 <= 0) return 0.0;
        double s = std::sqrt(s2);
        double ylo = std::max(yc - s, std::sqrt(std::max(0.0, 1.0 - x * x)));
        double yhi = yc + s;
        if (yhi <= ylo) return 0.0;
        return kThreeOverPi * (1.0 / ylo - 1.0 / yhi);
    };
    std::vector<double> breaks;
    // abscissae where the disk boundary meets the unit circle
    for (int k = 0; k <= 64; ++k) {
        double x0 = lo + (hi - lo) * k / 64.0;
        breaks.push_back(x0);
    }
    return integrate_1d(inner, lo, hi, breaks, tol);
}

}  // namespace

MeanEstimate area_mean(const TestFunction& f, double tol) {
    switch (f.kind) {
        case TestFunction::Kind::constant: return {f.value, 0.0, "exact"};
        case TestFunction::Kind::height_band:
            return {kThreeOverPi * to_double(1 / f.Y - 1 / f.Yp), 0.0, "exact"};
        case TestFunction::Kind::cusp_indicator: return {kThreeOverPi * to_double(1 / f.Y), 0.0, "exact"};
        case TestFunction::Kind::smooth_band: {
            double Y = to_double(f.Y), Yp = to_double(f.Yp), w = to_double(f.taper);
            auto g = [&](double h) { return kThreeOverPi * smooth_profile(f, h) / (h * h); };
            return integrate_1d(g, Y, Yp, {Y + w, Yp - w}, tol);
        }
        case TestFunction::Kind::disk_indicator: return disk_area(f, tol);
    }
    return {};
}

double horocycle_mean(const TestFunction& f, const Rational& Y_in, std::uint64_t grid) {
    const Rational Y = canonical(Y_in);
    require(grid >= 1, "grid_positive", "grid must be >= 1");
    require(Y > 0, "Y_positive", "horocycle height must be positive");
    if (f.kind == TestFunction::Kind::constant) return f.value;
    std::vector<double> vals = parallel_map<double>(grid, [&](std::size_t g) {
        Rational x = make_rational(Integer(2 * static_cast<unsigned long>(g) + 1), Integer(2 * static_cast<unsigned long>(grid)));
        return evaluate(f, ExactPoint(x, Y));
    });
    double s = 0;
    for (double v : vals) s += v;
    return s / static_cast<double>(grid);
}

MeanEstimate horocycle_mean_estimate(const TestFunction& f, const Rational& Y, std::uint64_t grid) {
    double a = horocycle_mean(f, Y, grid);
    double b = horocycle_mean(f, Y, 2 * grid);
    return {b, std::fabs(b - a), "grid"};
}

double nu_mean(std::uint64_t m, const Rational& Y_in, const TestFunction& f, std::uint64_t grid) {
    const Rational Y = canonical(Y_in);
    require(m >= 1, "m_positive", "nu_mean needs m >= 1");
    double s = 0;
    for (std::uint64_t d : divisors(m)) {
        Rational h = Y * Rational(Integer(static_cast<unsigned long>(d * d)));
        s += static_cast<double>(euler_phi(m / d)) * horocycle_mean(f, h, grid);
    }
    return s / static_cast<double>(m);
}

MeanEstimate ReferenceMeasure::mean(const TestFunction& f) const {
    switch (kind) {
        case Kind::hyperbolic_area: return area_mean(f);
        case Kind::horocycle: return horocycle_mean_estimate(f, Y, grid);
        case Kind::nu: {
            double a = nu_mean(m, Y, f, grid), b = nu_mean(m, Y, f, 2 * grid);
            return {b, std::fabs(b - a), "grid"};
        }
    }
    return {};
}

std::string ReferenceMeasure::describe() const {
    switch (kind) {
        case Kind::hyperbolic_area: return "hyperbolic_area";
        case Kind::horocycle: return "horocycle(" + to_string(Y) + ")";
        case Kind::nu: return "nu(" + std::to_string(m) + "," + to_string(Y) + ")";
    }
    return "";
}

// ---------------------------------------------------------------------------

namespace {

template <class S>
bool in_bands(const S& h, const S& c) {
    return (2 * c * h >= 1 && c * h <= 1) || (c * h >= 2 && c * h <= 4) || (2 * c * h >= 9);
}

double as_double(const Rational& r) { return to_double(r); }
double as_double(double r) { return r; }
Integer floor_int(const Rational& r) { return floor_of(r); }
Integer floor_int(double r) { return Integer(std::floor(r)); }

// (x, y) reduced.  Orbit heights >= 1/(2c) are y/|c'z + d'|^2 with
// |c'z + d'|^2 <= 2 c y; since y >= sqrt(3)/2 this forces small c'.
template <class S, class Pred>
bool ec_reduced(const S& x, const S& y, const S& c, Pred banded) {
    if (banded(y)) return true;
    for (long cp = 1;; ++cp) {
        S cps = S(cp);
        if (cps * cps * y > 2 * c) break;
        double slack = 2 * as_double(c) * as_double(y) - static_cast<double>(cp * cp) * as_double(y) * as_double(y);
        if (slack < 0) continue;
        double s = std::sqrt(slack) + 1.0;
        Integer dlo = floor_int(-cps * x - S(s)), dhi = floor_int(-cps * x + S(s)) + 1;
        for (Integer dp = dlo; dp <= dhi; ++dp) {
            if (gcd(Integer(cp), dp) != 1) continue;
            S u = cps * x + S(dp.get_si());
            S den = u * u + cps * cps * y * y;
            if (den > 2 * c * y) continue;
            if (banded(y / den)) return true;
        }
    }
    return false;
}

}  // namespace

void check_Ec_parameter(const Rational& c_in) {
    const Rational c = canonical(c_in);
    require(5 * c * c >= 1 && c < Rational(3, 2), "c_range", "c must lie in [1/sqrt(5), 3/2)");
}

bool in_Ec(const ExactPoint& z, const Rational& c_in) {
    const Rational c = canonical(c_in);
    check_Ec_parameter(c);
    ExactPoint w = reduced_point(z);
    return ec_reduced<Rational>(w.re, w.im, c, [&](const Rational& h) { return in_bands<Rational>(h, c); });
}

bool in_Ec_certified(const ExactPoint& z, const Rational& c_in, const Rational& delta_in) {
    const Rational c = canonical(c_in);
    const Rational delta = canonical(delta_in);
    check_Ec_parameter(c);
    require(delta >= 0 && delta < 1, "delta_range", "perturbation must lie in [0, 1)");
    ExactPoint w = reduced_point(z);
    Rational lo_f = 1 - delta;
    return ec_reduced<Rational>(w.re, w.im, c, [&](const Rational& h) {
        Rational lo = h * lo_f, hi = h / lo_f;
        if (2 * c * lo >= 1 && c * hi <= 1) return true;
        if (c * lo >= 2 && c * hi <= 4) return true;
        return 2 * c * lo >= 9;
    });
}

bool in_Ec(FloatPoint z, double c) {
    require(5 * c * c >= 1 && c < 1.5, "c_range", "c must lie in [1/sqrt(5), 3/2)");
    FloatPoint w = reduce(z);
    return ec_reduced<double>(w.re, w.im, c, [&](double h) { return in_bands<double>(h, c); });
}

FloatPoint fundamental_domain_point(double u, double v) {
    double x = std::sin(std::numbers::pi * (u - 0.5) / 3.0);
    double y = std::sqrt(1.0 - x * x) / (1.0 - v);
    return {x, y};
}

McEstimate mc_integrate(const std::function<double(FloatPoint)>& g, std::uint64_t samples, std::uint64_t seed,
                        unsigned strata) {
    require(samples >= strata && strata >= 1, "mc_samples", "need at least one sample per stratum");
    struct Acc {
        double mean = 0, m2 = 0;
        std::uint64_t n = 0;
    };
    std::vector<Acc> acc = parallel_map<Acc>(strata, [&](std::size_t k) {
        std::uint64_t nk = samples / strata + (k < samples % strata ? 1 : 0);
        std::mt19937_64 rng(chunk_seed(seed, k));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        Acc a;
        for (std::uint64_t i = 0; i < nk; ++i) {
            double u = U(rng), v = (static_cast<double>(k) + U(rng)) / strata;
            double val = g(fundamental_domain_point(u, v));
            ++a.n;
            double dlt = val - a.mean;
            a.mean += dlt / static_cast<double>(a.n);
            a.m2 += dlt * (val - a.mean);
        }
        return a;
    });
    McEstimate e;
    e.samples = samples;
    double var = 0;
    for (const Acc& a : acc) {
        e.mean += a.mean / strata;
        if (a.n > 1) var += (a.m2 / static_cast<double>(a.n - 1)) / static_cast<double>(a.n) / (double(strata) * strata);
    }
    e.stderr_ = std::sqrt(var);
    return e;
}

}  // namespace horo
