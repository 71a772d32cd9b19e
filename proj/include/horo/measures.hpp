#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "horo/hyperbolic.hpp"

namespace horo {

// Gamma-invariant observables, evaluated on the reduced representative.
struct TestFunction {
    enum class Kind { constant, height_band, cusp_indicator, disk_indicator, smooth_band };

    Kind kind = Kind::constant;
    double value = 1.0;       // constant
    Rational Y = 1, Yp = 2;   // bands: Y < h <= Yp; cusp: h > Y
    Rational taper = 0;       // smooth_band ramp width
    ExactPoint center;        // disk, already reduced
    double radius = 0.0;

    static TestFunction constant(double c);
    static TestFunction height_band(const Rational& Y, const Rational& Yp);
    static TestFunction cusp_indicator(const Rational& Y);
    static TestFunction disk_indicator(const ExactPoint& center, double radius);
    static TestFunction smooth_band(const Rational& Y, const Rational& Yp, const Rational& taper);

    // Short specs: "const:1", "band:1.2:2", "cusp:1", "disk:2i:0.5", "smooth:1.2:2:1/10".
    static TestFunction parse(std::string_view spec);
    std::string spec() const;
    bool is_indicator() const { return kind != Kind::constant && kind != Kind::smooth_band; }
};

// f(reduce(z)).
double evaluate(const TestFunction& f, const ExactPoint& z);
double evaluate(const TestFunction& f, FloatPoint z);
// f at an already reduced point.
double evaluate_reduced(const TestFunction& f, const ExactPoint& w);
double evaluate_reduced(const TestFunction& f, FloatPoint w);

// Value range of f(reduce(z')) over all z' with |re z' - re z| <= eps,
// im z' = im z.  lo == hi means the value is certified.
struct CertifiedValue {
    double lo, hi;
    bool determinate() const { return lo == hi; }
};
CertifiedValue evaluate_certified(const TestFunction& f, const ExactPoint& z, const Rational& eps);

struct MeanEstimate {
    double value = 0.0;
    double error_estimate = 0.0;
    std::string provenance;  // "exact", "quadrature", "mc", "grid"
};

// mu_M(f).  Throws QuadratureError if `tol` cannot be reached.
MeanEstimate area_mean(const TestFunction& f, double tol = 1e-10);

// (1/grid) sum f(x_g + iY), x_g the midpoints of [0, 1).
double horocycle_mean(const TestFunction& f, const Rational& Y, std::uint64_t grid);
// Same, with |mean(2 grid) - mean(grid)| as the error estimate.
MeanEstimate horocycle_mean_estimate(const TestFunction& f, const Rational& Y, std::uint64_t grid);

// (1/m) sum_{d | m} phi(m/d) mu_{d^2 Y}(f).
double nu_mean(std::uint64_t m, const Rational& Y, const TestFunction& f, std::uint64_t grid);

struct ReferenceMeasure {
    enum class Kind { hyperbolic_area, horocycle, nu };
    Kind kind = Kind::hyperbolic_area;
    Rational Y = 1;
    std::uint64_t m = 1;
    std::uint64_t grid = 4096;

    MeanEstimate mean(const TestFunction& f) const;
    std::string describe() const;
};

// E_c: some orbit point has height in [1/(2c),1/c] u [2/c,4/c] u [9/(2c),inf).
bool in_Ec(const ExactPoint& z, const Rational& c);
bool in_Ec(FloatPoint z, double c);
// Membership for every point whose orbit heights lie within a factor
// [1 - delta, 1/(1 - delta)] of those of z.
bool in_Ec_certified(const ExactPoint& z, const Rational& c, const Rational& delta);
void check_Ec_parameter(const Rational& c);  // c in [1/sqrt5, 3/2)

// Sampler with the exact mu_M density on the fundamental domain:
// x = sin(pi(u - 1/2)/3), y = sqrt(1 - x^2)/(1 - v).
FloatPoint fundamental_domain_point(double u, double v);

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
};

// Stratified (in v) Monte Carlo estimate of mu_M(g).  Deterministic for a
// given (samples, seed, strata) whatever the thread count.
McEstimate mc_integrate(const std::function<double(FloatPoint)>& g, std::uint64_t samples, std::uint64_t seed,
                        unsigned strata = 64);

}  // namespace horo
