#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horo/measures.hpp"

namespace horo {

// R_n(x, y) or R^pr_n(x, y).  Points are the centres frac(x~ + j/n) + iy of the
// translate; for irrational x every point carries the radius x.radius().
struct SampleSet {
    std::uint64_t n = 1;
    Translate x;
    Rational y = 1;
    bool primitive_only = false;
    std::vector<std::uint64_t> indices;
    std::vector<ExactPoint> points;

    bool exact() const { return x.exact(); }
    std::size_t size() const { return points.size(); }
};

SampleSet sample(std::uint64_t n, const Translate& x, const Rational& y, bool primitive_only);
SampleSet sample(std::uint64_t n, const Rational& x, const Rational& y, bool primitive_only);

struct EmpiricalMean {
    double value = 0.0;           // mean of the centre evaluations
    double lo = 0.0, hi = 0.0;    // certified range of the true mean
    std::uint64_t indeterminate = 0;
    std::uint64_t count = 0;
};

EmpiricalMean empirical_mean(const SampleSet& s, const TestFunction& f);

// Minimum orbit height over the set; [lo, hi] brackets the true value
// (lo == hi for exact translates).
struct HeightBound {
    Rational lo, hi;
    std::uint64_t argmin = 0;  // index j of the minimising point
    bool exact() const { return lo == hi; }
};

HeightBound min_orbit_height(const SampleSet& s);
// Without materialising the set.
HeightBound min_orbit_height(std::uint64_t n, const Translate& x, const Rational& y, bool primitive_only = false);

struct DecaySchedule {
    enum class Kind { power, log_power, custom };
    Kind kind = Kind::power;
    Rational c = 1;
    Rational alpha = 2;  // power: y_n = c n^-alpha
    Rational beta = 1;   // log_power: y_n = c n^-2 (log n)^-beta
    std::vector<Rational> values;  // custom: y_1, y_2, ...

    static DecaySchedule power(const Rational& c, const Rational& alpha);
    static DecaySchedule log_power(const Rational& c, const Rational& beta);
    static DecaySchedule custom(std::vector<Rational> values);

    // Exact when the formula is rational, otherwise the exact value of the
    // nearest double.
    Rational y(std::uint64_t n) const;
    std::uint64_t first_n() const { return kind == Kind::log_power ? 2 : 1; }
    std::string describe() const;
};

struct ExcursionRecord {
    std::uint64_t n = 0;
    Rational y;
    HeightBound min_height;
    double log_ratio = 0.0;  // log(min h)/log log n; NaN when undefined
    bool flagged = false;    // approximation hypothesis holds at a convergent
    Rational predicted_Y;    // 1/(2 n^2 y_n) when flagged
    bool prediction_verified = false;
};

std::vector<ExcursionRecord> excursion_series(const Translate& x, const DecaySchedule& schedule, std::uint64_t N,
                                              std::uint64_t n_min = 3);

// n_k = ceil(ratio^k) up to N (deduplicated).
std::vector<std::uint64_t> geometric_subsequence(std::uint64_t N, double ratio);

struct DiscrepancyPoint {
    std::uint64_t n = 0;
    Rational y;
    double empirical = 0.0, reference = 0.0, abs_error = 0.0;
    std::uint64_t indeterminate = 0;
};

std::vector<DiscrepancyPoint> horocycle_discrepancy_curve(const Translate& x, const DecaySchedule& schedule,
                                                          std::uint64_t N, const TestFunction& f,
                                                          double ratio = 2.0, bool primitive_only = false);

// Fixed n, varying y.
std::vector<DiscrepancyPoint> discrepancy_vs_height(const Translate& x, std::uint64_t n,
                                                    const std::vector<Rational>& ys, const TestFunction& f);

// Least-squares slope of log(values) against log(ns).
double loglog_slope(const std::vector<double>& ns, const std::vector<double>& values);

}  // namespace horo
