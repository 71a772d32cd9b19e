#include "horo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "horo/errors.hpp"
#include "horo/parallel.hpp"

namespace horo {

namespace {

constexpr std::size_t kChunk = 512;

Rational nth(std::uint64_t j, std::uint64_t n) {
    return make_rational(Integer(static_cast<unsigned long>(j)), Integer(static_cast<unsigned long>(n)));
}

std::vector<std::uint64_t> sample_indices(std::uint64_t n, bool primitive_only) {
    std::vector<std::uint64_t> idx;
    idx.reserve(primitive_only ? euler_phi(n) : n);
    for (std::uint64_t j = 0; j < n; ++j)
        if (!primitive_only || gcd(j, n) == 1) idx.push_back(j);
    return idx;
}

Rational perturbation(const Translate& x, const Rational& y) {
    Rational delta = x.radius() / y;
    require(delta < Rational(1, 2), "translate_precision",
            "translate radius too coarse for this height; supply more digits");
    return delta;
}

}  // namespace

SampleSet sample(std::uint64_t n, const Translate& x, const Rational& y_in, bool primitive_only) {
    const Rational y = canonical(y_in);
    require(n >= 1, "n_positive", "sample needs n >= 1");
    require(y > 0, "y_positive", "sample needs y > 0");
    SampleSet s;
    s.n = n;
    s.x = x;
    s.y = y;
    s.primitive_only = primitive_only;
    s.indices = sample_indices(n, primitive_only);
    s.points.reserve(s.indices.size());
    for (std::uint64_t j : s.indices) s.points.emplace_back(frac(x.center() + nth(j, n)), y);
    return s;
}

SampleSet sample(std::uint64_t n, const Rational& x_in, const Rational& y_in, bool primitive_only) {
    const Rational x = canonical(x_in);
    const Rational y = canonical(y_in);
    return sample(n, Translate::rational(x), y, primitive_only);
}

EmpiricalMean empirical_mean(const SampleSet& s, const TestFunction& f) {
    EmpiricalMean m;
    m.count = s.points.size();
    if (m.count == 0) return m;
    struct Part {
        double v = 0, lo = 0, hi = 0;
        std::uint64_t ind = 0;
    };
    std::size_t chunks = (s.points.size() + kChunk - 1) / kChunk;
    auto parts = parallel_map<Part>(chunks, [&](std::size_t c) {
        Part p;
        std::size_t end = std::min(s.points.size(), (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            CertifiedValue cv = evaluate_certified(f, s.points[i], s.x.radius());
            double v = s.exact() ? cv.lo : evaluate(f, s.points[i]);
            p.v += v;
            p.lo += cv.lo;
            p.hi += cv.hi;
            if (!cv.determinate()) ++p.ind;
        }
        return p;
    });
    for (const Part& p : parts) {
        m.value += p.v;
        m.lo += p.lo;
        m.hi += p.hi;
        m.indeterminate += p.ind;
    }
    double N = static_cast<double>(m.count);
    m.value /= N;
    m.lo /= N;
    m.hi /= N;
    return m;
}

namespace {

HeightBound bracket(const Rational& hmin, std::uint64_t argmin, const Translate& x, const Rational& y) {
    HeightBound b;
    b.argmin = argmin;
    if (x.exact()) {
        b.lo = b.hi = hmin;
        return b;
    }
    Rational delta = perturbation(x, y);
    b.lo = hmin * (1 - delta);
    b.hi = hmin / (1 - delta);
    return b;
}

}  // namespace

HeightBound min_orbit_height(const SampleSet& s) {
    require(!s.points.empty(), "empty_set", "sample set is empty");
    struct Part {
        Rational h;
        std::uint64_t j = 0;
    };
    std::size_t chunks = (s.points.size() + kChunk - 1) / kChunk;
    auto parts = parallel_map<Part>(chunks, [&](std::size_t c) {
        Part p;
        std::size_t end = std::min(s.points.size(), (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            Rational h = orbit_height(s.points[i]);
            if (i == c * kChunk || h < p.h) {
                p.h = h;
                p.j = s.indices[i];
            }
        }
        return p;
    });
    Part best = parts[0];
    for (const Part& p : parts)
        if (p.h < best.h) best = p;
    return bracket(best.h, best.j, s.x, s.y);
}

HeightBound min_orbit_height(std::uint64_t n, const Translate& x, const Rational& y_in, bool primitive_only) {
    const Rational y = canonical(y_in);
    require(n >= 1 && y > 0, "bad_sample", "need n >= 1 and y > 0");
    struct Part {
        Rational h;
        std::uint64_t j = 0;
        bool any = false;
    };
    std::size_t chunks = (n + kChunk - 1) / kChunk;
    auto parts = parallel_map<Part>(chunks, [&](std::size_t c) {
        Part p;
        std::uint64_t end = std::min<std::uint64_t>(n, (c + 1) * kChunk);
        for (std::uint64_t j = c * kChunk; j < end; ++j) {
            if (primitive_only && gcd(j, n) != 1) continue;
            Rational h = orbit_height(ExactPoint(frac(x.center() + nth(j, n)), y));
            if (!p.any || h < p.h) {
                p.h = h;
                p.j = j;
                p.any = true;
            }
        }
        return p;
    });
    const Part* best = nullptr;
    for (const Part& p : parts)
        if (p.any && (!best || p.h < best->h)) best = &p;
    require(best != nullptr, "empty_set", "sample set is empty");
    return bracket(best->h, best->j, x, y);
}

// ---------------------------------------------------------------------------

DecaySchedule DecaySchedule::power(const Rational& c_in, const Rational& alpha_in) {
    const Rational c = canonical(c_in);
    const Rational alpha = canonical(alpha_in);
    require(c > 0, "bad_schedule", "power schedule needs c > 0");
    DecaySchedule s;
    s.kind = Kind::power;
    s.c = c;
    s.alpha = alpha;
    return s;
}

DecaySchedule DecaySchedule::log_power(const Rational& c_in, const Rational& beta_in) {
    const Rational c = canonical(c_in);
    const Rational beta = canonical(beta_in);
    require(c > 0, "bad_schedule", "log_power schedule needs c > 0");
    DecaySchedule s;
    s.kind = Kind::log_power;
    s.c = c;
    s.beta = beta;
    return s;
}

DecaySchedule DecaySchedule::custom(std::vector<Rational> values) {
    require(!values.empty(), "bad_schedule", "custom schedule needs values");
    for (const auto& v : values) require(v > 0, "bad_schedule", "schedule values must be positive");
    DecaySchedule s;
    s.kind = Kind::custom;
    s.values = std::move(values);
    return s;
}

Rational DecaySchedule::y(std::uint64_t n) const {
    require(n >= first_n(), "n_range", "schedule undefined at n = " + std::to_string(n));
    switch (kind) {
        case Kind::power: {
            if (alpha.get_den() == 1 && alpha.get_num().fits_slong_p()) {
                long a = alpha.get_num().get_si();
                Integer p;
                mpz_ui_pow_ui(p.get_mpz_t(), n, static_cast<unsigned long>(std::labs(a)));
                return a >= 0 ? Rational(c / Rational(p)) : Rational(c * Rational(p));
            }
            return from_double(to_double(c) * std::pow(static_cast<double>(n), -to_double(alpha)));
        }
        case Kind::log_power: {
            double nd = static_cast<double>(n);
            return from_double(to_double(c) / (nd * nd * std::pow(std::log(nd), to_double(beta))));
        }
        case Kind::custom:
            require(n <= values.size(), "n_range", "custom schedule has no value for n = " + std::to_string(n));
            return values[n - 1];
    }
    return 1;
}

std::string DecaySchedule::describe() const {
    switch (kind) {
        case Kind::power: return "power(" + to_string(c) + "," + to_string(alpha) + ")";
        case Kind::log_power: return "log_power(" + to_string(c) + "," + to_string(beta) + ")";
        case Kind::custom: return "custom[" + std::to_string(values.size()) + "]";
    }
    return "";
}

std::vector<ExcursionRecord> excursion_series(const Translate& x, const DecaySchedule& schedule, std::uint64_t N,
                                              std::uint64_t n_min) {
    require(N >= 3, "N_range", "excursion_series needs N >= 3");
    n_min = std::max(n_min, schedule.first_n());
    Integer bound(static_cast<unsigned long>(N));
    ContinuedFraction cf = x.digits() ? x.digits()->expand_until(bound) : continued_fraction(x.center());
    std::vector<ExcursionRecord> out;
    for (std::uint64_t n = n_min; n <= N; ++n) {
        ExcursionRecord r;
        r.n = n;
        r.y = schedule.y(n);
        r.min_height = min_orbit_height(n, x, r.y);
        double h = to_double(r.min_height.lo);
        double ll = std::log(std::log(static_cast<double>(n)));
        r.log_ratio = (h > 0 && ll > 0) ? std::log(h) / ll : std::numeric_limits<double>::quiet_NaN();
        Rational nn(Integer(static_cast<unsigned long>(n)));
        Rational Y = 1 / (2 * nn * nn * r.y);
        if (Y >= 1) {
            for (const auto& c : cf.convergents) {
                if (c.q != Integer(static_cast<unsigned long>(n))) continue;
                if (x.distance_less(c.value(), r.y) == Tri::yes) {
                    r.flagged = true;
                    r.predicted_Y = Y;
                    r.prediction_verified = r.min_height.lo > Y;
                }
                break;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::uint64_t> geometric_subsequence(std::uint64_t N, double ratio) {
    require(ratio > 1.0, "ratio_range", "ratio must exceed 1");
    std::vector<std::uint64_t> ns;
    for (double v = 1.0; v <= static_cast<double>(N) + 0.5; v *= ratio) {
        auto n = static_cast<std::uint64_t>(std::ceil(v - 1e-9));
        if (n > N) break;
        if (ns.empty() || ns.back() != n) ns.push_back(n);
    }
    return ns;
}

std::vector<DiscrepancyPoint> horocycle_discrepancy_curve(const Translate& x, const DecaySchedule& schedule,
                                                          std::uint64_t N, const TestFunction& f, double ratio,
                                                          bool primitive_only) {
    double ref = area_mean(f).value;
    std::vector<DiscrepancyPoint> out;
    for (std::uint64_t n : geometric_subsequence(N, ratio)) {
        if (n < schedule.first_n()) continue;
        DiscrepancyPoint p;
        p.n = n;
        p.y = schedule.y(n);
        EmpiricalMean e = empirical_mean(sample(n, x, p.y, primitive_only), f);
        p.empirical = e.value;
        p.reference = ref;
        p.abs_error = std::fabs(e.value - ref);
        p.indeterminate = e.indeterminate;
        out.push_back(p);
    }
    return out;
}

std::vector<DiscrepancyPoint> discrepancy_vs_height(const Translate& x, std::uint64_t n,
                                                    const std::vector<Rational>& ys, const TestFunction& f) {
    double ref = area_mean(f).value;
    std::vector<DiscrepancyPoint> out;
    for (const auto& y : ys) {
        DiscrepancyPoint p;
        p.n = n;
        p.y = y;
        EmpiricalMean e = empirical_mean(sample(n, x, y, false), f);
        p.empirical = e.value;
        p.reference = ref;
        p.abs_error = std::fabs(e.value - ref);
        p.indeterminate = e.indeterminate;
        out.push_back(p);
    }
    return out;
}

double loglog_slope(const std::vector<double>& ns, const std::vector<double>& values) {
    require(ns.size() == values.size() && ns.size() >= 2, "fit_size", "need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double k = static_cast<double>(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double lx = std::log(ns[i]), ly = std::log(values[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace horo
