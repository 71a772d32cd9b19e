#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horo/sampling.hpp"

namespace horo {

// One point x + j/n + iy of the horoball certificate.
struct WindowEntry {
    std::uint64_t j = 0;
    Integer g;          // gcd(n, m + j)
    Rational Yj;        // g^2 Y
    std::vector<Rational> heights;  // exact orbit height at the translate's centre
    bool in_window = false;         // certified height in (Yj, 2 Yj]
    bool in_cusp = false;           // certified height > Y
};

struct HoroballCertificate {
    Translate x;
    Integer m;
    std::uint64_t n = 1;
    Rational Y, y;  // y = 1/(2 Y n^2)
    bool refused = false;
    std::string refusal;
    std::vector<WindowEntry> entries;
    bool verified = false;
};

// Certifies R_n(x, 1/(2Yn^2)) in C_Y point by point.  Rational x is checked
// at x itself; for an irrational translate the centre height h brackets the
// true one in [h (1 - delta), h / (1 - delta)], delta = radius / y, and the
// whole bracket must clear the window.
HoroballCertificate horoball_criterion(const Translate& x, const Integer& m, std::uint64_t n, const Rational& Y);
// Recomputes every entry from (x, m, n, Y) and compares.
bool verify_horoball_certificate(const HoroballCertificate& cert);

struct PredictedExcursion {
    std::uint64_t n = 0;
    Integer m;
    Rational y;
    Rational r_lo, r_hi;  // r_n = min{psi^-2 y, n^-2 y^-1}/2, bracketed through psi
    HeightBound min_height;
    bool verified = false;  // min_height.lo > r_hi
    double log_ratio = 0.0;  // log(min height) / log log n
};

// Refuses (code "r_n_not_monotone") when r_n decreases anywhere on [N/2, N].
std::vector<PredictedExcursion> predicted_excursions(const Translate& x, const PsiSchedule& psi,
                                                     const DecaySchedule& schedule, std::uint64_t N,
                                                     std::uint64_t n_min = 2);
double r_n_approx(const PsiSchedule& psi, const DecaySchedule& schedule, std::uint64_t n);

struct EcWitness {
    std::uint64_t n = 0;
    Integer m;
    std::uint64_t points_checked = 0;
    bool verified = false;
};
// For every c/n-witness n <= N, checks R_n(x, c/n^2) lies in E_c.
std::vector<EcWitness> everywhere_nonequidistribution_check(const Translate& x, const Rational& c, std::uint64_t N);

// x with partial quotients a_{k+1} = max(1, floor(q_k^(kappa-1))): exponent kappa.
CfDigits kappa_digits(const Rational& kappa);
CfDigits golden_digits();  // [0; 1, 1, 1, ...]
CfDigits sqrt2_minus_1_digits();  // [0; 2, 2, 2, ...]

struct ExponentCheck {
    double expected = 0.0;  // min{2 kappa - beta, beta - 2}
    double fitted = 0.0;
    std::vector<std::uint64_t> witnesses;
    std::vector<double> heights;
    bool within_tolerance = false;
};
// Witnesses of n^-kappa approximability for kappa_digits(kappa), schedule
// y_n = n^-beta, slope of log(min height) against log n.
ExponentCheck excursion_exponent_check(const Rational& kappa, const Rational& beta, std::uint64_t N,
                                       double tolerance = 0.15);

}  // namespace horo
