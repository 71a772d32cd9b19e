#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horo/hyperbolic.hpp"

namespace horo {

// Gamma_n = { g in SL2(Z) : n^2 | c, a = d = +-1 mod n }.
bool gamma_n_contains(std::uint64_t n, const IntMatrix2& g);
// Same conditions, for matrices that may have non-integral entries.
bool gamma_n_contains(std::uint64_t n, const RatMatrix2& g);
bool gamma0_contains(std::uint64_t N, const RatMatrix2& g);

// gamma_k^{+-} = +-(1+kn, 1; -k^2 n^2, 1-kn).
IntMatrix2 gamma_k(std::uint64_t n, std::uint64_t k, bool plus);

// u_{j/n}^{-1} g u_{j/n}.
RatMatrix2 conjugate_by_unipotent(const IntMatrix2& g, std::uint64_t j, std::uint64_t n);

struct NormalizerReport {
    bool holds = true;
    std::vector<IntMatrix2> sample;
    std::vector<RatMatrix2> conjugates;
};
// Conjugates the gamma_k family, T, (1,0;n^2,1) and their pairwise products.
NormalizerReport normalizer_check(std::uint64_t n, std::uint64_t j);
// Same conjugation test against Gamma_0(N); used as a negative control.
std::optional<IntMatrix2> gamma0_normalizer_counterexample(std::uint64_t N, std::uint64_t j, long search = 3);

std::uint64_t index_formula(std::uint64_t n);
std::uint64_t cusp_count_formula(std::uint64_t n);
// |SL2(Z/n^2)| / |image of Gamma_n| by enumerating SL2(Z/n^2).
std::uint64_t index_bruteforce(std::uint64_t n);

struct Cusp {
    Integer m = 1, l = 0;  // m/l, gcd(m, l) = 1, l >= 0; infinity is 1/0
    IntMatrix2 tau;        // tau * infinity = m/l
    Integer width = 1;
    bool simple_type = false;

    bool is_infinity() const { return l == 0; }
    std::string rep() const { return m.get_str() + "/" + l.get_str(); }
};

// Canonical scaling matrix (m, b; l, d) with the smallest non-negative d.
IntMatrix2 scaling_matrix(const Integer& m, const Integer& l);
Cusp make_cusp(std::uint64_t n, const Integer& m, const Integer& l);

// Orbit normal form (d, l mod n^2, m mod d) of the Gamma_n class of m/l.
struct CuspKey {
    Integer d, l, m;
    bool operator==(const CuspKey& o) const { return d == o.d && l == o.l && m == o.m; }
    bool operator<(const CuspKey& o) const;
};
CuspKey cusp_key(std::uint64_t n, const Integer& m, const Integer& l);

std::vector<Cusp> enumerate_cusps(std::uint64_t n);
// Index into enumerate_cusps(n) of the class of m/l.
std::size_t cusp_class(std::uint64_t n, const std::vector<Cusp>& cusps, const Integer& m, const Integer& l);

// Smallest t > 0 with tau u_t tau^{-1} in Gamma_n.
Integer width_by_stabilizer(std::uint64_t n, const Integer& m, const Integer& l);

// Right coset representatives of Gamma_n \ SL2(Z).
std::vector<IntMatrix2> coset_representatives(std::uint64_t n);

struct ConjugationResult {
    RatMatrix2 matrix;  // tau_{hc}^{-1} u_{j/n} tau_c
    Rational lambda;    // (1,1) entry
    Rational width_ratio;  // omega_{hc} / omega_c
    bool upper_triangular = false;
    bool identity_holds = false;  // lambda^2 == width_ratio
};
ConjugationResult conjugation_identity(std::uint64_t n, const Cusp& c, std::uint64_t j);

// Induced map of u_{1/n} on cusp classes.
std::vector<std::size_t> unipotent_cusp_permutation(std::uint64_t n, const std::vector<Cusp>& cusps);

// z = sigma * tau_c * z'' with sigma in Gamma_n.
struct CuspCertificate {
    IntMatrix2 sigma;
    ExactPoint zpp;
};

// The cusp class whose neighbourhood {Im(z'') > Y} contains z, with a certificate.
struct CuspLocation {
    std::size_t cusp_index;
    CuspCertificate certificate;
};
std::optional<CuspLocation> locate_cusp(std::uint64_t n, const std::vector<Cusp>& cusps, const ExactPoint& z,
                                        const Rational& Y);
// Number of cusp classes admitting such a certificate (0 or 1 when Y >= 1).
std::size_t count_cusp_certificates(std::uint64_t n, const std::vector<Cusp>& cusps, const ExactPoint& z,
                                    const Rational& Y);

bool verify_cusp_certificate(std::uint64_t n, const Cusp& c, const ExactPoint& z, const CuspCertificate& cert);

struct TransferResult {
    bool holds = false;
    std::vector<Rational> heights;  // orbit heights of u_{j/n} z
};
// Requires a certificate with Im(z'') > omega_c * Y; then checks every
// u_{j/n} z has orbit height > Y.
TransferResult excursion_transfer_check(std::uint64_t n, const Cusp& c, const Rational& Y, const ExactPoint& z,
                                        const std::optional<CuspCertificate>& cert);

// Volume of the cylinder at c between heights Y and Y' in units of 1/pi.
Rational cylinder_volume(std::uint64_t n, const Cusp& c, const Rational& Y, const Rational& Yp);
// Monte-Carlo estimate of the same volume from coset representatives (absolute,
// i.e. cylinder_volume / pi).
struct VolumeEstimate {
    double value = 0.0, stderr_ = 0.0;
};
VolumeEstimate cylinder_volume_mc(std::uint64_t n, const Cusp& c, const Rational& Y, const Rational& Yp,
                                  std::uint64_t samples, std::uint64_t seed);

}  // namespace horo
