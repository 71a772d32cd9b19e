#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "horo/congruence.hpp"

namespace horo {

struct SymmetryWitness {
    Integer m, k, l, n, j;
    Rational y;
    Integer d;     // gcd(m n/l + j k, n)
    Integer a, b;  // a (n/d) + b k = 1, 0 <= b < n/d
    ExactPoint source;  // m/(kl) + j/n + iy
    ExactPoint image;
    IntMatrix2 gamma;   // gamma * source = image

    // Re-derives every claim from the stored fields; returns the name of the
    // first violated identity, or "" when everything holds.
    std::string check() const;
};

SymmetryWitness symmetry_point(const Integer& m, const Integer& k, const Integer& l, const Integer& n,
                               const Integer& j, const Rational& y);

// Gamma(j/n + iy) = Gamma(-jbar/n + i/(n^2 y)) for gcd(j, n) = 1, as reduce-equality.
bool classical_symmetry_holds(const Integer& j, const Integer& n, const Rational& y);

// gcd(n^2, q) | n.
bool in_Nq(const Integer& q, const Integer& n);

struct DecompositionPart {
    Rational x;  // in [0, 1)
    Rational y;
};

// d | n -> (x_d, d^2/(k^2 n^2 y)).
std::map<std::uint64_t, DecompositionPart> decompose_rational_sampleset(const Integer& p, const Integer& q,
                                                                        std::uint64_t n, const Rational& y);
// (x', 1/(q^2 n^2 y)).
DecompositionPart primitive_symmetry(const Integer& p, const Integer& q, std::uint64_t n, const Rational& y);

// Sorted reduced points of R_n(x, y) (or R^pr_n).
std::vector<ExactPoint> reduced_multiset(std::uint64_t n, const Rational& x, const Rational& y, bool primitive_only);
std::vector<ExactPoint> reduced_union(const std::map<std::uint64_t, DecompositionPart>& parts, std::uint64_t n);

bool verify_rational_decomposition(const Integer& p, const Integer& q, std::uint64_t n, const Rational& y);
bool verify_primitive_symmetry(const Integer& p, const Integer& q, std::uint64_t n, const Rational& y);

// Gamma_n w1 = Gamma_n w2: returns sigma in Gamma_n with sigma w2 = w1.
std::optional<IntMatrix2> gamma_n_equivalence(std::uint64_t n, const ExactPoint& w1, const ExactPoint& w2);

// d | n -> x'_{c,d}; the heights are d^2 Im(z')/omega_c.
std::map<std::uint64_t, DecompositionPart> simple_type_decomposition(std::uint64_t n, const ExactPoint& z,
                                                                     const Cusp& c, const ExactPoint& zp);
bool verify_simple_type_decomposition(std::uint64_t n, const ExactPoint& z, const Cusp& c, const ExactPoint& zp);

}  // namespace horo
