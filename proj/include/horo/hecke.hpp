#pragma once

#include <cstdint>
#include <vector>

#include "horo/measures.hpp"

namespace horo {

// Kim-Sarnak exponent toward Ramanujan.
inline constexpr double kTheta = 7.0 / 64.0;

struct HeckeCosetSet {
    enum class Kind { classical, double_coset };
    Kind kind = Kind::classical;
    std::uint64_t n = 1;
    // classical: (a, b; 0, d) with ad = n; double_coset: h * gamma with
    // h = diag(n, 1/n), so every rep has det 1.
    std::vector<RatMatrix2> reps;

    // classical: n^{-1/2} sum f(g z); double_coset: mean of f(g z).
    double apply(const TestFunction& f, const ExactPoint& z) const;
    double apply(const TestFunction& f, FloatPoint z) const;
};

HeckeCosetSet classical_cosets(std::uint64_t n);
// Bottom rows of Gamma_0(n^2) \ SL2(Z), indexed by P^1(Z/n^2).
std::vector<IntMatrix2> gamma0_coset_representatives(std::uint64_t N);
HeckeCosetSet double_cosets(std::uint64_t n);
std::uint64_t nu(std::uint64_t n);  // n^2 prod_{p|n} (1 + 1/p)

double classical_hecke_apply(std::uint64_t n, const TestFunction& f, const ExactPoint& z);
double double_coset_apply(std::uint64_t n, const TestFunction& f, const ExactPoint& z);

struct HeckeRelation {
    double lhs = 0.0, rhs = 0.0;                     // n T_{n^2} f(z) and sum_{d|n} nu_d Tt_d f(z)
    double inverted_lhs = 0.0, inverted_rhs = 0.0;   // Tt_n f(z) and its Moebius-inverted form
    bool holds = false;
};
HeckeRelation moebius_relation(std::uint64_t n, const TestFunction& f, const ExactPoint& z, double tol);
bool moebius_relation_check(std::uint64_t n, const TestFunction& f, const ExactPoint& z, double tol);

// int_0^1 |delta_{n,x,y}(f) - mu(f)|^2 dx on a midpoint grid.
double second_moment_direct(std::uint64_t n, const Rational& y, const TestFunction& f, std::uint64_t grid,
                            bool primitive_only = false);

// (1/n) sum_j <f0, Tt_{n_j} f0>, n_j = n / gcd(n, j), by Monte Carlo.
McEstimate second_moment_hecke(std::uint64_t n, const TestFunction& f, std::uint64_t samples, std::uint64_t seed);

// <f, Tt_n g> against mu_M.
McEstimate hecke_inner_product(std::uint64_t n, const TestFunction& f, const TestFunction& g, std::uint64_t samples,
                               std::uint64_t seed);
// <f0, Tt_n f0>.
McEstimate centered_hecke_inner_product(std::uint64_t n, const TestFunction& f, std::uint64_t samples,
                                        std::uint64_t seed);

struct MomentPoint {
    std::uint64_t n = 0;
    Rational y;
    double value = 0.0;
};
std::vector<MomentPoint> moment_decay_curve(const TestFunction& f,
                                            const std::vector<std::pair<std::uint64_t, Rational>>& schedule,
                                            std::uint64_t grid, bool primitive_only = false);

}  // namespace horo
