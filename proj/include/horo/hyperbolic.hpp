#pragma once

#include <string>
#include <vector>

#include "horo/numth.hpp"

namespace horo {

struct ExactPoint {
    Rational re, im;

    ExactPoint() : re(0), im(1) {}
    ExactPoint(Rational r, Rational i);  // throws unless i > 0

    bool operator==(const ExactPoint& o) const { return re == o.re && im == o.im; }
    bool operator<(const ExactPoint& o) const { return re < o.re || (re == o.re && im < o.im); }
    std::string str() const;  // "re+imi"
};

// Accepts "1/3+1/100i", "2i", "-1/2+3/4i", "0.5+2i".
ExactPoint parse_point(std::string_view s);

struct FloatPoint {
    double re, im;
};

struct IntMatrix2 {
    Integer a = 1, b = 0, c = 0, d = 1;

    static IntMatrix2 identity() { return {}; }
    static IntMatrix2 S() { return {0, -1, 1, 0}; }
    static IntMatrix2 T(const Integer& k = 1) { return {1, k, 0, 1}; }

    Integer det() const { return a * d - b * c; }
    bool is_sl2() const { return det() == 1; }
    IntMatrix2 operator*(const IntMatrix2& o) const;
    bool operator==(const IntMatrix2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    IntMatrix2 adjugate() const { return {d, -b, -c, a}; }  // inverse when det = 1
    std::string str() const;
};

struct RatMatrix2 {
    Rational a = 1, b = 0, c = 0, d = 1;

    RatMatrix2() = default;
    RatMatrix2(Rational a_, Rational b_, Rational c_, Rational d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
    explicit RatMatrix2(const IntMatrix2& m) : a(m.a), b(m.b), c(m.c), d(m.d) {}

    Rational det() const { return a * d - b * c; }
    RatMatrix2 operator*(const RatMatrix2& o) const;
    RatMatrix2 inverse() const;
    bool is_integral() const;
    IntMatrix2 to_int() const;  // requires is_integral()
    std::string str() const;
};

ExactPoint mobius(const IntMatrix2& g, const ExactPoint& z);
ExactPoint mobius(const RatMatrix2& g, const ExactPoint& z);
FloatPoint mobius(const IntMatrix2& g, FloatPoint z);

// One step of a reduction word: either T^shift or S.
struct WordStep {
    bool inversion = false;
    Integer shift = 0;
};

struct ReducedPoint {
    ExactPoint point;
    std::vector<WordStep> word;  // in order of application
    IntMatrix2 matrix;           // product of the word: matrix * z = point

    std::string word_string() const;  // "T^3 S T^-1"
};

IntMatrix2 word_matrix(const std::vector<WordStep>& word);
bool in_fundamental_domain(const ExactPoint& z);

ReducedPoint reduce(const ExactPoint& z);
ExactPoint reduced_point(const ExactPoint& z);  // no word bookkeeping
FloatPoint reduce(FloatPoint z);

Rational orbit_height(const ExactPoint& z);
double orbit_height(FloatPoint z);

// Gamma z lies in C_Y; Y >= 1.
bool in_cusp_neighborhood(const ExactPoint& z, const Rational& Y);

double hyperbolic_distance(const ExactPoint& z, const ExactPoint& w);
double hyperbolic_distance(FloatPoint z, FloatPoint w);

}  // namespace horo
