#include "horo/hyperbolic.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "horo/errors.hpp"

namespace horo {

ExactPoint::ExactPoint(Rational r, Rational i) : re(canonical(std::move(r))), im(canonical(std::move(i))) {
    require(im > 0, "im_positive", "point must lie in the upper half-plane");
}

std::string ExactPoint::str() const { return to_string(re) + "+" + to_string(im) + "i"; }

ExactPoint parse_point(std::string_view s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    require(!t.empty() && t.back() == 'i', "bad_point", "point must look like 'x+yi', got '" + std::string(s) + "'");
    t.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    Rational re = 0, im;
    std::string ims = split == std::string::npos ? t : t.substr(split);
    if (split != std::string::npos) re = parse_rational(t.substr(0, split));
    if (ims.empty() || ims == "+") im = 1;
    else if (ims == "-") im = -1;
    else im = parse_rational(ims);
    return ExactPoint(re, im);
}

IntMatrix2 IntMatrix2::operator*(const IntMatrix2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

std::string IntMatrix2::str() const {
    return "[[" + a.get_str() + "," + b.get_str() + "],[" + c.get_str() + "," + d.get_str() + "]]";
}

RatMatrix2 RatMatrix2::operator*(const RatMatrix2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

RatMatrix2 RatMatrix2::inverse() const {
    Rational D = det();
    require(D != 0, "singular", "matrix is singular");
    return {d / D, -b / D, -c / D, a / D};
}

bool RatMatrix2::is_integral() const {
    return a.get_den() == 1 && b.get_den() == 1 && c.get_den() == 1 && d.get_den() == 1;
}

IntMatrix2 RatMatrix2::to_int() const {
    require(is_integral(), "not_integral", "matrix has non-integral entries");
    return {a.get_num(), b.get_num(), c.get_num(), d.get_num()};
}

std::string RatMatrix2::str() const {
    return "[[" + to_string(a) + "," + to_string(b) + "],[" + to_string(c) + "," + to_string(d) + "]]";
}

ExactPoint mobius(const IntMatrix2& g, const ExactPoint& z) { return mobius(RatMatrix2(g), z); }

ExactPoint mobius(const RatMatrix2& g, const ExactPoint& z) {
    require(g.det() > 0, "det_positive", "Mobius action needs det > 0");
    // (az+b)/(cz+d) = (az+b)(c zbar + d)/|cz+d|^2
    Rational u = g.c * z.re + g.d;
    Rational v = g.c * z.im;
    Rational den = u * u + v * v;
    Rational p = g.a * z.re + g.b;
    Rational q = g.a * z.im;
    Rational re = (p * u + q * v) / den;
    Rational im = g.det() * z.im / den;
    return ExactPoint(re, im);
}

FloatPoint mobius(const IntMatrix2& g, FloatPoint z) {
    double a = g.a.get_d(), b = g.b.get_d(), c = g.c.get_d(), d = g.d.get_d();
    double u = c * z.re + d, v = c * z.im;
    double den = u * u + v * v;
    double p = a * z.re + b, q = a * z.im;
    return {(p * u + q * v) / den, (a * d - b * c) * z.im / den};
}

std::string ReducedPoint::word_string() const {
    std::string s;
    for (const auto& w : word) {
        if (!s.empty()) s += ' ';
        if (w.inversion) s += 'S';
        else if (w.shift == 1) s += 'T';
        else s += "T^" + w.shift.get_str();
    }
    return s;
}

IntMatrix2 word_matrix(const std::vector<WordStep>& word) {
    IntMatrix2 m;
    for (const auto& w : word) m = (w.inversion ? IntMatrix2::S() : IntMatrix2::T(w.shift)) * m;
    return m;
}

bool in_fundamental_domain(const ExactPoint& z) {
    if (z.re < Rational(-1, 2) || z.re >= Rational(1, 2)) return false;
    Rational r = z.re * z.re + z.im * z.im;
    if (r < 1) return false;
    if (r == 1 && z.re > 0) return false;
    return true;
}

namespace {

template <bool Track>
ExactPoint reduce_impl(const ExactPoint& z, std::vector<WordStep>* word) {
    static const Rational half(1, 2);
    Rational x = z.re, y = z.im;
    while (true) {
        Integer k = floor_of(x + half);
        if (k != 0) {
            x -= k;
            if constexpr (Track) word->push_back({false, -k});
        }
        Rational r = x * x + y * y;
        if (r < 1) {
            x = -x / r;
            y = y / r;
            if constexpr (Track) word->push_back({true, 0});
            continue;
        }
        if (r == 1 && x > 0) {
            x = -x;
            if constexpr (Track) word->push_back({true, 0});
        }
        break;
    }
    ExactPoint out;
    out.re = x;
    out.im = y;
    return out;
}

}  // namespace

ReducedPoint reduce(const ExactPoint& z) {
    ReducedPoint r;
    r.point = reduce_impl<true>(z, &r.word);
    r.matrix = word_matrix(r.word);
    return r;
}

ExactPoint reduced_point(const ExactPoint& z) { return reduce_impl<false>(z, nullptr); }

FloatPoint reduce(FloatPoint z) {
    double x = z.re, y = z.im;
    for (int it = 0; it < 100000; ++it) {
        double k = std::floor(x + 0.5);
        x -= k;
        double r = x * x + y * y;
        if (r < 1.0) {
            x = -x / r;
            y = y / r;
            continue;
        }
        break;
    }
    return {x, y};
}

Rational orbit_height(const ExactPoint& z) { return reduced_point(z).im; }

double orbit_height(FloatPoint z) { return reduce(z).im; }

bool in_cusp_neighborhood(const ExactPoint& z, const Rational& Y_in) {
    const Rational Y = canonical(Y_in);
    require(Y >= 1, "Y_at_least_1", "cusp neighbourhoods are only offered for Y >= 1");
    if (z.im > Y) return true;
    return orbit_height(z) > Y;
}

namespace {
double acosh_one_plus(double t) { return std::log1p(t + std::sqrt(t * (t + 2.0))); }
}  // namespace

double hyperbolic_distance(const ExactPoint& z, const ExactPoint& w) {
    Rational dx = z.re - w.re, dy = z.im - w.im;
    Rational t = (dx * dx + dy * dy) / (2 * z.im * w.im);
    if (t == 0) return 0.0;
    if (t > Rational(Integer("1000000000000000"))) return log_of(2 * t + 2);
    return acosh_one_plus(to_double(t));
}

double hyperbolic_distance(FloatPoint z, FloatPoint w) {
    double dx = z.re - w.re, dy = z.im - w.im;
    return acosh_one_plus((dx * dx + dy * dy) / (2.0 * z.im * w.im));
}

}  // namespace horo
