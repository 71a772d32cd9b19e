#include "horo/io.hpp"

#include <charconv>
#include <cmath>

#include <openssl/evp.h>

#include "horo/errors.hpp"

namespace horo {

json to_json(const Rational& r) { return to_string(r); }
json to_json(const Integer& z) { return z.get_str(); }
json to_json(const ExactPoint& z) { return {{"re", to_string(z.re)}, {"im", to_string(z.im)}}; }
json to_json(const IntMatrix2& g) {
    return json::array({json::array({g.a.get_str(), g.b.get_str()}), json::array({g.c.get_str(), g.d.get_str()})});
}

json to_json(const Translate& x) {
    return {{"center", to_string(x.center())}, {"radius", to_string(x.radius())}, {"label", x.describe()}};
}

Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Integer(j.get<long>()));
    throw PreconditionError("json_type", "expected a rational string, got " + j.dump());
}

Integer integer_from_json(const json& j) {
    if (j.is_string()) return parse_integer(j.get<std::string>());
    if (j.is_number_integer()) return Integer(j.get<long>());
    throw PreconditionError("json_type", "expected an integer, got " + j.dump());
}

ExactPoint point_from_json(const json& j) {
    if (j.is_string()) return parse_point(j.get<std::string>());
    return ExactPoint(rational_from_json(j.at("re")), rational_from_json(j.at("im")));
}

IntMatrix2 matrix_from_json(const json& j) {
    return {integer_from_json(j.at(0).at(0)), integer_from_json(j.at(0).at(1)), integer_from_json(j.at(1).at(0)),
            integer_from_json(j.at(1).at(1))};
}

Translate translate_from_json(const json& j) {
    if (j.is_string()) return Translate::rational(parse_rational(j.get<std::string>()));
    return Translate::interval(rational_from_json(j.at("center")), rational_from_json(j.at("radius")),
                               j.value("label", std::string()));
}

namespace {

std::vector<Integer> integer_list(std::string_view s) {
    std::vector<Integer> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string_view::npos) comma = s.size();
        out.push_back(parse_integer(s.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

Translate parse_translate(std::string_view spec, const Rational& max_radius) {
    if (spec == "golden") return Translate::from_cf(golden_digits(), max_radius);
    if (spec == "sqrt2m1") return Translate::from_cf(sqrt2_minus_1_digits(), max_radius);
    if (spec.rfind("kappa:", 0) == 0) return Translate::from_cf(kappa_digits(parse_rational(spec.substr(6))), max_radius);
    if (spec.rfind("dec:", 0) == 0) return Translate::from_decimal(spec.substr(4));
    if (spec.rfind("cf:", 0) == 0) {
        std::string_view body = spec.substr(3);
        std::size_t semi = body.find(';');
        CfDigits d;
        d.a0 = parse_integer(body.substr(0, semi));
        if (semi != std::string_view::npos) {
            std::string_view rest = body.substr(semi + 1);
            std::size_t bar = rest.find('|');
            d.prefix = integer_list(rest.substr(0, bar));
            if (bar != std::string_view::npos) d.period = integer_list(rest.substr(bar + 1));
        }
        return Translate::from_cf(d, max_radius);
    }
    return Translate::rational(parse_rational(spec));
}

// ---------------------------------------------------------------------------

json certificate_json(const SymmetryWitness& w) {
    json j;
    j["kind"] = "symmetry_witness";
    j["inputs"] = {{"m", to_json(w.m)}, {"k", to_json(w.k)}, {"l", to_json(w.l)},
                   {"n", to_json(w.n)}, {"j", to_json(w.j)}, {"y", to_json(w.y)}};
    j["d"] = to_json(w.d);
    j["a"] = to_json(w.a);
    j["b"] = to_json(w.b);
    j["source"] = to_json(w.source);
    j["image"] = to_json(w.image);
    j["gamma"] = to_json(w.gamma);
    return j;
}

json certificate_json(const HoroballCertificate& c) {
    json j;
    j["kind"] = "horoball_certificate";
    j["inputs"] = {{"x", to_json(c.x)}, {"m", to_json(c.m)}, {"n", c.n}, {"Y", to_json(c.Y)}};
    j["y"] = to_json(c.y);
    j["refused"] = c.refused;
    if (c.refused) j["refusal"] = c.refusal;
    json entries = json::array();
    for (const auto& e : c.entries) {
        json hs = json::array();
        for (const auto& h : e.heights) hs.push_back(to_json(h));
        entries.push_back({{"j", e.j},
                           {"g", to_json(e.g)},
                           {"Yj", to_json(e.Yj)},
                           {"heights", hs},
                           {"in_window", e.in_window},
                           {"in_cusp", e.in_cusp}});
    }
    j["entries"] = entries;
    j["verified"] = c.verified;
    return j;
}

json certificate_json(std::uint64_t n, const Cusp& c, const ExactPoint& z, const CuspCertificate& cert) {
    json j;
    j["kind"] = "cusp_certificate";
    j["n"] = n;
    j["cusp"] = {{"m", to_json(c.m)}, {"l", to_json(c.l)}, {"tau", to_json(c.tau)}, {"width", to_json(c.width)}};
    j["z"] = to_json(z);
    j["sigma"] = to_json(cert.sigma);
    j["zpp"] = to_json(cert.zpp);
    return j;
}

namespace {

void claim(VerifyReport& r, std::string name, bool ok, std::string detail = "") {
    r.claims.push_back({std::move(name), ok, std::move(detail)});
}

void verify_symmetry(const json& j, VerifyReport& r) {
    const json& in = j.at("inputs");
    Integer m = integer_from_json(in.at("m")), k = integer_from_json(in.at("k")), l = integer_from_json(in.at("l"));
    Integer n = integer_from_json(in.at("n")), jj = integer_from_json(in.at("j"));
    Rational y = rational_from_json(in.at("y"));
    Integer d = integer_from_json(j.at("d")), a = integer_from_json(j.at("a")), b = integer_from_json(j.at("b"));
    ExactPoint source = point_from_json(j.at("source")), image = point_from_json(j.at("image"));
    IntMatrix2 g = matrix_from_json(j.at("gamma"));

    bool pre = k >= 1 && l >= 1 && n >= 1 && gcd(m, k * l) == 1 && n % l == 0 && gcd(k, n) == 1 && jj >= 0 &&
               jj < n && y > 0;
    claim(r, "preconditions", pre);
    if (!pre) return;
    claim(r, "source_point", source == ExactPoint(make_rational(m, k * l) + make_rational(jj, n), y));
    claim(r, "d_definition", d == gcd(m * (n / l) + jj * k, n));
    claim(r, "bezout_identity", d >= 1 && a * (n / d) + b * k == 1);
    claim(r, "gamma_in_SL2", g.det() == 1, "det = " + g.det().get_str());
    claim(r, "gamma_maps_source_to_image", g.det() == 1 && mobius(g, source) == image);
    claim(r, "height_covariance", image.im * Rational(k * k * n * n) * y == Rational(d * d));
    claim(r, "reduce_equality", reduced_point(source) == reduced_point(image));
    if (d >= 1 && a * (n / d) + b * k == 1) {
        SymmetryWitness fresh = symmetry_point(m, k, l, n, jj, y);
        claim(r, "image_formula", fresh.image == image);
    }
}

void verify_horoball(const json& j, VerifyReport& r) {
    const json& in = j.at("inputs");
    Translate x = translate_from_json(in.at("x"));
    Integer m = integer_from_json(in.at("m"));
    std::uint64_t n = in.at("n").get<std::uint64_t>();
    Rational Y = rational_from_json(in.at("Y"));
    HoroballCertificate fresh = horoball_criterion(x, m, n, Y);
    claim(r, "hypothesis", !fresh.refused, fresh.refusal);
    claim(r, "height", fresh.y == rational_from_json(j.at("y")));
    const json& entries = j.at("entries");
    claim(r, "entry_count", entries.size() == fresh.entries.size());
    for (std::size_t i = 0; i < std::min(entries.size(), fresh.entries.size()); ++i) {
        const json& e = entries[i];
        const WindowEntry& f = fresh.entries[i];
        bool same = e.at("j").get<std::uint64_t>() == f.j && integer_from_json(e.at("g")) == f.g &&
                    rational_from_json(e.at("Yj")) == f.Yj && e.at("heights").size() == f.heights.size();
        for (std::size_t t = 0; same && t < f.heights.size(); ++t)
            same = rational_from_json(e.at("heights")[t]) == f.heights[t];
        same = same && e.at("in_window").get<bool>() == f.in_window && e.at("in_cusp").get<bool>() == f.in_cusp;
        claim(r, "window[" + std::to_string(f.j) + "]", same && f.in_window && f.in_cusp);
    }
    claim(r, "verified", j.at("verified").get<bool>() && fresh.verified);
}

void verify_cusp(const json& j, VerifyReport& r) {
    std::uint64_t n = j.at("n").get<std::uint64_t>();
    const json& c = j.at("cusp");
    Integer m = integer_from_json(c.at("m")), l = integer_from_json(c.at("l"));
    IntMatrix2 tau = matrix_from_json(c.at("tau"));
    Integer width = integer_from_json(c.at("width"));
    ExactPoint z = point_from_json(j.at("z")), zpp = point_from_json(j.at("zpp"));
    IntMatrix2 sigma = matrix_from_json(j.at("sigma"));
    Integer nn(static_cast<unsigned long>(n));
    claim(r, "tau_in_SL2", tau.det() == 1);
    claim(r, "tau_maps_infinity_to_cusp", tau.a * l == tau.c * m);
    Integer g = gcd(nn, l);
    claim(r, "width", width == nn * nn / (g * g));
    claim(r, "sigma_in_Gamma_n", sigma.det() == 1 && gamma_n_contains(n, sigma));
    claim(r, "reproduces_z", sigma.det() == 1 && tau.det() == 1 && mobius(sigma * tau, zpp) == z);
}

}  // namespace

VerifyReport verify_certificate(const json& cert) {
    VerifyReport r;
    try {
        r.kind = cert.at("kind").get<std::string>();
        if (r.kind == "symmetry_witness")
            verify_symmetry(cert, r);
        else if (r.kind == "horoball_certificate")
            verify_horoball(cert, r);
        else if (r.kind == "cusp_certificate")
            verify_cusp(cert, r);
        else
            claim(r, "kind", false, "unknown certificate kind '" + r.kind + "'");
    } catch (const std::exception& e) {
        claim(r, "schema", false, e.what());
    }
    r.pass = !r.claims.empty();
    for (const auto& c : r.claims) r.pass = r.pass && c.ok;
    return r;
}

json to_json(const VerifyReport& r) {
    json claims = json::array();
    for (const auto& c : r.claims) {
        json e = {{"claim", c.claim}, {"ok", c.ok}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        claims.push_back(e);
    }
    return {{"kind", r.kind}, {"pass", r.pass}, {"claims", claims}};
}

// ---------------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string provenance_exact() { return "exact"; }
std::string provenance_quadrature(double err) { return "quadrature±" + format_double(err); }
std::string provenance_mc(double s) { return "mc±" + format_double(s); }

json to_json(const ExperimentRecord& r) {
    auto quantities = [](const std::vector<Quantity>& qs) {
        json o = json::object();
        for (const auto& q : qs) o[q.name] = {{"value", q.value}, {"provenance", q.provenance}};
        return o;
    };
    json j;
    j["id"] = r.id;
    j["type"] = r.type;
    j["parameters"] = r.parameters;
    j["values"] = quantities(r.values);
    j["references"] = quantities(r.references);
    j["errors"] = r.errors;
    j["seed"] = r.seed;
    if (r.runtime_seconds) j["runtime_seconds"] = *r.runtime_seconds;
    if (r.table) j["table"] = {{"columns", r.table->columns}, {"rows", r.table->rows}};
    if (r.certificate) j["certificate"] = *r.certificate;
    return j;
}

std::string content_hash(const std::string& bytes) {
    std::string blob = "blob " + std::to_string(bytes.size()) + '\0' + bytes;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("sha1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

}  // namespace horo
