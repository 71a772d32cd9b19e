#include "horo/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "horo/errors.hpp"
#include "horo/hecke.hpp"
#include "horo/parallel.hpp"

namespace horo {

namespace {

enum class FieldKind { integer, rational, string, boolean };

struct Field {
    std::string name;
    FieldKind kind;
    bool required = false;
    json fallback = nullptr;
    std::string help;
};

using Schema = std::vector<Field>;

Field req(std::string name, FieldKind k, std::string help) { return {std::move(name), k, true, nullptr, std::move(help)}; }
Field opt(std::string name, FieldKind k, json fallback, std::string help) {
    return {std::move(name), k, false, std::move(fallback), std::move(help)};
}

const std::map<std::string, Schema>& schemas() {
    using K = FieldKind;
    static const std::map<std::string, Schema> s = {
        {"reduce", {req("point", K::string, "point such as 1/3+1/100i")}},
        {"sample",
         {req("n", K::integer, "sample size"), opt("x", K::string, "0", "translate spec"),
          opt("y", K::rational, nullptr, "height"), opt("alpha", K::rational, nullptr, "y = c n^-alpha"),
          opt("c", K::rational, "1", "constant in y = c n^-alpha"), opt("primitive", K::boolean, false, "primitive points only")}},
        {"equidist",
         {req("n", K::integer, "sample size"), opt("x", K::string, "0", "translate spec"),
          opt("y", K::rational, nullptr, "height"), opt("alpha", K::rational, nullptr, "y = c n^-alpha"),
          opt("c", K::rational, "1", "constant in y = c n^-alpha"), opt("f", K::string, "band:1.2:2", "test function"),
          opt("reference", K::string, "area", "area | horocycle:Y | nu:m:Y"),
          opt("grid", K::integer, 8192, "grid for horocycle references"),
          opt("primitive", K::boolean, false, "primitive points only")}},
        {"symmetry",
         {req("m", K::integer, "numerator"), req("k", K::integer, "k, coprime to n"), req("l", K::integer, "l, divides n"),
          req("n", K::integer, "n"), req("j", K::integer, "0 <= j < n"), req("y", K::rational, "height")}},
        {"cusps",
         {req("n", K::integer, "level"), opt("point", K::string, nullptr, "locate this point"),
          opt("Y", K::rational, "1", "cusp neighbourhood height for --point")}},
        {"index", {req("n", K::integer, "level"), opt("brute", K::boolean, false, "also enumerate SL2(Z/n^2)")}},
        {"excursion",
         {req("N", K::integer, "largest n"), opt("x", K::string, "kappa:2", "translate spec"),
          opt("psi", K::string, "n_log_n:1", "n_log_n:c | c_over_n:c | power:c:kappa"),
          opt("schedule", K::string, "log_power:1:1", "log_power:c:beta | power:c:alpha"),
          opt("n_min", K::integer, 3, "smallest n")}},
        {"moment",
         {req("n", K::integer, "n"), opt("y", K::rational, "1/1000", "height"),
          opt("f", K::string, "band:1.2:2", "test function"), opt("grid", K::integer, 2000, "midpoint grid"),
          opt("samples", K::integer, 100000, "Monte Carlo samples"), opt("primitive", K::boolean, false, "primitive variant")}},
        {"hecke",
         {req("n", K::integer, "degree"), req("point", K::string, "point"), opt("f", K::string, "band:1.2:2", "test function"),
          opt("kind", K::string, "classical", "classical | double | relation")}},
        {"ec",
         {req("N", K::integer, "largest n"), opt("x", K::string, "golden", "translate spec"), opt("c", K::rational, "1", "c"),
          opt("mc_samples", K::integer, 0, "Monte Carlo samples for mu(E_c)")}},
        {"horoball",
         {req("x", K::string, "translate spec"), req("m", K::integer, "m"), req("n", K::integer, "n"),
          req("Y", K::rational, "Y >= 1")}},
    };
    return s;
}

std::string kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::integer: return "integer";
        case FieldKind::rational: return "rational";
        case FieldKind::string: return "string";
        case FieldKind::boolean: return "boolean";
    }
    return "";
}

// Raw JSON (or CLI string) to a canonical JSON value; throws on mismatch.
json coerce(const json& v, FieldKind k) {
    switch (k) {
        case FieldKind::integer:
            if (v.is_number_integer()) return v;
            if (v.is_string()) return json(parse_integer(v.get<std::string>()).get_str());
            break;
        case FieldKind::rational:
            if (v.is_number_integer()) return json(std::to_string(v.get<long>()));
            if (v.is_number_float()) return json(to_string(parse_rational(v.dump())));
            if (v.is_string()) return json(to_string(parse_rational(v.get<std::string>())));
            break;
        case FieldKind::string:
            if (v.is_string()) return v;
            break;
        case FieldKind::boolean:
            if (v.is_boolean()) return v;
            if (v.is_string() && (v == "true" || v == "false")) return json(v == "true");
            break;
    }
    throw PreconditionError("schema", "expected " + kind_name(k));
}

struct Params {
    json p;
    Integer integer(const std::string& k) const { return integer_from_json(p.at(k)); }
    std::uint64_t u64(const std::string& k) const {
        Integer v = integer(k);
        require(v >= 0 && v.fits_ulong_p(), "range", "'" + k + "' must be a non-negative machine integer");
        return v.get_ui();
    }
    Rational rational(const std::string& k) const { return rational_from_json(p.at(k)); }
    std::string str(const std::string& k) const { return p.at(k).get<std::string>(); }
    bool flag(const std::string& k) const { return p.at(k).get<bool>(); }
    bool has(const std::string& k) const { return p.contains(k) && !p.at(k).is_null(); }
};

json normalize(const std::string& type, const json& raw) {
    json out = json::object();
    for (const auto& f : schemas().at(type)) {
        if (raw.contains(f.name) && !raw.at(f.name).is_null())
            out[f.name] = coerce(raw.at(f.name), f.kind);
        else
            out[f.name] = f.fallback.is_null() ? json(nullptr) : coerce(f.fallback, f.kind);
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

std::string provenance_of(const MeanEstimate& m) {
    if (m.provenance == "exact") return provenance_exact();
    if (m.provenance == "mc") return provenance_mc(m.error_estimate);
    return provenance_quadrature(m.error_estimate);
}

Rational height_param(const Params& P, std::uint64_t n) {
    if (P.has("y")) return P.rational("y");
    require(P.has("alpha"), "missing_height", "give either 'y' or 'alpha'");
    return DecaySchedule::power(P.rational("c"), P.rational("alpha")).y(n);
}

Translate translate_param(const Params& P, const std::string& key, const Rational& max_radius) {
    return parse_translate(P.str(key), max_radius);
}

PsiSchedule psi_param(const std::string& s) {
    auto p = split(s, ':');
    require(!p.empty(), "bad_psi", "empty psi spec");
    if (p[0] == "n_log_n" && p.size() <= 2) return PsiSchedule::n_log_n(p.size() == 2 ? parse_rational(p[1]) : Rational(1));
    if (p[0] == "c_over_n" && p.size() == 2) return PsiSchedule::c_over_n(parse_rational(p[1]));
    if (p[0] == "power" && p.size() == 3) return PsiSchedule::power(parse_rational(p[1]), parse_rational(p[2]));
    throw PreconditionError("bad_psi", "unknown psi spec '" + s + "'");
}

DecaySchedule schedule_param(const std::string& s) {
    auto p = split(s, ':');
    if (p.size() == 3 && p[0] == "log_power") return DecaySchedule::log_power(parse_rational(p[1]), parse_rational(p[2]));
    if (p.size() == 3 && p[0] == "power") return DecaySchedule::power(parse_rational(p[1]), parse_rational(p[2]));
    throw PreconditionError("bad_schedule", "unknown schedule spec '" + s + "'");
}

ReferenceMeasure reference_param(const std::string& s, std::uint64_t grid) {
    auto p = split(s, ':');
    ReferenceMeasure r;
    r.grid = grid;
    if (p.size() == 1 && p[0] == "area") return r;
    if (p.size() == 2 && p[0] == "horocycle") {
        r.kind = ReferenceMeasure::Kind::horocycle;
        r.Y = parse_rational(p[1]);
        return r;
    }
    if (p.size() == 3 && p[0] == "nu") {
        r.kind = ReferenceMeasure::Kind::nu;
        r.m = parse_integer(p[1]).get_ui();
        r.Y = parse_rational(p[2]);
        return r;
    }
    throw PreconditionError("bad_reference", "unknown reference '" + s + "'");
}

using Runner = std::function<void(const Params&, std::uint64_t, ExperimentRecord&)>;

void exp_reduce(const Params& P, std::uint64_t, ExperimentRecord& r) {
    ExactPoint z = parse_point(P.str("point"));
    ReducedPoint w = reduce(z);
    r.values.push_back({"reduced", to_json(w.point), provenance_exact()});
    r.values.push_back({"word", w.word_string(), provenance_exact()});
    r.values.push_back({"matrix", to_json(w.matrix), provenance_exact()});
    r.values.push_back({"height", to_json(w.point.im), provenance_exact()});
}

void exp_sample(const Params& P, std::uint64_t, ExperimentRecord& r) {
    std::uint64_t n = P.u64("n");
    Rational y = height_param(P, n);
    SampleSet s = sample(n, translate_param(P, "x", y / 1000000), y, P.flag("primitive"));
    Table t{{"j", "re", "im", "reduced_re", "reduced_im", "height"}, {}};
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        ExactPoint w = reduced_point(s.points[i]);
        t.rows.push_back({std::to_string(s.indices[i]), to_string(s.points[i].re), to_string(s.points[i].im),
                          to_string(w.re), to_string(w.im), to_string(w.im)});
    }
    r.values.push_back({"count", s.size(), provenance_exact()});
    r.values.push_back({"y", to_json(y), provenance_exact()});
    r.table = std::move(t);
}

void exp_equidist(const Params& P, std::uint64_t, ExperimentRecord& r) {
    std::uint64_t n = P.u64("n");
    Rational y = height_param(P, n);
    TestFunction f = TestFunction::parse(P.str("f"));
    SampleSet s = sample(n, translate_param(P, "x", y / 1000000), y, P.flag("primitive"));
    EmpiricalMean e = empirical_mean(s, f);
    MeanEstimate ref = reference_param(P.str("reference"), P.u64("grid")).mean(f);
    r.values.push_back({"empirical", e.value, s.exact() ? provenance_exact() : provenance_quadrature(e.hi - e.lo)});
    r.values.push_back({"count", e.count, provenance_exact()});
    r.values.push_back({"indeterminate", e.indeterminate, provenance_exact()});
    r.values.push_back({"y", to_json(y), provenance_exact()});
    r.references.push_back({"reference", ref.value, provenance_of(ref)});
    r.values.push_back({"abs_error", std::fabs(e.value - ref.value), provenance_of(ref)});
}

void exp_symmetry(const Params& P, std::uint64_t, ExperimentRecord& r) {
    SymmetryWitness w = symmetry_point(P.integer("m"), P.integer("k"), P.integer("l"), P.integer("n"), P.integer("j"),
                                       P.rational("y"));
    r.values.push_back({"source", to_json(w.source), provenance_exact()});
    r.values.push_back({"image", to_json(w.image), provenance_exact()});
    r.values.push_back({"gamma", to_json(w.gamma), provenance_exact()});
    std::string bad = w.check();
    r.values.push_back({"check", bad.empty() ? "pass" : bad, provenance_exact()});
    if (!bad.empty()) r.errors.push_back("identity violated: " + bad);
    r.certificate = certificate_json(w);
}

void exp_cusps(const Params& P, std::uint64_t, ExperimentRecord& r) {
    std::uint64_t n = P.u64("n");
    auto cusps = enumerate_cusps(n);
    Table t{{"index", "cusp", "width", "simple_type", "tau"}, {}};
    for (std::size_t i = 0; i < cusps.size(); ++i)
        t.rows.push_back({std::to_string(i), cusps[i].rep(), cusps[i].width.get_str(),
                          cusps[i].simple_type ? "true" : "false", cusps[i].tau.str()});
    r.values.push_back({"count", cusps.size(), provenance_exact()});
    r.references.push_back({"count_formula", cusp_count_formula(n), provenance_exact()});
    r.table = std::move(t);
    if (P.has("point")) {
        ExactPoint z = parse_point(P.str("point"));
        auto loc = locate_cusp(n, cusps, z, P.rational("Y"));
        if (!loc) {
            r.values.push_back({"located", false, provenance_exact()});
        } else {
            r.values.push_back({"located", true, provenance_exact()});
            r.values.push_back({"cusp", cusps[loc->cusp_index].rep(), provenance_exact()});
            r.certificate = certificate_json(n, cusps[loc->cusp_index], z, loc->certificate);
        }
    }
}

void exp_index(const Params& P, std::uint64_t, ExperimentRecord& r) {
    std::uint64_t n = P.u64("n");
    r.values.push_back({"index", index_formula(n), provenance_exact()});
    r.values.push_back({"cusps", enumerate_cusps(n).size(), provenance_exact()});
    r.references.push_back({"cusp_count_formula", cusp_count_formula(n), provenance_exact()});
    if (P.flag("brute")) r.references.push_back({"index_bruteforce", index_bruteforce(n), provenance_exact()});
}

void exp_excursion(const Params& P, std::uint64_t, ExperimentRecord& r) {
    std::uint64_t N = P.u64("N");
    PsiSchedule psi = psi_param(P.str("psi"));
    DecaySchedule sched = schedule_param(P.str("schedule"));
    Translate x = translate_param(P, "x", sched.y(N) / 1000000);
    auto rows = predicted_excursions(x, psi, sched, N, P.u64("n_min"));
    Table t{{"n", "m", "y", "r_lo", "r_hi", "min_height_lo", "min_height_hi", "verified", "log_ratio"}, {}};
    bool all = true;
    double best = -INFINITY;
    for (const auto& e : rows) {
        t.rows.push_back({std::to_string(e.n), e.m.get_str(), to_string(e.y), to_string(e.r_lo), to_string(e.r_hi),
                          to_string(e.min_height.lo), to_string(e.min_height.hi), e.verified ? "true" : "false",
                          format_double(e.log_ratio)});
        all = all && e.verified;
        if (!std::isnan(e.log_ratio)) best = std::max(best, e.log_ratio);
    }
    r.values.push_back({"witnesses", rows.size(), provenance_exact()});
    r.values.push_back({"all_verified", all, provenance_exact()});
    r.values.push_back({"max_log_ratio", std::isfinite(best) ? json(best) : json(nullptr), provenance_exact()});
    r.table = std::move(t);
}

void exp_moment(const Params& P, std::uint64_t seed, ExperimentRecord& r) {
    std::uint64_t n = P.u64("n"), grid = P.u64("grid");
    Rational y = P.rational("y");
    TestFunction f = TestFunction::parse(P.str("f"));
    double direct = second_moment_direct(n, y, f, grid, P.flag("primitive"));
    double coarse = second_moment_direct(n, y, f, std::max<std::uint64_t>(1, grid / 2), P.flag("primitive"));
    McEstimate h = second_moment_hecke(n, f, P.u64("samples"), seed);
    std::uint64_t reps = 0;
    for (std::uint64_t e : divisors(n)) reps += nu(e);
    double diff = std::fabs(direct - h.mean);
    double c_fit = std::max(0.0, diff - 3 * h.stderr_) / (0.5 * std::sqrt(to_double(y)));
    r.values.push_back({"direct", direct, provenance_quadrature(std::fabs(direct - coarse))});
    r.values.push_back({"hecke", h.mean, provenance_mc(h.stderr_)});
    r.values.push_back({"abs_difference", diff, provenance_mc(h.stderr_)});
    r.values.push_back({"C_fit", c_fit, provenance_mc(h.stderr_)});
    Table t{{"n", "y", "estimate", "stderr", "reps_count"}, {}};
    t.rows.push_back({std::to_string(n), to_string(y), format_double(direct), format_double(std::fabs(direct - coarse)),
                      std::to_string(n)});
    t.rows.push_back({std::to_string(n), to_string(y), format_double(h.mean), format_double(h.stderr_),
                      std::to_string(reps)});
    r.table = std::move(t);
}

void exp_hecke(const Params& P, std::uint64_t, ExperimentRecord& r) {
    std::uint64_t n = P.u64("n");
    ExactPoint z = parse_point(P.str("point"));
    TestFunction f = TestFunction::parse(P.str("f"));
    std::string kind = P.str("kind");
    Table t{{"n", "y", "estimate", "stderr", "reps_count"}, {}};
    auto row = [&](double v, std::size_t reps) {
        t.rows.push_back({std::to_string(n), to_string(z.im), format_double(v), "0", std::to_string(reps)});
    };
    if (kind == "classical") {
        HeckeCosetSet cs = classical_cosets(n);
        double v = cs.apply(f, z);
        r.values.push_back({"T_n", v, provenance_exact()});
        row(v, cs.reps.size());
    } else if (kind == "double") {
        HeckeCosetSet cs = double_cosets(n);
        double v = cs.apply(f, z);
        r.values.push_back({"Tt_n", v, provenance_exact()});
        row(v, cs.reps.size());
    } else if (kind == "relation") {
        HeckeRelation h = moebius_relation(n, f, z, 1e-9);
        r.values.push_back({"n_T_n2", h.lhs, provenance_exact()});
        r.values.push_back({"sum_nu_d_Tt_d", h.rhs, provenance_exact()});
        r.values.push_back({"Tt_n", h.inverted_lhs, provenance_exact()});
        r.values.push_back({"moebius_form", h.inverted_rhs, provenance_exact()});
        r.values.push_back({"holds", h.holds, provenance_exact()});
        row(h.lhs, sigma1(n * n));
        if (!h.holds) r.errors.push_back("Hecke relation violated beyond 1e-9");
    } else {
        throw PreconditionError("bad_kind", "kind must be classical, double or relation");
    }
    r.table = std::move(t);
}

void exp_ec(const Params& P, std::uint64_t seed, ExperimentRecord& r) {
    std::uint64_t N = P.u64("N");
    Rational c = P.rational("c");
    check_Ec_parameter(c);
    Rational nn(Integer(static_cast<unsigned long>(N)));
    Translate x = translate_param(P, "x", c / (nn * nn) / 1000000);
    auto ws = everywhere_nonequidistribution_check(x, c, N);
    Table t{{"n", "m", "points_checked", "verified"}, {}};
    bool all = true;
    for (const auto& w : ws) {
        t.rows.push_back({std::to_string(w.n), w.m.get_str(), std::to_string(w.points_checked),
                          w.verified ? "true" : "false"});
        all = all && w.verified;
    }
    r.values.push_back({"witnesses", ws.size(), provenance_exact()});
    r.values.push_back({"all_verified", all, provenance_exact()});
    std::uint64_t samples = P.u64("mc_samples");
    if (samples > 0) {
        double cd = to_double(c);
        McEstimate m = mc_integrate([&](FloatPoint z) { return in_Ec(z, cd) ? 1.0 : 0.0; }, samples, seed);
        r.values.push_back({"mu_Ec", m.mean, provenance_mc(m.stderr_)});
        if (c == 1) {
            double bound = 1.0 - 3.0 / std::numbers::pi * (0.25 - 2.0 / 9.0);
            r.references.push_back({"area_bound", bound, provenance_exact()});
        }
    }
    r.table = std::move(t);
}

void exp_horoball(const Params& P, std::uint64_t, ExperimentRecord& r) {
    std::uint64_t n = P.u64("n");
    Rational Y = P.rational("Y");
    Rational nn(Integer(static_cast<unsigned long>(n)));
    Translate x = translate_param(P, "x", 1 / (2 * Y * nn * nn) / 1000000);
    HoroballCertificate c = horoball_criterion(x, P.integer("m"), n, Y);
    r.values.push_back({"refused", c.refused, provenance_exact()});
    if (c.refused) r.errors.push_back("refused: " + c.refusal);
    r.values.push_back({"verified", c.verified, provenance_exact()});
    r.certificate = certificate_json(c);
}

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> m = {
        {"reduce", exp_reduce},     {"sample", exp_sample},   {"equidist", exp_equidist}, {"symmetry", exp_symmetry},
        {"cusps", exp_cusps},       {"index", exp_index},     {"excursion", exp_excursion}, {"moment", exp_moment},
        {"hecke", exp_hecke},       {"ec", exp_ec},           {"horoball", exp_horoball},
    };
    return m;
}

}  // namespace

std::vector<std::string> experiment_types() {
    std::vector<std::string> out;
    for (const auto& [k, v] : schemas()) out.push_back(k);
    return out;
}

std::vector<std::string> validate_params(const std::string& type, const json& params) {
    std::vector<std::string> errs;
    auto it = schemas().find(type);
    if (it == schemas().end()) return {"type: unknown experiment type '" + type + "'"};
    if (!params.is_object()) return {"params: expected an object"};
    for (const auto& [k, v] : params.items()) {
        bool known = false;
        for (const auto& f : it->second) known = known || f.name == k;
        if (!known) errs.push_back("params." + k + ": unknown field");
    }
    for (const auto& f : it->second) {
        if (!params.contains(f.name) || params.at(f.name).is_null()) {
            if (f.required) errs.push_back("params." + f.name + ": required " + kind_name(f.kind) + " missing");
            continue;
        }
        try {
            coerce(params.at(f.name), f.kind);
        } catch (const std::exception& e) {
            errs.push_back("params." + f.name + ": " + e.what());
        }
    }
    return errs;
}

ExperimentRecord run_experiment(const std::string& id, const std::string& type, const json& params,
                                std::uint64_t seed, bool timing) {
    ExperimentRecord r;
    r.id = id;
    r.type = type;
    r.seed = seed;
    r.parameters = params;
    r.errors = validate_params(type, params);
    if (!r.errors.empty()) return r;
    auto t0 = std::chrono::steady_clock::now();
    try {
        Params P{normalize(type, params)};
        r.parameters = P.p;
        runners().at(type)(P, seed, r);
    } catch (const PreconditionError& e) {
        r.errors.push_back(std::string(e.code()) + ": " + e.what());
    } catch (const std::exception& e) {
        r.errors.push_back(e.what());
    }
    if (timing) r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << bytes;
}

std::string table_csv(const Table& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

json emit(const json& config, std::uint64_t seed, const std::vector<ExperimentRecord>& recs,
          const std::string& out_dir) {
    json records = json::array();
    for (const auto& r : recs) records.push_back(to_json(r));
    json outputs = json::array();
    std::string records_bytes = records.dump(2) + "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / "records.json", records_bytes);
    }
    outputs.push_back({{"file", "records.json"}, {"sha1", content_hash(records_bytes)}});
    for (const auto& r : recs) {
        if (!r.table) continue;
        std::string bytes = table_csv(*r.table);
        std::string name = r.id + ".csv";
        if (!out_dir.empty()) write_file(std::filesystem::path(out_dir) / name, bytes);
        outputs.push_back({{"file", name}, {"sha1", content_hash(bytes)}});
    }
    json manifest = {{"config_sha1", content_hash(config.dump())},
                     {"seed", seed},
                     {"experiments", recs.size()},
                     {"failed", std::count_if(recs.begin(), recs.end(), [](const ExperimentRecord& r) { return !r.ok(); })},
                     {"outputs", outputs}};
    if (!out_dir.empty()) write_file(std::filesystem::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

}  // namespace

RunResult run(const json& config, const std::string& out_dir, bool timing) {
    RunResult res;
    auto& errs = res.config_errors;
    if (!config.is_object()) errs.push_back("config: expected an object");
    std::uint64_t seed = 0;
    if (errs.empty()) {
        for (const auto& [k, v] : config.items())
            if (k != "seed" && k != "threads" && k != "experiments") errs.push_back(k + ": unknown field");
        if (config.contains("seed")) {
            if (config["seed"].is_number_unsigned() || (config["seed"].is_number_integer() && config["seed"] >= 0))
                seed = config["seed"].get<std::uint64_t>();
            else
                errs.push_back("seed: expected a non-negative integer");
        }
        if (config.contains("threads") && !(config["threads"].is_number_integer() && config["threads"] >= 1))
            errs.push_back("threads: expected a positive integer");
        if (!config.contains("experiments") || !config["experiments"].is_array())
            errs.push_back("experiments: required array missing");
    }
    if (errs.empty()) {
        std::map<std::string, int> ids;
        const json& exps = config["experiments"];
        for (std::size_t i = 0; i < exps.size(); ++i) {
            std::string where = "experiments[" + std::to_string(i) + "]";
            const json& e = exps[i];
            if (!e.is_object()) {
                errs.push_back(where + ": expected an object");
                continue;
            }
            if (!e.contains("id") || !e["id"].is_string()) errs.push_back(where + ".id: required string missing");
            else if (ids[e["id"].get<std::string>()]++) errs.push_back(where + ".id: duplicate id");
            if (!e.contains("type") || !e["type"].is_string())
                errs.push_back(where + ".type: required string missing");
            else
                for (const auto& m : validate_params(e["type"].get<std::string>(),
                                                     e.contains("params") ? e["params"] : json::object()))
                    errs.push_back(where + "." + m);
            for (const auto& [k, v] : e.items())
                if (k != "id" && k != "type" && k != "params" && k != "seed") errs.push_back(where + "." + k + ": unknown field");
        }
    }
    if (!errs.empty()) {
        res.status = 2;
        return res;
    }
    if (config.contains("threads")) set_default_threads(config["threads"].get<unsigned>());

    for (const json& e : config["experiments"]) {
        std::uint64_t s = e.contains("seed") && e["seed"].is_number_integer() ? e["seed"].get<std::uint64_t>() : seed;
        json params = e.contains("params") ? e["params"] : json::object();
        ExperimentRecord r = run_experiment(e["id"].get<std::string>(), e["type"].get<std::string>(), params, s, timing);
        if (!r.ok()) res.status = 1;
        res.records.push_back(std::move(r));
    }

    res.manifest = emit(config, seed, res.records, out_dir);
    return res;
}

// ---------------------------------------------------------------------------

int cli_main(int argc, char** argv) {
    CLI::App app{"horo: horocycle sampling experiments on the modular surface"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 0;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool csv = false, timing = false;
    app.add_option("--threads", threads, "worker threads (default: HORO_THREADS or all cores)");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out_dir, "write record, CSV and manifest into this directory");
    app.add_flag("--csv", csv, "print the record's table as CSV");
    app.add_flag("--timing", timing, "record wall-clock runtime");

    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::map<std::string, bool>> flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [type, schema] : schemas()) {
        CLI::App* sub = app.add_subcommand(type, "run the '" + type + "' experiment");
        subs[type] = sub;
        for (const auto& f : schema) {
            if (f.kind == FieldKind::boolean) {
                sub->add_flag("--" + f.name, flags[type][f.name], f.help);
            } else {
                auto* o = sub->add_option("--" + f.name, values[type][f.name], f.help);
                if (f.required) o->required();
            }
        }
    }
    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "run every experiment of a JSON config");
    run_cmd->add_option("config", config_path, "config file")->required();
    std::string cert_path;
    CLI::App* verify_cmd = app.add_subcommand("verify", "re-check an emitted certificate");
    verify_cmd->add_option("certificate", cert_path, "certificate or record JSON file")->required();

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) set_default_threads(threads);

    try {
        if (*run_cmd) {
            std::ifstream is(config_path);
            if (!is) {
                std::cerr << "cannot read " << config_path << "\n";
                return 2;
            }
            json config = json::parse(is);
            if (!config.contains("seed") && app.count("--seed")) config["seed"] = seed;
            RunResult r = run(config, out_dir, timing);
            for (const auto& e : r.config_errors) std::cerr << "config error: " << e << "\n";
            if (r.status == 2) return 2;
            std::cout << r.manifest.dump(2) << "\n";
            return r.status;
        }
        if (*verify_cmd) {
            std::ifstream is(cert_path);
            if (!is) {
                std::cerr << "cannot read " << cert_path << "\n";
                return 2;
            }
            json doc = json::parse(is);
            if (doc.contains("certificate") && !doc.contains("kind")) doc = doc["certificate"];
            VerifyReport rep = verify_certificate(doc);
            std::cout << to_json(rep).dump(2) << "\n";
            return rep.pass ? 0 : 1;
        }
        for (const auto& [type, sub] : subs) {
            if (!*sub) continue;
            json params = json::object();
            for (const auto& [k, v] : values[type])
                if (sub->count("--" + k)) params[k] = v;
            for (const auto& [k, v] : flags[type])
                if (v) params[k] = true;
            ExperimentRecord rec = run_experiment(type, type, params, seed, timing);
            if (!out_dir.empty()) {
                json config = {{"seed", seed}, {"experiments", json::array({{{"id", type}, {"type", type}, {"params", params}}})}};
                emit(config, seed, {rec}, out_dir);
            }
            if (csv && rec.table)
                write_csv(std::cout, *rec.table);
            else
                std::cout << to_json(rec).dump(2) << "\n";
            for (const auto& e : rec.errors) std::cerr << "error: " << e << "\n";
            return rec.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace horo
