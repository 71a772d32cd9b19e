#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "horo/cli.hpp"
#include "horo/errors.hpp"
#include "horo/io.hpp"
#include "horo/parallel.hpp"

using namespace horo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("horo_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

bool mentions(const std::vector<std::string>& errs, const std::string& what) {
    for (const auto& e : errs)
        if (e.find(what) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("rational and point json round-trips") {
    for (const Rational r : {Rational(0), make_rational(-7, 3), make_rational(355, 113), Rational(Integer("123456789012345678901234567890"))}) {
        json j = to_json(r);
        CHECK(j.is_string());
        CHECK(rational_from_json(j) == r);
        CHECK(rational_from_json(json::parse(j.dump())) == r);
    }
    CHECK(rational_from_json(json(5)) == 5);
    CHECK_THROWS_AS(rational_from_json(json(0.5)), PreconditionError);
    ExactPoint z(make_rational(1, 3), make_rational(1, 100));
    CHECK(point_from_json(to_json(z)) == z);
    IntMatrix2 g{2, 1, 9, 5};
    CHECK(matrix_from_json(to_json(g)) == g);
    Translate x = Translate::interval(make_rational(1, 7), make_rational(1, 1000), "t");
    Translate back = translate_from_json(to_json(x));
    CHECK(back.center() == x.center());
    CHECK(back.radius() == x.radius());
}

TEST_CASE("translate specs") {
    const Rational eps = make_rational(1, 1000000000);
    CHECK(parse_translate("1/3", eps).exact());
    CHECK(parse_translate("1/3", eps).center() == make_rational(1, 3));
    CHECK(parse_translate("0.25", eps).center() == make_rational(1, 4));
    Translate d = parse_translate("dec:0.414", eps);
    CHECK(!d.exact());
    CHECK(d.center() == make_rational(414, 1000));
    CHECK(d.radius() == make_rational(1, 1000));
    Translate g = parse_translate("golden", eps);
    CHECK(g.radius() <= eps);
    CHECK(std::fabs(g.approx() - (std::sqrt(5.0) - 1) / 2) < 1e-9);
    CHECK(std::fabs(parse_translate("sqrt2m1", eps).approx() - (std::sqrt(2.0) - 1)) < 1e-9);
    CHECK(std::fabs(parse_translate("cf:0;|1", eps).approx() - g.approx()) < 1e-9);
    // [0; 2, 1, 1, 1, ...] = 1/(2 + golden)
    CHECK(std::fabs(parse_translate("cf:0;2|1", eps).approx() - 1 / (2 + g.approx())) < 1e-9);
    CHECK(parse_translate("cf:1;2", eps).center() == make_rational(3, 2));
    CHECK(parse_translate("kappa:2", eps).radius() <= eps);
}

TEST_CASE("schema errors name each bad field") {
    auto errs = validate_params("sample", json{{"n", "abc"}, {"y", true}, {"bogus", 1}});
    CHECK(errs.size() >= 3);
    CHECK(mentions(errs, "params.n"));
    CHECK(mentions(errs, "params.y"));
    CHECK(mentions(errs, "bogus"));
    auto missing = validate_params("symmetry", json{{"m", 1}});
    for (const char* f : {"k", "l", "n", "j", "y"}) CHECK(mentions(missing, std::string("params.") + f));
    CHECK(!validate_params("nonsense", json::object()).empty());
    CHECK(validate_params("cusps", json{{"n", 3}}).empty());

    json bad = {{"seed", 1}, {"experiments", json::array({{{"id", "a"}, {"type", "cusps"}, {"params", {{"n", "x"}}}},
                                                          {{"id", "a"}, {"type", "index"}, {"params", {{"n", 2}}}}})}};
    RunResult r = run(bad, "");
    CHECK(r.status == 2);
    CHECK(mentions(r.config_errors, "params.n"));
    CHECK(mentions(r.config_errors, "duplicate id"));
    CHECK(r.records.empty());
}

TEST_CASE("failed experiments are recorded, not thrown") {
    ExperimentRecord r = run_experiment("h", "horoball", json{{"x", "1/3"}, {"m", 2}, {"n", 4}, {"Y", 1}}, 0);
    CHECK(!r.ok());
    CHECK(mentions(r.errors, "gcd_m_n"));
}

TEST_CASE("cusps of level 3") {
    ExperimentRecord r = run_experiment("c", "cusps", json{{"n", 3}}, 0);
    REQUIRE(r.ok());
    REQUIRE(r.table);
    CHECK(r.table->rows.size() == 4);
    std::ostringstream os;
    write_csv(os, *r.table);
    std::string csv = os.str();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("run output is independent of the thread count") {
    json base = {{"seed", 7},
                 {"experiments",
                  json::array({{{"id", "eq"}, {"type", "equidist"}, {"params", {{"n", 400}, {"x", "golden"}, {"alpha", "3/2"}}}},
                               {{"id", "mo"}, {"type", "moment"}, {"params", {{"n", 5}, {"grid", 200}, {"samples", 4000}}}},
                               {{"id", "cu"}, {"type", "cusps"}, {"params", {{"n", 4}}}},
                               {{"id", "ec"}, {"type", "ec"}, {"params", {{"N", 200}, {"c", "1/2"}, {"mc_samples", 2000}}}},
                               {{"id", "ex"}, {"type", "excursion"}, {"params", {{"N", 300}}}}})}};
    std::vector<fs::path> dirs;
    for (unsigned t : {1u, 3u}) {
        json cfg = base;
        cfg["threads"] = t;
        fs::path d = scratch("threads" + std::to_string(t));
        RunResult r = run(cfg, d.string());
        CHECK(r.status == 0);
        dirs.push_back(d);
    }
    set_default_threads(1);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
        std::string f = e.path().filename().string();
        if (f == "manifest.json") continue;  // carries the config hash, which includes threads
        INFO(f);
        REQUIRE(fs::exists(dirs[1] / f));
        CHECK(slurp(dirs[0] / f) == slurp(dirs[1] / f));
        ++files;
    }
    CHECK(files == 5);
    json m1 = json::parse(slurp(dirs[1] / "manifest.json"));
    json m = json::parse(slurp(dirs[0] / "manifest.json"));
    for (const auto& o : m["outputs"]) CHECK(o["sha1"] == content_hash(slurp(dirs[0] / o["file"].get<std::string>())));
    CHECK(m["outputs"] == m1["outputs"]);
    for (const auto& d : dirs) fs::remove_all(d);
}

TEST_CASE("symmetry certificates verify; tampering names the claim") {
    ExperimentRecord r =
        run_experiment("s", "symmetry", json{{"m", 1}, {"k", 2}, {"l", 1}, {"n", 3}, {"j", 1}, {"y", "1/5"}}, 0);
    REQUIRE(r.ok());
    REQUIRE(r.certificate);
    json cert = *r.certificate;
    VerifyReport ok = verify_certificate(cert);
    CHECK(ok.pass);
    CHECK(ok.kind == "symmetry_witness");

    json t = cert;
    Integer b = integer_from_json(t["gamma"][0][1]);
    t["gamma"][0][1] = Integer(b + 1).get_str();
    VerifyReport bad = verify_certificate(t);
    CHECK(!bad.pass);
    bool named = false;
    for (const auto& c : bad.claims)
        if (!c.ok) named = named || c.claim == "gamma_in_SL2" || c.claim == "gamma_maps_source_to_image";
    CHECK(named);

    json u = cert;
    u["d"] = "2";
    VerifyReport bad_d = verify_certificate(u);
    CHECK(!bad_d.pass);
    for (const auto& c : bad_d.claims)
        if (c.claim == "d_definition") CHECK(!c.ok);

    CHECK(!verify_certificate(json{{"kind", "mystery"}}).pass);
    CHECK(!verify_certificate(json{{"kind", "symmetry_witness"}}).pass);
}

TEST_CASE("horoball and cusp certificates verify") {
    ExperimentRecord r = run_experiment("h", "horoball", json{{"x", "0.3334"}, {"m", 1}, {"n", 3}, {"Y", 2}}, 0);
    REQUIRE(r.ok());
    REQUIRE(r.certificate);
    CHECK(verify_certificate(*r.certificate).pass);
    json t = *r.certificate;
    t["entries"][1]["heights"][0] = "1/2";
    VerifyReport bad = verify_certificate(t);
    CHECK(!bad.pass);
    bool named = false;
    for (const auto& c : bad.claims) named = named || (!c.ok && c.claim == "window[1]");
    CHECK(named);

    ExperimentRecord c = run_experiment("c", "cusps", json{{"n", 6}, {"point", "1/7+1/500i"}, {"Y", 2}}, 0);
    REQUIRE(c.ok());
    if (c.certificate) CHECK(verify_certificate(*c.certificate).pass);
}

TEST_CASE("content hash is the git blob hash") {
    CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(content_hash("hello world\n") == "3b18e512dba79e4c8300dd08aeb37f8e728b8dad");
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, 0.1, -2.5e-17, 1.0 / 3.0, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("cli_main exit codes") {
    auto call = [](std::vector<std::string> args) {
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        std::ostringstream sink;
        auto* old = std::cout.rdbuf(sink.rdbuf());
        auto* olderr = std::cerr.rdbuf(sink.rdbuf());
        int rc = cli_main(int(argv.size()), argv.data());
        std::cout.rdbuf(old);
        std::cerr.rdbuf(olderr);
        return rc;
    };
    CHECK(call({"horo", "index", "--n", "4"}) == 0);
    CHECK(call({"horo", "horoball", "--x", "1/3", "--m", "2", "--n", "4", "--Y", "1"}) == 1);
    CHECK(call({"horo", "run", "/nonexistent/config.json"}) == 2);
}
