#include <doctest.h>

#include <cmath>
#include <sstream>

#include "scherk/errors.hpp"
#include "scherk/io.hpp"

using namespace scherk;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Validation;
}

json base_config() {
    return json::parse(R"({"n": 3, "phi": {"family": "sech", "a": 1.5, "b": 1.0},
                          "h": {"family": "gauss", "c0": 0.8, "b": 0.4}, "offset": 0.25,
                          "solver": {"rk_tol": 1e-11, "d0": 1.2},
                          "source": {"family": "separable", "sign": -1}})");
}

}  // namespace

TEST_CASE("config parsing and schema errors") {
    RunConfig c = parse_config(base_config());
    CHECK(c.n == 3);
    CHECK(c.phi.family == DecaySpec::Family::Sech);
    CHECK(c.h.family == HeightSpec::Family::Gauss);
    CHECK(c.offset == 0.25);
    CHECK(c.solver.rk_tol == 1e-11);
    CHECK(c.solver.d0 == 1.2);
    REQUIRE(c.source.has_value());
    CHECK(c.source->sign == -1);

    RunConfig z = parse_config(json{{"n", 2}});
    CHECK(z.phi.family == DecaySpec::Family::Zero);
    CHECK_FALSE(z.source.has_value());

    auto bad = [](json j) { return kind_of([&] { parse_config(j); }); };
    json j = base_config();
    j["extra"] = 1;
    CHECK(bad(j) == ErrorKind::Validation);
    j = base_config();
    j["phi"]["family"] = "lorentz";
    CHECK(bad(j) == ErrorKind::Validation);
    j = base_config();
    j["n"] = 1;
    CHECK(bad(j) == ErrorKind::Validation);
    j["n"] = 2.5;
    CHECK(bad(j) == ErrorKind::Validation);
    j = base_config();
    j["solver"]["tolerance"] = 1e-3;
    CHECK(bad(j) == ErrorKind::Validation);
    j = base_config();
    j["format_version"] = 7;
    CHECK(bad(j) == ErrorKind::Validation);
    j = base_config();
    j["phi"]["a"] = -1;
    CHECK(is_input_error(bad(j)));
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("json round trips") {
    RunConfig c = parse_config(base_config());
    json once = to_json(c);
    json twice = to_json(parse_config(once));
    CHECK(once == twice);
    CHECK(dump(once) == dump(twice));
    CHECK(dump(once).back() == '\n');

    for (const GeodesicWall& w : {GeodesicWall::hyperplane({0.0, 1.0, 0.0}, -1),
                                  GeodesicWall::orthosphere({2.0, 0.0}, std::sqrt(3.0), 1)}) {
        GeodesicWall r = wall_from_json(to_json(w));
        CHECK(to_json(r) == to_json(w));
        BallPoint x({0.1, -0.2, 0.05});
        if (w.dim() == 2) x = BallPoint({0.3, 0.1});
        CHECK(signed_wall_distance(x, r) == signed_wall_distance(x, w));
    }
    CHECK_THROWS_AS(wall_from_json(json{{"type", "plane"}}), Error);
}

TEST_CASE("csv format") {
    std::stringstream ss;
    write_csv(ss, {"a", "b"}, {{1.0, 0.1}, {-2.5e-300, 1.0 / 3.0}});
    CHECK(ss.str().rfind("# format_version=1\n", 0) == 0);
    CsvTable t = read_csv(ss);
    CHECK(t.format_version == kFormatVersion);
    CHECK(t.columns == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][0] == -2.5e-300);
    CHECK(t.rows[1][1] == 1.0 / 3.0);

    std::stringstream bad("# format_version=9\na\n1\n");
    CHECK_THROWS_AS(read_csv(bad), Error);
    std::stringstream ragged("# format_version=1\na,b\n1\n");
    CHECK_THROWS_AS(read_csv(ragged), Error);
}

TEST_CASE("profile dump reproduces residuals") {
    PsiEnvelope env(DecaySpec::sech(1, 1), HeightSpec::sech(1, 1), 0.5, 2);
    SolverOptions opt;
    ShootingConfig cfg = make_config(env, opt);
    EllResult e = ell(env, cfg, 0.0);
    std::vector<OdeState> prof = e.forward.samples;
    Residuals ref = residual_integral_forms(env, cfg.n, prof);

    std::stringstream ss;
    write_profile_csv(ss, prof);
    std::vector<OdeState> back = read_profile_csv(ss);
    REQUIRE(back.size() == prof.size());
    for (std::size_t i = 0; i < prof.size(); ++i) {
        CHECK(back[i].d == prof[i].d);
        CHECK(back[i].w == prof[i].w);
        CHECK(back[i].g == prof[i].g);
    }
    Residuals again = residual_integral_forms(env, cfg.n, back);
    CHECK(std::abs(again.max_w - ref.max_w) <= 1e-12);
    CHECK(std::abs(again.max_g - ref.max_g) <= 1e-12);

    std::vector<RadialSample> rs{{0.0, 1.0, 0.0}, {0.5, 0.9, -0.1}};
    std::stringstream rss;
    write_radial_profile_csv(rss, rs);
    std::vector<RadialSample> rb = read_radial_profile_csv(rss);
    REQUIRE(rb.size() == 2);
    CHECK(rb[1].g == -0.1);
}

TEST_CASE("range and list parsing") {
    std::vector<double> r = parse_range("-1:1:0.5");
    CHECK(r == std::vector<double>{-1, -0.5, 0, 0.5, 1});
    CHECK(parse_range("0:0.3:0.1").size() == 4);
    CHECK(parse_range("2:2:1") == std::vector<double>{2});
    CHECK(parse_list("1,2.5,-3") == std::vector<double>{1, 2.5, -3});
    CHECK_THROWS_AS(parse_range("1:0:0.5"), Error);
    CHECK_THROWS_AS(parse_range("0:1:0"), Error);
    CHECK_THROWS_AS(parse_range("0:1"), Error);
    CHECK_THROWS_AS(parse_list("1,,2"), Error);
    CHECK_THROWS_AS(parse_list("1,x"), Error);
}
