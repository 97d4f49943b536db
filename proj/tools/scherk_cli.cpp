// scherk: command-line front end. Exit codes: 0 ok, 2 bad input, 3 numerical failure.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

#include "scherk/errors.hpp"
#include "scherk/io.hpp"
#include "scherk/verify.hpp"

using namespace scherk;

namespace {

struct Args {
    std::string config;
    std::string out;
    std::string plan = "default";
    std::string offsets = "-5:5:1";
    std::string p;
    std::string hs = "-3:3:0.5";
    double h = 0.0, c = 0.0, M = 0.0, R = 1.0, d1 = 4.0, eps = 0.1, t0 = 8.0;
    std::string ts;
    std::uint64_t seed = 42;
    bool seed_set = false;
    int threads = 0;
};

void emit(const json& j) { std::cout << dump(j); }

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_file(path, text);
    }
}

int cmd_gamma0(const Args& a) {
    RunConfig rc = load_config(a.config);
    PsiEnvelope env = rc.envelope();
    ShootingConfig cfg = make_config(env, rc.solver);
    Gamma0Result r = find_gamma0(env, cfg, a.h);
    json j = to_json(r, cfg);
    j["h"] = a.h;
    emit(j);
    if (!a.out.empty()) {
        std::ostringstream os;
        write_profile_csv(os, r.witness().samples);
        write_file(a.out, os.str());
    }
    return 0;
}

int cmd_barrier(const Args& a, BarrierKind kind) {
    RunConfig rc = load_config(a.config);
    EnvelopeContext ctx = rc.context();
    GeodesicWall wall = wall_at_offset(rc.n, rc.offset);
    ScherkBarrier b = kind == BarrierKind::Super ? build_super(ctx, wall, a.c) : build_sub(ctx, wall, a.c);
    json j = to_json(b);
    SupersolutionCheck chk = supersolution_residual(b);
    j["residual_margin"] = chk.margin;
    j["residual_max"] = chk.max_residual;
    emit(j);
    if (!a.out.empty()) {
        std::ostringstream os;
        write_profile_csv(os, b.samples);
        write_file(a.out, os.str());
    }
    return 0;
}

int cmd_radial_barrier(const Args& a) {
    RunConfig rc = load_config(a.config);
    RadialBarrier b = radial_barrier(rc.n, rc.phi, a.M);
    emit(to_json(b));
    if (!a.out.empty()) {
        std::ostringstream os;
        write_radial_barrier_csv(os, b);
        write_file(a.out, os.str());
    }
    return 0;
}

int cmd_radial_bvp(const Args& a) {
    RunConfig rc = load_config(a.config);
    require(rc.source.has_value(), "radial-bvp needs a 'source' block in the config");
    RadialProblem p;
    p.n = rc.n;
    p.R = a.R;
    p.c = a.c;
    p.f = *rc.source;
    RadialSolution s = solve_radial_dirichlet(p);
    json j = to_json(s, p);
    j["flux_residual"] = flux_residual(p, s);
    emit(j);
    if (!a.out.empty()) {
        std::ostringstream os;
        write_radial_profile_csv(os, s.samples);
        write_file(a.out, os.str());
    }
    return 0;
}

int cmd_uniform_bound(const Args& a) {
    RunConfig rc = load_config(a.config);
    UniformBoundReport r = uniform_bound_experiment(rc.context(), a.c, parse_range(a.offsets), a.d1);
    emit(to_json(r));
    return 0;
}

int cmd_squeeze(const Args& a) {
    RunConfig rc = load_config(a.config);
    std::vector<double> pv = parse_list(a.p);
    require(static_cast<int>(pv.size()) == rc.n, "--p needs n coordinates");
    std::vector<double> ts = a.ts.empty() ? parse_range(std::to_string(a.t0 + 10.0) + ":" + std::to_string(a.t0 + 30.0) + ":1")
                                          : parse_range(a.ts);
    auto trace = squeeze_trace(rc.context(), BoundaryPoint::normalized(pv), a.t0, a.c, a.eps, ts);
    std::vector<std::vector<double>> rows;
    for (const SqueezePoint& s : trace) rows.push_back({s.t, s.value, s.value - a.c - a.eps});
    std::ostringstream os;
    write_csv(os, {"t", "value", "excess"}, rows);
    write_out(a.out, os.str());
    return 0;
}

int cmd_verify(const Args& a) {
    VerificationPlan plan = load_plan(a.plan);
    if (a.seed_set) plan.seed = a.seed;
    if (a.threads > 0) plan.threads = a.threads;
    VerificationReport r = run_plan(plan);
    std::string text = dump(to_json(r));
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_file(a.out, text);
        int failing = 0;
        for (const PropertyReport& p : r.properties) failing += p.failures > 0;
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.properties.size() << " property/dimension rows, "
                  << failing << " failing\n";
    }
    return r.pass ? 0 : 1;
}

// long form: h, quantity, value; one worker per h value
int cmd_sweep(const Args& a) {
    RunConfig rc = load_config(a.config);
    PsiEnvelope env = rc.envelope();
    ShootingConfig cfg = make_config(env, rc.solver);
    std::vector<double> hs = parse_range(a.hs);
    struct Row {
        double gamma0 = 0, ell = 0, tail = 0, d_min = 0;
        std::string error;
    };
    std::vector<Row> rows(hs.size());
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < hs.size();) {
            try {
                EllResult e = ell(env, cfg, hs[i]);
                rows[i] = {e.g0.gamma0, e.value, e.tail, e.g0.d_min(), {}};
            } catch (const Error& err) {
                rows[i].error = err.what();
            }
        }
    };
    unsigned nt = a.threads > 0 ? static_cast<unsigned>(a.threads) : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nt && i < hs.size(); ++i) pool.emplace_back(loop);
    loop();
    for (auto& t : pool) t.join();

    std::ostringstream os;
    os << "# format_version=" << kFormatVersion << "\nh,quantity,value\n";
    char buf[64];
    int failures = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!rows[i].error.empty()) {
            ++failures;
            std::cerr << "h=" << hs[i] << ": " << rows[i].error << "\n";
            continue;
        }
        const std::pair<const char*, double> q[] = {
            {"gamma0", rows[i].gamma0}, {"ell", rows[i].ell}, {"tail", rows[i].tail}, {"d_min", rows[i].d_min}};
        for (const auto& [name, v] : q) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << hs[i] << "," << name << "," << buf << "\n";
        }
    }
    write_out(a.out, os.str());
    return failures ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scherk-type barriers, shooting and radial solvers over the Poincare ball"};
    app.set_help_flag("--help", "print this help");  // -h is taken by the height option
    app.require_subcommand(1);
    Args a;
    auto seed_opt = app.add_option("--seed", a.seed, "seed for randomized commands");
    auto cfg_opt = [&](CLI::App* s) { s->add_option("--config", a.config, "JSON run config")->required()->check(CLI::ExistingFile); };

    auto* g0 = app.add_subcommand("gamma0", "critical slope gamma0 at height h");
    cfg_opt(g0);
    g0->add_option("--h", a.h, "height at d0");
    g0->add_option("--out", a.out, "witness profile CSV");

    auto* sc = app.add_subcommand("scherk", "Super barrier on the config wall");
    auto* sb = app.add_subcommand("sub", "Sub barrier on the config wall");
    for (auto* s : {sc, sb}) {
        cfg_opt(s);
        s->add_option("--c", a.c, "asymptotic value")->required();
        s->add_option("--out", a.out, "profile CSV");
    }

    auto* rb = app.add_subcommand("radial-barrier", "radial barrier v for phi");
    cfg_opt(rb);
    rb->add_option("--M", a.M, "limit value at infinity")->required();
    rb->add_option("--out", a.out, "barrier CSV");

    auto* rv = app.add_subcommand("radial-bvp", "radial Dirichlet problem on B_R");
    cfg_opt(rv);
    rv->add_option("--R", a.R, "ball radius")->required();
    rv->add_option("--c", a.c, "boundary value")->required();
    rv->add_option("--out", a.out, "profile CSV");

    auto* ub = app.add_subcommand("uniform-bound", "sup of w_{S,c} over d >= d1 across wall offsets");
    cfg_opt(ub);
    ub->add_option("--c", a.c, "asymptotic value")->required();
    ub->add_option("--offsets", a.offsets, "offset grid a:b:step");
    ub->add_option("--d1", a.d1, "lower end of the sup");

    auto* sq = app.add_subcommand("squeeze", "barrier with c + eps along the ray toward p");
    cfg_opt(sq);
    sq->add_option("--p", a.p, "boundary direction x1,...,xn")->required();
    sq->add_option("--eps", a.eps, "offset above c");
    sq->add_option("--c", a.c, "asymptotic value");
    sq->add_option("--t0", a.t0, "wall position along the ray");
    sq->add_option("--t", a.ts, "ray parameters a:b:step");
    sq->add_option("--out", a.out, "CSV output (stdout if omitted)");

    auto* vf = app.add_subcommand("verify", "run the property plan");
    vf->add_option("--plan", a.plan, "default, zero, or a plan JSON path");
    vf->add_option("--out", a.out, "report path (stdout if omitted)");
    vf->add_option("--threads", a.threads, "worker threads");

    auto* sw = app.add_subcommand("sweep", "gamma0 and l(h) over a grid of heights");
    cfg_opt(sw);
    sw->add_option("--h", a.hs, "height grid a:b:step");
    sw->add_option("--out", a.out, "CSV output (stdout if omitted)");
    sw->add_option("--threads", a.threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    a.seed_set = seed_opt->count() > 0;

    try {
        if (*g0) return cmd_gamma0(a);
        if (*sc) return cmd_barrier(a, BarrierKind::Super);
        if (*sb) return cmd_barrier(a, BarrierKind::Sub);
        if (*rb) return cmd_radial_barrier(a);
        if (*rv) return cmd_radial_bvp(a);
        if (*ub) return cmd_uniform_bound(a);
        if (*sq) return cmd_squeeze(a);
        if (*vf) return cmd_verify(a);
        if (*sw) return cmd_sweep(a);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_input_error(e.kind()) ? 2 : 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
