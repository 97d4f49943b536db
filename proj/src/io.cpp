#include "scherk/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "scherk/errors.hpp"

namespace scherk {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    require(j.is_object(), where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        require(allowed.count(it.key()) > 0, "unknown key '" + it.key() + "' in " + where);
}

double num(const json& j, const std::string& key, const std::string& where) {
    require(j.contains(key), "missing '" + key + "' in " + where);
    require(j.at(key).is_number(), "'" + key + "' in " + where + " must be a number");
    return j.at(key).get<double>();
}

double num_or(const json& j, const std::string& key, double fallback, const std::string& where) {
    return j.contains(key) ? num(j, key, where) : fallback;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return s;
}

std::string family_of(const json& j, const std::string& where) {
    require(j.contains("family") && j.at("family").is_string(), where + " needs a string 'family'");
    return lower(j.at("family").get<std::string>());
}

json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec(const Vec& v) { return json(v); }

}  // namespace

// ---------------------------------------------------------------- specs

DecaySpec decay_from_json(const json& j) {
    std::string fam = family_of(j, "phi");
    if (fam == "zero") {
        check_keys(j, {"family"}, "phi");
        return DecaySpec::zero();
    }
    if (fam == "sech" || fam == "sechlike") {
        check_keys(j, {"family", "a", "b"}, "phi");
        return DecaySpec::sech(num(j, "a", "phi"), num(j, "b", "phi"));
    }
    if (fam == "inverse_power" || fam == "inversepower") {
        check_keys(j, {"family", "a", "p"}, "phi");
        return DecaySpec::inverse_power(num(j, "a", "phi"), num(j, "p", "phi"));
    }
    fail(ErrorKind::Validation, "unknown phi family '" + fam + "'");
}

HeightSpec height_from_json(const json& j) {
    std::string fam = family_of(j, "h");
    if (fam == "zero") {
        check_keys(j, {"family"}, "h");
        return HeightSpec::zero();
    }
    check_keys(j, {"family", "c0", "b"}, "h");
    if (fam == "sech" || fam == "sechlike") return HeightSpec::sech(num(j, "c0", "h"), num(j, "b", "h"));
    if (fam == "gauss" || fam == "gausslike") return HeightSpec::gauss(num(j, "c0", "h"), num(j, "b", "h"));
    fail(ErrorKind::Validation, "unknown h family '" + fam + "'");
}

json to_json(const DecaySpec& s) {
    switch (s.family) {
        case DecaySpec::Family::Zero: return {{"family", "zero"}};
        case DecaySpec::Family::Sech: return {{"family", "sech"}, {"a", s.a}, {"b", s.b}};
        case DecaySpec::Family::InversePower: return {{"family", "inverse_power"}, {"a", s.a}, {"p", s.p}};
    }
    return {};
}

json to_json(const HeightSpec& s) {
    switch (s.family) {
        case HeightSpec::Family::Zero: return {{"family", "zero"}};
        case HeightSpec::Family::Sech: return {{"family", "sech"}, {"c0", s.c0}, {"b", s.b}};
        case HeightSpec::Family::Gauss: return {{"family", "gauss"}, {"c0", s.c0}, {"b", s.b}};
    }
    return {};
}

RadialSource source_from_json(const json& j, const RunConfig& base) {
    std::string fam = family_of(j, "source");
    if (fam == "constant") {
        check_keys(j, {"family", "H"}, "source");
        return RadialSource::constant(num(j, "H", "source"));
    }
    check_keys(j, {"family", "sign"}, "source");
    int sign = 1;
    if (j.contains("sign")) {
        require(j.at("sign").is_number_integer(), "source 'sign' must be +1 or -1");
        sign = j.at("sign").get<int>();
    }
    if (fam == "radial_decay") return RadialSource::radial_decay(base.phi, sign);
    if (fam == "separable") return RadialSource::separable(base.phi, base.h, sign);
    fail(ErrorKind::Validation, "unknown source family '" + fam + "'");
}

json to_json(const RadialSource& s) {
    switch (s.kind) {
        case RadialSource::Kind::Constant: return {{"family", "constant"}, {"H", s.H}};
        case RadialSource::Kind::RadialDecay: return {{"family", "radial_decay"}, {"sign", s.sign}};
        case RadialSource::Kind::SeparableMonotone: return {{"family", "separable"}, {"sign", s.sign}};
    }
    return {};
}

// ---------------------------------------------------------------- config

RunConfig parse_config(const json& j) {
    check_keys(j, {"format_version", "n", "phi", "h", "offset", "solver", "source"}, "config");
    if (j.contains("format_version")) {
        require(j.at("format_version").is_number_integer() && j.at("format_version").get<int>() == kFormatVersion,
                "unsupported format_version");
    }
    RunConfig c;
    require(j.contains("n") && j.at("n").is_number_integer(), "config needs an integer 'n'");
    c.n = j.at("n").get<int>();
    require(c.n >= 2 && c.n <= 64, "dimension n must be in [2, 64]");
    c.phi = j.contains("phi") ? decay_from_json(j.at("phi")) : DecaySpec::zero();
    c.h = j.contains("h") ? height_from_json(j.at("h")) : HeightSpec::zero();
    c.offset = num_or(j, "offset", 0.0, "config");
    require(std::isfinite(c.offset), "offset must be finite");
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        check_keys(s, {"rk_tol", "eps_g", "d_max", "bisect_tol", "margin", "d0"}, "solver");
        c.solver.rk_tol = num_or(s, "rk_tol", c.solver.rk_tol, "solver");
        c.solver.eps_g = num_or(s, "eps_g", c.solver.eps_g, "solver");
        c.solver.d_max = num_or(s, "d_max", c.solver.d_max, "solver");
        c.solver.bisect_tol = num_or(s, "bisect_tol", c.solver.bisect_tol, "solver");
        c.solver.margin = num_or(s, "margin", c.solver.margin, "solver");
        c.solver.d0 = num_or(s, "d0", c.solver.d0, "solver");
    }
    c.solver.validate();
    if (j.contains("source")) c.source = source_from_json(j.at("source"), c);
    (void)c.envelope();
    return c;
}

RunConfig load_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Validation, "config " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json s = {{"rk_tol", c.solver.rk_tol},
              {"eps_g", c.solver.eps_g},
              {"d_max", c.solver.d_max},
              {"bisect_tol", c.solver.bisect_tol},
              {"margin", c.solver.margin},
              {"d0", c.solver.d0}};
    json j = {{"format_version", kFormatVersion}, {"n", c.n},      {"phi", to_json(c.phi)},
              {"h", to_json(c.h)},                {"offset", c.offset}, {"solver", s}};
    if (c.source) j["source"] = to_json(*c.source);
    return j;
}

// ---------------------------------------------------------------- geometry

json to_json(const GeodesicWall& w) {
    if (const auto* hp = std::get_if<HyperplaneThroughOrigin>(&w.rep()))
        return {{"type", "hyperplane"}, {"normal", vec(hp->normal)}, {"side", w.side()}};
    const auto& os = std::get<OrthoSphere>(w.rep());
    return {{"type", "orthosphere"}, {"center", vec(os.center)}, {"radius", os.radius}, {"side", w.side()}};
}

GeodesicWall wall_from_json(const json& j) {
    require(j.is_object() && j.contains("type") && j.at("type").is_string(), "wall needs a string 'type'");
    std::string t = j.at("type").get<std::string>();
    int side = j.contains("side") ? j.at("side").get<int>() : 1;
    if (t == "hyperplane") {
        check_keys(j, {"type", "normal", "side"}, "wall");
        return GeodesicWall::hyperplane(j.at("normal").get<Vec>(), side);
    }
    if (t == "orthosphere") {
        check_keys(j, {"type", "center", "radius", "side"}, "wall");
        return GeodesicWall::orthosphere(j.at("center").get<Vec>(), num(j, "radius", "wall"), side);
    }
    fail(ErrorKind::Validation, "unknown wall type '" + t + "'");
}

// ---------------------------------------------------------------- records

json to_json(const Gamma0Result& r, const ShootingConfig& cfg) {
    return {{"format_version", kFormatVersion},
            {"gamma0", r.gamma0},
            {"lower", r.lower},
            {"upper", r.upper},
            {"bracket_width", r.bracket_width},
            {"delta_est", r.delta_est},
            {"iterations", r.iterations},
            {"d0", cfg.d0},
            {"d_min", r.d_min()},
            {"below_outcome", to_string(r.trajectory_below.end.kind)},
            {"above_outcome", to_string(r.trajectory_above.end.kind)},
            {"below_d_stop", r.trajectory_below.end.d_stop},
            {"witness_samples", r.witness().samples.size()}};
}

json to_json(const ScherkBarrier& b) {
    return {{"format_version", kFormatVersion},
            {"kind", to_string(b.kind)},
            {"n", b.n},
            {"wall", to_json(b.wall)},
            {"offset", b.env.offset},
            {"c", b.c},
            {"d0", b.d0},
            {"h_c", b.h_c},
            {"gamma0", b.gamma0},
            {"ell", b.ell_value},
            {"d_min", b.d_min},
            {"d_max", b.d_max},
            {"tail", b.tail},
            {"sigma", b.sigma},
            {"samples", b.samples.size()}};
}

json to_json(const RadialSolution& s, const RadialProblem& p) {
    json sweep = json::array();
    for (const SweepPoint& pt : s.sweep)
        sweep.push_back({{"w0", pt.w0}, {"outcome", to_string(pt.outcome)}, {"end_value", pt.end_value},
                         {"r_end", pt.r_end}});
    json j = {{"format_version", kFormatVersion},
              {"n", p.n},
              {"R", p.R},
              {"c", p.c},
              {"source", to_json(p.f)},
              {"outcome", to_string(s.outcome)},
              {"center_value", s.center_value},
              {"w_R", s.w_R},
              {"samples", s.samples.size()},
              {"monotone_map", s.monotone_map},
              {"sweep", sweep}};
    if (s.outcome == RadialOutcome::GradientBlowup) j["r_star"] = real(s.r_star);
    return j;
}

json to_json(const RadialBarrier& b) {
    return {{"format_version", kFormatVersion}, {"n", b.n},           {"phi", to_json(b.phi)},
            {"M", b.M},                         {"sup_rho", b.sup_rho}, {"v0", b.v.front()},
            {"r_min", b.r_min},                 {"r_max", b.r_max},   {"tail", b.tail},
            {"samples", b.r.size()}};
}

json to_json(const UniformBoundReport& r) {
    json per = json::array();
    for (const OffsetSup& o : r.per_offset)
        per.push_back({{"offset", o.offset}, {"sup", o.sup}, {"h_c", o.h_c}, {"d0", o.d0}});
    return {{"format_version", kFormatVersion}, {"c", r.c},       {"c0", r.c0},
            {"d1", r.d1},                       {"M_observed", real(r.M_observed)}, {"per_offset", per}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- CSV

void write_csv(std::ostream& os, const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
    os << "# format_version=" << kFormatVersion << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            os << (i ? "," : "") << buf;
        }
        os << "\n";
    }
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("format_version=");
            if (pos != std::string::npos) t.format_version = std::stoi(line.substr(pos + 15));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(ErrorKind::Validation, "bad CSV number '" + cell + "'");
            }
        }
        require(row.size() == t.columns.size(), "CSV row width does not match the header");
        t.rows.push_back(std::move(row));
    }
    require(t.format_version == kFormatVersion, "CSV lacks a supported format_version line");
    return t;
}

void write_profile_csv(std::ostream& os, const std::vector<OdeState>& samples) {
    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (const OdeState& s : samples) rows.push_back({s.d, s.w, s.g});
    write_csv(os, {"d", "w", "g"}, rows);
}

std::vector<OdeState> read_profile_csv(std::istream& is) {
    CsvTable t = read_csv(is);
    require(t.columns == std::vector<std::string>{"d", "w", "g"}, "profile CSV must have columns d,w,g");
    std::vector<OdeState> out;
    for (const auto& r : t.rows) out.push_back({r[0], r[1], r[2]});
    return out;
}

void write_radial_profile_csv(std::ostream& os, const std::vector<RadialSample>& samples) {
    std::vector<std::vector<double>> rows;
    for (const RadialSample& s : samples) rows.push_back({s.r, s.w, s.g});
    write_csv(os, {"r", "w", "g"}, rows);
}

std::vector<RadialSample> read_radial_profile_csv(std::istream& is) {
    CsvTable t = read_csv(is);
    require(t.columns == std::vector<std::string>{"r", "w", "g"}, "radial CSV must have columns r,w,g");
    std::vector<RadialSample> out;
    for (const auto& r : t.rows) out.push_back({r[0], r[1], r[2]});
    return out;
}

void write_radial_barrier_csv(std::ostream& os, const RadialBarrier& b) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < b.r.size(); ++i) rows.push_back({b.r[i], b.rho_tilde[i], b.v[i]});
    write_csv(os, {"r", "rho_tilde", "v"}, rows);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), "cannot open " + path + " for writing");
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(static_cast<bool>(f), "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            require(used == cell.size(), "bad number '" + cell + "'");
        } catch (const std::invalid_argument&) {
            fail(ErrorKind::Validation, "bad number '" + cell + "'");
        }
    }
    require(!out.empty(), "empty list");
    return out;
}

std::vector<double> parse_range(const std::string& spec) {
    std::vector<double> p;
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ':')) p.push_back(parse_list(cell).at(0));
    require(p.size() == 3, "range must look like a:b:step");
    require(p[2] > 0.0 && p[1] >= p[0], "range needs b >= a and step > 0");
    std::vector<double> out;
    long count = std::lround(std::floor((p[1] - p[0]) / p[2] + 1e-9));
    require(count < 100000, "range too long");
    for (long i = 0; i <= count; ++i) out.push_back(p[0] + static_cast<double>(i) * p[2]);
    return out;
}

}  // namespace scherk
