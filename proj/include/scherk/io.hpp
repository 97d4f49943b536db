#pragma once

// JSON configs and records, versioned CSV dumps.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scherk/barriers.hpp"
#include "scherk/envelope.hpp"
#include "scherk/hgeom.hpp"
#include "scherk/radial_solver.hpp"
#include "scherk/shooting.hpp"

namespace scherk {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct RunConfig {
    int n = 2;
    DecaySpec phi;
    HeightSpec h;
    double offset = 0.0;
    SolverOptions solver;
    std::optional<RadialSource> source;

    PsiEnvelope envelope() const { return PsiEnvelope(phi, h, offset, n); }
    EnvelopeContext context() const { return EnvelopeContext{phi, h, n, solver}; }
};

/// Schema check: unknown keys, wrong types and invalid parameters raise Validation.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);
json to_json(const RunConfig& c);

json to_json(const DecaySpec& s);
json to_json(const HeightSpec& s);
json to_json(const RadialSource& s);
DecaySpec decay_from_json(const json& j);
HeightSpec height_from_json(const json& j);
RadialSource source_from_json(const json& j, const RunConfig& base);

json to_json(const GeodesicWall& w);
GeodesicWall wall_from_json(const json& j);

json to_json(const Gamma0Result& r, const ShootingConfig& cfg);
/// Barrier manifest: wall, c, d0, h_c, gamma0, d_min, tail and sample count.
json to_json(const ScherkBarrier& b);
json to_json(const RadialSolution& s, const RadialProblem& p);
json to_json(const RadialBarrier& b);
json to_json(const UniformBoundReport& r);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);

/// CSV with a "# format_version=1" line, a header row and %.17g values.
void write_csv(std::ostream& os, const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);
struct CsvTable {
    int format_version = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(std::istream& is);

void write_profile_csv(std::ostream& os, const std::vector<OdeState>& samples);
std::vector<OdeState> read_profile_csv(std::istream& is);
void write_radial_profile_csv(std::ostream& os, const std::vector<RadialSample>& samples);
std::vector<RadialSample> read_radial_profile_csv(std::istream& is);
void write_radial_barrier_csv(std::ostream& os, const RadialBarrier& b);

void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

/// Parses "a:b:step" (inclusive, step > 0) into a grid.
std::vector<double> parse_range(const std::string& spec);
/// Parses "x1,x2,..." into a vector.
std::vector<double> parse_list(const std::string& spec);

}  // namespace scherk
