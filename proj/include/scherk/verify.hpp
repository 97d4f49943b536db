#pragma once

// Property runner over randomized envelopes and dimensions.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scherk/io.hpp"

namespace scherk {

enum class Generator { Random, Zero };

struct VerificationPlan {
    std::uint64_t seed = 42;
    int trials = 25;
    std::vector<int> dims{2, 3, 5};
    Generator generator = Generator::Random;
    std::map<std::string, double> tolerance;  // per property id
    std::vector<std::string> properties;      // empty runs the whole registry
    int threads = 0;                          // 0 uses hardware_concurrency

    void validate() const;
};

VerificationPlan default_plan();
/// Throws Validation on unknown keys or property ids.
VerificationPlan plan_from_json(const json& j);
/// "default", "zero", or a path to a plan JSON file.
VerificationPlan load_plan(const std::string& spec);

struct PropertyInfo {
    std::string id;
    std::string anchor;  // short statement of the checked property
    double tolerance;
    int max_trials;  // expensive properties run on at most this many trials
};

/// Every registered property, sorted by id.
const std::vector<PropertyInfo>& property_registry();

struct PropertyFailure {
    int trial;
    double margin;
    std::string message;
    json replay;
};

struct PropertyReport {
    std::string id;
    std::string anchor;
    int n;
    int trials;
    int failures;
    double worst_margin;  // min over trials of the slack; negative means violated
    std::vector<PropertyFailure> failed;
};

struct VerificationReport {
    std::uint64_t seed;
    std::vector<PropertyReport> properties;  // ordered by (id, n)
    bool pass;
};

VerificationReport run_plan(const VerificationPlan& plan);
json to_json(const VerificationReport& r);

}  // namespace scherk
