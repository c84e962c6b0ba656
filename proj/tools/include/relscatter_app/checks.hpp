#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace relscatter::app {

struct Check {
    std::string suite, name;
    double value = 0.0;
    double bound = 0.0;
    std::string relation = "<=";  // value <relation> bound
    bool pass = false;
    double theory = NAN, measured = NAN;  // for rate checks
    std::string note;
    bool expected_failure = false;
};

struct CheckContext {
    std::map<std::string, double> tolerances;  // overrides by check name
    std::uint64_t seed = 12345;
    double bound(const std::string& name, double fallback) const;
};

struct Criterion {
    int id;
    std::string suite;
    std::string title;
    double budget_seconds;
    std::function<std::vector<Check>(const CheckContext&)> run;
};

struct CriterionOutcome {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    std::vector<Check> checks;
};

// The eleven acceptance criteria, in order.
const std::vector<Criterion>& criteria();
const std::vector<std::string>& suite_names();

// Runs one criterion. A thrown exception becomes a failed check; the
// runtime budget is checked too.
CriterionOutcome run_criterion(const Criterion& c, const CheckContext& ctx);

// All checks of the criteria that belong to a suite.
std::vector<CriterionOutcome> run_suite(const std::string& suite, const CheckContext& ctx);

}  // namespace relscatter::app
