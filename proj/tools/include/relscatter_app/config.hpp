#pragma once

#include "relscatter/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace relscatter::app {

// Run configuration, stored as INI-style sections:
//   [wave] [grid] [potential] [solver] [farfield] [verify] [tolerances] [output]
struct RunConfig {
    // wave
    double lambda = 1.0;
    Sign sign = Sign::plus;
    Vec3 direction{0.0, 0.0, 1.0};
    // grid
    double R_dom = 6.0;
    std::size_t N_r = 16, N_ang = 12, N_phi = 24;
    // potential
    std::string profile = "japanese";
    double C = 0.05, sigma = 4.0, coupling = 1.0;
    // solver
    std::string mode = "born";  // born | nystrom-radial | partial-wave
    double tol = 1e-8;
    int max_iter = 200;
    double relaxation = 1.0;
    // farfield
    double r_min = 10.0, r_max = 100.0, ratio = 1.2;
    // verify
    std::vector<std::string> suites{"kernels", "operators", "radiation", "spectral", "farfield"};
    std::vector<std::string> expect_fail{"boundary_limit"};
    std::map<std::string, double> tolerances;  // check name -> bound override
    // output
    std::string json_path, csv_path;  // empty: JSON to stdout, no CSV
    std::uint64_t seed = 12345;

    bool operator==(const RunConfig&) const = default;

    Vec3 wave_vector() const;
    Potential potential() const;
    // Throws ConfigError on invalid values. solver_use adds the admission rule.
    void validate(bool solver_use) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);
// 17 significant digits, the CSV contract.
std::string csv_double(double v);

}  // namespace relscatter::app
