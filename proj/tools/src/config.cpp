#include "relscatter_app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace relscatter::app {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string join_list(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

double to_double(const std::string& key, const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && *b == ' ') ++b;
    if (b < e && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw ConfigError("config: " + key + " is not a number: '" + s + "'");
    return v;
}

std::size_t to_count(const std::string& key, const std::string& s) {
    double v = to_double(key, s);
    if (v < 0 || v != std::floor(v)) throw ConfigError("config: " + key + " must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

Sign to_sign(const std::string& s) {
    if (s == "+" || s == "plus") return Sign::plus;
    if (s == "-" || s == "minus") return Sign::minus;
    throw ConfigError("config: sign must be + or -");
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Vec3 RunConfig::wave_vector() const {
    double n = norm(direction);
    return {lambda * direction[0] / n, lambda * direction[1] / n, lambda * direction[2] / n};
}

Potential RunConfig::potential() const { return make_potential(profile, C, sigma, coupling); }

void RunConfig::validate(bool solver_use) const {
    if (!(lambda > 0.0)) throw ConfigError("config: wave.lambda must be positive");
    if (!(norm(direction) > 0.0)) throw ConfigError("config: wave.direction must be nonzero");
    if (!(R_dom > 0.0)) throw ConfigError("config: grid.R_dom must be positive");
    if (N_r < 4 || N_ang < 4) throw ConfigError("config: grid counts must be at least 4");
    if (!(tol > 0.0)) throw ConfigError("config: solver.tol must be positive");
    if (max_iter < 1) throw ConfigError("config: solver.max_iter must be positive");
    if (!(relaxation > 0.0 && relaxation <= 1.0)) throw ConfigError("config: solver.relaxation must lie in (0, 1]");
    if (mode != "born" && mode != "nystrom-radial" && mode != "partial-wave")
        throw ConfigError("config: solver.mode must be born, nystrom-radial or partial-wave");
    if (!(r_min >= 1.0 && r_max > r_min && ratio > 1.0)) throw ConfigError("config: bad farfield sampling window");
    for (const auto& [k, v] : tolerances)
        if (!(v > 0.0)) throw ConfigError("config: tolerance " + k + " must be positive");
    Potential V = potential();
    if (solver_use) V.admit(R_dom);
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    static const std::map<std::string, std::vector<std::string>> known = {
        {"wave", {"lambda", "sign", "direction"}},
        {"grid", {"R_dom", "N_r", "N_ang", "N_phi"}},
        {"potential", {"profile", "C", "sigma", "coupling"}},
        {"solver", {"mode", "tol", "max_iter", "relaxation"}},
        {"farfield", {"r_min", "r_max", "ratio"}},
        {"verify", {"suites", "expect_fail", "seed"}},
        {"tolerances", {}},
        {"output", {"json", "csv"}},
    };
    RunConfig c;
    for (const auto& [section, body] : tree) {
        auto it = known.find(section);
        if (it == known.end()) throw ConfigError("config: unknown section [" + section + "]");
        for (const auto& [key, node] : body) {
            const std::string v = node.data();
            const std::string full = section + "." + key;
            if (section == "tolerances") {
                c.tolerances[key] = to_double(full, v);
                continue;
            }
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                throw ConfigError("config: unknown key " + full);
            if (full == "wave.lambda") c.lambda = to_double(full, v);
            else if (full == "wave.sign") c.sign = to_sign(v);
            else if (full == "wave.direction") {
                auto parts = split_list(v);
                if (parts.size() != 3) throw ConfigError("config: wave.direction needs three components");
                for (int d = 0; d < 3; ++d) c.direction[d] = to_double(full, parts[d]);
            }
            else if (full == "grid.R_dom") c.R_dom = to_double(full, v);
            else if (full == "grid.N_r") c.N_r = to_count(full, v);
            else if (full == "grid.N_ang") c.N_ang = to_count(full, v);
            else if (full == "grid.N_phi") c.N_phi = to_count(full, v);
            else if (full == "potential.profile") c.profile = v;
            else if (full == "potential.C") c.C = to_double(full, v);
            else if (full == "potential.sigma") c.sigma = to_double(full, v);
            else if (full == "potential.coupling") c.coupling = to_double(full, v);
            else if (full == "solver.mode") c.mode = v;
            else if (full == "solver.tol") c.tol = to_double(full, v);
            else if (full == "solver.max_iter") c.max_iter = static_cast<int>(to_count(full, v));
            else if (full == "solver.relaxation") c.relaxation = to_double(full, v);
            else if (full == "farfield.r_min") c.r_min = to_double(full, v);
            else if (full == "farfield.r_max") c.r_max = to_double(full, v);
            else if (full == "farfield.ratio") c.ratio = to_double(full, v);
            else if (full == "verify.suites") c.suites = split_list(v);
            else if (full == "verify.expect_fail") c.expect_fail = split_list(v);
            else if (full == "verify.seed") c.seed = to_count(full, v);
            else if (full == "output.json") c.json_path = v;
            else if (full == "output.csv") c.csv_path = v;
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    auto d = format_double;
    o << "[wave]\n"
      << "lambda = " << d(c.lambda) << "\n"
      << "sign = " << to_string(c.sign) << "\n"
      << "direction = " << d(c.direction[0]) << "," << d(c.direction[1]) << "," << d(c.direction[2]) << "\n\n"
      << "[grid]\n"
      << "R_dom = " << d(c.R_dom) << "\nN_r = " << c.N_r << "\nN_ang = " << c.N_ang << "\nN_phi = " << c.N_phi
      << "\n\n"
      << "[potential]\n"
      << "profile = " << c.profile << "\nC = " << d(c.C) << "\nsigma = " << d(c.sigma)
      << "\ncoupling = " << d(c.coupling) << "\n\n"
      << "[solver]\n"
      << "mode = " << c.mode << "\ntol = " << d(c.tol) << "\nmax_iter = " << c.max_iter
      << "\nrelaxation = " << d(c.relaxation) << "\n\n"
      << "[farfield]\n"
      << "r_min = " << d(c.r_min) << "\nr_max = " << d(c.r_max) << "\nratio = " << d(c.ratio) << "\n\n"
      << "[verify]\n"
      << "suites = " << join_list(c.suites) << "\nexpect_fail = " << join_list(c.expect_fail)
      << "\nseed = " << c.seed << "\n\n"
      << "[tolerances]\n";
    for (const auto& [k, v] : c.tolerances) o << k << " = " << d(v) << "\n";
    o << "\n[output]\n"
      << "json = " << c.json_path << "\ncsv = " << c.csv_path << "\n";
    return o.str();
}

}  // namespace relscatter::app
