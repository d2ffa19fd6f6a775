#include "mgrit_lfa/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace mgrit_lfa {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
    T value{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ConfigError("config key '" + key + "': cannot parse '" + s + "'");
    return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& s) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) out.push_back(parse_number<T>(key, item));
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key)) throw ConfigError("config key '" + key + "' given twice");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_key_values(ss.str());
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::LfaSweep: return "lfa-sweep";
        case ExperimentKind::LowerBoundCurve: return "lower-bound-curve";
        case ExperimentKind::MeasuredVsLfa: return "measured-vs-lfa";
        case ExperimentKind::OracleCheck: return "oracle-check";
        case ExperimentKind::CgcProbe: return "cgc-probe";
    }
    return "unknown";
}

std::string to_string(CoarseKind kind) {
    switch (kind) {
        case CoarseKind::Rediscretize: return "rediscretize";
        case CoarseKind::Ideal: return "ideal";
        case CoarseKind::Modified: return "modified";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
    for (auto k : {ExperimentKind::LfaSweep, ExperimentKind::LowerBoundCurve, ExperimentKind::MeasuredVsLfa,
                   ExperimentKind::OracleCheck, ExperimentKind::CgcProbe})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

CoarseKind parse_coarse_kind(const std::string& s) {
    for (auto k : {CoarseKind::Rediscretize, CoarseKind::Ideal, CoarseKind::Modified})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown coarse-operator kind '" + s + "'");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::LfaSweep:
            break;
        case ExperimentKind::LowerBoundCurve:
            c.p = {1, 3};
            c.m = {2, 4};
            c.cfl.clear();
            c.omega_points = 128;
            break;
        case ExperimentKind::MeasuredVsLfa:
            c.p = {1, 3};
            c.m = {2, 4};
            c.cfl.clear();
            c.n_x = 128;
            c.n_t = 4096;
            break;
        case ExperimentKind::OracleCheck:
            c.p = {1};
            c.m = {2};
            c.cfl = {0.35};
            c.n_x = 4;
            c.n_t = 256;
            break;
        case ExperimentKind::CgcProbe:
            c.p = {1, 3};
            c.m = {2, 4};
            c.nu = 0;
            c.cfl = {0.3, 0.6, 0.8, 0.9};
            break;
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_key_values(const std::map<std::string, std::string>& kv,
                                                   ExperimentKind fallback) {
    static const std::set<std::string> known{"experiment",   "p",          "m",          "nu",         "cfl",
                                             "n_x",          "n_t",        "omega_points", "theta_points", "eps_points",
                                             "coarse",       "boundary",   "seed",       "output",     "max_iters",
                                             "residual_tol", "omega_kmin", "omega_kmax", "slack"};
    for (const auto& [k, v] : kv)
        if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");

    const auto it = kv.find("experiment");
    ExperimentConfig c = defaults(it != kv.end() ? parse_experiment_kind(it->second) : fallback);
    try {
        for (const auto& [k, v] : kv) {
            if (k == "p") c.p = parse_list<int>(k, v);
            else if (k == "m") c.m = parse_list<int>(k, v);
            else if (k == "nu") c.nu = parse_number<int>(k, v);
            else if (k == "cfl") c.cfl = parse_list<double>(k, v);
            else if (k == "n_x") c.n_x = parse_number<int>(k, v);
            else if (k == "n_t") c.n_t = parse_number<int>(k, v);
            else if (k == "omega_points") c.omega_points = parse_number<int>(k, v);
            else if (k == "theta_points") c.theta_points = parse_number<int>(k, v);
            else if (k == "eps_points") c.eps_points = parse_number<int>(k, v);
            else if (k == "coarse") c.coarse = parse_coarse_kind(v);
            else if (k == "boundary") c.boundary = parse_boundary_mode(v);
            else if (k == "seed") c.seed = parse_number<std::uint64_t>(k, v);
            else if (k == "output") c.output = v;
            else if (k == "max_iters") c.max_iters = parse_number<int>(k, v);
            else if (k == "residual_tol") c.residual_tol = parse_number<double>(k, v);
            else if (k == "omega_kmin") c.omega_kmin = parse_number<int>(k, v);
            else if (k == "omega_kmax") c.omega_kmax = parse_number<int>(k, v);
            else if (k == "slack") c.slack = parse_number<double>(k, v);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    if (p.empty() || m.empty()) throw ConfigError("p and m need at least one value");
    for (int v : p)
        if (v < 1 || v % 2 == 0) throw ConfigError("p must be odd and positive, got " + std::to_string(v));
    for (int v : m)
        if (v < 2) throw ConfigError("m must be at least 2, got " + std::to_string(v));
    for (double v : cfl)
        if (!(v > 0.0)) throw ConfigError("cfl values must be positive");
    if (nu < 0 || nu > 8) throw ConfigError("nu must lie in [0, 8]");
    if (n_x <= 0 || n_t <= 0 || omega_points <= 0 || theta_points <= 0 || eps_points <= 0)
        throw ConfigError("grid sizes must be positive");
    if (max_iters < 1) throw ConfigError("max_iters must be positive");
    if (!(residual_tol > 0.0)) throw ConfigError("residual_tol must be positive");
    if (omega_kmin >= omega_kmax) throw ConfigError("omega_kmin must be below omega_kmax");
    if (!(slack >= 0.0)) throw ConfigError("slack must be nonnegative");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    return {
        {"experiment", to_string(experiment)},
        {"p", join(p)},
        {"m", join(m)},
        {"nu", std::to_string(nu)},
        {"cfl", cfl.empty() ? "auto" : join(cfl)},
        {"n_x", std::to_string(n_x)},
        {"n_t", std::to_string(n_t)},
        {"omega_points", std::to_string(omega_points)},
        {"theta_points", std::to_string(theta_points)},
        {"eps_points", std::to_string(eps_points)},
        {"coarse", to_string(coarse)},
        {"boundary", to_string(boundary)},
        {"seed", std::to_string(seed)},
        {"max_iters", std::to_string(max_iters)},
        {"residual_tol", fmt_double(residual_tol)},
        {"omega_kmin", std::to_string(omega_kmin)},
        {"omega_kmax", std::to_string(omega_kmax)},
        {"slack", fmt_double(slack)},
    };
}

}  // namespace mgrit_lfa
