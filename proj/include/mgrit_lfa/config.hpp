/// @file config.hpp
/// @brief Flat "key = value" experiment configuration.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mgrit_lfa/mgrit.hpp"

namespace mgrit_lfa {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lines of the form `key = value`; `#` starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

enum class ExperimentKind { LfaSweep, LowerBoundCurve, MeasuredVsLfa, OracleCheck, CgcProbe };
enum class CoarseKind { Rediscretize, Ideal, Modified };

std::string to_string(ExperimentKind kind);
std::string to_string(CoarseKind kind);
ExperimentKind parse_experiment_kind(const std::string& s);
CoarseKind parse_coarse_kind(const std::string& s);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::LfaSweep;
    std::vector<int> p{3};
    std::vector<int> m{4};
    int nu = 1;
    /// Explicit CFL numbers; empty lets the experiment choose.
    std::vector<double> cfl{0.8};
    int n_x = 128;
    int n_t = 4096;
    int omega_points = 1024;
    int theta_points = 256;
    int eps_points = 101;
    CoarseKind coarse = CoarseKind::Rediscretize;
    BoundaryMode boundary = BoundaryMode::InitialValue;
    std::uint64_t seed = 1;
    std::string output;
    int max_iters = 400;
    double residual_tol = 1e-10;
    int omega_kmin = 4;
    int omega_kmax = 10;
    double slack = 0.05;

    /// Defaults reproducing the corresponding figure or check.
    static ExperimentConfig defaults(ExperimentKind kind);
    /// Defaults for the kind named by `experiment` (or `fallback`), overridden by the given keys.
    static ExperimentConfig from_key_values(const std::map<std::string, std::string>& kv, ExperimentKind fallback);

    void validate() const;
    /// Ordered (key, value) pairs echoed into output metadata.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

}  // namespace mgrit_lfa
