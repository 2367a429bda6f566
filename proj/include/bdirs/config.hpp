#ifndef BDIRS_CONFIG_HPP
#define BDIRS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bdirs/alt_optimizer.hpp"
#include "bdirs/channel.hpp"

namespace bdirs {

/// Full experiment description, read from a sectioned key = value file.
struct ExperimentConfig {
    ScenarioConfig scenario;
    double bandwidth_hz = 1e6;
    double noise_dbm_per_hz = -174.0;

    // [run]
    std::vector<std::uint64_t> seeds;
    int l_bits = 1;
    double xi_amp = 1.0;
    double p_dbm = 10.0; // convergence experiment power
    std::string variant = "both";
    int threads = 0; // 0 -> hardware concurrency
    std::string out_dir = ".";

    // [sweep]
    std::vector<int> sweep_n;
    std::vector<double> sweep_p_dbm;

    // solver sections
    SolverConfig precoder;
    PhaseDesignerConfig phase;
    double eps_outer = 1e-4;
    int max_outer = 50;

    // Throws ConfigError; when for_sweep is set the sweep grids must be
    // non-empty as well.
    void validate(bool for_sweep = false) const;

    double noise_w() const;
    JointConfig joint(int n_bs, double p_dbm_override) const;
};

ExperimentConfig parse_config_text(const std::string &text);
ExperimentConfig load_config(const std::string &path); // ConfigError on parse, IoError on read

/// "a..b" (inclusive range) or a comma-separated list.
std::vector<std::uint64_t> parse_seed_spec(const std::string &spec);

/// FNV-1a over the canonical serialization of every result-affecting field
/// (output paths and thread count excluded).
std::string config_hash_hex(const ExperimentConfig &cfg);

} // namespace bdirs

#endif // BDIRS_CONFIG_HPP
