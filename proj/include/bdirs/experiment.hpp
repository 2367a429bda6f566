#ifndef BDIRS_EXPERIMENT_HPP
#define BDIRS_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bdirs/alt_optimizer.hpp"
#include "bdirs/config.hpp"

namespace bdirs {

struct OutputFiles {
    std::string csv_path;
    std::string json_path;
};

/// Per-seed, per-variant convergence traces (Fig. 1 style experiment).
/// CSV columns: seed,variant,outer_iter,se_bits_per_hz
OutputFiles run_convergence_experiment(const ExperimentConfig &cfg, const std::string &out_dir);

/// Antenna/power grid of final SE values (Fig. 2 style experiment).
/// CSV columns: n,p_dbm,variant,seed,se_final
OutputFiles run_sweep_experiment(const ExperimentConfig &cfg, const std::string &out_dir);

namespace io {

/// Shortest representation that stays stable across reruns; '.' decimal.
std::string format_double(double value);

/// Writes to <path>.tmp first and renames, so an interrupted write never
/// leaves a truncated final file. Throws IoError.
void write_file_atomic(const std::string &path, const std::string &content);

/// Creates the directory (if needed) and proves it is writable. Throws IoError.
void ensure_writable_dir(const std::string &dir);

} // namespace io

} // namespace bdirs

#endif // BDIRS_EXPERIMENT_HPP
