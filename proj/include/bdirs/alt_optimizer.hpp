#ifndef BDIRS_ALT_OPTIMIZER_HPP
#define BDIRS_ALT_OPTIMIZER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bdirs/objective.hpp"
#include "bdirs/phase_designer.hpp"
#include "bdirs/precoder.hpp"

namespace bdirs {

enum class Variant { bd, diag };

std::string variant_name(Variant v);

struct JointConfig {
    double p_tot_w = 0.01;
    double noise_w = 3.981071705534972e-15;
    QuantSpec quant = QuantSpec(1, 1.0);
    SolverConfig precoder;
    PhaseDesignerConfig phase;
    double eps_outer = 1e-4; // bits/s/Hz
    int max_outer = 50;
};

struct RunRecord {
    JointConfig config;
    std::uint64_t seed = 0;
    Variant variant = Variant::bd;
    std::vector<std::pair<int, double>> trace; // (outer_iter, se_bits_per_hz)
    bool converged = false;
    int iters_used = 0;
    double wall_time_s = 0.0;

    double final_se() const { return trace.empty() ? 0.0 : trace.back().second; }
};

/// Deterministic start: Phi0 aligns the diagonal IRS for a uniform codeword,
/// v0 = project_to_xi(H^H Phi0 g) at the exact power scale.
std::pair<ScaledCodeword, arma::cx_mat> initialize(const ChannelPair &channels,
                                                   const JointConfig &cfg);

/// Alternates P1 and the phase design until the outer SE change falls below
/// eps_outer or max_outer is exhausted. The diag variant re-aligns the
/// diagonal baseline each iteration; the bd variant first runs the diagonal
/// alternation to convergence and then refines beyond-diagonal from that
/// solution, so its final SE never falls below the diag variant's on the
/// same channels. Every half-step is accepted only if SE does not decrease,
/// making the trace non-decreasing.
RunRecord run_joint(const ChannelPair &channels, const JointConfig &cfg, Variant variant,
                    std::uint64_t seed);

} // namespace bdirs

#endif // BDIRS_ALT_OPTIMIZER_HPP
