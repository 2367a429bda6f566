#ifndef BDIRS_PRECODER_HPP
#define BDIRS_PRECODER_HPP

#include <armadillo>
#include <functional>
#include <vector>

#include "bdirs/objective.hpp"
#include "bdirs/quantizer.hpp"

namespace bdirs {

/// Geometric step ladder {2^0, 2^-1, ..., 2^-10} used by the line searches.
std::vector<double> default_step_candidates();

struct SolverConfig {
    double delta = 1e-4;  // finite-difference offset
    double eps = 1e-4;    // convergence tolerance, bits/s/Hz
    int max_iter = 200;
    std::vector<double> step_candidates = default_step_candidates(); // descending, positive
};

/// Working state of one projected-CG solve.
struct PrecoderState {
    arma::cx_vec v_cont;     // continuous surrogate
    ScaledCodeword v_quant;  // best accepted quantized candidate
    arma::cx_vec grad;
    arma::cx_vec direction;
    double step = 0.0;
    int iter = 0;
    double best_se = 0.0;
};

using RealObjective = std::function<double(const arma::cx_vec &)>;

/// Central differences, real and imaginary perturbations per entry:
///   Re(grad_k) = [f(v + d e_k) - f(v - d e_k)] / (2 d)
///   Im(grad_k) = [f(v + j d e_k) - f(v - j d e_k)] / (2 d)
/// Throws std::runtime_error if the objective evaluates non-finite.
arma::cx_vec numerical_gradient(const arma::cx_vec &v, const RealObjective &objective,
                                double delta);

/// Fletcher-Reeves update p = grad_new + (|grad_new|^2 / |grad_old|^2) * dir_old,
/// falling back to steepest ascent when |grad_old| < 1e-12.
arma::cx_vec cg_direction(const arma::cx_vec &grad_new, const arma::cx_vec &grad_old,
                          const arma::cx_vec &dir_old);

struct LineSearchResult {
    double step = 0.0;
    double se = 0.0;
};

/// Evaluates the objective at v + xi * dir for every candidate xi and returns
/// the maximizer; step 0 (objective value at v) if no candidate improves.
LineSearchResult line_search(const arma::cx_vec &v, const arma::cx_vec &dir,
                             const RealObjective &objective,
                             const std::vector<double> &candidates);

struct PrecoderResult {
    ScaledCodeword v;
    std::vector<double> trace; // accepted SE per iteration, trace[0] = SE(init)
};

/// Maximizes SE over the 1-bit precoder with Phi fixed. The continuous
/// surrogate follows CG steps on the unprojected power-scaled objective;
/// quantized candidates are accepted only when they improve, so the returned
/// SE never falls below SE(init). Throws std::invalid_argument when init is
/// infeasible.
PrecoderResult solve_p1(const LinkObjective &link, const arma::cx_mat &phi,
                        const ScaledCodeword &init, const SolverConfig &cfg,
                        double p_tot_w);

} // namespace bdirs

#endif // BDIRS_PRECODER_HPP
