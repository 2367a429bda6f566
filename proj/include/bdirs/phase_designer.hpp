#ifndef BDIRS_PHASE_DESIGNER_HPP
#define BDIRS_PHASE_DESIGNER_HPP

#include <armadillo>
#include <functional>
#include <optional>
#include <vector>

#include "bdirs/precoder.hpp"
#include "bdirs/quantizer.hpp"

namespace bdirs {

struct PhaseDesignerConfig {
    int max_sweeps = 4;
    std::vector<double> correlation_step_candidates = default_step_candidates();
    double correlation_delta = 1e-4;
    double bypass_tol = 1e-12; // spectral gap below which the transform is skipped
};

/// Intermediate quantities of one beyond-diagonal design pass.
struct PhaseDesignState {
    arma::cx_vec alpha;        // controlling parameter on g (M)
    arma::cx_vec beta;         // combining vector on H's columns (N)
    arma::cx_vec g_bar;        // normalized IRS -> user channel
    arma::cx_vec h_bar;        // normalized BS -> IRS channel
    arma::cx_mat pi_mat;       // Hermitian difference matrix
    arma::cx_mat eigvecs;      // X, columns orthonormal
    arma::vec eigvals;         // descending
    arma::cx_mat q_mat;        // transformation scaffold
    arma::cx_vec gamma1;
    arma::cx_vec gamma2;
    arma::vec phi_vec;         // phase adjustments
    arma::cx_mat d_mat;        // diag(exp(j phi))
    arma::cx_mat phi_candidate;
};

/// g_bar = (alpha .* g) / ||alpha .* g||, h_bar = (H beta) / ||H beta||.
/// Throws std::domain_error when either denominator vanishes.
std::pair<arma::cx_vec, arma::cx_vec> normalize_channels(const arma::cx_mat &h_bs_irs,
                                                         const arma::cx_vec &g_irs_user,
                                                         const arma::cx_vec &alpha,
                                                         const arma::cx_vec &beta);

/// Pi = (A + A^H)/2 - (B + B^H)/2 with A = g_bar g_bar^H, B = h_bar h_bar^H.
arma::cx_mat build_difference_matrix(const arma::cx_vec &g_bar, const arma::cx_vec &h_bar);

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending with the
/// eigenvector columns reordered to match. Throws std::invalid_argument when
/// the input is not Hermitian within 1e-8.
void hermitian_eig(const arma::cx_mat &a, arma::cx_mat &eigvecs, arma::vec &eigvals);

/// Builds Q, gamma1/gamma2, the phase adjustments phi, D, and the raw
/// candidate Phi = s X D X^T with s = exp(j angle(g_bar^H h_bar)).
/// Requires state.eigvecs/eigvals/g_bar/h_bar to be populated. Returns
/// nullopt (bypass) when the spectrum has no sign change or the spectral
/// gap falls under bypass_tol.
std::optional<arma::cx_mat> build_transform(PhaseDesignState &state, double bypass_tol);

using SeContext = std::function<double(const arma::cx_mat &)>;

/// Projects phi_raw entrywise onto the phase alphabet and keeps the result
/// only when it strictly improves SE; otherwise returns phi_prev unchanged.
arma::cx_mat safeguarded_phase_update(const arma::cx_mat &phi_prev, const arma::cx_mat &phi_raw,
                                      const QuantSpec &spec, const SeContext &se);

/// Row-major coordinate ascent: each entry tries every alphabet value and
/// keeps a strict improvement. Stops after a sweep with no change or after
/// max_sweeps.
arma::cx_mat greedy_phase_refine(const arma::cx_mat &phi, const QuantSpec &spec,
                                 const SeContext &se, int max_sweeps);

/// Diagonal-IRS benchmark: m-th diagonal entry is the alphabet point nearest
/// exp(j angle(conj(g_m) (H v)_m)), co-phasing the m-th cascaded term;
/// off-diagonal entries are exactly zero.
arma::cx_mat dirs_baseline(const arma::cx_mat &h_bs_irs, const arma::cx_vec &g_irs_user,
                           const ScaledCodeword &v, const QuantSpec &spec);

/// One full P2 pass: alpha/beta line-searched on the projection correlation,
/// the transform candidate applied through the safeguard, then greedy
/// refinement from the incumbent and from each extra seed matrix, keeping
/// the best. SE(se) never decreases. Populates state with the last transform
/// evaluation for inspection.
arma::cx_mat bd_phase_step(const arma::cx_mat &phi_prev, const arma::cx_mat &h_bs_irs,
                           const arma::cx_vec &g_irs_user, const QuantSpec &spec,
                           const SeContext &se, const PhaseDesignerConfig &cfg,
                           PhaseDesignState *state_out = nullptr,
                           const std::vector<arma::cx_mat> &extra_seeds = {});

} // namespace bdirs

#endif // BDIRS_PHASE_DESIGNER_HPP
