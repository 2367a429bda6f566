#ifndef BDIRS_OBJECTIVE_HPP
#define BDIRS_OBJECTIVE_HPP

#include <armadillo>

#include "bdirs/channel.hpp"
#include "bdirs/quantizer.hpp"

namespace bdirs {

/// h_eff = H^H Phi g  (N x 1). Throws std::invalid_argument on shape mismatch.
arma::cx_vec effective_channel(const arma::cx_mat &h_bs_irs, const arma::cx_mat &phi,
                               const arma::cx_vec &g_irs_user);

/// gamma = |h_eff^H v|^2 / sigma2 with v expanded as scale * codeword.
/// Single user, single stream: no interference term.
double snr(const arma::cx_vec &h_eff, const ScaledCodeword &v, double sigma2_w);

/// log2(1 + gamma), bits/s/Hz.
double spectral_efficiency(double gamma);

/// Noise floor in W from a dBm/Hz density integrated over the bandwidth.
double noise_power(double n0_dbm_hz, double bandwidth_hz);

/// Bundles the channels and noise so solvers can score any (v, Phi) pair.
struct LinkObjective {
    double noise_power_w;
    double bandwidth_hz;
    ChannelPair channels;

    LinkObjective(double noise_power_w, double bandwidth_hz, ChannelPair channels);

    double se_of(const arma::cx_mat &phi, const ScaledCodeword &v) const;
};

} // namespace bdirs

#endif // BDIRS_OBJECTIVE_HPP
