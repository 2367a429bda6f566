#include "bdirs/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace bdirs {

arma::cx_vec effective_channel(const arma::cx_mat &h, const arma::cx_mat &phi,
                               const arma::cx_vec &g) {
    if (phi.n_rows != h.n_rows || phi.n_cols != h.n_rows || g.n_elem != h.n_rows)
        throw std::invalid_argument("effective_channel: shape mismatch");
    return h.t() * (phi * g);
}

double snr(const arma::cx_vec &h_eff, const ScaledCodeword &v, double sigma2_w) {
    if (!(sigma2_w > 0.0))
        throw std::invalid_argument("snr: sigma2 must be > 0");
    if (h_eff.n_elem != v.codeword.n_elem)
        throw std::invalid_argument("snr: dimension mismatch");
    const std::complex<double> inner = arma::cdot(h_eff, v.codeword); // h_eff^H codeword
    const double amp = v.scale * std::abs(inner);
    return amp * amp / sigma2_w;
}

double spectral_efficiency(double gamma) {
    if (!(gamma >= 0.0))
        throw std::invalid_argument("spectral_efficiency: gamma must be >= 0");
    return std::log2(1.0 + gamma);
}

double noise_power(double n0_dbm_hz, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("noise_power: bandwidth must be > 0");
    return dbm_to_watts(n0_dbm_hz + 10.0 * std::log10(bandwidth_hz));
}

LinkObjective::LinkObjective(double noise_power_w_in, double bandwidth_hz_in, ChannelPair channels_in)
    : noise_power_w(noise_power_w_in), bandwidth_hz(bandwidth_hz_in), channels(std::move(channels_in)) {
    if (!(noise_power_w > 0.0))
        throw std::invalid_argument("LinkObjective: noise_power_w must be > 0");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("LinkObjective: bandwidth_hz must be > 0");
}

double LinkObjective::se_of(const arma::cx_mat &phi, const ScaledCodeword &v) const {
    const arma::cx_vec h_eff = effective_channel(channels.h_bs_irs, phi, channels.g_irs_user);
    return spectral_efficiency(snr(h_eff, v, noise_power_w));
}

} // namespace bdirs
