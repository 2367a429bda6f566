#include "bdirs/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace bdirs {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

// Uniform double in [0, 1) from the top 53 bits; identical on every platform
// for a given seed, unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return lo + uniform01(rng) * (hi - lo);
}

} // namespace

void ChannelParams::validate() const {
    if (!(carrier_freq_hz > 0.0))
        throw std::domain_error("ChannelParams: carrier_freq_hz must be > 0");
    if (!(d1_m > 0.0) || !(d2_m > 0.0))
        throw std::domain_error("ChannelParams: distances must be > 0");
    if (!(mu_abs_per_m >= 0.0))
        throw std::domain_error("ChannelParams: mu_abs_per_m must be >= 0");
    if (n_bs < 1 || m_irs < 1)
        throw std::domain_error("ChannelParams: element counts must be >= 1");
    if (!(antenna_spacing_m > 0.0))
        throw std::domain_error("ChannelParams: antenna_spacing_m must be > 0");
    if (!(c_mps > 0.0))
        throw std::domain_error("ChannelParams: c_mps must be > 0");
    for (double theta : {theta_t_rad, theta_r_rad, theta_u_rad}) {
        if (!(theta > -kHalfPi && theta < kHalfPi))
            throw std::domain_error("ChannelParams: angles must lie in (-pi/2, pi/2)");
    }
}

double path_loss(double f_hz, double d_m, double mu_per_m, double c_mps) {
    if (!(f_hz > 0.0))
        throw std::domain_error("path_loss: frequency must be > 0");
    if (!(d_m > 0.0))
        throw std::domain_error("path_loss: distance must be > 0");
    if (!(mu_per_m >= 0.0))
        throw std::domain_error("path_loss: absorption must be >= 0");
    const double spreading = c_mps / (4.0 * arma::datum::pi * f_hz * d_m);
    return spreading * std::exp(-0.5 * mu_per_m * d_m);
}

arma::cx_vec steering_vector(int n_elems, double upsilon) {
    if (n_elems < 1)
        throw std::domain_error("steering_vector: n_elems must be >= 1");
    arma::cx_vec a(n_elems);
    for (int k = 0; k < n_elems; ++k)
        a(k) = std::polar(1.0, arma::datum::pi * static_cast<double>(k) * upsilon);
    return a;
}

double spatial_frequency(double d0_m, double f_hz, double theta_rad, double c_mps) {
    return 2.0 * d0_m * f_hz * std::sin(theta_rad) / c_mps;
}

ChannelPair make_channels(const ChannelParams &p) {
    p.validate();
    const double rho1 = path_loss(p.carrier_freq_hz, p.d1_m, p.mu_abs_per_m, p.c_mps);
    const double rho2 = path_loss(p.carrier_freq_hz, p.d2_m, p.mu_abs_per_m, p.c_mps);

    const double u_t = spatial_frequency(p.antenna_spacing_m, p.carrier_freq_hz, p.theta_t_rad, p.c_mps);
    const double u_r = spatial_frequency(p.antenna_spacing_m, p.carrier_freq_hz, p.theta_r_rad, p.c_mps);
    const double u_u = spatial_frequency(p.antenna_spacing_m, p.carrier_freq_hz, p.theta_u_rad, p.c_mps);

    const arma::cx_vec a_m = steering_vector(p.m_irs, u_r);
    const arma::cx_vec a_n = steering_vector(p.n_bs, u_t);
    const arma::cx_vec a_u = steering_vector(p.m_irs, u_u);

    ChannelPair out;
    out.h_bs_irs = rho1 * (a_m * a_n.t()); // a_m * a_n^H
    out.g_irs_user = rho2 * arma::conj(a_u);
    return out;
}

ChannelParams sample_geometry(std::uint64_t rng_seed, const ScenarioConfig &cfg) {
    std::mt19937_64 rng(rng_seed);

    ChannelParams p;
    p.carrier_freq_hz = cfg.carrier_freq_hz;
    p.mu_abs_per_m = cfg.mu_abs_per_m;
    p.n_bs = cfg.n_bs;
    p.m_irs = cfg.m_irs;
    p.c_mps = cfg.c_mps;
    p.antenna_spacing_m = cfg.antenna_spacing_m > 0.0
                              ? cfg.antenna_spacing_m
                              : cfg.c_mps / (2.0 * cfg.carrier_freq_hz);

    // Fixed draw order keeps params reproducible per seed independent of
    // which distances are configured.
    p.theta_t_rad = uniform(rng, -kHalfPi, kHalfPi);
    p.theta_r_rad = uniform(rng, -kHalfPi, kHalfPi);
    p.theta_u_rad = uniform(rng, -kHalfPi, kHalfPi);
    const double ux = uniform(rng, 0.0, cfg.area_m);
    const double uy = uniform(rng, 0.0, cfg.area_m);

    if (cfg.fixed_d1_m > 0.0) {
        p.d1_m = cfg.fixed_d1_m;
    } else {
        p.d1_m = std::hypot(cfg.irs_x - cfg.bs_x, cfg.irs_y - cfg.bs_y);
    }
    if (cfg.fixed_d2_m > 0.0) {
        p.d2_m = cfg.fixed_d2_m;
    } else {
        p.d2_m = std::hypot(ux - cfg.irs_x, uy - cfg.irs_y);
        if (p.d2_m < 1e-6)
            p.d2_m = 1e-6; // user drawn exactly onto the IRS
    }
    return p;
}

} // namespace bdirs
