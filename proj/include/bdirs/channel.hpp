#ifndef BDIRS_CHANNEL_HPP
#define BDIRS_CHANNEL_HPP

#include <armadillo>
#include <cstdint>

namespace bdirs {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// Physical constants and geometry for one LoS THz link realization.
struct ChannelParams {
    double carrier_freq_hz = 1e11;
    double d1_m = 10.0;            // BS -> IRS distance
    double d2_m = 10.0;            // IRS -> user distance
    double mu_abs_per_m = 0.0033;  // molecular absorption coefficient
    double antenna_spacing_m = 0.0; // element spacing d0
    int n_bs = 1;                  // BS antenna count N
    int m_irs = 1;                 // IRS element count M
    double theta_t_rad = 0.0;      // departure angle at BS
    double theta_r_rad = 0.0;      // arrival angle at IRS
    double theta_u_rad = 0.0;      // departure angle IRS -> user
    double c_mps = kSpeedOfLight;

    // Throws std::domain_error on any violated constraint.
    void validate() const;
};

/// Generated LoS channels: H (M x N, BS -> IRS) and g (M x 1, IRS -> user).
struct ChannelPair {
    arma::cx_mat h_bs_irs;
    arma::cx_vec g_irs_user;
};

/// Free-space spreading with molecular absorption: (c / (4 pi f d)) * exp(-mu d / 2).
double path_loss(double f_hz, double d_m, double mu_per_m, double c_mps = kSpeedOfLight);

/// ULA response: entry k equals exp(j pi k upsilon), k = 0..n_elems-1.
arma::cx_vec steering_vector(int n_elems, double upsilon);

/// upsilon = 2 d0 f sin(theta) / c
double spatial_frequency(double d0_m, double f_hz, double theta_rad, double c_mps = kSpeedOfLight);

/// Rank-one LoS construction:
///   H = rho(f, d1) * a_M(u_r) * a_N(u_t)^H
///   g = rho(f, d2) * conj(a_M(u_u))   (stored as an M x 1 column)
ChannelPair make_channels(const ChannelParams &params);

/// Scenario-level knobs for seeded geometry sampling.
struct ScenarioConfig {
    double carrier_freq_hz = 1e11;
    int n_bs = 150;
    int m_irs = 150;
    double mu_abs_per_m = 0.0033;
    double antenna_spacing_m = 0.0; // 0 -> half wavelength c / (2 f)
    double area_m = 10.0;           // square side length
    double bs_x = 0.0, bs_y = 0.0;
    double irs_x = 5.0, irs_y = 5.0;
    double fixed_d1_m = 0.0;        // > 0 -> use as-is instead of node geometry
    double fixed_d2_m = 0.0;        // > 0 -> use as-is instead of sampling the user
    double c_mps = kSpeedOfLight;
};

/// Deterministic draw of angles (uniform on the open interval (-pi/2, pi/2))
/// and distances (fixed, or BS/IRS at configured positions with the user
/// placed uniformly in the area square).
ChannelParams sample_geometry(std::uint64_t rng_seed, const ScenarioConfig &config);

} // namespace bdirs

#endif // BDIRS_CHANNEL_HPP
