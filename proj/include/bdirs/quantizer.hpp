#ifndef BDIRS_QUANTIZER_HPP
#define BDIRS_QUANTIZER_HPP

#include <armadillo>
#include <array>
#include <complex>
#include <vector>

namespace bdirs {

/// The 1-bit precoder alphabet {1+j, 1-j, -1+j, -1-j} and the L-bit phase
/// alphabet zeta = { xi * exp(j 2 pi k / 2^L) : k = 0..2^L-1 }.
///
/// Alphabet members at quarter-turn angles are stored as exact +-1 / +-j
/// multiples so that projections return bit-exact set members.
struct QuantSpec {
    int l_bits;
    double xi_amp;
    std::vector<std::complex<double>> zeta;
    std::array<std::complex<double>, 4> xi_set;

    explicit QuantSpec(int l_bits = 1, double xi_amp = 1.0);
};

/// Entrywise nearest point of the precoder alphabet: sign(Re) + j sign(Im),
/// zeros resolving to +1.
std::complex<double> project_to_xi(std::complex<double> z);
arma::cx_vec project_to_xi(const arma::cx_vec &z);

/// Nearest phase-alphabet member to z/|z| (amplitude forced to xi_amp).
/// z = 0 maps to zeta[0]; equidistant inputs resolve to the lower index.
std::complex<double> project_to_zeta(std::complex<double> z, const QuantSpec &spec);
arma::cx_mat project_to_zeta(const arma::cx_mat &z, const QuantSpec &spec);

/// Analog gain sqrt(p_tot / (2 n)): a full alphabet codeword scaled by it
/// meets tr(v v^H) = p_tot exactly.
double power_scale(int n, double p_tot_w);

double dbm_to_watts(double p_dbm);

/// 1-bit codeword plus the analog power scale.
struct ScaledCodeword {
    arma::cx_vec codeword; // entries in the precoder alphabet
    double scale = 0.0;    // sqrt(W)
};

/// Exact alphabet membership of every entry plus the power constraint
/// scale^2 * 2 n <= p_tot (within 1e-12 relative slack).
bool xi_feasible(const ScaledCodeword &v, double p_tot_w);

} // namespace bdirs

#endif // BDIRS_QUANTIZER_HPP
