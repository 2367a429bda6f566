#include "bdirs/quantizer.hpp"

#include <cmath>
#include <stdexcept>

namespace bdirs {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// exp(j 2 pi k / 2^L) scaled by amp, with quarter-turn angles emitted as
// exact +-1 / +-j multiples so cardinal members carry no sin/cos rounding.
std::complex<double> alphabet_point(int k, int count, double amp) {
    const int quarter = 4 * k;
    if (quarter % count == 0) {
        switch ((quarter / count) % 4) {
            case 0: return {amp, 0.0};
            case 1: return {0.0, amp};
            case 2: return {-amp, 0.0};
            default: return {0.0, -amp};
        }
    }
    return std::polar(amp, kTwoPi * static_cast<double>(k) / static_cast<double>(count));
}

} // namespace

QuantSpec::QuantSpec(int l_bits_in, double xi_amp_in)
    : l_bits(l_bits_in),
      xi_amp(xi_amp_in),
      xi_set{std::complex<double>(1.0, 1.0), std::complex<double>(1.0, -1.0),
             std::complex<double>(-1.0, 1.0), std::complex<double>(-1.0, -1.0)} {
    if (l_bits < 1 || l_bits > 16)
        throw std::domain_error("QuantSpec: l_bits must be in [1, 16]");
    if (!(xi_amp > 0.0))
        throw std::domain_error("QuantSpec: xi_amp must be > 0");
    const int count = 1 << l_bits;
    zeta.resize(count);
    for (int k = 0; k < count; ++k)
        zeta[k] = alphabet_point(k, count, xi_amp);
}

std::complex<double> project_to_xi(std::complex<double> z) {
    // Ties (component exactly 0) resolve toward the non-negative member.
    const double re = z.real() >= 0.0 ? 1.0 : -1.0;
    const double im = z.imag() >= 0.0 ? 1.0 : -1.0;
    return {re, im};
}

arma::cx_vec project_to_xi(const arma::cx_vec &z) {
    arma::cx_vec out(z.n_elem);
    for (arma::uword i = 0; i < z.n_elem; ++i)
        out(i) = project_to_xi(z(i));
    return out;
}

std::complex<double> project_to_zeta(std::complex<double> z, const QuantSpec &spec) {
    const int count = static_cast<int>(spec.zeta.size());
    if (z == std::complex<double>(0.0, 0.0))
        return spec.zeta[0];

    const std::complex<double> u = z / std::abs(z);
    const double step = kTwoPi / static_cast<double>(count);
    const double t = std::atan2(u.imag(), u.real()) / step;
    const int k0 = static_cast<int>(std::floor(t));
    const auto wrap = [count](int k) { return ((k % count) + count) % count; };
    const int a = wrap(k0);
    const int b = wrap(k0 + 1);

    // Larger Re(u conj(zeta_k)) means smaller chordal distance; ties pick the
    // lower index.
    const double score_a = u.real() * spec.zeta[a].real() + u.imag() * spec.zeta[a].imag();
    const double score_b = u.real() * spec.zeta[b].real() + u.imag() * spec.zeta[b].imag();
    if (score_b > score_a)
        return spec.zeta[b];
    if (score_a > score_b)
        return spec.zeta[a];
    return spec.zeta[std::min(a, b)];
}

arma::cx_mat project_to_zeta(const arma::cx_mat &z, const QuantSpec &spec) {
    arma::cx_mat out(z.n_rows, z.n_cols);
    for (arma::uword j = 0; j < z.n_cols; ++j)
        for (arma::uword i = 0; i < z.n_rows; ++i)
            out(i, j) = project_to_zeta(z(i, j), spec);
    return out;
}

double power_scale(int n, double p_tot_w) {
    if (n < 1)
        throw std::domain_error("power_scale: n must be >= 1");
    if (!(p_tot_w > 0.0))
        throw std::domain_error("power_scale: p_tot_w must be > 0");
    return std::sqrt(p_tot_w / (2.0 * static_cast<double>(n)));
}

double dbm_to_watts(double p_dbm) {
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

bool xi_feasible(const ScaledCodeword &v, double p_tot_w) {
    if (v.codeword.n_elem == 0 || !(v.scale > 0.0))
        return false;
    for (arma::uword i = 0; i < v.codeword.n_elem; ++i) {
        const auto &c = v.codeword(i);
        if (std::abs(c.real()) != 1.0 || std::abs(c.imag()) != 1.0)
            return false;
    }
    const double power = v.scale * v.scale * 2.0 * static_cast<double>(v.codeword.n_elem);
    return power <= p_tot_w * (1.0 + 1e-12) + 1e-300;
}

} // namespace bdirs
