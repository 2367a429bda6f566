#include "bdirs/precoder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdirs {

std::vector<double> default_step_candidates() {
    std::vector<double> out(11);
    double x = 1.0;
    for (auto &c : out) {
        c = x;
        x *= 0.5;
    }
    return out;
}

namespace {

double checked_eval(const RealObjective &f, const arma::cx_vec &v, const char *where) {
    const double y = f(v);
    if (!std::isfinite(y))
        throw std::runtime_error(std::string(where) + ": objective evaluated non-finite");
    return y;
}

} // namespace

arma::cx_vec numerical_gradient(const arma::cx_vec &v, const RealObjective &objective,
                                double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("numerical_gradient: delta must be > 0");
    arma::cx_vec grad(v.n_elem);
    arma::cx_vec probe = v;
    const double inv = 1.0 / (2.0 * delta);
    for (arma::uword k = 0; k < v.n_elem; ++k) {
        const std::complex<double> orig = v(k);

        probe(k) = orig + delta;
        const double fp = checked_eval(objective, probe, "numerical_gradient");
        probe(k) = orig - delta;
        const double fm = checked_eval(objective, probe, "numerical_gradient");

        probe(k) = orig + std::complex<double>(0.0, delta);
        const double fpj = checked_eval(objective, probe, "numerical_gradient");
        probe(k) = orig - std::complex<double>(0.0, delta);
        const double fmj = checked_eval(objective, probe, "numerical_gradient");

        probe(k) = orig;
        grad(k) = std::complex<double>((fp - fm) * inv, (fpj - fmj) * inv);
    }
    return grad;
}

arma::cx_vec cg_direction(const arma::cx_vec &grad_new, const arma::cx_vec &grad_old,
                          const arma::cx_vec &dir_old) {
    const double denom = arma::norm(grad_old);
    if (denom < 1e-12)
        return grad_new;
    const double num = arma::norm(grad_new);
    const double beta_fr = (num * num) / (denom * denom);
    return grad_new + beta_fr * dir_old;
}

LineSearchResult line_search(const arma::cx_vec &v, const arma::cx_vec &dir,
                             const RealObjective &objective,
                             const std::vector<double> &candidates) {
    if (candidates.empty())
        throw std::invalid_argument("line_search: candidate list must be non-empty");
    LineSearchResult best{0.0, checked_eval(objective, v, "line_search")};
    for (double xi : candidates) {
        const double se = checked_eval(objective, v + xi * dir, "line_search");
        if (se > best.se) {
            best.step = xi;
            best.se = se;
        }
    }
    return best;
}

PrecoderResult solve_p1(const LinkObjective &link, const arma::cx_mat &phi,
                        const ScaledCodeword &init, const SolverConfig &cfg,
                        double p_tot_w) {
    if (!xi_feasible(init, p_tot_w))
        throw std::invalid_argument("solve_p1: init codeword infeasible");
    if (cfg.max_iter < 1 || !(cfg.eps > 0.0) || !(cfg.delta > 0.0))
        throw std::invalid_argument("solve_p1: invalid solver config");

    const int n = static_cast<int>(init.codeword.n_elem);
    const double scale = power_scale(n, p_tot_w);
    const double sigma2 = link.noise_power_w;
    const arma::cx_vec h_eff =
        effective_channel(link.channels.h_bs_irs, phi, link.channels.g_irs_user);

    const auto se_of_codeword = [&](const arma::cx_vec &cw) {
        return spectral_efficiency(snr(h_eff, ScaledCodeword{cw, scale}, sigma2));
    };
    // Continuous relaxation driving the gradient: the unprojected vector
    // normalized to meet the power constraint with equality. Scale-invariant,
    // so the surrogate cannot drift radially (projection ignores radius).
    const RealObjective f_cont = [&](const arma::cx_vec &v) {
        const double nrm = arma::norm(v);
        if (!(nrm > 0.0))
            return 0.0;
        const double amp = std::abs(arma::cdot(h_eff, v)) / nrm;
        return std::log2(1.0 + p_tot_w * amp * amp / sigma2);
    };
    const RealObjective f_quant = [&](const arma::cx_vec &v) {
        return se_of_codeword(project_to_xi(v));
    };

    PrecoderState st;
    st.v_cont = arma::conv_to<arma::cx_vec>::from(init.codeword);
    st.v_quant = ScaledCodeword{init.codeword, scale};
    st.best_se = se_of_codeword(init.codeword);

    PrecoderResult out;
    out.trace.push_back(st.best_se);

    arma::cx_vec grad_old;
    double f_curr = f_cont(st.v_cont);
    for (st.iter = 0; st.iter < cfg.max_iter; ++st.iter) {
        st.grad = numerical_gradient(st.v_cont, f_cont, cfg.delta);
        if (st.iter % n == 0 || grad_old.n_elem == 0) {
            st.direction = st.grad;
        } else {
            st.direction = cg_direction(st.grad, grad_old, st.direction);
        }
        grad_old = st.grad;

        const double dir_norm = arma::norm(st.direction);
        if (dir_norm > 0.0) {
            const double v_norm = arma::norm(st.v_cont);
            const double unit = (v_norm > 0.0 ? v_norm : 1.0) / dir_norm;
            std::vector<double> steps(cfg.step_candidates.size());
            for (std::size_t i = 0; i < steps.size(); ++i)
                steps[i] = cfg.step_candidates[i] * unit;

            // Prefer a step that improves the projected objective; when none
            // exists, keep the surrogate moving along its own landscape so
            // later iterations can reach better quantization cells.
            LineSearchResult ls = line_search(st.v_cont, st.direction, f_quant, steps);
            if (ls.step == 0.0)
                ls = line_search(st.v_cont, st.direction, f_cont, steps);
            st.step = ls.step;
            if (ls.step > 0.0)
                st.v_cont += ls.step * st.direction;
        } else {
            st.step = 0.0;
        }

        const arma::cx_vec cw = project_to_xi(st.v_cont);
        const double se_q = se_of_codeword(cw);
        if (se_q > st.best_se) {
            st.best_se = se_q;
            st.v_quant = ScaledCodeword{cw, scale};
        }
        out.trace.push_back(st.best_se);

        // Convergence is judged on the CG iterates themselves, with the
        // tolerance shrunk to the objective's scale in low-SNR regimes.
        const double f_next = f_cont(st.v_cont);
        const double eps_eff = cfg.eps * std::min(1.0, std::max(f_curr, f_next));
        if (std::abs(f_next - f_curr) <= eps_eff)
            break;
        f_curr = f_next;
    }

    out.v = st.v_quant;
    return out;
}

} // namespace bdirs
