#include "bdirs/phase_designer.hpp"

#include <cmath>
#include <stdexcept>

namespace bdirs {

std::pair<arma::cx_vec, arma::cx_vec> normalize_channels(const arma::cx_mat &h,
                                                         const arma::cx_vec &g,
                                                         const arma::cx_vec &alpha,
                                                         const arma::cx_vec &beta) {
    if (alpha.n_elem != g.n_elem)
        throw std::invalid_argument("normalize_channels: alpha must match g");
    if (beta.n_elem != h.n_cols)
        throw std::invalid_argument("normalize_channels: beta must match H's columns");

    const arma::cx_vec ag = alpha % g;
    const arma::cx_vec hb = h * beta;
    const double n_ag = arma::norm(ag);
    const double n_hb = arma::norm(hb);
    if (!(n_ag > 0.0) || !(n_hb > 0.0))
        throw std::domain_error("normalize_channels: degenerate channel (zero norm)");
    return {hb / n_hb, ag / n_ag}; // (h_bar, g_bar)
}

arma::cx_mat build_difference_matrix(const arma::cx_vec &g_bar, const arma::cx_vec &h_bar) {
    if (g_bar.n_elem != h_bar.n_elem)
        throw std::invalid_argument("build_difference_matrix: dimension mismatch");
    const arma::cx_mat a = g_bar * g_bar.t();
    const arma::cx_mat b = h_bar * h_bar.t();
    return 0.5 * (a + a.t()) - 0.5 * (b + b.t());
}

void hermitian_eig(const arma::cx_mat &a, arma::cx_mat &eigvecs, arma::vec &eigvals) {
    if (a.n_rows != a.n_cols)
        throw std::invalid_argument("hermitian_eig: matrix must be square");
    const double scale = std::max(1.0, arma::norm(a, "fro"));
    if (arma::norm(a - a.t(), "fro") > 1e-8 * scale)
        throw std::invalid_argument("hermitian_eig: matrix not Hermitian within 1e-8");

    arma::vec ascending;
    arma::cx_mat vecs;
    if (!arma::eig_sym(ascending, vecs, a))
        throw std::runtime_error("hermitian_eig: decomposition failed");
    eigvals = arma::reverse(ascending);
    eigvecs = arma::fliplr(vecs);
}

std::optional<arma::cx_mat> build_transform(PhaseDesignState &state, double bypass_tol) {
    const arma::uword m = state.eigvals.n_elem;
    if (m == 0 || state.eigvecs.n_rows != m || state.g_bar.n_elem != m ||
        state.h_bar.n_elem != m)
        throw std::invalid_argument("build_transform: state not populated");

    const double lam_max = state.eigvals(0);
    const double lam_min = state.eigvals(m - 1);
    if (!(lam_max > 0.0 && lam_min < 0.0) || (lam_max - lam_min) < bypass_tol)
        return std::nullopt;

    const double gap = lam_max - lam_min;
    const double q_first = std::sqrt(-lam_min / gap);
    const double q_last = std::sqrt(lam_max / gap);

    state.q_mat = arma::cx_mat(m, m, arma::fill::eye);
    state.q_mat(0, 0) = q_first;
    state.q_mat(m - 1, m - 1) = q_last;
    state.q_mat(0, m - 1) = q_last;
    state.q_mat(m - 1, 0) = -q_first;

    state.gamma1 = arma::cx_vec(m, arma::fill::zeros);
    state.gamma2 = arma::cx_vec(m, arma::fill::zeros);
    state.gamma1(0) = state.q_mat(m - 1, 0);
    state.gamma1(m - 1) = -state.q_mat(0, 0);
    state.gamma2(0) = state.q_mat(0, m - 1);
    state.gamma2(m - 1) = -state.q_mat(m - 1, m - 1);

    // Co-phasing adjustments: with phi_k = -angle((X^T g_bar)_k (X^T h_bar)_k)
    // every term of g_bar^T (X D X^T) h_bar becomes nonnegative real, the
    // largest magnitude a diagonal D can give in this basis.
    const arma::cx_vec xg = state.eigvecs.st() * state.g_bar;
    const arma::cx_vec xh = state.eigvecs.st() * state.h_bar;
    state.phi_vec.set_size(m);
    for (arma::uword k = 0; k < m; ++k)
        state.phi_vec(k) = -std::arg(xg(k)) - std::arg(xh(k));

    state.d_mat = arma::cx_mat(m, m, arma::fill::zeros);
    for (arma::uword k = 0; k < m; ++k)
        state.d_mat(k, k) = std::polar(1.0, state.phi_vec(k));

    const std::complex<double> gh = arma::cdot(state.g_bar, state.h_bar);
    const std::complex<double> s = std::polar(1.0, std::arg(gh));
    state.phi_candidate = s * (state.eigvecs * state.d_mat * state.eigvecs.st());
    if (!state.phi_candidate.is_finite())
        throw std::runtime_error("build_transform: non-finite candidate");
    return state.phi_candidate;
}

arma::cx_mat safeguarded_phase_update(const arma::cx_mat &phi_prev, const arma::cx_mat &phi_raw,
                                      const QuantSpec &spec, const SeContext &se) {
    const arma::cx_mat candidate = project_to_zeta(phi_raw, spec);
    if (se(candidate) > se(phi_prev))
        return candidate;
    return phi_prev;
}

arma::cx_mat greedy_phase_refine(const arma::cx_mat &phi, const QuantSpec &spec,
                                 const SeContext &se, int max_sweeps) {
    arma::cx_mat best = phi;
    double best_se = se(best);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool changed = false;
        for (arma::uword i = 0; i < best.n_rows; ++i) {
            for (arma::uword j = 0; j < best.n_cols; ++j) {
                const std::complex<double> incumbent = best(i, j);
                std::complex<double> pick = incumbent;
                for (const auto &zk : spec.zeta) {
                    if (zk == incumbent)
                        continue;
                    best(i, j) = zk;
                    const double cand_se = se(best);
                    if (cand_se > best_se) {
                        best_se = cand_se;
                        pick = zk;
                    }
                }
                best(i, j) = pick;
                if (pick != incumbent)
                    changed = true;
            }
        }
        if (!changed)
            break;
    }
    return best;
}

arma::cx_mat dirs_baseline(const arma::cx_mat &h, const arma::cx_vec &g,
                           const ScaledCodeword &v, const QuantSpec &spec) {
    if (g.n_elem != h.n_rows || v.codeword.n_elem != h.n_cols)
        throw std::invalid_argument("dirs_baseline: shape mismatch");
    const arma::cx_vec w = h * (v.scale * v.codeword);
    arma::cx_mat phi(h.n_rows, h.n_rows, arma::fill::zeros);
    for (arma::uword m = 0; m < h.n_rows; ++m) {
        const std::complex<double> cascade = std::conj(g(m)) * w(m);
        phi(m, m) = project_to_zeta(std::polar(1.0, std::arg(cascade)), spec);
    }
    return phi;
}

namespace {

// |<Phi_proj, Phi_raw>_F| / (||Phi_proj||_F ||Phi_raw||_F); -1 flags a
// degenerate or bypassed evaluation so the line search steers away.
double projection_correlation(const arma::cx_mat &h, const arma::cx_vec &g,
                              const arma::cx_vec &alpha, const arma::cx_vec &beta,
                              const QuantSpec &spec, double bypass_tol,
                              PhaseDesignState *state_out) {
    PhaseDesignState st;
    st.alpha = alpha;
    st.beta = beta;
    const arma::cx_vec ag = alpha % g;
    const arma::cx_vec hb = h * beta;
    if (!(arma::norm(ag) > 0.0) || !(arma::norm(hb) > 0.0))
        return -1.0;
    auto [h_bar, g_bar] = normalize_channels(h, g, alpha, beta);
    st.h_bar = h_bar;
    st.g_bar = g_bar;
    st.pi_mat = build_difference_matrix(st.g_bar, st.h_bar);
    hermitian_eig(st.pi_mat, st.eigvecs, st.eigvals);
    const auto raw = build_transform(st, bypass_tol);
    if (!raw)
        return -1.0;
    const arma::cx_mat proj = project_to_zeta(*raw, spec);
    const double denom = arma::norm(proj, "fro") * arma::norm(*raw, "fro");
    if (state_out)
        *state_out = st;
    if (!(denom > 0.0))
        return -1.0;
    return std::abs(arma::cdot(arma::vectorise(proj), arma::vectorise(*raw))) / denom;
}

} // namespace

arma::cx_mat bd_phase_step(const arma::cx_mat &phi_prev, const arma::cx_mat &h,
                           const arma::cx_vec &g, const QuantSpec &spec, const SeContext &se,
                           const PhaseDesignerConfig &cfg, PhaseDesignState *state_out) {
    arma::cx_mat phi = phi_prev;

    const arma::uword m = h.n_rows;
    const arma::uword n = h.n_cols;
    const bool degenerate = !(arma::norm(g) > 0.0) || !(arma::norm(h, "fro") > 0.0);

    if (!degenerate) {
        // alpha and beta packed into one vector for the shared gradient and
        // line-search machinery; scored by the projection correlation.
        arma::cx_vec u(m + n, arma::fill::ones);
        const auto unpack = [m, n](const arma::cx_vec &vec) {
            return std::make_pair(arma::cx_vec(vec.head(m)), arma::cx_vec(vec.tail(n)));
        };
        const RealObjective score = [&](const arma::cx_vec &vec) {
            auto [alpha, beta] = unpack(vec);
            return projection_correlation(h, g, alpha, beta, spec, cfg.bypass_tol, nullptr);
        };

        if (!cfg.correlation_step_candidates.empty()) {
            const arma::cx_vec grad = numerical_gradient(u, score, cfg.correlation_delta);
            const double gnorm = arma::norm(grad);
            if (gnorm > 0.0) {
                const double unit = arma::norm(u) / gnorm;
                std::vector<double> steps(cfg.correlation_step_candidates.size());
                for (std::size_t i = 0; i < steps.size(); ++i)
                    steps[i] = cfg.correlation_step_candidates[i] * unit;
                const LineSearchResult ls = line_search(u, grad, score, steps);
                if (ls.step > 0.0)
                    u += ls.step * grad;
            }
        }

        auto [alpha, beta] = unpack(u);
        PhaseDesignState st;
        const double corr =
            projection_correlation(h, g, alpha, beta, spec, cfg.bypass_tol, &st);
        if (corr >= 0.0 && st.phi_candidate.n_rows == m) {
            phi = safeguarded_phase_update(phi, st.phi_candidate, spec, se);
        }
        if (state_out)
            *state_out = st;
    }

    return greedy_phase_refine(phi, spec, se, cfg.max_sweeps);
}

} // namespace bdirs
