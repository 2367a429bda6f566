#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bdirs/objective.hpp"
#include "bdirs/phase_designer.hpp"

using namespace bdirs;
using cd = std::complex<double>;

namespace {

arma::cx_vec random_cx_vec(std::mt19937_64 &rng, int n) {
    std::normal_distribution<double> nd(0.0, 1.0);
    arma::cx_vec v(n);
    for (auto &x : v)
        x = cd(nd(rng), nd(rng));
    return v;
}

ChannelPair random_channels(std::mt19937_64 &rng, int m, int n) {
    ChannelPair ch;
    ch.h_bs_irs = arma::reshape(random_cx_vec(rng, m * n), m, n);
    ch.g_irs_user = random_cx_vec(rng, m);
    return ch;
}

// Every M x M matrix with entries drawn from the full phase alphabet.
std::vector<arma::cx_mat> all_zeta_matrices(int m, const QuantSpec &spec) {
    const int cells = m * m;
    const std::size_t count = spec.zeta.size();
    std::size_t total = 1;
    for (int i = 0; i < cells; ++i)
        total *= count;
    std::vector<arma::cx_mat> out;
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        arma::cx_mat phi(m, m);
        std::size_t rem = idx;
        for (int c = 0; c < cells; ++c) {
            phi(c % m, c / m) = spec.zeta[rem % count];
            rem /= count;
        }
        out.push_back(phi);
    }
    return out;
}

bool in_zeta(cd value, const QuantSpec &spec) {
    for (const auto &z : spec.zeta)
        if (z == value)
            return true;
    return false;
}

} // namespace

TEST_CASE("normalize_channels basic values") {
    arma::cx_vec g{cd(3.0, 0.0), cd(0.0, 4.0)};
    arma::cx_vec alpha(2, arma::fill::ones);
    arma::cx_mat h(2, 2, arma::fill::eye);
    arma::cx_vec beta{cd(1.0, 0.0), cd(0.0, 0.0)};

    const auto [h_bar, g_bar] = normalize_channels(h, g, alpha, beta);
    CHECK(std::abs(g_bar(0) - cd(0.6, 0.0)) < 1e-15);
    CHECK(std::abs(g_bar(1) - cd(0.0, 0.8)) < 1e-15);
    CHECK(std::abs(h_bar(0) - cd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(h_bar(1)) == 0.0);
}

TEST_CASE("normalize_channels returns unit vectors") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 5);
        const int n = 2 + static_cast<int>(rng() % 5);
        const ChannelPair ch = random_channels(rng, m, n);
        const arma::cx_vec alpha = random_cx_vec(rng, m);
        const arma::cx_vec beta = random_cx_vec(rng, n);
        const auto [h_bar, g_bar] = normalize_channels(ch.h_bs_irs, ch.g_irs_user, alpha, beta);
        CHECK(arma::norm(g_bar) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(arma::norm(h_bar) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("normalize_channels rejects degenerate inputs") {
    arma::cx_mat h(2, 2, arma::fill::eye);
    arma::cx_vec g(2, arma::fill::ones);
    CHECK_THROWS_AS(normalize_channels(h, g, arma::cx_vec(2, arma::fill::zeros),
                                       arma::cx_vec(2, arma::fill::ones)),
                    std::domain_error);
    CHECK_THROWS_AS(normalize_channels(h, arma::cx_vec(2, arma::fill::zeros),
                                       arma::cx_vec(2, arma::fill::ones),
                                       arma::cx_vec(2, arma::fill::ones)),
                    std::domain_error);
}

TEST_CASE("build_difference_matrix reference cases") {
    arma::cx_vec e1{cd(1.0, 0.0), cd(0.0, 0.0)};
    arma::cx_vec e2{cd(0.0, 0.0), cd(1.0, 0.0)};

    CHECK(arma::norm(build_difference_matrix(e1, e1), "fro") == 0.0);

    const arma::cx_mat pi = build_difference_matrix(e1, e2);
    CHECK(std::abs(pi(0, 0) - cd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(pi(1, 1) - cd(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(pi(0, 1)) == 0.0);
}

TEST_CASE("difference matrix spectrum stays in [-1, 1] with zero trace") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 6);
        arma::cx_vec g_bar = random_cx_vec(rng, m);
        arma::cx_vec h_bar = random_cx_vec(rng, m);
        g_bar /= arma::norm(g_bar);
        h_bar /= arma::norm(h_bar);
        const arma::cx_mat pi = build_difference_matrix(g_bar, h_bar);
        CHECK(arma::norm(pi - pi.t(), "fro") < 1e-10);
        CHECK(std::abs(arma::trace(pi)) < 1e-10);

        arma::vec ev;
        arma::cx_mat x;
        hermitian_eig(pi, x, ev);
        CHECK(ev.max() <= 1.0 + 1e-10);
        CHECK(ev.min() >= -1.0 - 1e-10);
        CHECK(std::abs(arma::sum(ev)) < 1e-10);
    }
}

TEST_CASE("hermitian_eig reference cases") {
    arma::cx_mat eye3(3, 3, arma::fill::eye);
    arma::cx_mat x;
    arma::vec ev;
    hermitian_eig(eye3, x, ev);
    for (int i = 0; i < 3; ++i)
        CHECK(ev(i) == doctest::Approx(1.0));
    CHECK(arma::norm(x.t() * x - eye3, "fro") < 1e-12);

    arma::cx_mat d(2, 2, arma::fill::zeros);
    d(0, 0) = 2.0;
    d(1, 1) = -1.0;
    hermitian_eig(d, x, ev);
    CHECK(ev(0) == doctest::Approx(2.0));
    CHECK(ev(1) == doctest::Approx(-1.0));
    CHECK(std::abs(std::abs(x(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(x(1, 0)) < 1e-12);
}

TEST_CASE("hermitian_eig reconstruction oracle") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        arma::cx_mat a = arma::reshape(random_cx_vec(rng, 25), 5, 5);
        a = 0.5 * (a + a.t());
        arma::cx_mat x;
        arma::vec ev;
        hermitian_eig(a, x, ev);
        for (int i = 1; i < 5; ++i)
            CHECK(ev(i - 1) >= ev(i));
        const arma::cx_mat lam = arma::diagmat(arma::conv_to<arma::cx_vec>::from(ev));
        CHECK(arma::norm(x * lam * x.t() - a, "fro") <= 1e-8 * std::max(1.0, arma::norm(a, "fro")));
        CHECK(arma::norm(x.t() * x - arma::cx_mat(5, 5, arma::fill::eye), "fro") < 1e-10);
    }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    arma::cx_mat a(2, 2, arma::fill::zeros);
    a(0, 1) = cd(1.0, 0.0);
    a(1, 0) = cd(0.0, 0.5);
    arma::cx_mat x;
    arma::vec ev;
    CHECK_THROWS_AS(hermitian_eig(a, x, ev), std::invalid_argument);
    CHECK_THROWS_AS(hermitian_eig(arma::cx_mat(2, 3, arma::fill::zeros), x, ev),
                    std::invalid_argument);
}

TEST_CASE("build_transform plug-in evaluation") {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    PhaseDesignState st;
    st.eigvecs = arma::cx_mat(2, 2, arma::fill::eye);
    st.eigvals = arma::vec{1.0, -1.0};
    st.g_bar = arma::cx_vec{cd(inv_sqrt2, 0.0), cd(inv_sqrt2, 0.0)};
    st.h_bar = st.g_bar;

    const auto raw = build_transform(st, 1e-12);
    REQUIRE(raw.has_value());

    CHECK(st.q_mat(0, 0).real() == doctest::Approx(inv_sqrt2));
    CHECK(st.q_mat(1, 1).real() == doctest::Approx(inv_sqrt2));
    CHECK(st.q_mat(0, 1).real() == doctest::Approx(inv_sqrt2));
    CHECK(st.q_mat(1, 0).real() == doctest::Approx(-inv_sqrt2));
    CHECK(std::abs(st.gamma1(0) - st.q_mat(1, 0)) == 0.0);
    CHECK(std::abs(st.gamma1(1) + st.q_mat(0, 0)) == 0.0);

    // positive-real projections give zero phase adjustments, so D = I and
    // Phi_raw = s I with s = 1
    CHECK(arma::norm(st.phi_vec) < 1e-14);
    CHECK(arma::norm(st.d_mat - arma::cx_mat(2, 2, arma::fill::eye), "fro") < 1e-14);
    CHECK(arma::norm(*raw - arma::cx_mat(2, 2, arma::fill::eye), "fro") < 1e-12);

    for (arma::uword k = 0; k < 2; ++k)
        CHECK(std::abs(std::abs(st.d_mat(k, k)) - 1.0) < 1e-15);
}

TEST_CASE("build_transform bypasses degenerate spectra") {
    PhaseDesignState st;
    st.eigvecs = arma::cx_mat(2, 2, arma::fill::eye);
    st.g_bar = arma::cx_vec{cd(1.0, 0.0), cd(0.0, 0.0)};
    st.h_bar = st.g_bar;

    st.eigvals = arma::vec{1e-13, -1e-13}; // gap below tolerance
    CHECK_FALSE(build_transform(st, 1e-12).has_value());

    st.eigvals = arma::vec{2.0, 1.0}; // no sign change
    CHECK_FALSE(build_transform(st, 1e-12).has_value());

    st.eigvals = arma::vec{0.0, 0.0};
    CHECK_FALSE(build_transform(st, 1e-12).has_value());
}

TEST_CASE("build_transform D stays unimodular on random states") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 3;
        arma::cx_vec g_bar = random_cx_vec(rng, m);
        arma::cx_vec h_bar = random_cx_vec(rng, m);
        g_bar /= arma::norm(g_bar);
        h_bar /= arma::norm(h_bar);
        PhaseDesignState st;
        st.g_bar = g_bar;
        st.h_bar = h_bar;
        st.pi_mat = build_difference_matrix(g_bar, h_bar);
        hermitian_eig(st.pi_mat, st.eigvecs, st.eigvals);
        const auto raw = build_transform(st, 1e-12);
        if (!raw)
            continue;
        for (int k = 0; k < m; ++k)
            CHECK(std::abs(std::abs(st.d_mat(k, k)) - 1.0) < 1e-14);
        CHECK(raw->is_finite());
    }
}

TEST_CASE("safeguarded_phase_update accepts only improvements") {
    std::mt19937_64 rng(25);
    const QuantSpec spec(1);
    const ChannelPair ch = random_channels(rng, 2, 2);
    const LinkObjective link(1e-2, 1.0, ch);
    const ScaledCodeword v{arma::cx_vec{cd(1.0, 1.0), cd(1.0, -1.0)}, power_scale(2, 1.0)};
    const SeContext se = [&](const arma::cx_mat &phi) { return link.se_of(phi, v); };

    const auto feasible = all_zeta_matrices(2, spec);
    double best_se = -1.0, worst_se = 1e300;
    arma::cx_mat best, worst;
    for (const auto &phi : feasible) {
        const double s = se(phi);
        if (s > best_se) {
            best_se = s;
            best = phi;
        }
        if (s < worst_se) {
            worst_se = s;
            worst = phi;
        }
    }

    // already-in-alphabet improving candidate is returned unchanged
    const arma::cx_mat out1 = safeguarded_phase_update(worst, best, spec, se);
    CHECK(arma::norm(out1 - best, "fro") == 0.0);

    // worsening candidate is rejected
    const arma::cx_mat out2 = safeguarded_phase_update(best, worst, spec, se);
    CHECK(arma::norm(out2 - best, "fro") == 0.0);

    // output never exceeds the exhaustive maximum, never undercuts phi_prev
    for (int trial = 0; trial < 25; ++trial) {
        const arma::cx_mat raw = arma::reshape(random_cx_vec(rng, 4), 2, 2);
        const arma::cx_mat &prev = feasible[rng() % feasible.size()];
        const arma::cx_mat out = safeguarded_phase_update(prev, raw, spec, se);
        CHECK(se(out) >= se(prev));
        CHECK(se(out) <= best_se + 1e-12);
        for (const auto &entry : out)
            CHECK(in_zeta(entry, spec));
    }
}

TEST_CASE("greedy_phase_refine equals exhaustive search for M=1") {
    std::mt19937_64 rng(26);
    const QuantSpec spec(1);
    for (int trial = 0; trial < 20; ++trial) {
        const ChannelPair ch = random_channels(rng, 1, 1);
        const LinkObjective link(1e-2, 1.0, ch);
        const ScaledCodeword v{arma::cx_vec{cd(1.0, 1.0)}, power_scale(1, 1.0)};
        const SeContext se = [&](const arma::cx_mat &phi) { return link.se_of(phi, v); };

        arma::cx_mat start(1, 1);
        start(0, 0) = spec.zeta[rng() % 2];
        const arma::cx_mat out = greedy_phase_refine(start, spec, se, 4);

        double exhaustive = -1.0;
        for (const auto &z : spec.zeta) {
            arma::cx_mat phi(1, 1);
            phi(0, 0) = z;
            exhaustive = std::max(exhaustive, se(phi));
        }
        CHECK(se(out) == doctest::Approx(exhaustive).epsilon(1e-12));
    }
}

TEST_CASE("greedy_phase_refine leaves an entrywise optimum unchanged") {
    std::mt19937_64 rng(27);
    const QuantSpec spec(1);
    const ChannelPair ch = random_channels(rng, 2, 2);
    const LinkObjective link(1e-2, 1.0, ch);
    const ScaledCodeword v{arma::cx_vec{cd(1.0, 1.0), cd(-1.0, 1.0)}, power_scale(2, 1.0)};
    const SeContext se = [&](const arma::cx_mat &phi) { return link.se_of(phi, v); };

    double best_se = -1.0;
    arma::cx_mat best;
    for (const auto &phi : all_zeta_matrices(2, spec)) {
        if (se(phi) > best_se) {
            best_se = se(phi);
            best = phi;
        }
    }
    const arma::cx_mat out = greedy_phase_refine(best, spec, se, 4);
    CHECK(arma::norm(out - best, "fro") == 0.0);
}

TEST_CASE("greedy_phase_refine from the worst start reaches the optimum usually") {
    std::mt19937_64 rng(28);
    const QuantSpec spec(1);
    int hits = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const ChannelPair ch = random_channels(rng, 2, 2);
        const LinkObjective link(1e-2, 1.0, ch);
        const ScaledCodeword v{arma::cx_vec{cd(1.0, 1.0), cd(1.0, 1.0)}, power_scale(2, 1.0)};
        const SeContext se = [&](const arma::cx_mat &phi) { return link.se_of(phi, v); };

        double best_se = -1.0, worst_se = 1e300;
        arma::cx_mat worst;
        for (const auto &phi : all_zeta_matrices(2, spec)) {
            const double s = se(phi);
            best_se = std::max(best_se, s);
            if (s < worst_se) {
                worst_se = s;
                worst = phi;
            }
        }

        const arma::cx_mat out = greedy_phase_refine(worst, spec, se, 8);
        CHECK(se(out) >= worst_se);
        CHECK(se(out) <= best_se + 1e-12);
        if (se(out) >= best_se - 1e-9)
            ++hits;
    }
    CHECK(hits >= 80);
}

TEST_CASE("dirs_baseline matches exhaustive search for M=1") {
    std::mt19937_64 rng(29);
    const QuantSpec spec(1);
    for (int trial = 0; trial < 20; ++trial) {
        const ChannelPair ch = random_channels(rng, 1, 2);
        const LinkObjective link(1e-2, 1.0, ch);
        const ScaledCodeword v{arma::cx_vec{cd(1.0, 1.0), cd(1.0, -1.0)}, power_scale(2, 1.0)};

        const arma::cx_mat out = dirs_baseline(ch.h_bs_irs, ch.g_irs_user, v, spec);
        double exhaustive = -1.0;
        for (const auto &z : spec.zeta) {
            arma::cx_mat phi(1, 1);
            phi(0, 0) = z;
            exhaustive = std::max(exhaustive, link.se_of(phi, v));
        }
        CHECK(link.se_of(out, v) == doctest::Approx(exhaustive).epsilon(1e-12));
    }
}

TEST_CASE("dirs_baseline co-phased channels need almost no correction") {
    // conj(g_m) (H v)_m real positive for every m -> all cascade angles equal
    const int m = 6;
    arma::cx_mat h(m, 1, arma::fill::ones);
    arma::cx_vec g(m, arma::fill::ones);
    const ScaledCodeword v{arma::cx_vec{cd(1.0, 1.0)}, 1.0};

    const QuantSpec spec(8);
    const arma::cx_mat out = dirs_baseline(h, g, v, spec);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < m; ++i) {
        const double a = std::arg(out(i, i));
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    CHECK(hi - lo < 2.0 * arma::datum::pi / 256.0);
    // off-diagonals exactly zero
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j)
                CHECK(out(i, j) == cd(0.0, 0.0));
}

TEST_CASE("dirs_baseline zero channel falls back to the first member") {
    const QuantSpec spec(1);
    arma::cx_mat h(3, 2, arma::fill::ones);
    arma::cx_vec g(3, arma::fill::zeros);
    const ScaledCodeword v{arma::cx_vec{cd(1.0, 1.0), cd(1.0, 1.0)}, 1.0};
    const arma::cx_mat out = dirs_baseline(h, g, v, spec);
    for (int i = 0; i < 3; ++i)
        CHECK(out(i, i) == spec.zeta[0]);
}

TEST_CASE("bd_phase_step never decreases SE and beats the exhaustive bound never") {
    std::mt19937_64 rng(30);
    const QuantSpec spec(1);
    PhaseDesignerConfig cfg;
    for (int trial = 0; trial < 15; ++trial) {
        const ChannelPair ch = random_channels(rng, 2, 2);
        const LinkObjective link(1e-2, 1.0, ch);
        const ScaledCodeword v{arma::cx_vec{cd(1.0, 1.0), cd(-1.0, -1.0)}, power_scale(2, 1.0)};
        const SeContext se = [&](const arma::cx_mat &phi) { return link.se_of(phi, v); };

        const arma::cx_mat start = dirs_baseline(ch.h_bs_irs, ch.g_irs_user, v, spec);
        const arma::cx_mat out = bd_phase_step(start, ch.h_bs_irs, ch.g_irs_user, spec, se, cfg);
        CHECK(se(out) >= se(start));

        double exhaustive = -1.0;
        for (const auto &phi : all_zeta_matrices(2, spec))
            exhaustive = std::max(exhaustive, se(phi));
        CHECK(se(out) <= exhaustive + 1e-12);
    }
}
