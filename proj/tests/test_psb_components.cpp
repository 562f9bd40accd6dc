// starsec: secrecy beamforming for coupled phase-shift STAR-RIS networks
// Copyright (C) 2026 The starsec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "starsec/psb.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace starsec;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

Eigen::VectorXcd random_vector(int n, std::mt19937_64 &rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i)
        v(i) = {g(rng), g(rng)};
    return v;
}

CascadeSet random_cascades(int M, int N, std::mt19937_64 &rng)
{
    ChannelSet ch;
    ch.G.resize(N, M);
    for (int m = 0; m < M; ++m)
        ch.G.col(m) = random_vector(N, rng);
    ch.h_I = random_vector(N, rng);
    ch.h_O = random_vector(N, rng);
    ch.h_E1 = random_vector(N, rng, 0.3);
    ch.h_E2 = random_vector(N, rng, 0.3);
    return build_cascades(ch);
}

StarCoefficients half_split(int N, double theta = 0.4)
{
    StarCoefficients c;
    c.beta_t = c.beta_r = Eigen::VectorXd::Constant(N, 0.5);
    c.theta_t = Eigen::VectorXd::Constant(N, theta);
    c.theta_r = Eigen::VectorXd::Constant(N, wrap_phase(theta + kPi / 2));
    return c;
}

double unclamped_margin(const SecrecyReport &r)
{
    const double I = r.R_I - std::max(r.R_E[0][0], r.R_E[1][0]);
    const double O = r.R_O - std::max(r.R_E[0][1], r.R_E[1][1]);
    return std::min(I, O);
}

}  // namespace

// ------------------------------------------------------------ surrogate

TEST_CASE("surrogate is tangent at y = x and an upper bound elsewhere")
{
    CHECK(surrogate_H(4.0, 4.0) == doctest::Approx(2.0));
    CHECK(surrogate_H(2.0, 1.0) == doctest::Approx(1.0 / std::numbers::ln2));
    CHECK(surrogate_H(2.0, 1.0) >= 1.0);
    for (double x = 0.05; x < 40.0; x *= 1.37)
        for (double y = 0.05; y < 40.0; y *= 1.41) {
            const double gap = surrogate_H(x, y) - std::log2(x);
            CHECK(gap >= -1e-12);
            if (std::abs(x / y - 1.0) > 1e-3)
                CHECK(gap > 0.0);
        }
}

TEST_CASE("rate epigraph is tight at the surrogate points")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> pw(0.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
        PowerTable p;
        for (auto &row : p)
            for (auto &v : row)
                v = pw(rng);
        conic::Program prog;
        PowerExprTable expr;
        for (size_t x = 0; x < 4; ++x)
            for (size_t r = 0; r < 2; ++r)
                expr[x][r] = p[x][r];
        const RateEpigraph epi = build_rate_surrogate_constraints(prog, expr, surrogates_at(p), {true, true}, {false, false});
        prog.maximize(conic::AffineExpr::variable(epi.t));
        const conic::Solution s = conic::solve(prog);
        REQUIRE(s.usable());
        CHECK(s.value(epi.t) == doctest::Approx(secrecy_margin(p, {true, true})).epsilon(1e-6));
    }
}

TEST_CASE("power table reproduces the secrecy report at rank one")
{
    std::mt19937_64 rng(22);
    const CascadeSet cas = random_cascades(2, 3, rng);
    const PsbProblem prob = PsbProblem::standard(cas, 1.0, 0.5, true);
    const StarCoefficients c = half_split(3, 1.1);
    const Eigen::VectorXcd wI = random_vector(2, rng), wO = random_vector(2, rng);
    const Eigen::VectorXcd ut = c.u_t(), ur = c.u_r();
    const PowerTable p = received_powers(prob, wI * wI.adjoint(), wO * wO.adjoint(), ut * ut.adjoint(),
                                         ur * ur.adjoint());
    const SecrecyReport r = secrecy_report(cas, c, BeamformingSolution::from_vectors(wI, wO), 0.5);
    CHECK(secrecy_margin(p, {true, true}) == doctest::Approx(unclamped_margin(r)).epsilon(1e-12));
    const SecrecyReport q = rates_from_powers(p, {true, true});
    CHECK(q.R_I == doctest::Approx(r.R_I).epsilon(1e-12));
    CHECK(q.R_E[1][0] == doctest::Approx(r.R_E[1][0]).epsilon(1e-12));
}

// ------------------------------------------------------------ projection

TEST_CASE("projection corner cases")
{
    Eigen::VectorXcd xt, xr;
    const Eigen::VectorXcd prev = Eigen::VectorXcd::Constant(1, std::sqrt(0.5));
    auto project = [&](cd ut, cd ur, ProjectionMode mode = ProjectionMode::Coupled) {
        project_elements(Eigen::VectorXcd::Constant(1, ut), Eigen::VectorXcd::Constant(1, ur), mode, {}, false, prev,
                         prev, xt, xr);
        return StarCoefficients::from_vectors(xt, xr);
    };

    StarCoefficients c = project(1.0, 0.0);
    CHECK(c.beta_t(0) == 1.0);
    CHECK(c.beta_r(0) == 0.0);
    CHECK(c.theta_t(0) == doctest::Approx(0.0));

    c = project(0.0, 1.0);
    CHECK(c.beta_r(0) == 1.0);
    CHECK(c.beta_t(0) == 0.0);
    CHECK(c.theta_r(0) == doctest::Approx(0.0));
    // the transmission phase carries no information at zero amplitude

    // equal weights on both branches
    c = project(std::polar(0.8, 0.3), std::polar(0.8, 0.3 + kPi / 2));
    CHECK(c.beta_t(0) == doctest::Approx(0.5));
    CHECK(c.beta_r(0) == doctest::Approx(0.5));

    // independent phases, one active side: phase alignment with full amplitude
    c = project(std::polar(0.6, -2.0), 0.0, ProjectionMode::Independent);
    CHECK(c.beta_t(0) == doctest::Approx(1.0));
    CHECK(circular_distance(c.theta_t(0), -2.0) <= 1e-12);
}

TEST_CASE("coupled projection output satisfies both coupling laws exactly")
{
    std::mt19937_64 rng(23);
    const Eigen::VectorXcd ut = random_vector(200, rng), ur = random_vector(200, rng);
    Eigen::VectorXcd xt, xr;
    const Eigen::VectorXcd prev = Eigen::VectorXcd::Constant(200, std::sqrt(0.5));
    project_elements(ut, ur, ProjectionMode::Coupled, {}, false, prev, prev, xt, xr);
    for (int n = 0; n < 200; ++n) {
        CHECK(std::abs(std::norm(xt(n)) + std::norm(xr(n)) - 1.0) <= 1e-14);
        if (std::abs(xt(n)) > 1e-9 && std::abs(xr(n)) > 1e-9) {
            const double d = wrap_phase(std::arg(xr(n)) - std::arg(xt(n)));
            CHECK(std::min(circular_distance(d, kPi / 2), circular_distance(d, 1.5 * kPi)) <= 1e-12);
        }
    }
}

TEST_CASE("coupled projection beats a dense feasible sample")
{
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::VectorXcd ut = random_vector(30, rng), ur = random_vector(30, rng);
    Eigen::VectorXcd xt, xr;
    const Eigen::VectorXcd prev = Eigen::VectorXcd::Constant(30, std::sqrt(0.5));
    project_elements(ut, ur, ProjectionMode::Coupled, {}, false, prev, prev, xt, xr);
    for (int n = 0; n < 30; ++n) {
        const double got = projection_objective(ut(n), ur(n), xt(n), xr(n));
        for (int k = 0; k < 2000; ++k) {
            const double b = unit(rng), th = 2.0 * kPi * unit(rng);
            const double off = unit(rng) < 0.5 ? 0.5 * kPi : 1.5 * kPi;
            const double v = projection_objective(ut(n), ur(n), std::polar(std::sqrt(b), th),
                                                  std::polar(std::sqrt(1.0 - b), th + off));
            CHECK(v <= got + 1e-12);
        }
    }
}

TEST_CASE("independent projection reaches the unconstrained amplitude optimum")
{
    std::mt19937_64 rng(25);
    const Eigen::VectorXcd ut = random_vector(20, rng), ur = random_vector(20, rng);
    Eigen::VectorXcd xt, xr;
    const Eigen::VectorXcd prev = Eigen::VectorXcd::Constant(20, std::sqrt(0.5));
    project_elements(ut, ur, ProjectionMode::Independent, {}, false, prev, prev, xt, xr);
    for (int n = 0; n < 20; ++n) {
        // max over beta of sqrt(beta)|u_t| + sqrt(1 - beta)|u_r| is the norm
        const double best = std::hypot(std::abs(ut(n)), std::abs(ur(n)));
        CHECK(projection_objective(ut(n), ur(n), xt(n), xr(n)) == doctest::Approx(best).epsilon(1e-12));
    }
}

// ------------------------------------------------------------ rank one

TEST_CASE("rank-one extraction")
{
    Eigen::Vector2cd w(1.0, cd(0.0, 1.0));
    RankOne r = extract_rank_one(w * w.adjoint());
    CHECK((r.w - w).norm() <= 1e-12);
    CHECK(r.residual <= 1e-12);

    r = extract_rank_one(Eigen::MatrixXcd::Zero(2, 2));
    CHECK(r.w.norm() == 0.0);

    Eigen::MatrixXcd D = Eigen::Vector2cd(4.0, 1.0).asDiagonal();
    r = extract_rank_one(D);
    CHECK((r.w - Eigen::Vector2cd(2.0, 0.0)).norm() <= 1e-12);
    CHECK(r.residual == doctest::Approx(0.25));

    // global phase normalized: first nonzero entry real and nonnegative
    const Eigen::Vector2cd v(cd(0.0, -2.0), cd(1.0, 1.0));
    r = extract_rank_one(v * v.adjoint());
    CHECK(std::abs(r.w(0).imag()) <= 1e-12);
    CHECK(r.w(0).real() >= 0.0);
    CHECK((r.w * r.w.adjoint() - v * v.adjoint()).norm() <= 1e-12);
}

TEST_CASE("rank penalty vanishes on a rank-one matrix")
{
    std::mt19937_64 rng(26);
    const Eigen::VectorXcd u = random_vector(4, rng);
    const Eigen::MatrixXcd U = u * u.adjoint();
    const HermitianEig e = hermitian_eig(U);
    CHECK(U.trace().real() - e.values(3) == doctest::Approx(0.0).epsilon(1e-12));
    const Eigen::VectorXcd v = e.vectors.col(3);
    const Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(4, 4) - v * v.adjoint();
    CHECK(std::abs((U * P).trace()) <= 1e-12 * U.norm());
}

// ------------------------------------------------------------ quantization

TEST_CASE("quantization snaps to the nearest grid point")
{
    StarCoefficients c = half_split(3, 0.3);
    StarCoefficients q = quantize_coupled(c, 2);
    CHECK(q.theta_t(0) == 0.0);
    CHECK(q.theta_r(0) == doctest::Approx(kPi / 2));
    CHECK(q.beta_t(1) == 0.5);

    // on-grid input is unchanged for every q
    for (int bits = 2; bits <= 8; ++bits) {
        StarCoefficients g = half_split(3, 2.0 * kPi * 3.0 / 4.0);
        StarCoefficients h = quantize_coupled(g, bits);
        CHECK(h.theta_t(0) == doctest::Approx(g.theta_t(0)).epsilon(1e-15));
        CHECK(h.theta_r(2) == doctest::Approx(g.theta_r(2)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(quantize_coupled(c, 1), CouplingUnrepresentable);
    CHECK_NOTHROW(quantize_coupled(c, 1, false));
}

TEST_CASE("four-bit quantization error is at most half a step and stays on the grid")
{
    std::mt19937_64 rng(27);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    StarCoefficients c = half_split(500);
    for (int n = 0; n < 500; ++n) {
        c.theta_t(n) = 2.0 * kPi * unit(rng);
        c.theta_r(n) = wrap_phase(c.theta_t(n) + (n % 2 ? 0.5 : 1.5) * kPi);
    }
    const StarCoefficients q = quantize_coupled(c, 4);
    const double step = 2.0 * kPi / 16.0;
    for (int n = 0; n < 500; ++n) {
        CHECK(circular_distance(q.theta_t(n), c.theta_t(n)) <= kPi / 16 + 1e-12);
        const double k = q.theta_t(n) / step;
        CHECK(std::abs(k - std::round(k)) <= 1e-12);
        const double kr = q.theta_r(n) / step;
        CHECK(std::abs(kr - std::round(kr)) <= 1e-12);
    }
    CHECK_NOTHROW(q.validate(true));
}

// ------------------------------------------------------------ subproblems

TEST_CASE("single-element beamforming matches the power-split oracle")
{
    // M = N = 1, silent eavesdroppers: only the power split matters
    CascadeSet cas;
    cas.V_I = Eigen::MatrixXcd::Constant(1, 1, cd(1.3, 0.2));
    cas.V_O = Eigen::MatrixXcd::Constant(1, 1, cd(-0.4, 0.9));
    cas.V_E1 = cas.V_E2 = Eigen::MatrixXcd::Zero(1, 1);
    const StarCoefficients c = half_split(1);
    PsbConfig cfg;
    double previous = -1.0;
    for (double P : {1.0, 4.0}) {
        const PsbProblem prob = PsbProblem::standard(cas, P, 1.0, true);
        const FixedCoefficientResult r = optimize_beamforming(prob, c, cfg);
        double oracle = 0.0;
        for (int k = 0; k <= 200000; ++k) {
            const double f = k / 200000.0;
            const Eigen::VectorXcd wI = Eigen::VectorXcd::Constant(1, std::sqrt(f * P));
            const Eigen::VectorXcd wO = Eigen::VectorXcd::Constant(1, std::sqrt((1.0 - f) * P));
            oracle = std::max(oracle, secrecy_report(cas, c, BeamformingSolution::from_vectors(wI, wO), 1.0).min_secrecy);
        }
        CHECK(r.report.min_secrecy == doctest::Approx(oracle).epsilon(1e-4));
        CHECK(r.beams.power() <= P * (1.0 + 1e-6));
        CHECK(r.report.min_secrecy > previous);
        previous = r.report.min_secrecy;
    }
}

TEST_CASE("silent channels give zero secrecy with a feasible beam")
{
    CascadeSet cas;
    cas.V_I = cas.V_O = cas.V_E1 = cas.V_E2 = Eigen::MatrixXcd::Zero(2, 2);
    const PsbProblem prob = PsbProblem::standard(cas, 0.5, 1.0, true);
    const FixedCoefficientResult r = optimize_beamforming(prob, half_split(2), PsbConfig{});
    CHECK(r.report.min_secrecy == 0.0);
    CHECK(r.beams.power() <= 0.5 * (1.0 + 1e-6));
}

TEST_CASE("beamforming step returns rank-one matrices")
{
    std::mt19937_64 rng(28);
    for (int trial = 0; trial < 3; ++trial) {
        const CascadeSet cas = random_cascades(3, 4, rng);
        const PsbProblem prob = PsbProblem::standard(cas, 2.0, 1.0, true);
        const FixedCoefficientResult r = optimize_beamforming(prob, half_split(4, 0.1 * trial), PsbConfig{});
        CHECK(r.rank_residual[0] <= 1e-3);
        CHECK(r.rank_residual[1] <= 1e-3);
        CHECK(r.beams.power() <= 2.0 * (1.0 + 1e-6));
    }
}

TEST_CASE("initial point follows the documented construction")
{
    std::mt19937_64 rng(29);
    const CascadeSet cas = random_cascades(3, 5, rng);
    const PsbProblem prob = PsbProblem::standard(cas, 2.0, 1.0, true);
    PsbConfig cfg;
    cfg.init_seed = 7;
    const PsbState s = initial_state(prob, cfg);
    CHECK((s.W_I - Eigen::MatrixXcd::Identity(3, 3) * (2.0 / 6.0)).norm() <= 1e-15);
    for (int n = 0; n < 5; ++n) {
        CHECK(std::norm(s.ut_tilde(n)) == doctest::Approx(0.5));
        CHECK(std::arg(s.ur_tilde(n) / s.ut_tilde(n)) == doctest::Approx(kPi / 2));
    }
    CHECK((s.U_t - s.ut_tilde * s.ut_tilde.adjoint()).norm() <= 1e-15);
    CHECK(al_penalty(s) == 0.0);
    CHECK(s.rho == cfg.rho0);
    const PsbState t = initial_state(prob, cfg);
    CHECK((t.ut_tilde - s.ut_tilde).norm() == 0.0);
}

TEST_CASE("single-element coefficient step splits the energy")
{
    std::mt19937_64 rng(30);
    const CascadeSet cas = random_cascades(2, 1, rng);
    const PsbProblem prob = PsbProblem::standard(cas, 1.0, 0.2, true);
    PsbConfig cfg;
    PsbState s = initial_state(prob, cfg);
    solve_beamforming_subproblem(s, prob, cfg);
    const double before = al_objective(prob, s);
    const StepOutcome o = solve_coefficient_subproblem(s, prob, cfg);
    CHECK(o.solves >= 1);
    CHECK(s.U_t(0, 0).real() >= -1e-9);
    CHECK(s.U_r(0, 0).real() >= -1e-9);
    CHECK(s.U_t(0, 0).real() + s.U_r(0, 0).real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(al_objective(prob, s) >= before - 1e-9);
}

TEST_CASE("two-element coefficient step ends rank one")
{
    std::mt19937_64 rng(31);
    const CascadeSet cas = random_cascades(2, 2, rng);
    const PsbProblem prob = PsbProblem::standard(cas, 1.0, 0.2, true);
    PsbConfig cfg;
    PsbState s = initial_state(prob, cfg);
    solve_beamforming_subproblem(s, prob, cfg);
    const StepOutcome o = solve_coefficient_subproblem(s, prob, cfg);
    if (o.accepted) {
        for (const Eigen::MatrixXcd *U : {&s.U_t, &s.U_r}) {
            const HermitianEig e = hermitian_eig(*U);
            CHECK(U->trace().real() - e.values(e.values.size() - 1) <= 1e-4);
        }
    }
    for (int n = 0; n < 2; ++n)
        CHECK(s.U_t(n, n).real() + s.U_r(n, n).real() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("config validation and JSON round trip")
{
    PsbConfig c;
    c.init_seed = 18446744073709551557ULL;
    c.q_bits = 3;
    c.restarts = 2;
    const PsbConfig d = nlohmann::json(c).get<PsbConfig>();
    CHECK(d.init_seed == c.init_seed);
    CHECK(d.q_bits == 3);
    CHECK(d.restarts == 2);
    CHECK(d.rho0 == c.rho0);
    c.rho0 = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = PsbConfig{};
    c.c1 = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = PsbConfig{};
    c.restarts = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
