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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace starsec {

using conic::AffineExpr;
using conic::HermitianVar;
using conic::Program;
using conic::Solution;
using conic::SolveStatus;
using conic::VarIndex;

namespace {

constexpr double kLn2 = std::numbers::ln2;

// receivers: 0 I, 1 O, 2 E1, 3 E2
constexpr Side receiver_side(int x)
{
    return (x == 0 || x == 2) ? Side::T : Side::R;
}

const Eigen::MatrixXcd &cascade(const CascadeSet &c, int x)
{
    switch (x) {
    case 0:
        return c.V_I;
    case 1:
        return c.V_O;
    case 2:
        return c.V_E1;
    default:
        return c.V_E2;
    }
}

AffineExpr var(VarIndex v)
{
    return AffineExpr::variable(v);
}

double log2_ratio(double total, double interference)
{
    return std::log2(total) - std::log2(interference);
}

double user_margin(const PowerTable &p, int rho)
{
    const int other = 1 - rho;
    const double legit = log2_ratio(p[rho][rho] + p[rho][other] + 1.0, p[rho][other] + 1.0);
    const double e1 = log2_ratio(p[2][rho] + p[2][other] + 1.0, p[2][other] + 1.0);
    const double e2 = log2_ratio(p[3][rho] + p[3][other] + 1.0, p[3][other] + 1.0);
    return legit - std::max(e1, e2);
}

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd &X)
{
    return 0.5 * (X + X.adjoint());
}

Eigen::MatrixXcd psd_part(const Eigen::MatrixXcd &X)
{
    const HermitianEig eig = hermitian_eig(X);
    const Eigen::VectorXd d = eig.values.cwiseMax(0.0);
    return eig.vectors * d.asDiagonal() * eig.vectors.adjoint();
}

Eigen::MatrixXcd restrict(const Eigen::MatrixXcd &X, const std::vector<int> &rows, const std::vector<int> &cols)
{
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = X(rows[i], cols[j]);
    return out;
}

Eigen::MatrixXcd embed(const Eigen::MatrixXcd &X, const std::vector<int> &idx, int N)
{
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, N);
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j)
            out(idx[i], idx[j]) = X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

std::vector<int> all_columns(int M)
{
    std::vector<int> v(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i)
        v[static_cast<size_t>(i)] = i;
    return v;
}

// Nonnegative, Hermitian, and within the budget.
void sanitize_beams(Eigen::MatrixXcd &W_I, Eigen::MatrixXcd &W_O, double P_max)
{
    W_I = psd_part(W_I);
    W_O = psd_part(W_O);
    const double total = W_I.trace().real() + W_O.trace().real();
    if (total > P_max) {
        W_I *= P_max / total;
        W_O *= P_max / total;
    }
}

double rank_gap(const Eigen::MatrixXcd &U)
{
    if (U.size() == 0)
        return 0.0;
    const HermitianEig eig = hermitian_eig(U);
    return eig.values.sum() - eig.values(eig.values.size() - 1);
}

Eigen::VectorXcd unit_dominant(const Eigen::MatrixXcd &U)
{
    const HermitianEig eig = hermitian_eig(U);
    return eig.vectors.col(eig.values.size() - 1);
}

std::string status_tag(const char *step, SolveStatus s)
{
    return std::string(step) + ":" + conic::to_string(s);
}

}  // namespace

// ---------------------------------------------------------------- config

void PsbConfig::validate() const
{
    if (!(eps_th > 0.0))
        throw std::invalid_argument("psb config: eps_th must be positive");
    if (!(c1 > 0.0 && c1 < 1.0) || !(c2 > 0.0 && c2 < 1.0))
        throw std::invalid_argument("psb config: c1 and c2 must lie in (0, 1)");
    if (!(rho0 > 0.0) || !(tau0 > 0.0) || !(tau_max >= tau0))
        throw std::invalid_argument("psb config: penalties must be positive");
    if (inner_max_iters < 1 || outer_max_iters < 1 || sca_max_iters < 1 || dc_max_iters < 1)
        throw std::invalid_argument("psb config: iteration caps must be positive");
    if (restarts < 1)
        throw std::invalid_argument("psb config: restarts must be at least 1");
    if (q_bits < 0)
        throw std::invalid_argument("psb config: q_bits must be nonnegative");
}

void to_json(nlohmann::json &j, const PsbConfig &c)
{
    j = nlohmann::json{{"eps_th", c.eps_th},
                       {"c1", c.c1},
                       {"c2", c.c2},
                       {"rho0", c.rho0},
                       {"tau0", c.tau0},
                       {"tau_max", c.tau_max},
                       {"inner_tol", c.inner_tol},
                       {"inner_max_iters", c.inner_max_iters},
                       {"outer_max_iters", c.outer_max_iters},
                       {"sca_max_iters", c.sca_max_iters},
                       {"dc_max_iters", c.dc_max_iters},
                       {"rank_tol", c.rank_tol},
                       {"coupled", c.coupled},
                       {"q_bits", c.q_bits},
                       {"restarts", c.restarts},
                       {"zero_amplitude_fallback", c.zero_amplitude_fallback},
                       {"dual_shift", c.dual_shift},
                       {"init_seed", std::to_string(c.init_seed)}};
}

void from_json(const nlohmann::json &j, PsbConfig &c)
{
    const PsbConfig d;
    c.eps_th = j.value("eps_th", d.eps_th);
    c.c1 = j.value("c1", d.c1);
    c.c2 = j.value("c2", d.c2);
    c.rho0 = j.value("rho0", d.rho0);
    c.tau0 = j.value("tau0", d.tau0);
    c.tau_max = j.value("tau_max", d.tau_max);
    c.inner_tol = j.value("inner_tol", d.inner_tol);
    c.inner_max_iters = j.value("inner_max_iters", d.inner_max_iters);
    c.outer_max_iters = j.value("outer_max_iters", d.outer_max_iters);
    c.sca_max_iters = j.value("sca_max_iters", d.sca_max_iters);
    c.dc_max_iters = j.value("dc_max_iters", d.dc_max_iters);
    c.rank_tol = j.value("rank_tol", d.rank_tol);
    c.coupled = j.value("coupled", d.coupled);
    c.q_bits = j.value("q_bits", d.q_bits);
    c.restarts = j.value("restarts", d.restarts);
    c.zero_amplitude_fallback = j.value("zero_amplitude_fallback", d.zero_amplitude_fallback);
    c.dual_shift = j.value("dual_shift", d.dual_shift);
    c.init_seed = d.init_seed;
    if (j.contains("init_seed")) {
        const auto &s = j.at("init_seed");
        c.init_seed = s.is_string() ? std::stoull(s.get<std::string>()) : s.get<std::uint64_t>();
    }
}

// ---------------------------------------------------------------- problem

PsbProblem PsbProblem::standard(const CascadeSet &cascades, double P_max, double sigma2, bool coupled)
{
    PsbProblem p;
    p.cascades = cascades;
    p.P_max = P_max;
    p.sigma2 = sigma2;
    p.mode = coupled ? ProjectionMode::Coupled : ProjectionMode::Independent;
    return p;
}

std::vector<int> PsbProblem::support(Side s) const
{
    std::vector<int> idx;
    for (int n = 0; n < N(); ++n)
        if (mode != ProjectionMode::Fixed || transmit_pattern[static_cast<size_t>(n)] == (s == Side::T))
            idx.push_back(n);
    return idx;
}

void PsbProblem::validate() const
{
    if (!(P_max > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("psb problem: P_max and sigma2 must be positive");
    if (!serve[0] && !serve[1])
        throw std::invalid_argument("psb problem: at least one user must be served");
    const auto M = cascades.V_I.rows(), N = cascades.V_I.cols();
    for (const auto *V : {&cascades.V_O, &cascades.V_E1, &cascades.V_E2})
        if (V->rows() != M || V->cols() != N)
            throw std::invalid_argument("psb problem: cascade shapes differ");
    if (M < 1 || N < 1)
        throw std::invalid_argument("psb problem: empty cascades");
    if (mode == ProjectionMode::Fixed && static_cast<Eigen::Index>(transmit_pattern.size()) != N)
        throw std::invalid_argument("psb problem: transmit pattern length must equal N");
    for (const auto *V : {&cascades.V_I, &cascades.V_O, &cascades.V_E1, &cascades.V_E2})
        if (!V->allFinite())
            throw std::invalid_argument("psb problem: non-finite cascade entry");
}

// ---------------------------------------------------------------- rates

double surrogate_H(double x, double y)
{
    if (!(y > 0.0))
        throw std::invalid_argument("surrogate point must be positive");
    return std::log2(y) + (x - y) / (y * kLn2);
}

PowerTable received_powers(const PsbProblem &problem, const Eigen::MatrixXcd &W_I, const Eigen::MatrixXcd &W_O,
                           const Eigen::MatrixXcd &U_t, const Eigen::MatrixXcd &U_r)
{
    PowerTable p{};
    for (int x = 0; x < 4; ++x) {
        const Eigen::MatrixXcd &V = cascade(problem.cascades, x);
        const Eigen::MatrixXcd &U = receiver_side(x) == Side::T ? U_t : U_r;
        const Eigen::MatrixXcd A = V * U * V.adjoint();
        p[x][0] = (W_I.cwiseProduct(A.transpose())).sum().real() / problem.sigma2;
        p[x][1] = (W_O.cwiseProduct(A.transpose())).sum().real() / problem.sigma2;
    }
    return p;
}

SecrecyReport rates_from_powers(const PowerTable &p, const std::array<bool, 2> &serve)
{
    SecrecyReport r;
    auto rate = [&](int x, int rho) { return log2_ratio(p[x][rho] + p[x][1 - rho] + 1.0, p[x][1 - rho] + 1.0); };
    r.R_I = rate(0, 0);
    r.R_O = rate(1, 1);
    for (int k = 0; k < 2; ++k)
        for (int rho = 0; rho < 2; ++rho)
            r.R_E[k][rho] = rate(2 + k, rho);
    r.Rs_I = std::max(r.R_I - std::max(r.R_E[0][0], r.R_E[1][0]), 0.0);
    r.Rs_O = std::max(r.R_O - std::max(r.R_E[0][1], r.R_E[1][1]), 0.0);
    if (serve[0] && serve[1])
        r.min_secrecy = std::min(r.Rs_I, r.Rs_O);
    else
        r.min_secrecy = serve[0] ? r.Rs_I : r.Rs_O;
    return r;
}

double secrecy_margin(const PowerTable &p, const std::array<bool, 2> &serve)
{
    double m = std::numeric_limits<double>::infinity();
    for (int rho = 0; rho < 2; ++rho)
        if (serve[static_cast<size_t>(rho)])
            m = std::min(m, user_margin(p, rho));
    return m;
}

SurrogatePoints surrogates_at(const PowerTable &p)
{
    SurrogatePoints s;
    for (int rho = 0; rho < 2; ++rho) {
        s.y[static_cast<size_t>(rho)] = p[rho][1 - rho] + 1.0;
        for (int k = 0; k < 2; ++k)
            s.y_k[static_cast<size_t>(k)][static_cast<size_t>(rho)] = p[2 + k][0] + p[2 + k][1] + 1.0;
    }
    return s;
}

RateEpigraph build_rate_surrogate_constraints(Program &program, const PowerExprTable &power,
                                              const SurrogatePoints &points, const std::array<bool, 2> &serve,
                                              const std::array<bool, 2> &secrecy_floor)
{
    for (double y : points.y)
        if (!(y > 0.0))
            throw std::invalid_argument("build_rate_surrogate_constraints: surrogate points must be positive");
    for (const auto &row : points.y_k)
        for (double y : row)
            if (!(y > 0.0))
                throw std::invalid_argument("build_rate_surrogate_constraints: surrogate points must be positive");

    // H(x, y) as an affine expression in x
    auto H = [](const AffineExpr &x, double y) { return std::log2(y) + (x - y) * (1.0 / (y * kLn2)); };

    RateEpigraph epi;
    epi.t = program.add_variable("t");
    for (int rho = 0; rho < 2; ++rho) {
        const auto r = static_cast<size_t>(rho);
        if (!serve[r])
            continue;
        const int other = 1 - rho;
        epi.l_n[r] = program.add_variable("l_n" + std::to_string(rho));
        epi.l_d[r] = program.add_variable("l_d" + std::to_string(rho));
        epi.mu[r] = program.add_variable("mu" + std::to_string(rho));
        epi.Emax[r] = program.add_variable("Emax" + std::to_string(rho));

        program.add_pow2_leq_affine(var(epi.l_n[r]), power[rho][rho] + power[rho][other] + 1.0);
        program.add_greater_equal(var(epi.mu[r]), power[rho][other] + 1.0);
        program.add_greater_equal(var(epi.l_d[r]), H(var(epi.mu[r]), points.y[r]));

        for (int k = 0; k < 2; ++k) {
            const auto kk = static_cast<size_t>(k);
            const int x = 2 + k;
            epi.e_n[kk][r] = program.add_variable();
            epi.e_d[kk][r] = program.add_variable();
            epi.nu[kk][r] = program.add_variable();
            program.add_pow2_leq_affine(var(epi.e_d[kk][r]), power[x][other] + 1.0);
            program.add_greater_equal(var(epi.nu[kk][r]), power[x][rho] + power[x][other] + 1.0);
            program.add_greater_equal(var(epi.e_n[kk][r]), H(var(epi.nu[kk][r]), points.y_k[kk][r]));
            program.add_less_equal(var(epi.e_n[kk][r]) - var(epi.e_d[kk][r]), var(epi.Emax[r]));
        }
        const AffineExpr lower = var(epi.l_n[r]) - var(epi.l_d[r]);
        program.add_less_equal(var(epi.t), lower - var(epi.Emax[r]));
        if (secrecy_floor[r])
            program.add_greater_equal(lower, var(epi.Emax[r]));
    }
    return epi;
}

Slacks read_slacks(const RateEpigraph &epi, const Solution &sol)
{
    Slacks s;
    s.t = sol.value(epi.t);
    for (size_t r = 0; r < 2; ++r) {
        if (epi.l_n[r] < 0)
            continue;
        s.l_n[r] = sol.value(epi.l_n[r]);
        s.l_d[r] = sol.value(epi.l_d[r]);
        s.mu[r] = sol.value(epi.mu[r]);
        s.Emax[r] = sol.value(epi.Emax[r]);
        for (size_t k = 0; k < 2; ++k) {
            s.e_n[k][r] = sol.value(epi.e_n[k][r]);
            s.e_d[k][r] = sol.value(epi.e_d[k][r]);
            s.nu[k][r] = sol.value(epi.nu[k][r]);
        }
    }
    return s;
}

double al_penalty(const PsbState &state)
{
    const double rho = state.rho;
    return (state.ut_tilde * state.ut_tilde.adjoint() - state.U_t + rho * state.lambda_t).squaredNorm() +
           (state.ur_tilde * state.ur_tilde.adjoint() - state.U_r + rho * state.lambda_r).squaredNorm();
}

double al_objective(const PsbProblem &problem, const PsbState &state)
{
    const PowerTable p = received_powers(problem, state.W_I, state.W_O, state.U_t, state.U_r);
    return secrecy_margin(p, problem.serve) - al_penalty(state) / (2.0 * state.rho);
}

// ---------------------------------------------------------------- init

PsbState initial_state(const PsbProblem &problem, const PsbConfig &config)
{
    problem.validate();
    config.validate();
    const int M = problem.M(), N = problem.N();
    std::mt19937_64 rng(config.init_seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    PsbState s;
    s.ut_tilde.resize(N);
    s.ur_tilde.resize(N);
    for (int n = 0; n < N; ++n) {
        const double th = phase(rng);
        if (problem.mode == ProjectionMode::Fixed) {
            const bool tx = problem.transmit_pattern[static_cast<size_t>(n)];
            s.ut_tilde(n) = tx ? std::polar(1.0, th) : std::complex<double>{};
            s.ur_tilde(n) = tx ? std::complex<double>{} : std::polar(1.0, th + 0.5 * std::numbers::pi);
        } else {
            s.ut_tilde(n) = std::polar(std::sqrt(0.5), th);
            s.ur_tilde(n) = std::polar(std::sqrt(0.5), th + 0.5 * std::numbers::pi);
        }
    }
    s.U_t = s.ut_tilde * s.ut_tilde.adjoint();
    s.U_r = s.ur_tilde * s.ur_tilde.adjoint();
    s.lambda_t = Eigen::MatrixXcd::Zero(N, N);
    s.lambda_r = Eigen::MatrixXcd::Zero(N, N);
    const int served = (problem.serve[0] ? 1 : 0) + (problem.serve[1] ? 1 : 0);
    const double per = problem.P_max / (static_cast<double>(M) * served);
    s.W_I = problem.serve[0] ? Eigen::MatrixXcd(per * Eigen::MatrixXcd::Identity(M, M)) : Eigen::MatrixXcd::Zero(M, M);
    s.W_O = problem.serve[1] ? Eigen::MatrixXcd(per * Eigen::MatrixXcd::Identity(M, M)) : Eigen::MatrixXcd::Zero(M, M);
    s.rho = config.rho0;
    s.tau = config.tau0;
    s.surrogates = surrogates_at(received_powers(problem, s.W_I, s.W_O, s.U_t, s.U_r));
    return s;
}

// ---------------------------------------------------------------- W step

StepOutcome solve_beamforming_subproblem(PsbState &state, const PsbProblem &problem, const PsbConfig &config)
{
    const int M = problem.M();
    const double P = problem.P_max;
    const double g = P / problem.sigma2;

    // A_x = g V_x U V_x^H; powers are Tr(W' A_x) with W' = W / P_max.
    std::array<Eigen::MatrixXcd, 4> A;
    for (int x = 0; x < 4; ++x) {
        const Eigen::MatrixXcd &V = cascade(problem.cascades, x);
        A[static_cast<size_t>(x)] = g * (V * state.U(receiver_side(x)) * V.adjoint());
        A[static_cast<size_t>(x)] = hermitize(A[static_cast<size_t>(x)]);
    }

    StepOutcome out;
    PowerTable p = received_powers(problem, state.W_I, state.W_O, state.U_t, state.U_r);
    double current = secrecy_margin(p, problem.serve);
    for (int it = 0; it < config.sca_max_iters; ++it) {
        const SurrogatePoints points = surrogates_at(p);
        Program prog;
        std::array<HermitianVar, 2> W;
        AffineExpr power_sum;
        for (size_t r = 0; r < 2; ++r) {
            if (!problem.serve[r])
                continue;
            W[r] = prog.add_hermitian_psd(M);
            power_sum += W[r].trace();
        }
        prog.add_less_equal(power_sum, 1.0);
        PowerExprTable expr;
        for (int x = 0; x < 4; ++x)
            for (size_t r = 0; r < 2; ++r)
                if (problem.serve[r])
                    expr[static_cast<size_t>(x)][r] = W[r].trace_product(A[static_cast<size_t>(x)]);
        std::array<bool, 2> floor{};
        for (int r = 0; r < 2; ++r)
            floor[static_cast<size_t>(r)] = problem.serve[static_cast<size_t>(r)] && user_margin(p, r) >= 0.0;
        const RateEpigraph epi = build_rate_surrogate_constraints(prog, expr, points, problem.serve, floor);
        prog.maximize(var(epi.t));

        const Solution sol = conic::solve(prog);
        ++out.solves;
        out.statuses.push_back(status_tag("W", sol.status));
        if (sol.status == SolveStatus::Infeasible)
            throw SolverFailure("beamforming subproblem infeasible", sol.status);
        if (!sol.usable())
            break;

        Eigen::MatrixXcd W_I = problem.serve[0] ? Eigen::MatrixXcd(P * sol.value(W[0])) : Eigen::MatrixXcd::Zero(M, M);
        Eigen::MatrixXcd W_O = problem.serve[1] ? Eigen::MatrixXcd(P * sol.value(W[1])) : Eigen::MatrixXcd::Zero(M, M);
        sanitize_beams(W_I, W_O, P);
        const PowerTable p_new = received_powers(problem, W_I, W_O, state.U_t, state.U_r);
        const double next = secrecy_margin(p_new, problem.serve);
        if (!(next >= current))
            break;
        state.W_I = std::move(W_I);
        state.W_O = std::move(W_O);
        state.slacks = read_slacks(epi, sol);
        state.surrogates = points;
        ++out.accepted;
        const double gain = next - current;
        current = next;
        p = p_new;
        if (gain <= config.inner_tol * std::max(1.0, std::abs(current)))
            break;
    }
    return out;
}

// ---------------------------------------------------------------- U step

StepOutcome solve_coefficient_subproblem(PsbState &state, const PsbProblem &problem, const PsbConfig &config)
{
    const int N = problem.N();
    const std::array<std::vector<int>, 2> support{problem.support(Side::T), problem.support(Side::R)};
    const bool split = problem.mode != ProjectionMode::Fixed;

    // B_{x,rho} = V_x^H W_rho V_x / sigma2 on the receiver's side support.
    std::array<std::array<Eigen::MatrixXcd, 2>, 4> B;
    for (int x = 0; x < 4; ++x) {
        const Eigen::MatrixXcd &V = cascade(problem.cascades, x);
        const auto &idx = support[receiver_side(x) == Side::T ? 0 : 1];
        const Eigen::MatrixXcd Vs = restrict(V, all_columns(problem.M()), idx);
        B[static_cast<size_t>(x)][0] = hermitize(Vs.adjoint() * state.W_I * Vs / problem.sigma2);
        B[static_cast<size_t>(x)][1] = hermitize(Vs.adjoint() * state.W_O * Vs / problem.sigma2);
    }
    const std::array<Eigen::MatrixXcd, 2> offset{
        restrict(state.ut_tilde * state.ut_tilde.adjoint() + state.rho * state.lambda_t, support[0], support[0]),
        restrict(state.ur_tilde * state.ur_tilde.adjoint() + state.rho * state.lambda_r, support[1], support[1])};

    const Eigen::MatrixXcd U_in_t = state.U_t, U_in_r = state.U_r;
    const double J_in = al_objective(problem, state);

    StepOutcome out;
    PsbState trial = state;
    double best = J_in;
    bool found = false;
    PsbState best_state;
    double prev_gap = std::numeric_limits<double>::infinity();

    for (int it = 0; it < config.dc_max_iters; ++it) {
        const PowerTable p = received_powers(problem, trial.W_I, trial.W_O, trial.U_t, trial.U_r);
        const SurrogatePoints points = surrogates_at(p);

        Program prog;
        std::array<HermitianVar, 2> U;
        std::array<bool, 2> present{!support[0].empty(), !support[1].empty()};
        for (size_t s = 0; s < 2; ++s)
            if (present[s])
                U[s] = prog.add_hermitian_psd(static_cast<int>(support[s].size()));

        if (split) {
            for (int n = 0; n < N; ++n)
                prog.add_equality(U[0].re(n, n) + U[1].re(n, n), 1.0);
        } else {
            for (size_t s = 0; s < 2; ++s)
                for (int i = 0; i < static_cast<int>(support[s].size()); ++i)
                    prog.add_equality(U[s].re(i, i), 1.0);
        }

        PowerExprTable expr;
        for (int x = 0; x < 4; ++x) {
            const size_t s = receiver_side(x) == Side::T ? 0 : 1;
            for (size_t r = 0; r < 2; ++r)
                expr[static_cast<size_t>(x)][r] =
                    present[s] ? U[s].trace_product(B[static_cast<size_t>(x)][r]) : AffineExpr{};
        }
        const RateEpigraph epi = build_rate_surrogate_constraints(prog, expr, points, problem.serve, {false, false});

        // AL penalty epigraph and linearized rank penalty
        const VarIndex pen = prog.add_variable("penalty");
        std::vector<AffineExpr> coords;
        AffineExpr dc;
        for (size_t s = 0; s < 2; ++s) {
            if (!present[s])
                continue;
            auto c = U[s].frobenius_coordinates(offset[s]);
            coords.insert(coords.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
            const Eigen::MatrixXcd Ucur = restrict(s == 0 ? trial.U_t : trial.U_r, support[s], support[s]);
            const Eigen::VectorXcd u1 = unit_dominant(Ucur);
            const auto d = static_cast<Eigen::Index>(support[s].size());
            dc += U[s].trace_product(Eigen::MatrixXcd::Identity(d, d) - u1 * u1.adjoint());
        }
        prog.add_squared_norm_leq(std::move(coords), var(pen));
        prog.maximize(var(epi.t) - var(pen) * (1.0 / (2.0 * trial.rho)) - trial.tau * dc);

        const Solution sol = conic::solve(prog);
        ++out.solves;
        out.statuses.push_back(status_tag("U", sol.status));
        if (sol.status == SolveStatus::Infeasible)
            throw SolverFailure("coefficient subproblem infeasible", sol.status);
        if (!sol.usable())
            break;

        trial.U_t = present[0] ? embed(hermitize(sol.value(U[0])), support[0], N) : Eigen::MatrixXcd::Zero(N, N);
        trial.U_r = present[1] ? embed(hermitize(sol.value(U[1])), support[1], N) : Eigen::MatrixXcd::Zero(N, N);
        trial.slacks = read_slacks(epi, sol);
        trial.surrogates = points;
        const double gap = rank_gap(trial.U_t) + rank_gap(trial.U_r);
        const double J = al_objective(problem, trial);

        if (gap <= config.rank_tol) {
            if (J >= best) {
                // the outer alternation refreshes the linearizations anyway
                best = J;
                best_state = trial;
                found = true;
                break;
            }
            prev_gap = gap;
            continue;
        }
        if (gap > 0.5 * prev_gap) {
            // rank residual stalled: stiffen the penalty and restart
            trial.tau *= 2.0;
            if (trial.tau > config.tau_max)
                throw DegeneracyError("rank penalty weight exceeded " + std::to_string(config.tau_max) +
                                      " with residual " + std::to_string(gap));
            trial.U_t = U_in_t;
            trial.U_r = U_in_r;
            prev_gap = std::numeric_limits<double>::infinity();
            continue;
        }
        prev_gap = gap;
    }

    state.tau = trial.tau;
    if (found) {
        const double tau = state.tau;
        state = std::move(best_state);
        state.tau = tau;
        out.accepted = 1;
    }
    return out;
}

}  // namespace starsec
