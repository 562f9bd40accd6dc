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
#include <ostream>

namespace starsec {

namespace {

constexpr double kPi = std::numbers::pi;

// Exact coefficients from projected vectors: amplitudes sum to one by
// construction and, when coupled, theta_r = theta_t + (pi/2 or 3pi/2).
StarCoefficients coefficients_from(const Eigen::VectorXcd &ut, const Eigen::VectorXcd &ur, ProjectionMode mode)
{
    const auto n = ut.size();
    StarCoefficients c;
    c.beta_t.resize(n);
    c.beta_r.resize(n);
    c.theta_t.resize(n);
    c.theta_r.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double at = std::norm(ut(i)), ar = std::norm(ur(i));
        if (mode == ProjectionMode::Fixed) {
            const bool tx = at >= ar;
            c.beta_t(i) = tx ? 1.0 : 0.0;
            c.beta_r(i) = tx ? 0.0 : 1.0;
            c.theta_t(i) = tx ? wrap_phase(std::arg(ut(i))) : 0.0;
            c.theta_r(i) = tx ? 0.0 : wrap_phase(std::arg(ur(i)));
            continue;
        }
        const double total = at + ar;
        c.beta_t(i) = total > 0.0 ? at / total : 0.5;
        c.beta_r(i) = 1.0 - c.beta_t(i);
        const double pt = std::arg(ut(i)), pr = std::arg(ur(i));
        if (mode == ProjectionMode::Independent) {
            c.theta_t(i) = wrap_phase(pt);
            c.theta_r(i) = wrap_phase(pr);
            continue;
        }
        // branch: nearest of +pi/2 and +3pi/2, undefined (pi/2) for a dead side
        double offset = 0.5 * kPi;
        if (at > 0.0 && ar > 0.0 && circular_distance(wrap_phase(pr - pt), 1.5 * kPi) < 0.5 * kPi)
            offset = 1.5 * kPi;
        const double base = at >= ar ? pt : pr - offset;
        c.theta_t(i) = wrap_phase(base);
        c.theta_r(i) = wrap_phase(c.theta_t(i) + offset);
    }
    return c;
}

struct Evaluated {
    BeamformingSolution beams;
    SecrecyReport report;
    std::array<double, 2> rank_residual{};
};

Evaluated evaluate(const PsbProblem &problem, const StarCoefficients &coeffs, const Eigen::MatrixXcd &W_I,
                   const Eigen::MatrixXcd &W_O)
{
    Evaluated e;
    const RankOne rI = extract_rank_one(W_I), rO = extract_rank_one(W_O);
    e.beams = BeamformingSolution::from_vectors(rI.w, rO.w);
    e.rank_residual = {rI.residual, rO.residual};
    e.report = secrecy_report(problem.cascades, coeffs, e.beams, problem.sigma2);
    if (!problem.serve[1])
        e.report.min_secrecy = e.report.Rs_I;
    else if (!problem.serve[0])
        e.report.min_secrecy = e.report.Rs_O;
    return e;
}

double max_abs(const Eigen::MatrixXcd &X)
{
    return X.size() == 0 ? 0.0 : X.cwiseAbs().maxCoeff();
}

PsbState coupled_state(const PsbProblem &problem, const PsbConfig &config, const StarCoefficients &coeffs,
                       const Eigen::MatrixXcd &W_I, const Eigen::MatrixXcd &W_O)
{
    PsbState s = initial_state(problem, config);
    s.ut_tilde = coeffs.u_t();
    s.ur_tilde = coeffs.u_r();
    s.U_t = s.ut_tilde * s.ut_tilde.adjoint();
    s.U_r = s.ur_tilde * s.ur_tilde.adjoint();
    if (W_I.size() > 0) {
        s.W_I = W_I;
        s.W_O = W_O;
    }
    return s;
}

// Beamforming at fixed coefficients, starting from the given beams (or the
// default initial point when empty).
FixedCoefficientResult beamform_at(const PsbProblem &problem, const StarCoefficients &coeffs, const PsbConfig &config,
                                   const Eigen::MatrixXcd &W_I, const Eigen::MatrixXcd &W_O)
{
    PsbState s = coupled_state(problem, config, coeffs, W_I, W_O);
    FixedCoefficientResult out;
    try {
        out.solves = solve_beamforming_subproblem(s, problem, config).solves;
    } catch (const SolverFailure &) {
        // keep the starting beams
    }
    const Evaluated e = evaluate(problem, coeffs, s.W_I, s.W_O);
    out.beams = e.beams;
    out.report = e.report;
    out.rank_residual = e.rank_residual;
    return out;
}

}  // namespace

void to_json(nlohmann::json &j, const PsbTraceRecord &r)
{
    j = nlohmann::json{{"outer", r.outer},
                       {"objective", r.objective},
                       {"min_secrecy", r.min_secrecy},
                       {"V_t", r.V_t},
                       {"V_r", r.V_r},
                       {"rho", r.rho},
                       {"tau", r.tau},
                       {"inner_iters", r.inner_iters},
                       {"dual_update", r.dual_update},
                       {"inner_trace", r.inner_trace},
                       {"statuses", r.statuses}};
}

void write_trace_jsonl(std::ostream &os, const std::vector<PsbTraceRecord> &trace)
{
    for (const auto &r : trace)
        os << nlohmann::json(r).dump() << '\n';
}

FixedCoefficientResult optimize_beamforming(const PsbProblem &problem, const StarCoefficients &coeffs,
                                            const PsbConfig &config)
{
    problem.validate();
    if (coeffs.size() != problem.N())
        throw std::invalid_argument("optimize_beamforming: coefficient length must equal N");
    return beamform_at(problem, coeffs, config, {}, {});
}

PsbResult run_psb(const PsbConfig &config, const CascadeSet &cascades, double P_max, double sigma2)
{
    return run_psb(config, PsbProblem::standard(cascades, P_max, sigma2, config.coupled));
}

namespace {

PsbResult run_psb_once(const PsbConfig &config, const PsbProblem &problem, const PsbWarmStart *start)
{
    PsbState state = initial_state(problem, config);
    if (start) {
        if (start->coeffs.size() != problem.N() || start->beams.W_I.rows() != problem.M())
            throw std::invalid_argument("run_psb: warm start has the wrong dimensions");
        Eigen::MatrixXcd W_I = start->beams.W_I, W_O = start->beams.W_O;
        if (!problem.serve[0])
            W_I.setZero();
        if (!problem.serve[1])
            W_O.setZero();
        state = coupled_state(problem, config, start->coeffs, W_I, W_O);
    }
    ProjectionScratch scratch;

    PsbResult result;
    StarCoefficients best_coeffs = coefficients_from(state.ut_tilde, state.ur_tilde, problem.mode);
    Eigen::MatrixXcd best_W_I = state.W_I, best_W_O = state.W_O;
    double best_secrecy = evaluate(problem, best_coeffs, state.W_I, state.W_O).report.min_secrecy;

    double V_prev = std::numeric_limits<double>::infinity();
    bool aborted = false;
    for (int outer = 1; outer <= config.outer_max_iters && !aborted; ++outer) {
        PsbTraceRecord rec;
        rec.outer = outer;
        rec.rho = state.rho;
        double J = al_objective(problem, state);
        rec.inner_trace.push_back(J);

        for (int inner = 1; inner <= config.inner_max_iters; ++inner) {
            const double J_start = J;
            rec.inner_iters = inner;
            try {
                const StepOutcome w = solve_beamforming_subproblem(state, problem, config);
                result.solves += w.solves;
                state.rejected_steps += w.solves - w.accepted;
                rec.statuses.insert(rec.statuses.end(), w.statuses.begin(), w.statuses.end());
            } catch (const SolverFailure &e) {
                ++state.rejected_steps;
                rec.statuses.push_back(std::string("W:") + conic::to_string(e.status()));
            }
            rec.inner_trace.push_back(al_objective(problem, state));

            try {
                const StepOutcome u = solve_coefficient_subproblem(state, problem, config);
                result.solves += u.solves;
                state.rejected_steps += u.accepted == 0 ? 1 : 0;
                rec.statuses.insert(rec.statuses.end(), u.statuses.begin(), u.statuses.end());
            } catch (const SolverFailure &e) {
                ++state.rejected_steps;
                rec.statuses.push_back(std::string("U:") + conic::to_string(e.status()));
            } catch (const DegeneracyError &e) {
                rec.statuses.push_back(std::string("degenerate: ") + e.what());
                aborted = true;
            }
            rec.inner_trace.push_back(al_objective(problem, state));

            project_coupled(state, problem, config, &scratch);
            J = al_objective(problem, state);
            rec.inner_trace.push_back(J);
            ++state.inner_iter_total;
            if (aborted || std::abs(J - J_start) <= config.inner_tol * std::max(1.0, std::abs(J_start)))
                break;
        }

        const Eigen::MatrixXcd D_t = state.ut_tilde * state.ut_tilde.adjoint() - state.U_t;
        const Eigen::MatrixXcd D_r = state.ur_tilde * state.ur_tilde.adjoint() - state.U_r;
        rec.V_t = max_abs(D_t);
        rec.V_r = max_abs(D_r);
        rec.objective = J;
        rec.tau = state.tau;
        const double V = std::max(rec.V_t, rec.V_r);

        const StarCoefficients coeffs = coefficients_from(state.ut_tilde, state.ur_tilde, problem.mode);
        const Evaluated ev = evaluate(problem, coeffs, state.W_I, state.W_O);
        rec.min_secrecy = ev.report.min_secrecy;
        if (ev.report.min_secrecy > best_secrecy) {
            best_secrecy = ev.report.min_secrecy;
            best_coeffs = coeffs;
            best_W_I = state.W_I;
            best_W_O = state.W_O;
        }

        result.outer_iters = outer;
        result.final_V = V;
        state.outer_iter = outer;
        if (V <= config.eps_th) {
            result.converged = true;
            best_coeffs = coeffs;
            best_W_I = state.W_I;
            best_W_O = state.W_O;
            result.trace.push_back(std::move(rec));
            break;
        }
        if (V <= config.c1 * V_prev) {
            state.lambda_t += D_t / state.rho;
            state.lambda_r += D_r / state.rho;
            rec.dual_update = true;
        } else {
            state.rho *= config.c2;
        }
        V_prev = V;
        result.trace.push_back(std::move(rec));
    }

    // Final beamforming at the exactly feasible coefficients; kept only when
    // it does not lower the secrecy rate.
    Evaluated chosen = evaluate(problem, best_coeffs, best_W_I, best_W_O);
    const FixedCoefficientResult polished = beamform_at(problem, best_coeffs, config, best_W_I, best_W_O);
    result.solves += polished.solves;
    if (polished.report.min_secrecy >= chosen.report.min_secrecy) {
        chosen.beams = polished.beams;
        chosen.report = polished.report;
        chosen.rank_residual = polished.rank_residual;
    }

    if (start) {
        const Evaluated at_start = evaluate(problem, start->coeffs, start->beams.W_I, start->beams.W_O);
        if (at_start.report.min_secrecy > chosen.report.min_secrecy) {
            chosen = at_start;
            best_coeffs = start->coeffs;
        }
    }

    result.coeffs = best_coeffs;
    result.beams = chosen.beams;
    result.report = chosen.report;
    result.rank_residual = chosen.rank_residual;
    result.rejected_steps = state.rejected_steps;

    if (config.q_bits > 0) {
        result.coeffs = quantize_coupled(best_coeffs, config.q_bits, problem.mode == ProjectionMode::Coupled);
        result.report = secrecy_report(problem.cascades, result.coeffs, result.beams, problem.sigma2);
        if (!problem.serve[1])
            result.report.min_secrecy = result.report.Rs_I;
        else if (!problem.serve[0])
            result.report.min_secrecy = result.report.Rs_O;
    }
    return result;
}

}  // namespace

PsbResult run_psb(const PsbConfig &config, const PsbProblem &problem, const PsbWarmStart *start)
{
    problem.validate();
    config.validate();
    if (start || config.restarts <= 1)
        return run_psb_once(config, problem, start);
    // Start k uses a decorrelated seed; start 0 is the single-start run.
    PsbResult best;
    int solves = 0;
    for (int k = 0; k < config.restarts; ++k) {
        PsbConfig c = config;
        c.init_seed = config.init_seed + static_cast<std::uint64_t>(k) * 0x9e3779b97f4a7c15ULL;
        PsbResult r = run_psb_once(c, problem, nullptr);
        solves += r.solves;
        if (k == 0 || r.report.min_secrecy > best.report.min_secrecy)
            best = std::move(r);
    }
    best.solves = solves;
    return best;
}

}  // namespace starsec
