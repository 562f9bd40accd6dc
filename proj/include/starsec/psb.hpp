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

#ifndef STARSEC_PSB_HPP
#define STARSEC_PSB_HPP

#include "starsec/channel_model.hpp"
#include "starsec/conic.hpp"
#include "starsec/secrecy_metrics.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace starsec {

// How the auxiliary coefficients are projected and which amplitude
// constraint the relaxed matrices obey.
//   Coupled:     phases differ by pi/2 or 3pi/2, beta_t + beta_r = 1.
//   Independent: free phases per side, beta_t + beta_r = 1.
//   Fixed:       amplitudes pinned to a 0/1 pattern, free phases.
enum class ProjectionMode { Coupled, Independent, Fixed };

struct PsbConfig {
    double eps_th = 1e-3;
    double c1 = 0.99;
    double c2 = 0.99;
    double rho0 = 20.0;            // initial penalty; larger values settle faster
    double tau0 = 0.01;
    double tau_max = 1e6;
    double inner_tol = 1e-4;       // relative objective improvement
    int inner_max_iters = 30;
    int outer_max_iters = 300;
    int sca_max_iters = 20;        // surrogate refreshes per beamforming solve
    int dc_max_iters = 30;         // eigenvector refreshes per coefficient solve
    double rank_tol = 1e-4;        // Tr(U) - ||U||_2
    bool coupled = true;
    int q_bits = 0;                // 0 = continuous
    bool zero_amplitude_fallback = false;  // both weights negative: (0, 0) instead of the better corner
    bool dual_shift = true;        // projection reference from U - rho lambda
    std::uint64_t init_seed = 1;   // initial phases
    int restarts = 1;              // independent random starts, best kept

    void validate() const;
};

void to_json(nlohmann::json &j, const PsbConfig &c);
void from_json(const nlohmann::json &j, PsbConfig &c);

// Optimization instance: cascades, budget and the scheme-specific structure.
struct PsbProblem {
    CascadeSet cascades;
    double P_max = 1.0;
    double sigma2 = 1.0;
    std::array<bool, 2> serve{true, true};  // users in the max-min (I, O)
    ProjectionMode mode = ProjectionMode::Coupled;
    // Fixed mode only: element n transmits when transmit_pattern[n] is set,
    // otherwise it reflects.
    std::vector<bool> transmit_pattern;

    // Coupled or independent instance over every element, both users served.
    static PsbProblem standard(const CascadeSet &cascades, double P_max, double sigma2, bool coupled);

    int M() const { return cascades.M(); }
    int N() const { return cascades.N(); }
    // Element indices active on a side (all elements unless Fixed).
    std::vector<int> support(Side s) const;
    void validate() const;
};

struct SurrogatePoints {
    std::array<double, 2> y{1.0, 1.0};                   // [rho]
    std::array<std::array<double, 2>, 2> y_k{{{1.0, 1.0}, {1.0, 1.0}}};  // [k][rho]
};

struct Slacks {
    double t = 0.0;
    std::array<double, 2> l_n{}, l_d{}, mu{}, Emax{};
    std::array<std::array<double, 2>, 2> e_n{}, e_d{}, nu{};  // [k][rho]
};

struct PsbState {
    Eigen::MatrixXcd W_I, W_O;        // watts
    Eigen::MatrixXcd U_t, U_r;        // N x N, zero outside the side's support
    Eigen::VectorXcd ut_tilde, ur_tilde;
    Eigen::MatrixXcd lambda_t, lambda_r;
    double rho = 1.0;
    double tau = 0.01;
    Slacks slacks;
    SurrogatePoints surrogates;
    int outer_iter = 0;
    int inner_iter_total = 0;
    int rejected_steps = 0;
    std::vector<double> objective_trace;

    const Eigen::MatrixXcd &U(Side s) const { return s == Side::T ? U_t : U_r; }
    const Eigen::VectorXcd &u_tilde(Side s) const { return s == Side::T ? ut_tilde : ur_tilde; }
    const Eigen::MatrixXcd &lambda(Side s) const { return s == Side::T ? lambda_t : lambda_r; }
};

struct ProjectionScratch {
    Eigen::VectorXcd v_t, v_r;      // conj(u) sqrt(beta~)
    Eigen::VectorXcd psi_t, psi_r;  // conj(u) exp(j theta~)
    Eigen::VectorXd p, q;           // Re(psi_t), Re(psi_r)
};

// Received powers over noise, [receiver][stream]; receivers I, O, E1, E2.
using PowerTable = std::array<std::array<double, 2>, 4>;
using PowerExprTable = std::array<std::array<conic::AffineExpr, 2>, 4>;

// H(x, y) = log2(y) + (x - y) / (y ln 2), an upper bound on log2(x).
double surrogate_H(double x, double y);

struct RateEpigraph {
    conic::VarIndex t = -1;
    std::array<conic::VarIndex, 2> l_n{-1, -1}, l_d{-1, -1}, mu{-1, -1}, Emax{-1, -1};
    std::array<std::array<conic::VarIndex, 2>, 2> e_n{}, e_d{}, nu{};
};

// Adds the slack, exponential-cone and linearized constraints that bound the
// served users' secrecy rates, with t <= R_lower - E_max for each served
// user.  `secrecy_floor[rho]` additionally imposes R_lower >= E_max.
// Throws std::invalid_argument on nonpositive surrogate points.
RateEpigraph build_rate_surrogate_constraints(conic::Program &program, const PowerExprTable &power,
                                              const SurrogatePoints &points, const std::array<bool, 2> &serve,
                                              const std::array<bool, 2> &secrecy_floor);

Slacks read_slacks(const RateEpigraph &epi, const conic::Solution &sol);

// Powers Tr(W V U V^H) / sigma2 for the given matrices.
PowerTable received_powers(const PsbProblem &problem, const Eigen::MatrixXcd &W_I, const Eigen::MatrixXcd &W_O,
                           const Eigen::MatrixXcd &U_t, const Eigen::MatrixXcd &U_r);
// Rates implied by a power table: R[rho] and R_E[k][rho].
SecrecyReport rates_from_powers(const PowerTable &p, const std::array<bool, 2> &serve);
// min over served users of R - max_k R_E, unclamped.
double secrecy_margin(const PowerTable &p, const std::array<bool, 2> &serve);
SurrogatePoints surrogates_at(const PowerTable &p);

// Augmented-Lagrangian penalty sum_s ||u~ u~^H - U + rho lambda||_F^2.
double al_penalty(const PsbState &state);
// secrecy_margin(W, U) - penalty / (2 rho)
double al_objective(const PsbProblem &problem, const PsbState &state);

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string &what, conic::SolveStatus status)
        : std::runtime_error(what), status_(status) {}
    conic::SolveStatus status() const { return status_; }

private:
    conic::SolveStatus status_;
};

class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CouplingUnrepresentable : public std::invalid_argument {
public:
    CouplingUnrepresentable() : std::invalid_argument("coupling-unrepresentable") {}
};

struct StepOutcome {
    int solves = 0;
    int accepted = 0;                 // solves whose iterate was kept
    std::vector<std::string> statuses;
};

// Initial point: random phases with theta_r = theta_t + pi/2 and equal
// split (Fixed mode: pattern amplitudes), W = P_max / (2M) I per served user.
PsbState initial_state(const PsbProblem &problem, const PsbConfig &config);

// Maximizes the rate margin over W at fixed U by surrogate refreshes.  Keeps
// the previous W when a solve would lower the objective.  Throws
// SolverFailure when the solver reports infeasibility.
StepOutcome solve_beamforming_subproblem(PsbState &state, const PsbProblem &problem, const PsbConfig &config);

// Maximizes the margin minus the AL and DC penalties over U at fixed W and
// u~, refreshing surrogates and the DC eigenvector and doubling tau while the
// rank residual stalls.  Throws DegeneracyError when tau exceeds tau_max.
StepOutcome solve_coefficient_subproblem(PsbState &state, const PsbProblem &problem, const PsbConfig &config);

// Per-element closed-form projection of the references (u_t, u_r) onto the
// mode's feasible set.  `previous_*` supplies amplitudes kept when an element's
// amplitude weights vanish.
void project_elements(const Eigen::VectorXcd &u_t, const Eigen::VectorXcd &u_r, ProjectionMode mode,
                      const std::vector<bool> &transmit_pattern, bool zero_amplitude_fallback,
                      const Eigen::VectorXcd &previous_t, const Eigen::VectorXcd &previous_r, Eigen::VectorXcd &out_t,
                      Eigen::VectorXcd &out_r, ProjectionScratch *scratch = nullptr);

// Per-element objective Re(conj(u_t) x_t) + Re(conj(u_r) x_r).
double projection_objective(std::complex<double> u_t, std::complex<double> u_r, std::complex<double> x_t,
                            std::complex<double> x_r);

// Updates u~ from the current U and lambda.  Among the eigenvector
// projection, a majorization step from the previous u~, and the previous u~
// itself, keeps whichever has the smallest AL penalty.
void project_coupled(PsbState &state, const PsbProblem &problem, const PsbConfig &config,
                     ProjectionScratch *scratch = nullptr);

struct RankOne {
    Eigen::VectorXcd w;
    double residual = 0.0;  // lambda_2 / lambda_1
};

// sqrt(lambda_1) v_1 with the first nonzero entry real nonnegative.
RankOne extract_rank_one(const Eigen::MatrixXcd &Wm);

struct HermitianEig {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXcd vectors;
};

// Eigendecomposition of (X + X^H) / 2 with eigenvalues in [-1e-9, 0)
// clamped to zero.
HermitianEig hermitian_eig(const Eigen::MatrixXcd &X);

// Nearest point of the 2^q-point phase grid; theta_r follows with the input's
// branch offset when coupled.  Throws CouplingUnrepresentable for q = 1.
StarCoefficients quantize_coupled(const StarCoefficients &coeffs, int q, bool coupled = true);

struct PsbTraceRecord {
    int outer = 0;
    double objective = 0.0;      // AL objective after the inner loop
    double min_secrecy = 0.0;    // at the projected coefficients
    double V_t = 0.0;
    double V_r = 0.0;
    double rho = 0.0;
    double tau = 0.0;
    int inner_iters = 0;
    bool dual_update = false;
    std::vector<double> inner_trace;  // objective after every step
    std::vector<std::string> statuses;
};

void to_json(nlohmann::json &j, const PsbTraceRecord &r);

struct PsbResult {
    BeamformingSolution beams;
    StarCoefficients coeffs;
    SecrecyReport report;
    std::vector<PsbTraceRecord> trace;
    bool converged = false;
    int outer_iters = 0;
    double final_V = 0.0;
    std::array<double, 2> rank_residual{};  // lambda_2 / lambda_1 of W_I, W_O
    int rejected_steps = 0;
    int solves = 0;
};

void write_trace_jsonl(std::ostream &os, const std::vector<PsbTraceRecord> &trace);

// Feasible starting point replacing the random initial phases.
struct PsbWarmStart {
    StarCoefficients coeffs;
    BeamformingSolution beams;
};

// Full outer/inner loop.  Non-convergence returns the best feasible iterate
// with converged = false.  With a warm start the result is never worse than
// the starting point.
PsbResult run_psb(const PsbConfig &config, const PsbProblem &problem, const PsbWarmStart *start = nullptr);
PsbResult run_psb(const PsbConfig &config, const CascadeSet &cascades, double P_max, double sigma2);

// Beamforming only, at fixed coefficients.
struct FixedCoefficientResult {
    BeamformingSolution beams;
    SecrecyReport report;
    std::array<double, 2> rank_residual{};
    int solves = 0;
};
FixedCoefficientResult optimize_beamforming(const PsbProblem &problem, const StarCoefficients &coeffs,
                                            const PsbConfig &config);

}  // namespace starsec

#endif  // STARSEC_PSB_HPP
