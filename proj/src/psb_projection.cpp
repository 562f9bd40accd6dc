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

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace starsec {

namespace {

using cd = std::complex<double>;
constexpr cd kJ{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Alternation stops once the per-element objective gains less than this.
constexpr double kElementTol = 1e-10;
constexpr int kElementMaxIters = 10000;
// Relative rotations of the reflection-side reference tried by the coupled
// projection; the per-side global phase is not identifiable from U.
constexpr int kRotations = 16;

struct Amplitudes {
    double a;  // sqrt(beta_t)
    double b;  // sqrt(beta_r)
};

// Amplitude step on (p, q) with a^2 + b^2 = 1.
Amplitudes amplitude_step(double p, double q, Amplitudes previous, bool zero_amplitude_fallback)
{
    if (p >= 0.0 && q >= 0.0) {
        const double r = std::hypot(p, q);
        if (r == 0.0)
            return previous;
        return {p / r, q / r};
    }
    if (p >= 0.0)
        return {1.0, 0.0};
    if (q >= 0.0)
        return {0.0, 1.0};
    if (zero_amplitude_fallback)
        return {0.0, 0.0};
    return p >= q ? Amplitudes{1.0, 0.0} : Amplitudes{0.0, 1.0};
}

void project_coupled_element(cd ut, cd ur, bool zero_amplitude_fallback, cd prev_t, cd prev_r, cd &out_t, cd &out_r,
                             ProjectionScratch *scratch, int n)
{
    const Amplitudes kept{std::abs(prev_t), std::abs(prev_r)};
    Amplitudes amp{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
    double theta_t = std::arg(prev_t);
    double offset = kPi / 2.0;
    double best = -std::numeric_limits<double>::infinity();
    cd vt{}, vr{}, pt{}, pr{};
    for (int it = 0; it < kElementMaxIters; ++it) {
        // phase step
        vt = std::conj(ut) * amp.a;
        vr = std::conj(ur) * amp.b;
        const cd zp = vt + kJ * vr;
        const cd zm = vt - kJ * vr;
        const bool minus = std::abs(zm) > std::abs(zp);
        const cd z = minus ? zm : zp;
        if (std::abs(z) > 0.0)
            theta_t = -std::arg(z);
        offset = minus ? 1.5 * kPi : 0.5 * kPi;
        // amplitude step
        pt = std::conj(ut) * std::polar(1.0, theta_t);
        pr = std::conj(ur) * std::polar(1.0, theta_t + offset);
        const double p = pt.real();
        const double q = pr.real();
        amp = amplitude_step(p, q, (p == 0.0 && q == 0.0) ? kept : amp, zero_amplitude_fallback);
        const double f = p * amp.a + q * amp.b;
        if (f - best < kElementTol) {
            best = std::max(best, f);
            break;
        }
        best = f;
    }
    out_t = std::polar(amp.a, theta_t);
    out_r = std::polar(amp.b, theta_t + offset);
    if (scratch) {
        scratch->v_t(n) = vt;
        scratch->v_r(n) = vr;
        scratch->psi_t(n) = pt;
        scratch->psi_r(n) = pr;
        scratch->p(n) = pt.real();
        scratch->q(n) = pr.real();
    }
}

void project_independent_element(cd ut, cd ur, cd prev_t, cd prev_r, cd &out_t, cd &out_r,
                                  ProjectionScratch *scratch, int n)
{
    const double theta_t = std::abs(ut) > 0.0 ? std::arg(ut) : std::arg(prev_t);
    const double theta_r = std::abs(ur) > 0.0 ? std::arg(ur) : std::arg(prev_r);
    const cd pt = std::conj(ut) * std::polar(1.0, theta_t);
    const cd pr = std::conj(ur) * std::polar(1.0, theta_r);
    const Amplitudes amp = amplitude_step(pt.real(), pr.real(), {std::abs(prev_t), std::abs(prev_r)}, false);
    out_t = std::polar(amp.a, theta_t);
    out_r = std::polar(amp.b, theta_r);
    if (scratch) {
        scratch->v_t(n) = std::conj(ut) * amp.a;
        scratch->v_r(n) = std::conj(ur) * amp.b;
        scratch->psi_t(n) = pt;
        scratch->psi_r(n) = pr;
        scratch->p(n) = pt.real();
        scratch->q(n) = pr.real();
    }
}

double side_penalty(const Eigen::VectorXcd &u, const Eigen::MatrixXcd &U, const Eigen::MatrixXcd &lambda, double rho)
{
    return (u * u.adjoint() - U + rho * lambda).squaredNorm();
}

// Dominant eigenvector scaled by sqrt(lambda_1), global phase aligned with `align`.
Eigen::VectorXcd scaled_dominant(const Eigen::MatrixXcd &T, const Eigen::VectorXcd &align)
{
    const HermitianEig eig = hermitian_eig(T);
    const auto last = eig.values.size() - 1;
    const double l1 = std::max(eig.values(last), 0.0);
    Eigen::VectorXcd v = std::sqrt(l1) * eig.vectors.col(last);
    const cd c = v.dot(align);  // v^H align
    if (std::abs(c) > 0.0)
        v *= c / std::abs(c);
    return v;
}

}  // namespace

HermitianEig hermitian_eig(const Eigen::MatrixXcd &X)
{
    const Eigen::MatrixXcd H = 0.5 * (X + X.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    HermitianEig out{es.eigenvalues(), es.eigenvectors()};
    for (Eigen::Index i = 0; i < out.values.size(); ++i)
        if (out.values(i) < 0.0 && out.values(i) >= -1e-9)
            out.values(i) = 0.0;
    return out;
}

double projection_objective(cd u_t, cd u_r, cd x_t, cd x_r)
{
    return (std::conj(u_t) * x_t).real() + (std::conj(u_r) * x_r).real();
}

void project_elements(const Eigen::VectorXcd &u_t, const Eigen::VectorXcd &u_r, ProjectionMode mode,
                      const std::vector<bool> &transmit_pattern, bool zero_amplitude_fallback,
                      const Eigen::VectorXcd &previous_t, const Eigen::VectorXcd &previous_r, Eigen::VectorXcd &out_t,
                      Eigen::VectorXcd &out_r, ProjectionScratch *scratch)
{
    const auto N = u_t.size();
    if (u_r.size() != N || previous_t.size() != N || previous_r.size() != N)
        throw std::invalid_argument("project_elements: length mismatch");
    if (mode == ProjectionMode::Fixed && static_cast<Eigen::Index>(transmit_pattern.size()) != N)
        throw std::invalid_argument("project_elements: fixed mode needs a full transmit pattern");
    out_t.resize(N);
    out_r.resize(N);
    if (scratch) {
        scratch->v_t.setZero(N);
        scratch->v_r.setZero(N);
        scratch->psi_t.setZero(N);
        scratch->psi_r.setZero(N);
        scratch->p.setZero(N);
        scratch->q.setZero(N);
    }
    for (Eigen::Index n = 0; n < N; ++n) {
        const int ni = static_cast<int>(n);
        switch (mode) {
        case ProjectionMode::Coupled:
            project_coupled_element(u_t(n), u_r(n), zero_amplitude_fallback, previous_t(n), previous_r(n), out_t(n), out_r(n),
                                    scratch, ni);
            break;
        case ProjectionMode::Independent:
            project_independent_element(u_t(n), u_r(n), previous_t(n), previous_r(n), out_t(n), out_r(n), scratch,
                                        ni);
            break;
        case ProjectionMode::Fixed: {
            const bool tx = transmit_pattern[static_cast<size_t>(n)];
            const cd ref = tx ? u_t(n) : u_r(n);
            const cd prev = tx ? previous_t(n) : previous_r(n);
            const cd unit = std::polar(1.0, std::abs(ref) > 0.0 ? std::arg(ref) : std::arg(prev));
            out_t(n) = tx ? unit : cd{};
            out_r(n) = tx ? cd{} : unit;
            break;
        }
        }
    }
}

void project_coupled(PsbState &state, const PsbProblem &problem, const PsbConfig &config, ProjectionScratch *scratch)
{
    const double rho = state.rho;
    const Eigen::MatrixXcd T_t = config.dual_shift ? Eigen::MatrixXcd(state.U_t - rho * state.lambda_t) : state.U_t;
    const Eigen::MatrixXcd T_r = config.dual_shift ? Eigen::MatrixXcd(state.U_r - rho * state.lambda_r) : state.U_r;

    // Candidate references: the scaled dominant eigenvector and a
    // majorization step (T + cI) u~ around the current auxiliary point.
    auto mm_ref = [](const Eigen::MatrixXcd &T, const Eigen::VectorXcd &u) -> Eigen::VectorXcd {
        const double c = std::max(0.0, -hermitian_eig(T).values(0));
        const Eigen::MatrixXcd H = 0.5 * (T + T.adjoint());
        return H * u + c * u;
    };
    const std::array<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>, 2> refs{
        std::pair{scaled_dominant(T_t, state.ut_tilde), scaled_dominant(T_r, state.ur_tilde)},
        std::pair{mm_ref(T_t, state.ut_tilde), mm_ref(T_r, state.ur_tilde)}};

    auto penalty = [&](const Eigen::VectorXcd &xt, const Eigen::VectorXcd &xr) {
        return side_penalty(xt, state.U_t, state.lambda_t, rho) + side_penalty(xr, state.U_r, state.lambda_r, rho);
    };

    Eigen::VectorXcd best_t = state.ut_tilde;
    Eigen::VectorXcd best_r = state.ur_tilde;
    double best = std::numeric_limits<double>::infinity();
    ProjectionScratch best_scratch;
    bool have_scratch = false;

    const int rotations = problem.mode == ProjectionMode::Coupled ? kRotations : 1;
    Eigen::VectorXcd xt, xr;
    ProjectionScratch local;
    for (const auto &[rt, rr] : refs) {
        for (int k = 0; k < rotations; ++k) {
            const cd rot = std::polar(1.0, 2.0 * kPi * k / rotations);
            project_elements(rt, rr * rot, problem.mode, problem.transmit_pattern, config.zero_amplitude_fallback,
                             state.ut_tilde, state.ur_tilde, xt, xr, &local);
            const double pen = penalty(xt, xr);
            if (pen < best) {
                best = pen;
                best_t = xt;
                best_r = xr;
                best_scratch = local;
                have_scratch = true;
            }
        }
    }
    // Never move to a point with a larger penalty than the current one.
    if (penalty(state.ut_tilde, state.ur_tilde) <= best) {
        best_t = state.ut_tilde;
        best_r = state.ur_tilde;
    }
    state.ut_tilde = best_t;
    state.ur_tilde = best_r;
    if (scratch && have_scratch)
        *scratch = best_scratch;
}

RankOne extract_rank_one(const Eigen::MatrixXcd &Wm)
{
    RankOne out;
    out.w = Eigen::VectorXcd::Zero(Wm.rows());
    if (Wm.size() == 0)
        return out;
    const HermitianEig eig = hermitian_eig(Wm);
    const auto n = eig.values.size();
    const double l1 = eig.values(n - 1);
    if (!(l1 > 0.0))
        return out;
    Eigen::VectorXcd w = std::sqrt(l1) * eig.vectors.col(n - 1);
    const double scale = w.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (std::abs(w(i)) > 1e-12 * scale) {
            w *= std::conj(w(i)) / std::abs(w(i));
            w(i) = std::abs(w(i));
            break;
        }
    }
    out.w = w;
    out.residual = n > 1 ? std::max(eig.values(n - 2), 0.0) / l1 : 0.0;
    return out;
}

}  // namespace starsec
