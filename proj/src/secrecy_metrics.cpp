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

#include "starsec/secrecy_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace starsec {

namespace {

const Eigen::MatrixXcd &cascade_of(const CascadeSet &c, int receiver)
{
    switch (receiver) {
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

// |u^H V^H w|^2
double gain(const Eigen::MatrixXcd &V, const Eigen::VectorXcd &u, const Eigen::VectorXcd &w)
{
    return std::norm(u.dot(V.adjoint() * w));
}

double rate(double signal, double interference, double sigma2)
{
    return std::log2(1.0 + signal / (interference + sigma2));
}

SecrecyReport finish(SecrecyReport r)
{
    for (int rho = 0; rho < 2; ++rho) {
        // ties keep E1
        const double emax = r.R_E[1][rho] > r.R_E[0][rho] ? r.R_E[1][rho] : r.R_E[0][rho];
        const double legit = rho == 0 ? r.R_I : r.R_O;
        (rho == 0 ? r.Rs_I : r.Rs_O) = std::max(legit - emax, 0.0);
    }
    r.min_secrecy = std::min(r.Rs_I, r.Rs_O);
    return r;
}

}  // namespace

double wrap_phase(double theta)
{
    const double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0)
        t += two_pi;
    if (t >= two_pi)
        t -= two_pi;
    return t;
}

double circular_distance(double a, double b)
{
    const double d = wrap_phase(a - b);
    return std::min(d, 2.0 * std::numbers::pi - d);
}

Eigen::VectorXcd StarCoefficients::u_t() const
{
    Eigen::VectorXcd u(size());
    for (int n = 0; n < size(); ++n)
        u(n) = std::polar(std::sqrt(std::max(beta_t(n), 0.0)), theta_t(n));
    return u;
}

Eigen::VectorXcd StarCoefficients::u_r() const
{
    Eigen::VectorXcd u(size());
    for (int n = 0; n < size(); ++n)
        u(n) = std::polar(std::sqrt(std::max(beta_r(n), 0.0)), theta_r(n));
    return u;
}

StarCoefficients StarCoefficients::from_vectors(const Eigen::VectorXcd &ut, const Eigen::VectorXcd &ur)
{
    if (ut.size() != ur.size())
        throw std::invalid_argument("StarCoefficients: side vectors differ in length");
    StarCoefficients c;
    const auto n = ut.size();
    c.beta_t.resize(n);
    c.beta_r.resize(n);
    c.theta_t.resize(n);
    c.theta_r.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        c.beta_t(i) = std::norm(ut(i));
        c.beta_r(i) = std::norm(ur(i));
        c.theta_t(i) = wrap_phase(std::arg(ut(i)));
        c.theta_r(i) = wrap_phase(std::arg(ur(i)));
    }
    return c;
}

void StarCoefficients::validate(bool coupled) const
{
    const auto n = beta_t.size();
    if (beta_r.size() != n || theta_t.size() != n || theta_r.size() != n)
        throw std::invalid_argument("StarCoefficients: field lengths differ");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (beta_t(i) < 0.0 || beta_r(i) < 0.0)
            throw std::invalid_argument("StarCoefficients: negative amplitude");
        if (std::abs(beta_t(i) + beta_r(i) - 1.0) > 1e-8)
            throw std::invalid_argument("StarCoefficients: beta_t + beta_r != 1 at element " + std::to_string(i));
        if (coupled) {
            const double d = circular_distance(theta_t(i) - theta_r(i), std::numbers::pi / 2.0);
            const double e = circular_distance(theta_t(i) - theta_r(i), 3.0 * std::numbers::pi / 2.0);
            if (std::min(d, e) > 1e-6)
                throw std::invalid_argument("StarCoefficients: phase coupling violated at element " +
                                            std::to_string(i));
        }
    }
}

BeamformingSolution BeamformingSolution::from_vectors(const Eigen::VectorXcd &wI, const Eigen::VectorXcd &wO)
{
    return {wI * wI.adjoint(), wO * wO.adjoint(), wI, wO};
}

void to_json(nlohmann::json &j, const SecrecyReport &r)
{
    j = nlohmann::json{{"R_I", r.R_I},
                       {"R_O", r.R_O},
                       {"R_E1_I", r.R_E[0][0]},
                       {"R_E1_O", r.R_E[0][1]},
                       {"R_E2_I", r.R_E[1][0]},
                       {"R_E2_O", r.R_E[1][1]},
                       {"Rs_I", r.Rs_I},
                       {"Rs_O", r.Rs_O},
                       {"min_secrecy", r.min_secrecy}};
}

double legit_rate(const CascadeSet &cascades, const StarCoefficients &coeffs, const BeamformingSolution &beams,
                  User user, double sigma2)
{
    const auto &V = cascade_of(cascades, user == User::I ? 0 : 1);
    const Eigen::VectorXcd u = coeffs.u(side_of(user));
    return rate(gain(V, u, beams.w(user)), gain(V, u, beams.w(other(user))), sigma2);
}

double eve_rate(const CascadeSet &cascades, const StarCoefficients &coeffs, const BeamformingSolution &beams, int k,
                User target, double sigma2)
{
    if (k != 1 && k != 2)
        throw std::invalid_argument("eve_rate: eavesdropper index must be 1 or 2");
    const auto &V = cascade_of(cascades, k + 1);
    const Eigen::VectorXcd u = coeffs.u(eve_side(k));
    return rate(gain(V, u, beams.w(target)), gain(V, u, beams.w(other(target))), sigma2);
}

SecrecyReport secrecy_report(const CascadeSet &cascades, const StarCoefficients &coeffs,
                             const BeamformingSolution &beams, double sigma2)
{
    SecrecyReport r;
    r.R_I = legit_rate(cascades, coeffs, beams, User::I, sigma2);
    r.R_O = legit_rate(cascades, coeffs, beams, User::O, sigma2);
    for (int k = 1; k <= 2; ++k) {
        r.R_E[k - 1][0] = eve_rate(cascades, coeffs, beams, k, User::I, sigma2);
        r.R_E[k - 1][1] = eve_rate(cascades, coeffs, beams, k, User::O, sigma2);
    }
    return finish(r);
}

SecrecyReport secrecy_report_theta(const ChannelSet &channels, const StarCoefficients &coeffs,
                                   const BeamformingSolution &beams, double sigma2)
{
    const Eigen::MatrixXcd Theta_t = coeffs.u_t().asDiagonal();
    const Eigen::MatrixXcd Theta_r = coeffs.u_r().asDiagonal();
    auto received = [&](const Eigen::VectorXcd &h, const Eigen::MatrixXcd &Theta, const Eigen::VectorXcd &w) {
        const Eigen::MatrixXcd row = h.adjoint() * Theta.adjoint() * channels.G * w;
        return std::norm(row(0, 0));
    };
    auto sinr_rate = [&](const Eigen::VectorXcd &h, const Eigen::MatrixXcd &Theta, const Eigen::VectorXcd &want,
                         const Eigen::VectorXcd &other_w) {
        return std::log2(1.0 + received(h, Theta, want) / (received(h, Theta, other_w) + sigma2));
    };
    SecrecyReport r;
    r.R_I = sinr_rate(channels.h_I, Theta_t, beams.w_I, beams.w_O);
    r.R_O = sinr_rate(channels.h_O, Theta_r, beams.w_O, beams.w_I);
    r.R_E[0][0] = sinr_rate(channels.h_E1, Theta_t, beams.w_I, beams.w_O);
    r.R_E[0][1] = sinr_rate(channels.h_E1, Theta_t, beams.w_O, beams.w_I);
    r.R_E[1][0] = sinr_rate(channels.h_E2, Theta_r, beams.w_I, beams.w_O);
    r.R_E[1][1] = sinr_rate(channels.h_E2, Theta_r, beams.w_O, beams.w_I);
    return finish(r);
}

}  // namespace starsec
