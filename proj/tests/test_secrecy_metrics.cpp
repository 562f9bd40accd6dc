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

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace starsec;
using cd = std::complex<double>;

namespace {

StarCoefficients random_coefficients(int N, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    StarCoefficients c;
    c.beta_t.resize(N);
    c.beta_r.resize(N);
    c.theta_t.resize(N);
    c.theta_r.resize(N);
    for (int n = 0; n < N; ++n) {
        c.beta_t(n) = unit(rng);
        c.beta_r(n) = 1.0 - c.beta_t(n);
        c.theta_t(n) = 2.0 * std::numbers::pi * unit(rng);
        c.theta_r(n) = wrap_phase(c.theta_t(n) + (unit(rng) < 0.5 ? 0.5 : 1.5) * std::numbers::pi);
    }
    return c;
}

Eigen::VectorXcd random_vector(int n, std::mt19937_64 &rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i)
        v(i) = {g(rng), g(rng)};
    return v;
}

ChannelSet random_channels(int M, int N, std::mt19937_64 &rng)
{
    ChannelSet ch;
    ch.G.resize(N, M);
    for (int m = 0; m < M; ++m)
        ch.G.col(m) = random_vector(N, rng);
    ch.h_I = random_vector(N, rng);
    ch.h_O = random_vector(N, rng);
    ch.h_E1 = random_vector(N, rng);
    ch.h_E2 = random_vector(N, rng);
    return ch;
}

// Received amplitude h^H Theta^H G w = sum_n conj(h_n s_n) (G w)_n with
// s = sqrt(beta) e^{j theta},
// written out element by element.
cd amplitude(const ChannelSet &ch, const Eigen::VectorXcd &h, const Eigen::VectorXd &beta, const Eigen::VectorXd &theta,
             const Eigen::VectorXcd &w)
{
    cd sum = 0.0;
    for (int n = 0; n < h.size(); ++n) {
        cd gw = 0.0;
        for (int m = 0; m < w.size(); ++m)
            gw += ch.G(n, m) * w(m);
        sum += std::conj(h(n)) * std::sqrt(beta(n)) * std::exp(cd(0.0, -theta(n))) * gw;
    }
    return sum;
}

double direct_rate(const ChannelSet &ch, const Eigen::VectorXcd &h, bool t_side, const StarCoefficients &c,
                   const Eigen::VectorXcd &w_own, const Eigen::VectorXcd &w_other, double sigma2)
{
    const Eigen::VectorXd &beta = t_side ? c.beta_t : c.beta_r;
    const Eigen::VectorXd &theta = t_side ? c.theta_t : c.theta_r;
    const double s = std::norm(amplitude(ch, h, beta, theta, w_own));
    const double i = std::norm(amplitude(ch, h, beta, theta, w_other));
    return std::log2(1.0 + s / (i + sigma2));
}

}  // namespace

TEST_CASE("zero signal gives zero rate; unit SNR gives one bit")
{
    CascadeSet cas;
    cas.V_I = Eigen::MatrixXcd::Constant(1, 1, 1.0);
    cas.V_O = cas.V_E1 = cas.V_E2 = cas.V_I;
    StarCoefficients c;
    c.beta_t = c.beta_r = Eigen::VectorXd::Constant(1, 0.5);
    c.theta_t = Eigen::VectorXd::Zero(1);
    c.theta_r = Eigen::VectorXd::Constant(1, std::numbers::pi / 2);
    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(1);
    CHECK(legit_rate(cas, c, BeamformingSolution::from_vectors(zero, zero), User::I, 1.0) == 0.0);
    // |u^H V^H w|^2 = 0.5 |w|^2 = sigma2
    const Eigen::VectorXcd w = Eigen::VectorXcd::Constant(1, std::sqrt(2.0));
    CHECK(legit_rate(cas, c, BeamformingSolution::from_vectors(w, zero), User::I, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("legitimate and eavesdropper rates match element-wise evaluation")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const ChannelSet ch = random_channels(2, 3, rng);
        const CascadeSet cas = build_cascades(ch);
        const StarCoefficients c = random_coefficients(3, rng);
        const Eigen::VectorXcd wI = random_vector(2, rng), wO = random_vector(2, rng);
        const BeamformingSolution b = BeamformingSolution::from_vectors(wI, wO);
        const double s2 = 0.3;
        CHECK(legit_rate(cas, c, b, User::I, s2) == doctest::Approx(direct_rate(ch, ch.h_I, true, c, wI, wO, s2)));
        CHECK(legit_rate(cas, c, b, User::O, s2) == doctest::Approx(direct_rate(ch, ch.h_O, false, c, wO, wI, s2)));
        CHECK(eve_rate(cas, c, b, 1, User::I, s2) == doctest::Approx(direct_rate(ch, ch.h_E1, true, c, wI, wO, s2)));
        CHECK(eve_rate(cas, c, b, 1, User::O, s2) == doctest::Approx(direct_rate(ch, ch.h_E1, true, c, wO, wI, s2)));
        CHECK(eve_rate(cas, c, b, 2, User::I, s2) == doctest::Approx(direct_rate(ch, ch.h_E2, false, c, wI, wO, s2)));
        CHECK(eve_rate(cas, c, b, 2, User::O, s2) == doctest::Approx(direct_rate(ch, ch.h_E2, false, c, wO, wI, s2)));
    }
}

TEST_CASE("secrecy uses the stronger eavesdropper and clamps at zero")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const ChannelSet ch = random_channels(2, 4, rng);
        const CascadeSet cas = build_cascades(ch);
        const StarCoefficients c = random_coefficients(4, rng);
        const BeamformingSolution b = BeamformingSolution::from_vectors(random_vector(2, rng), random_vector(2, rng));
        const SecrecyReport r = secrecy_report(cas, c, b, 0.5);
        const double eI = std::max(eve_rate(cas, c, b, 1, User::I, 0.5), eve_rate(cas, c, b, 2, User::I, 0.5));
        const double eO = std::max(eve_rate(cas, c, b, 1, User::O, 0.5), eve_rate(cas, c, b, 2, User::O, 0.5));
        CHECK(r.Rs_I == doctest::Approx(std::max(0.0, r.R_I - eI)));
        CHECK(r.Rs_O == doctest::Approx(std::max(0.0, r.R_O - eO)));
        CHECK(r.min_secrecy == std::min(r.Rs_I, r.Rs_O));
        CHECK(r.Rs_I >= 0.0);
    }
}

TEST_CASE("silent eavesdroppers leave the legitimate rate; a copied channel leaves nothing")
{
    std::mt19937_64 rng(13);
    ChannelSet ch = random_channels(2, 3, rng);
    ch.h_E1.setZero();
    ch.h_E2.setZero();
    const StarCoefficients c = random_coefficients(3, rng);
    const BeamformingSolution b = BeamformingSolution::from_vectors(random_vector(2, rng), random_vector(2, rng));
    SecrecyReport r = secrecy_report(build_cascades(ch), c, b, 1.0);
    CHECK(r.R_E[0][0] == 0.0);
    CHECK(r.Rs_I == r.R_I);
    CHECK(r.Rs_O == r.R_O);

    ch.h_E1 = ch.h_I;
    const CascadeSet cas = build_cascades(ch);
    CHECK(eve_rate(cas, c, b, 1, User::I, 1.0) == legit_rate(cas, c, b, User::I, 1.0));
    r = secrecy_report(cas, c, b, 1.0);
    CHECK(r.Rs_I == 0.0);
}

TEST_CASE("cascade and direct forms agree")
{
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const ChannelSet ch = random_channels(3, 5, rng);
        const StarCoefficients c = random_coefficients(5, rng);
        const BeamformingSolution b = BeamformingSolution::from_vectors(random_vector(3, rng), random_vector(3, rng));
        const SecrecyReport x = secrecy_report(build_cascades(ch), c, b, 0.7);
        const SecrecyReport y = secrecy_report_theta(ch, c, b, 0.7);
        CHECK(std::abs(x.R_I - y.R_I) <= 1e-9);
        CHECK(std::abs(x.R_E[1][0] - y.R_E[1][0]) <= 1e-9);
        CHECK(std::abs(x.min_secrecy - y.min_secrecy) <= 1e-9);
    }
}

TEST_CASE("rates are invariant to joint scaling of channels and noise")
{
    std::mt19937_64 rng(15);
    ChannelSet ch = random_channels(2, 3, rng);
    const StarCoefficients c = random_coefficients(3, rng);
    const BeamformingSolution b = BeamformingSolution::from_vectors(random_vector(2, rng), random_vector(2, rng));
    const SecrecyReport x = secrecy_report(build_cascades(ch), c, b, 0.25);
    // G scaled by 2 scales every cascade by 2: powers by 4
    ch.G *= 2.0;
    const SecrecyReport y = secrecy_report(build_cascades(ch), c, b, 1.0);
    CHECK(x.R_I == doctest::Approx(y.R_I).epsilon(1e-14));
    CHECK(x.R_E[0][1] == doctest::Approx(y.R_E[0][1]).epsilon(1e-14));
    CHECK(x.min_secrecy == doctest::Approx(y.min_secrecy).epsilon(1e-14));
}

TEST_CASE("a stronger dominant eavesdropper never raises secrecy")
{
    std::mt19937_64 rng(16);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        ChannelSet ch = random_channels(2, 3, rng);
        const StarCoefficients c = random_coefficients(3, rng);
        const BeamformingSolution b = BeamformingSolution::from_vectors(random_vector(2, rng), random_vector(2, rng));
        const SecrecyReport r = secrecy_report(build_cascades(ch), c, b, 1.0);
        const bool e1_max = r.R_E[0][0] >= r.R_E[1][0];
        (e1_max ? ch.h_E1 : ch.h_E2) *= 1.1;
        const SecrecyReport s = secrecy_report(build_cascades(ch), c, b, 1.0);
        CHECK(s.Rs_I <= r.Rs_I + 1e-15);
        CHECK(s.min_secrecy <= r.min_secrecy + 1e-15);
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("rates are continuous in the phases")
{
    std::mt19937_64 rng(17);
    const ChannelSet ch = random_channels(2, 4, rng);
    const CascadeSet cas = build_cascades(ch);
    StarCoefficients c = random_coefficients(4, rng);
    const BeamformingSolution b = BeamformingSolution::from_vectors(random_vector(2, rng), random_vector(2, rng));
    const SecrecyReport r = secrecy_report(cas, c, b, 1.0);
    for (int n = 0; n < 4; ++n) {
        StarCoefficients d = c;
        d.theta_t(n) += 1e-8;
        d.theta_r(n) += 1e-8;
        const SecrecyReport s = secrecy_report(cas, d, b, 1.0);
        CHECK(std::abs(s.R_I - r.R_I) < 1e-4);
        CHECK(std::abs(s.R_E[1][1] - r.R_E[1][1]) < 1e-4);
    }
}

TEST_CASE("coefficient validation and phase helpers")
{
    std::mt19937_64 rng(18);
    StarCoefficients c = random_coefficients(3, rng);
    CHECK_NOTHROW(c.validate(true));
    c.theta_r(1) = c.theta_t(1) + 0.1;
    CHECK_THROWS_AS(c.validate(true), std::invalid_argument);
    CHECK_NOTHROW(c.validate(false));
    c.beta_t(0) = 0.9;
    c.beta_r(0) = 0.2;
    CHECK_THROWS_AS(c.validate(false), std::invalid_argument);

    CHECK(wrap_phase(-0.5) == doctest::Approx(2.0 * std::numbers::pi - 0.5));
    CHECK(wrap_phase(2.0 * std::numbers::pi) == 0.0);
    CHECK(circular_distance(0.1, 2.0 * std::numbers::pi - 0.1) == doctest::Approx(0.2));

    const Eigen::VectorXcd ut = Eigen::VectorXcd::Constant(2, std::polar(std::sqrt(0.3), 1.0));
    const Eigen::VectorXcd ur = Eigen::VectorXcd::Constant(2, std::polar(std::sqrt(0.7), 2.0));
    const StarCoefficients d = StarCoefficients::from_vectors(ut, ur);
    CHECK(d.beta_t(1) == doctest::Approx(0.3));
    CHECK(d.theta_r(0) == doctest::Approx(2.0));
    CHECK((d.u_t() - ut).norm() <= 1e-15);
}
