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

#ifndef STARSEC_SECRECY_METRICS_HPP
#define STARSEC_SECRECY_METRICS_HPP

#include "starsec/channel_model.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <array>

namespace starsec {

enum class User { I, O };
enum class Side { T, R };

// Per-element transmission/reflection amplitudes and phases.
struct StarCoefficients {
    Eigen::VectorXd beta_t;
    Eigen::VectorXd beta_r;
    Eigen::VectorXd theta_t;  // [0, 2 pi)
    Eigen::VectorXd theta_r;

    int size() const { return static_cast<int>(beta_t.size()); }

    // u = sqrt(beta) exp(j theta)
    Eigen::VectorXcd u_t() const;
    Eigen::VectorXcd u_r() const;
    Eigen::VectorXcd u(Side s) const { return s == Side::T ? u_t() : u_r(); }

    // Amplitudes from |u|^2 and phases wrapped into [0, 2 pi).
    static StarCoefficients from_vectors(const Eigen::VectorXcd &ut, const Eigen::VectorXcd &ur);

    // Throws std::invalid_argument on violated energy conservation (1e-8) or,
    // when `coupled`, a phase difference outside {pi/2, 3pi/2} (1e-6).
    void validate(bool coupled) const;
};

double wrap_phase(double theta);
// Distance on the circle, in [0, pi].
double circular_distance(double a, double b);

struct BeamformingSolution {
    Eigen::MatrixXcd W_I;
    Eigen::MatrixXcd W_O;
    Eigen::VectorXcd w_I;
    Eigen::VectorXcd w_O;

    static BeamformingSolution from_vectors(const Eigen::VectorXcd &wI, const Eigen::VectorXcd &wO);
    double power() const { return W_I.trace().real() + W_O.trace().real(); }
    const Eigen::VectorXcd &w(User u) const { return u == User::I ? w_I : w_O; }
};

struct SecrecyReport {
    double R_I = 0.0;
    double R_O = 0.0;
    // R_E[k][rho]: eavesdropper k+1 decoding user rho's stream.
    std::array<std::array<double, 2>, 2> R_E{};
    double Rs_I = 0.0;
    double Rs_O = 0.0;
    double min_secrecy = 0.0;
};

void to_json(nlohmann::json &j, const SecrecyReport &r);

// Side of the surface each receiver listens on: IU and E1 transmission,
// OU and E2 reflection.
constexpr Side side_of(User u) { return u == User::I ? Side::T : Side::R; }
constexpr Side eve_side(int k) { return k == 1 ? Side::T : Side::R; }
constexpr User other(User u) { return u == User::I ? User::O : User::I; }

double legit_rate(const CascadeSet &cascades, const StarCoefficients &coeffs, const BeamformingSolution &beams,
                  User user, double sigma2);

// k in {1, 2}; `target` is the user whose stream is decoded.
double eve_rate(const CascadeSet &cascades, const StarCoefficients &coeffs, const BeamformingSolution &beams, int k,
                User target, double sigma2);

// Argmax ties over eavesdroppers resolve to E1.
SecrecyReport secrecy_report(const CascadeSet &cascades, const StarCoefficients &coeffs,
                             const BeamformingSolution &beams, double sigma2);

// Same rates evaluated as |h^H Theta^H G w|^2 straight from the channel
// blocks.  Used only to cross-check the cascade path.
SecrecyReport secrecy_report_theta(const ChannelSet &channels, const StarCoefficients &coeffs,
                                   const BeamformingSolution &beams, double sigma2);

}  // namespace starsec

#endif  // STARSEC_SECRECY_METRICS_HPP
