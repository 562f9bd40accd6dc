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

#ifndef STARSEC_CHANNEL_MODEL_HPP
#define STARSEC_CHANNEL_MODEL_HPP

#include <Eigen/Dense>
#include "json.hpp"

#include <array>
#include <cstdint>

namespace starsec {

using Vec3 = std::array<double, 3>;

// Scene and link-budget parameters.  All powers in watts, path losses linear.
struct NetworkConfig {
    int M = 4;                  // BS antennas
    int N = 8;                  // STAR-RIS elements
    double P_max = 3.1622776601683794e-4;   // -5 dBm
    double sigma2 = 3.1622776601683795e-14; // -105 dBm
    Vec3 pos_BS{0.0, 0.0, 0.0};
    Vec3 pos_RIS{50.0, 0.0, 0.0};
    Vec3 pos_IU{50.0, 5.0, 0.0};
    Vec3 pos_OU{50.0, -5.0, 0.0};
    Vec3 pos_E1{50.0, 10.0, 0.0};
    Vec3 pos_E2{50.0, -10.0, 0.0};
    double L0 = 1e-3;           // -30 dB at 1 m
    double alpha_BS = 2.2;
    double alpha_IU = 2.5;
    double alpha_OU = 2.5;
    double alpha_E1 = 2.5;
    double alpha_E2 = 2.5;
    double kappa = 5.0;
    std::uint64_t rng_seed = 1;

    // Throws std::invalid_argument on a violated invariant, including nodes
    // placed on the wrong side of the surface (sign of y relative to the RIS).
    void validate() const;
};

void to_json(nlohmann::json &j, const NetworkConfig &c);
void from_json(const nlohmann::json &j, NetworkConfig &c);

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);

struct ChannelSet {
    Eigen::MatrixXcd G;   // N x M, BS -> STAR-RIS
    Eigen::VectorXcd h_I; // N, STAR-RIS -> IU
    Eigen::VectorXcd h_O;
    Eigen::VectorXcd h_E1;
    Eigen::VectorXcd h_E2;
};

// V = G^H diag(h), M x N.
struct CascadeSet {
    Eigen::MatrixXcd V_I;
    Eigen::MatrixXcd V_O;
    Eigen::MatrixXcd V_E1;
    Eigen::MatrixXcd V_E2;

    int M() const { return static_cast<int>(V_I.rows()); }
    int N() const { return static_cast<int>(V_I.cols()); }
};

// Half-wavelength ULA response along `axis` toward unit direction `dir`.
Eigen::VectorXcd ula_steering(int count, const Vec3 &axis, const Vec3 &dir);

// Rician channels scaled by sqrt(L0 d^-alpha).  Deterministic in rng_seed.
ChannelSet generate_channels(const NetworkConfig &config);

CascadeSet build_cascades(const ChannelSet &channels);

// 64-bit FNV-1a over the raw bytes of every channel entry.
std::uint64_t channel_hash(const ChannelSet &channels);

}  // namespace starsec

#endif  // STARSEC_CHANNEL_MODEL_HPP
