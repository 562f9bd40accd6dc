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

#include "starsec/channel_model.hpp"

#include "doctest.h"

#include <cmath>

using namespace starsec;

namespace {

NetworkConfig unit_geometry()
{
    NetworkConfig c;
    c.M = 2;
    c.N = 3;
    c.L0 = 1.0;
    c.kappa = 0.0;
    c.pos_BS = {-1.0, 0.0, 0.0};
    c.pos_RIS = {0.0, 0.0, 0.0};
    c.pos_IU = {0.0, 1.0, 0.0};
    c.pos_E1 = {0.0, 1.0, 1e-9};
    c.pos_OU = {0.0, -1.0, 0.0};
    c.pos_E2 = {0.0, -1.0, 1e-9};
    return c;
}

}  // namespace

TEST_CASE("desk geometry constructs and matches dimensions")
{
    NetworkConfig c;
    c.validate();
    const ChannelSet ch = generate_channels(c);
    CHECK(ch.G.rows() == c.N);
    CHECK(ch.G.cols() == c.M);
    CHECK(ch.h_I.size() == c.N);
    CHECK(ch.h_E2.size() == c.N);
}

TEST_CASE("nodes on the wrong side are rejected")
{
    NetworkConfig c;
    c.pos_E1 = {50.0, -3.0, 0.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = NetworkConfig{};
    c.pos_OU = {50.0, 4.0, 0.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = NetworkConfig{};
    c.kappa = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("pure line-of-sight limit has the path-loss magnitude on every entry")
{
    NetworkConfig c;
    c.kappa = 1e12;
    const ChannelSet ch = generate_channels(c);
    const double d = std::sqrt(5.0 * 5.0);
    const double expected = std::sqrt(c.L0 * std::pow(d, -c.alpha_IU));
    for (int n = 0; n < c.N; ++n)
        CHECK(std::abs(std::abs(ch.h_I(n)) - expected) <= 1e-5 * expected);
}

TEST_CASE("unit-gain Rayleigh entries have unit variance")
{
    NetworkConfig c = unit_geometry();
    double sum = 0.0;
    int count = 0;
    for (std::uint64_t s = 1; s <= 10000; ++s) {
        c.rng_seed = s;
        const ChannelSet ch = generate_channels(c);
        for (int n = 0; n < c.N; ++n) {
            sum += std::norm(ch.h_I(n));
            ++count;
        }
    }
    CHECK(sum / count == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("channels are deterministic in the seed")
{
    NetworkConfig c;
    c.rng_seed = 42;
    const ChannelSet a = generate_channels(c), b = generate_channels(c);
    CHECK(channel_hash(a) == channel_hash(b));
    CHECK((a.G - b.G).norm() == 0.0);
    c.rng_seed = 43;
    CHECK(channel_hash(generate_channels(c)) != channel_hash(a));
}

TEST_CASE("scaling L0 scales every entry by its square root exactly")
{
    NetworkConfig c;
    c.rng_seed = 9;
    const ChannelSet a = generate_channels(c);
    c.L0 *= 4.0;
    const ChannelSet b = generate_channels(c);
    CHECK((b.G - 2.0 * a.G).norm() <= 1e-15 * a.G.norm());
    CHECK((b.h_O - 2.0 * a.h_O).norm() <= 1e-15 * a.h_O.norm());
    CHECK((b.h_E1 - 2.0 * a.h_E1).norm() <= 1e-15 * a.h_E1.norm());
}

TEST_CASE("kappa = 0 leaves only the scattered component")
{
    NetworkConfig c = unit_geometry();
    c.rng_seed = 5;
    const ChannelSet a = generate_channels(c);
    // same seed and distance, different direction: identical draw
    c.pos_IU = {0.6, 0.8, 0.0};
    const ChannelSet b = generate_channels(c);
    CHECK((a.h_I - b.h_I).norm() <= 1e-15);
}

TEST_CASE("cascade is G^H diag(h)")
{
    ChannelSet ch;
    ch.G = Eigen::MatrixXcd::Zero(3, 2);
    ch.G(0, 0) = 1.0;
    ch.G(1, 1) = 1.0;
    ch.h_I = Eigen::VectorXcd::Ones(3);
    ch.h_O = Eigen::VectorXcd::Zero(3);
    ch.h_E1 = ch.h_E2 = ch.h_O;
    CascadeSet cas = build_cascades(ch);
    CHECK((cas.V_I - Eigen::MatrixXcd(ch.G.adjoint())).norm() == 0.0);
    CHECK(cas.V_O.norm() == 0.0);

    // entrywise conj(G(n, m)) h(n)
    ch.G = Eigen::MatrixXcd::Random(3, 2);
    ch.h_I = Eigen::VectorXcd::Random(3);
    cas = build_cascades(ch);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 3; ++n)
            CHECK(std::abs(cas.V_I(m, n) - std::conj(ch.G(n, m)) * ch.h_I(n)) <= 1e-15);
}

TEST_CASE("steering vector has unit-modulus entries and half-wavelength progression")
{
    const Vec3 dir{std::sqrt(0.5), std::sqrt(0.5), 0.0};
    const Eigen::VectorXcd a = ula_steering(4, {0.0, 1.0, 0.0}, dir);
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(a(n)) == doctest::Approx(1.0));
    const std::complex<double> ratio = a(1) / a(0);
    CHECK(std::abs(std::abs(std::arg(ratio)) - M_PI * std::sqrt(0.5)) <= 1e-12);
}

TEST_CASE("config JSON round trip and dBm conversion")
{
    NetworkConfig c;
    c.rng_seed = 18446744073709551557ULL;
    c.N = 6;
    const NetworkConfig d = nlohmann::json(c).get<NetworkConfig>();
    CHECK(d.rng_seed == c.rng_seed);
    CHECK(d.N == 6);
    CHECK(d.pos_E2 == c.pos_E2);
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
    CHECK(dbm_to_watt(-5.0) == doctest::Approx(c.P_max).epsilon(1e-12));
    CHECK(watt_to_dbm(1e-3) == doctest::Approx(0.0));
    CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3));
}
