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

#include "json.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace starsec {

namespace {

double distance(const Vec3 &a, const Vec3 &b)
{
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Vec3 unit_direction(const Vec3 &from, const Vec3 &to)
{
    const double d = distance(from, to);
    if (d == 0.0)
        throw std::invalid_argument("channel model: zero distance between nodes");
    return {(to[0] - from[0]) / d, (to[1] - from[1]) / d, (to[2] - from[2]) / d};
}

double path_gain(double L0, double d, double alpha)
{
    if (d == 0.0)
        throw std::invalid_argument("channel model: zero distance between nodes");
    return std::sqrt(L0 * std::pow(d, -alpha));
}

constexpr Vec3 kBsAxis{1.0, 0.0, 0.0};
constexpr Vec3 kRisAxis{0.0, 1.0, 0.0};

// CN(0, 1) entries: real and imaginary parts N(0, 1/2).
Eigen::MatrixXcd complex_gaussian(int rows, int cols, std::mt19937_64 &rng)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd out(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) {
            const double re = nd(rng);
            const double im = nd(rng);
            out(r, c) = {re, im};
        }
    return out;
}

Eigen::VectorXcd user_link(const NetworkConfig &cfg, const Vec3 &pos, double alpha, std::mt19937_64 &rng)
{
    const Eigen::VectorXcd nlos = complex_gaussian(cfg.N, 1, rng);
    const Eigen::VectorXcd los = ula_steering(cfg.N, kRisAxis, unit_direction(cfg.pos_RIS, pos));
    const double a = path_gain(cfg.L0, distance(cfg.pos_RIS, pos), alpha);
    const double k = cfg.kappa;
    return a * (std::sqrt(k / (1.0 + k)) * los + std::sqrt(1.0 / (1.0 + k)) * nlos);
}

void check_side(const char *name, const Vec3 &pos, const Vec3 &ris, bool transmission)
{
    const double lateral = pos[1] - ris[1];
    if (transmission ? !(lateral > 0.0) : !(lateral < 0.0))
        throw std::invalid_argument(std::string("network config: ") + name + " must lie on the " +
                                    (transmission ? "transmission" : "reflection") + " side of the surface");
}

Vec3 vec3_from(const nlohmann::json &j)
{
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("network config: positions are [x, y, z] arrays");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void NetworkConfig::validate() const
{
    if (M < 1 || N < 1)
        throw std::invalid_argument("network config: M and N must be positive");
    if (!(P_max > 0.0) || !(sigma2 > 0.0) || !(L0 > 0.0))
        throw std::invalid_argument("network config: P_max, sigma2 and L0 must be positive");
    if (!(kappa >= 0.0))
        throw std::invalid_argument("network config: kappa must be nonnegative");
    for (double a : {alpha_BS, alpha_IU, alpha_OU, alpha_E1, alpha_E2})
        if (!(a >= 0.0))
            throw std::invalid_argument("network config: path-loss exponents must be nonnegative");
    check_side("IU", pos_IU, pos_RIS, true);
    check_side("E1", pos_E1, pos_RIS, true);
    check_side("OU", pos_OU, pos_RIS, false);
    check_side("E2", pos_E2, pos_RIS, false);
}

void to_json(nlohmann::json &j, const NetworkConfig &c)
{
    j = nlohmann::json{{"M", c.M},
                       {"N", c.N},
                       {"P_max", c.P_max},
                       {"sigma2", c.sigma2},
                       {"pos_BS", c.pos_BS},
                       {"pos_RIS", c.pos_RIS},
                       {"pos_IU", c.pos_IU},
                       {"pos_OU", c.pos_OU},
                       {"pos_E1", c.pos_E1},
                       {"pos_E2", c.pos_E2},
                       {"L0", c.L0},
                       {"alpha_BS", c.alpha_BS},
                       {"alpha_IU", c.alpha_IU},
                       {"alpha_OU", c.alpha_OU},
                       {"alpha_E1", c.alpha_E1},
                       {"alpha_E2", c.alpha_E2},
                       {"kappa", c.kappa},
                       {"rng_seed", std::to_string(c.rng_seed)}};
}

void from_json(const nlohmann::json &j, NetworkConfig &c)
{
    NetworkConfig d;
    auto num = [&](const char *key, double fallback) { return j.contains(key) ? j.at(key).get<double>() : fallback; };
    c.M = j.contains("M") ? j.at("M").get<int>() : d.M;
    c.N = j.contains("N") ? j.at("N").get<int>() : d.N;
    c.P_max = num("P_max", d.P_max);
    c.sigma2 = num("sigma2", d.sigma2);
    c.pos_BS = j.contains("pos_BS") ? vec3_from(j.at("pos_BS")) : d.pos_BS;
    c.pos_RIS = j.contains("pos_RIS") ? vec3_from(j.at("pos_RIS")) : d.pos_RIS;
    c.pos_IU = j.contains("pos_IU") ? vec3_from(j.at("pos_IU")) : d.pos_IU;
    c.pos_OU = j.contains("pos_OU") ? vec3_from(j.at("pos_OU")) : d.pos_OU;
    c.pos_E1 = j.contains("pos_E1") ? vec3_from(j.at("pos_E1")) : d.pos_E1;
    c.pos_E2 = j.contains("pos_E2") ? vec3_from(j.at("pos_E2")) : d.pos_E2;
    c.L0 = num("L0", d.L0);
    c.alpha_BS = num("alpha_BS", d.alpha_BS);
    c.alpha_IU = num("alpha_IU", d.alpha_IU);
    c.alpha_OU = num("alpha_OU", d.alpha_OU);
    c.alpha_E1 = num("alpha_E1", d.alpha_E1);
    c.alpha_E2 = num("alpha_E2", d.alpha_E2);
    c.kappa = num("kappa", d.kappa);
    c.rng_seed = d.rng_seed;
    if (j.contains("rng_seed")) {
        const auto &s = j.at("rng_seed");
        c.rng_seed = s.is_string() ? std::stoull(s.get<std::string>()) : s.get<std::uint64_t>();
    }
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watt_to_dbm(double watt)
{
    return 10.0 * std::log10(watt) + 30.0;
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

Eigen::VectorXcd ula_steering(int count, const Vec3 &axis, const Vec3 &dir)
{
    const double c = axis[0] * dir[0] + axis[1] * dir[1] + axis[2] * dir[2];
    Eigen::VectorXcd a(count);
    for (int n = 0; n < count; ++n)
        a(n) = std::polar(1.0, std::numbers::pi * n * c);
    return a;
}

ChannelSet generate_channels(const NetworkConfig &config)
{
    config.validate();
    std::mt19937_64 rng(config.rng_seed);
    const double k = config.kappa;

    ChannelSet ch;
    {
        const Eigen::MatrixXcd nlos = complex_gaussian(config.N, config.M, rng);
        const Eigen::VectorXcd a_ris = ula_steering(config.N, kRisAxis, unit_direction(config.pos_RIS, config.pos_BS));
        const Eigen::VectorXcd a_bs = ula_steering(config.M, kBsAxis, unit_direction(config.pos_BS, config.pos_RIS));
        const Eigen::MatrixXcd los = a_ris * a_bs.adjoint();
        const double a = path_gain(config.L0, distance(config.pos_BS, config.pos_RIS), config.alpha_BS);
        ch.G = a * (std::sqrt(k / (1.0 + k)) * los + std::sqrt(1.0 / (1.0 + k)) * nlos);
    }
    ch.h_I = user_link(config, config.pos_IU, config.alpha_IU, rng);
    ch.h_O = user_link(config, config.pos_OU, config.alpha_OU, rng);
    ch.h_E1 = user_link(config, config.pos_E1, config.alpha_E1, rng);
    ch.h_E2 = user_link(config, config.pos_E2, config.alpha_E2, rng);
    return ch;
}

CascadeSet build_cascades(const ChannelSet &channels)
{
    const auto N = channels.G.rows();
    for (const auto *h : {&channels.h_I, &channels.h_O, &channels.h_E1, &channels.h_E2})
        if (h->size() != N)
            throw std::invalid_argument("build_cascades: channel vector length does not match G");
    const Eigen::MatrixXcd GH = channels.G.adjoint();
    auto cascade = [&](const Eigen::VectorXcd &h) -> Eigen::MatrixXcd { return GH * h.asDiagonal(); };
    return {cascade(channels.h_I), cascade(channels.h_O), cascade(channels.h_E1), cascade(channels.h_E2)};
}

std::uint64_t channel_hash(const ChannelSet &channels)
{
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const std::complex<double> *p, Eigen::Index n) {
        for (Eigen::Index i = 0; i < n; ++i) {
            unsigned char buf[sizeof(std::complex<double>)];
            std::memcpy(buf, &p[i], sizeof buf);
            for (unsigned char b : buf) {
                h ^= b;
                h *= 1099511628211ull;
            }
        }
    };
    mix(channels.G.data(), channels.G.size());
    for (const auto *v : {&channels.h_I, &channels.h_O, &channels.h_E1, &channels.h_E2})
        mix(v->data(), v->size());
    return h;
}

}  // namespace starsec
