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

#include "starsec/baselines.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace starsec;
constexpr double kPi = std::numbers::pi;

namespace {

SchemeInstance small_instance(int M, int N, std::uint64_t seed, double dbm = -5.0)
{
    NetworkConfig c;
    c.M = M;
    c.N = N;
    c.rng_seed = seed;
    c.P_max = dbm_to_watt(dbm);
    return {build_cascades(generate_channels(c)), c.P_max, c.sigma2};
}

PsbConfig seeded(std::uint64_t seed)
{
    PsbConfig c;
    c.init_seed = seed;
    return c;
}

double rescored(const SchemeInstance &inst, const SchemeResult &r)
{
    return secrecy_report(inst.cascades, r.coeffs, r.beams, inst.sigma2).min_secrecy;
}

}  // namespace

TEST_CASE("scheme names round trip")
{
    for (SchemeId id : all_schemes())
        CHECK(scheme_from_string(to_string(id)) == id);
    CHECK_THROWS_AS(scheme_from_string("star"), std::invalid_argument);
}

TEST_CASE("coupled, independent, C-RIS and random phase are scored by the common report")
{
    const SchemeInstance inst = small_instance(2, 4, 1);
    const SchemeResult coupled = run_coupled(seeded(1), inst);
    CHECK(coupled.min_secrecy == rescored(inst, coupled));
    const SchemeResult indep = run_independent(seeded(1), inst, &coupled);
    CHECK(indep.min_secrecy == rescored(inst, indep));
    const SchemeResult cris = run_cris(seeded(1), inst);
    CHECK(cris.min_secrecy == rescored(inst, cris));
    const SchemeResult rnd = run_random_phase(seeded(1), inst);
    CHECK(rnd.min_secrecy == rescored(inst, rnd));
    CHECK(coupled.beams.power() <= inst.P_max * (1.0 + 1e-6));
    CHECK(cris.beams.power() <= inst.P_max * (1.0 + 1e-6));
}

TEST_CASE("independent phases never fall below coupled on the same channels")
{
    for (std::uint64_t seed : {2u, 3u}) {
        const SchemeInstance inst = small_instance(2, 4, seed);
        const SchemeResult coupled = run_coupled(seeded(seed), inst);
        const SchemeResult indep = run_independent(seeded(seed), inst, &coupled);
        CHECK(indep.min_secrecy >= coupled.min_secrecy - 1e-4);
        CHECK(indep.coeffs.beta_t.size() == 4);
        for (int n = 0; n < 4; ++n)
            CHECK(indep.coeffs.beta_t(n) + indep.coeffs.beta_r(n) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("C-RIS uses the exact half-and-half amplitude pattern")
{
    const SchemeInstance inst = small_instance(2, 4, 4);
    const SchemeResult r = run_cris(seeded(4), inst);
    for (int n = 0; n < 4; ++n) {
        CHECK(r.coeffs.beta_t(n) == (n < 2 ? 1.0 : 0.0));
        CHECK(r.coeffs.beta_r(n) == (n < 2 ? 0.0 : 1.0));
    }
    const SchemeResult tiny = run_cris(seeded(4), small_instance(2, 2, 4));
    CHECK(tiny.coeffs.beta_t(0) == 1.0);
    CHECK(tiny.coeffs.beta_r(1) == 1.0);
    CHECK_THROWS_AS(run_cris(seeded(4), small_instance(2, 3, 4)), std::invalid_argument);
}

TEST_CASE("time switching weights each phase by its share")
{
    SchemeInstance inst = small_instance(2, 4, 5);
    inst.ts_fraction = 0.25;
    const SchemeResult quarter = run_ts(seeded(5), inst);
    inst.ts_fraction = 0.5;
    const SchemeResult half = run_ts(seeded(5), inst);
    CHECK(half.Rs_I == 2.0 * quarter.Rs_I);
    CHECK(half.Rs_O * 1.5 == doctest::Approx(quarter.Rs_O).epsilon(1e-15));
    CHECK(half.min_secrecy == std::min(half.Rs_I, half.Rs_O));
    // the transmission phase uses every element in transmission only
    for (int n = 0; n < 4; ++n) {
        CHECK(half.coeffs.beta_t(n) == 1.0);
        CHECK(half.coeffs.beta_r(n) == 0.0);
    }
    inst.ts_fraction = 1.0;
    CHECK_THROWS_AS(run_ts(seeded(5), inst), std::invalid_argument);
}

TEST_CASE("single active side reduces the projection to phase alignment")
{
    const Eigen::VectorXcd ut = Eigen::Vector2cd(std::polar(0.3, 1.0), std::polar(2.0, -2.5));
    const Eigen::VectorXcd ur = Eigen::Vector2cd(std::polar(0.7, 0.2), std::polar(0.1, 0.4));
    Eigen::VectorXcd xt, xr;
    const Eigen::VectorXcd prev = Eigen::VectorXcd::Ones(2);
    project_elements(ut, ur, ProjectionMode::Fixed, {true, true}, false, prev, prev, xt, xr);
    for (int n = 0; n < 2; ++n) {
        CHECK(std::abs(xt(n)) == doctest::Approx(1.0));
        CHECK(circular_distance(std::arg(xt(n)), std::arg(ut(n))) <= 1e-12);
        CHECK(xr(n) == std::complex<double>(0.0, 0.0));
    }
}

TEST_CASE("random phase baseline is deterministic and coupled")
{
    const StarCoefficients a = random_coupled_coefficients(6, 9), b = random_coupled_coefficients(6, 9);
    CHECK((a.theta_t - b.theta_t).norm() == 0.0);
    CHECK_NOTHROW(a.validate(true));
    for (int n = 0; n < 6; ++n) {
        CHECK(a.beta_t(n) + a.beta_r(n) == 1.0);
        CHECK(circular_distance(a.theta_r(n) - a.theta_t(n), kPi / 2) <= 1e-12);
    }
    const SchemeInstance inst = small_instance(2, 6, 9);
    const SchemeResult r = run_random_phase(seeded(9), inst);
    CHECK((r.coeffs.theta_t - a.theta_t).norm() == 0.0);
}

TEST_CASE("scheme dispatcher and serialization")
{
    const SchemeInstance inst = small_instance(1, 2, 10);
    SchemeResult r = run_scheme(SchemeId::RandomPhase, seeded(10), inst);
    CHECK(r.scheme == SchemeId::RandomPhase);
    r.seed = 18446744073709551557ULL;
    const nlohmann::json j = r;
    CHECK(j.at("scheme") == "random-phase");
    CHECK(j.at("seed") == "18446744073709551557");
    CHECK(j.contains("wall_ms"));
}
