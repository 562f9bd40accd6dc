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

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace starsec;
constexpr double kPi = std::numbers::pi;

namespace {

struct Instance {
    CascadeSet cascades;
    double P_max;
    double sigma2;
};

Instance desk_instance(int M, int N, std::uint64_t seed)
{
    NetworkConfig c;
    c.M = M;
    c.N = N;
    c.rng_seed = seed;
    return {build_cascades(generate_channels(c)), c.P_max, c.sigma2};
}

bool coupling_exact(const StarCoefficients &c)
{
    for (int n = 0; n < c.size(); ++n) {
        if (c.beta_t(n) + c.beta_r(n) != 1.0 && std::abs(c.beta_t(n) + c.beta_r(n) - 1.0) > 1e-15)
            return false;
        const double d = wrap_phase(c.theta_r(n) - c.theta_t(n));
        if (std::min(circular_distance(d, kPi / 2), circular_distance(d, 1.5 * kPi)) > 1e-9)
            return false;
    }
    return true;
}

double largest_drop(const PsbResult &r)
{
    double worst = 0.0;
    for (const auto &rec : r.trace)
        for (size_t i = 1; i < rec.inner_trace.size(); ++i)
            worst = std::max(worst, rec.inner_trace[i - 1] - rec.inner_trace[i]);
    return worst;
}

}  // namespace

TEST_CASE("small instance: converged, feasible, monotone and self-consistent")
{
    const Instance inst = desk_instance(2, 4, 3);
    PsbConfig cfg;
    cfg.init_seed = 3;
    const PsbResult r = run_psb(cfg, inst.cascades, inst.P_max, inst.sigma2);
    CHECK(r.converged);
    CHECK(r.final_V <= cfg.eps_th);
    CHECK(r.outer_iters <= cfg.outer_max_iters);
    CHECK(coupling_exact(r.coeffs));
    CHECK(r.beams.power() <= inst.P_max * (1.0 + 1e-6));
    CHECK(largest_drop(r) <= 1e-6);
    CHECK(r.rank_residual[0] <= 1e-3);
    CHECK(r.rank_residual[1] <= 1e-3);
    CHECK(r.report.min_secrecy > 0.0);
    const SecrecyReport again = secrecy_report(inst.cascades, r.coeffs, r.beams, inst.sigma2);
    CHECK(again.min_secrecy == r.report.min_secrecy);
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.back().outer == r.outer_iters);

    std::ostringstream os;
    write_trace_jsonl(os, r.trace);
    std::istringstream is(os.str());
    int lines = 0;
    for (std::string line; std::getline(is, line); ++lines)
        CHECK(nlohmann::json::parse(line).contains("inner_trace"));
    CHECK(lines == static_cast<int>(r.trace.size()));
}

TEST_CASE("identical configuration gives identical output")
{
    const Instance inst = desk_instance(2, 3, 4);
    PsbConfig cfg;
    cfg.init_seed = 4;
    const PsbResult a = run_psb(cfg, inst.cascades, inst.P_max, inst.sigma2);
    const PsbResult b = run_psb(cfg, inst.cascades, inst.P_max, inst.sigma2);
    CHECK(a.report.min_secrecy == b.report.min_secrecy);
    CHECK((a.coeffs.theta_t - b.coeffs.theta_t).norm() == 0.0);
    CHECK((a.beams.w_I - b.beams.w_I).norm() == 0.0);
}

TEST_CASE("quantized output lies on the phase grid")
{
    const Instance inst = desk_instance(2, 3, 5);
    PsbConfig cfg;
    cfg.init_seed = 5;
    cfg.q_bits = 3;
    const PsbResult r = run_psb(cfg, inst.cascades, inst.P_max, inst.sigma2);
    const double step = 2.0 * kPi / 8.0;
    for (int n = 0; n < 3; ++n) {
        CHECK(std::abs(r.coeffs.theta_t(n) / step - std::round(r.coeffs.theta_t(n) / step)) <= 1e-12);
        CHECK(std::abs(r.coeffs.theta_r(n) / step - std::round(r.coeffs.theta_r(n) / step)) <= 1e-12);
    }
    CHECK(coupling_exact(r.coeffs));
    CHECK(r.report.min_secrecy == secrecy_report(inst.cascades, r.coeffs, r.beams, inst.sigma2).min_secrecy);
}

TEST_CASE("instance without eavesdroppers converges")
{
    Instance inst = desk_instance(2, 3, 6);
    inst.cascades.V_E1.setZero();
    inst.cascades.V_E2.setZero();
    const PsbResult r = run_psb(PsbConfig{}, inst.cascades, inst.P_max, inst.sigma2);
    CHECK(r.converged);
    CHECK(r.report.min_secrecy == doctest::Approx(std::min(r.report.R_I, r.report.R_O)));
}

TEST_CASE("warm start is never lost")
{
    const Instance inst = desk_instance(2, 3, 7);
    PsbConfig cfg;
    cfg.outer_max_iters = 2;
    const PsbProblem prob = PsbProblem::standard(inst.cascades, inst.P_max, inst.sigma2, true);
    const PsbResult first = run_psb(cfg, prob);
    PsbWarmStart start{first.coeffs, first.beams};
    const PsbResult second = run_psb(cfg, prob, &start);
    CHECK(second.report.min_secrecy >= first.report.min_secrecy - 1e-12);

    start.beams.W_I = Eigen::MatrixXcd::Zero(5, 5);
    CHECK_THROWS_AS(run_psb(cfg, prob, &start), std::invalid_argument);
}

TEST_CASE("extra random starts never do worse than the first")
{
    const Instance inst = desk_instance(1, 2, 8);
    PsbConfig cfg;
    cfg.init_seed = 8;
    const PsbResult one = run_psb(cfg, inst.cascades, inst.P_max, inst.sigma2);
    cfg.restarts = 3;
    const PsbResult three = run_psb(cfg, inst.cascades, inst.P_max, inst.sigma2);
    CHECK(three.report.min_secrecy >= one.report.min_secrecy);
    CHECK(three.solves >= one.solves);
}

TEST_CASE("fixed-coefficient beamforming keeps the coefficients")
{
    const Instance inst = desk_instance(3, 4, 9);
    const PsbProblem prob = PsbProblem::standard(inst.cascades, inst.P_max, inst.sigma2, true);
    StarCoefficients c;
    c.beta_t = c.beta_r = Eigen::VectorXd::Constant(4, 0.5);
    c.theta_t = Eigen::VectorXd::LinSpaced(4, 0.0, 3.0);
    c.theta_r = (c.theta_t.array() + kPi / 2).matrix();
    const FixedCoefficientResult r = optimize_beamforming(prob, c, PsbConfig{});
    CHECK(r.report.min_secrecy == secrecy_report(inst.cascades, c, r.beams, inst.sigma2).min_secrecy);
    CHECK(r.beams.power() <= inst.P_max * (1.0 + 1e-6));
}

TEST_CASE("problem validation")
{
    const Instance inst = desk_instance(2, 3, 10);
    PsbProblem prob = PsbProblem::standard(inst.cascades, inst.P_max, inst.sigma2, true);
    CHECK_NOTHROW(prob.validate());
    CHECK(prob.support(Side::T).size() == 3);
    prob.mode = ProjectionMode::Fixed;
    prob.transmit_pattern = {true, false, true};
    CHECK(prob.support(Side::T) == std::vector<int>{0, 2});
    CHECK(prob.support(Side::R) == std::vector<int>{1});
    prob.transmit_pattern = {true};
    CHECK_THROWS_AS(prob.validate(), std::invalid_argument);
    prob = PsbProblem::standard(inst.cascades, -1.0, inst.sigma2, true);
    CHECK_THROWS_AS(prob.validate(), std::invalid_argument);
}
