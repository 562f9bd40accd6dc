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

#include <chrono>
#include <numbers>
#include <random>
#include <stdexcept>

namespace starsec {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

SchemeResult from_psb(SchemeId id, const PsbConfig &config, const PsbResult &r, Clock::time_point start)
{
    SchemeResult out;
    out.scheme = id;
    out.q_bits = config.q_bits;
    out.min_secrecy = r.report.min_secrecy;
    out.Rs_I = r.report.Rs_I;
    out.Rs_O = r.report.Rs_O;
    out.converged = r.converged;
    out.outer_iters = r.outer_iters;
    out.coeffs = r.coeffs;
    out.beams = r.beams;
    out.rank_residual = r.rank_residual;
    out.wall_ms = elapsed_ms(start);
    return out;
}

PsbProblem fixed_problem(const SchemeInstance &inst, std::vector<bool> pattern, std::array<bool, 2> serve)
{
    PsbProblem p;
    p.cascades = inst.cascades;
    p.P_max = inst.P_max;
    p.sigma2 = inst.sigma2;
    p.mode = ProjectionMode::Fixed;
    p.transmit_pattern = std::move(pattern);
    p.serve = serve;
    return p;
}

}  // namespace

const std::array<SchemeId, 5> &all_schemes()
{
    static const std::array<SchemeId, 5> ids{SchemeId::CoupledStar, SchemeId::IndependentStar, SchemeId::TsStar,
                                             SchemeId::CRis, SchemeId::RandomPhase};
    return ids;
}

const char *to_string(SchemeId id)
{
    switch (id) {
    case SchemeId::CoupledStar:
        return "coupled-star";
    case SchemeId::IndependentStar:
        return "independent-star";
    case SchemeId::TsStar:
        return "ts-star";
    case SchemeId::CRis:
        return "c-ris";
    case SchemeId::RandomPhase:
        return "random-phase";
    }
    return "unknown";
}

SchemeId scheme_from_string(const std::string &name)
{
    for (SchemeId id : all_schemes())
        if (name == to_string(id))
            return id;
    throw std::invalid_argument("unknown scheme: " + name);
}

void to_json(nlohmann::json &j, const SchemeResult &r)
{
    j = nlohmann::json{{"scheme", to_string(r.scheme)},
                       {"seed", std::to_string(r.seed)},
                       {"P_max_dBm", r.P_max_dBm},
                       {"q_bits", r.q_bits},
                       {"min_secrecy", r.min_secrecy},
                       {"Rs_I", r.Rs_I},
                       {"Rs_O", r.Rs_O},
                       {"converged", r.converged},
                       {"outer_iters", r.outer_iters},
                       {"wall_ms", r.wall_ms}};
}

SchemeResult run_coupled(const PsbConfig &config, const SchemeInstance &inst)
{
    const auto start = Clock::now();
    PsbConfig c = config;
    c.coupled = true;
    const PsbResult r = run_psb(c, PsbProblem::standard(inst.cascades, inst.P_max, inst.sigma2, true));
    return from_psb(SchemeId::CoupledStar, c, r, start);
}

SchemeResult run_independent(const PsbConfig &config, const SchemeInstance &inst, const SchemeResult *coupled)
{
    const auto start = Clock::now();
    SchemeResult own;
    if (!coupled) {
        own = run_coupled(config, inst);
        coupled = &own;
    }
    PsbConfig c = config;
    c.coupled = false;
    c.q_bits = 0;
    const PsbWarmStart warm{coupled->coeffs, coupled->beams};
    const PsbResult r = run_psb(c, PsbProblem::standard(inst.cascades, inst.P_max, inst.sigma2, false), &warm);
    SchemeResult out = from_psb(SchemeId::IndependentStar, c, r, start);
    if (config.q_bits > 0) {
        out.q_bits = config.q_bits;
        out.coeffs = quantize_coupled(out.coeffs, config.q_bits, false);
        const SecrecyReport rep = secrecy_report(inst.cascades, out.coeffs, out.beams, inst.sigma2);
        out.min_secrecy = rep.min_secrecy;
        out.Rs_I = rep.Rs_I;
        out.Rs_O = rep.Rs_O;
    }
    return out;
}

SchemeResult run_ts(const PsbConfig &config, const SchemeInstance &inst)
{
    if (!(inst.ts_fraction > 0.0 && inst.ts_fraction < 1.0))
        throw std::invalid_argument("run_ts: time share must lie in (0, 1)");
    const auto start = Clock::now();
    const int N = inst.cascades.N();
    PsbConfig c = config;
    c.coupled = false;
    const PsbResult first = run_psb(c, fixed_problem(inst, std::vector<bool>(static_cast<size_t>(N), true), {true, false}));
    const PsbResult second =
        run_psb(c, fixed_problem(inst, std::vector<bool>(static_cast<size_t>(N), false), {false, true}));

    SchemeResult out;
    out.scheme = SchemeId::TsStar;
    out.q_bits = c.q_bits;
    out.Rs_I = inst.ts_fraction * first.report.Rs_I;
    out.Rs_O = (1.0 - inst.ts_fraction) * second.report.Rs_O;
    out.min_secrecy = std::min(out.Rs_I, out.Rs_O);
    out.converged = first.converged && second.converged;
    out.outer_iters = first.outer_iters + second.outer_iters;
    out.coeffs = first.coeffs;
    out.beams = BeamformingSolution::from_vectors(first.beams.w_I, second.beams.w_O);
    out.rank_residual = {first.rank_residual[0], second.rank_residual[1]};
    out.wall_ms = elapsed_ms(start);
    return out;
}

SchemeResult run_cris(const PsbConfig &config, const SchemeInstance &inst)
{
    const int N = inst.cascades.N();
    if (N % 2 != 0)
        throw std::invalid_argument("run_cris: N must be even");
    const auto start = Clock::now();
    std::vector<bool> pattern(static_cast<size_t>(N), false);
    for (int n = 0; n < N / 2; ++n)
        pattern[static_cast<size_t>(n)] = true;
    PsbConfig c = config;
    c.coupled = false;
    const PsbResult r = run_psb(c, fixed_problem(inst, std::move(pattern), {true, true}));
    return from_psb(SchemeId::CRis, c, r, start);
}

StarCoefficients random_coupled_coefficients(int N, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    StarCoefficients c;
    c.beta_t = Eigen::VectorXd::Constant(N, 0.5);
    c.beta_r = Eigen::VectorXd::Constant(N, 0.5);
    c.theta_t.resize(N);
    c.theta_r.resize(N);
    for (int n = 0; n < N; ++n) {
        c.theta_t(n) = wrap_phase(phase(rng));
        c.theta_r(n) = wrap_phase(c.theta_t(n) + 0.5 * std::numbers::pi);
    }
    return c;
}

SchemeResult run_random_phase(const PsbConfig &config, const SchemeInstance &inst)
{
    const auto start = Clock::now();
    const StarCoefficients coeffs = random_coupled_coefficients(inst.cascades.N(), config.init_seed);
    const PsbProblem problem = PsbProblem::standard(inst.cascades, inst.P_max, inst.sigma2, true);
    const FixedCoefficientResult r = optimize_beamforming(problem, coeffs, config);

    SchemeResult out;
    out.scheme = SchemeId::RandomPhase;
    out.q_bits = 0;
    out.min_secrecy = r.report.min_secrecy;
    out.Rs_I = r.report.Rs_I;
    out.Rs_O = r.report.Rs_O;
    out.converged = true;
    out.coeffs = coeffs;
    out.beams = r.beams;
    out.rank_residual = r.rank_residual;
    out.wall_ms = elapsed_ms(start);
    return out;
}

SchemeResult run_scheme(SchemeId id, const PsbConfig &config, const SchemeInstance &inst, const SchemeResult *coupled)
{
    switch (id) {
    case SchemeId::CoupledStar:
        return run_coupled(config, inst);
    case SchemeId::IndependentStar:
        return run_independent(config, inst, coupled);
    case SchemeId::TsStar:
        return run_ts(config, inst);
    case SchemeId::CRis:
        return run_cris(config, inst);
    case SchemeId::RandomPhase:
        return run_random_phase(config, inst);
    }
    throw std::invalid_argument("run_scheme: unknown scheme");
}

}  // namespace starsec
