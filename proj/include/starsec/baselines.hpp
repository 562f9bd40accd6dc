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

#ifndef STARSEC_BASELINES_HPP
#define STARSEC_BASELINES_HPP

#include "starsec/psb.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace starsec {

enum class SchemeId { CoupledStar, IndependentStar, TsStar, CRis, RandomPhase };

const std::array<SchemeId, 5> &all_schemes();
const char *to_string(SchemeId id);
// Throws std::invalid_argument on an unknown name.
SchemeId scheme_from_string(const std::string &name);

// One scheme's outcome on one channel realization, scored by secrecy_report.
struct SchemeResult {
    SchemeId scheme = SchemeId::CoupledStar;
    std::uint64_t seed = 0;
    double P_max_dBm = 0.0;
    int q_bits = 0;
    double min_secrecy = 0.0;
    double Rs_I = 0.0;
    double Rs_O = 0.0;
    bool converged = false;
    int outer_iters = 0;
    double wall_ms = 0.0;
    StarCoefficients coeffs;      // TS: the transmission phase's coefficients
    BeamformingSolution beams;    // TS: w_I from phase one, w_O from phase two
    std::array<double, 2> rank_residual{};
    std::string note;             // e.g. "coupling-unrepresentable"
};

// {scheme, seed, P_max_dBm, q_bits, min_secrecy, Rs_I, Rs_O, converged,
// outer_iters, wall_ms}; the seed is written as a string.
void to_json(nlohmann::json &j, const SchemeResult &r);

struct SchemeInstance {
    CascadeSet cascades;
    double P_max = 1.0;
    double sigma2 = 1.0;
    double ts_fraction = 0.5;  // share of time in the transmission phase
};

SchemeResult run_coupled(const PsbConfig &config, const SchemeInstance &inst);
// Phases free per side, energy split kept.  Starts from the coupled
// solution of the same instance (computed when `coupled` is null), which is
// feasible here, so the result never falls below it.
SchemeResult run_independent(const PsbConfig &config, const SchemeInstance &inst,
                             const SchemeResult *coupled = nullptr);
// Transmission-only phase serving IU, then reflection-only phase serving OU,
// each a single-user secrecy problem; rates weighted by the time shares.
SchemeResult run_ts(const PsbConfig &config, const SchemeInstance &inst);
// First N/2 elements transmit, the rest reflect.  Throws on odd N.
SchemeResult run_cris(const PsbConfig &config, const SchemeInstance &inst);
// theta_t uniform from config.init_seed, theta_r = theta_t + pi/2, beta = 1/2;
// beamforming only.
SchemeResult run_random_phase(const PsbConfig &config, const SchemeInstance &inst);
StarCoefficients random_coupled_coefficients(int N, std::uint64_t seed);

// `coupled` is forwarded to run_independent and ignored otherwise.
SchemeResult run_scheme(SchemeId id, const PsbConfig &config, const SchemeInstance &inst,
                        const SchemeResult *coupled = nullptr);

}  // namespace starsec

#endif  // STARSEC_BASELINES_HPP
