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

#include <cmath>
#include <numbers>

namespace starsec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long nearest_index(double theta, long levels)
{
    const double step = kTwoPi / static_cast<double>(levels);
    long k = static_cast<long>(std::floor(wrap_phase(theta) / step + 0.5));
    return ((k % levels) + levels) % levels;
}

double grid_phase(long k, long levels)
{
    return kTwoPi * static_cast<double>(k) / static_cast<double>(levels);
}

}  // namespace

StarCoefficients quantize_coupled(const StarCoefficients &coeffs, int q, bool coupled)
{
    if (q < 1 || q > 30)
        throw std::invalid_argument("quantize_coupled: bits must be in [1, 30]");
    if (coupled && q == 1)
        throw CouplingUnrepresentable();
    const long levels = 1L << q;
    StarCoefficients out = coeffs;
    for (int n = 0; n < coeffs.size(); ++n) {
        const long kt = nearest_index(coeffs.theta_t(n), levels);
        out.theta_t(n) = grid_phase(kt, levels);
        if (coupled) {
            const double d = wrap_phase(coeffs.theta_r(n) - coeffs.theta_t(n));
            const bool quarter = circular_distance(d, 0.5 * std::numbers::pi) <=
                                 circular_distance(d, 1.5 * std::numbers::pi);
            const long offset = (quarter ? 1 : 3) * (levels / 4);
            out.theta_r(n) = grid_phase((kt + offset) % levels, levels);
        } else {
            out.theta_r(n) = grid_phase(nearest_index(coeffs.theta_r(n), levels), levels);
        }
    }
    return out;
}

}  // namespace starsec
