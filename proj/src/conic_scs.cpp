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

#include "conic_lowering.hpp"

#include "scs.h"

#include <cmath>

namespace starsec::conic {

namespace {

SolveStatus map_status(scs_int status)
{
    switch (status) {
    case SCS_SOLVED:
        return SolveStatus::Optimal;
    case SCS_SOLVED_INACCURATE:
        return SolveStatus::NearOptimal;
    case SCS_INFEASIBLE:
    case SCS_INFEASIBLE_INACCURATE:
        return SolveStatus::Infeasible;
    case SCS_UNBOUNDED:
    case SCS_UNBOUNDED_INACCURATE:
        return SolveStatus::Unbounded;
    default:
        return SolveStatus::IterationLimit;
    }
}

}  // namespace

ScsSolver::ScsSolver(SolverSettings settings) : settings_(settings) {}

SolverSettings ScsSolver::default_settings()
{
    SolverSettings s;
    s.eps_abs = 1e-8;
    s.eps_rel = 1e-8;
    s.eps_infeas = 1e-9;
    // A splitting method takes far more (much cheaper) iterations than an
    // interior-point method to reach comparable residuals.
    s.max_iters = 50000;
    return s;
}

Solution ScsSolver::solve(const Program &program) const
{
    auto lp = detail::lower(program, detail::SvecOrder::LowerColumnMajor);
    Solution out;
    if (detail::solve_degenerate(program, lp, out))
        return out;

    ScsCone cone{};
    std::vector<scs_int> soc_sizes;
    std::vector<scs_int> psd_sizes;
    for (const auto &blk : lp.cones) {
        switch (blk.kind) {
        case ConeKind::Zero:
            cone.z += blk.dim;
            break;
        case ConeKind::NonNegative:
            cone.l += blk.dim;
            break;
        case ConeKind::SecondOrder:
            soc_sizes.push_back(blk.dim);
            break;
        case ConeKind::Psd:
            psd_sizes.push_back(blk.dim);
            break;
        case ConeKind::Exponential:
            cone.ep += 1;
            break;
        }
    }
    cone.q = soc_sizes.empty() ? nullptr : soc_sizes.data();
    cone.qsize = static_cast<scs_int>(soc_sizes.size());
    cone.s = psd_sizes.empty() ? nullptr : psd_sizes.data();
    cone.ssize = static_cast<scs_int>(psd_sizes.size());

    ScsMatrix A{lp.values.data(), lp.rowidx.data(), lp.colptr.data(), lp.m, lp.n};
    ScsData data{lp.m, lp.n, &A, nullptr, lp.b.data(), lp.c.data()};

    ScsSettings stgs;
    scs_set_default_settings(&stgs);
    stgs.eps_abs = settings_.eps_abs;
    stgs.eps_rel = settings_.eps_rel;
    stgs.eps_infeas = settings_.eps_infeas;
    stgs.max_iters = settings_.max_iters;
    stgs.time_limit_secs = settings_.time_limit_secs;
    stgs.verbose = settings_.verbose ? 1 : 0;

    std::vector<scs_float> xs(static_cast<size_t>(lp.n), 0.0);
    std::vector<scs_float> ys(static_cast<size_t>(lp.m), 0.0);
    std::vector<scs_float> ss(static_cast<size_t>(lp.m), 0.0);
    ScsSolution sol{xs.data(), ys.data(), ss.data()};
    ScsInfo info{};
    const scs_int rc = scs(&data, &cone, &stgs, &sol, &info);

    out.status = map_status(rc);
    out.iterations = static_cast<int>(info.iter);
    out.primal_residual = info.res_pri;
    out.dual_residual = info.res_dual;
    out.gap = info.gap;
    out.x.assign(static_cast<size_t>(lp.n), 0.0);
    for (size_t j = 0; j < xs.size(); ++j)
        out.x[j] = std::isfinite(xs[j]) ? xs[j] : 0.0;
    out.objective = program.objective().evaluate(out.x);
    return out;
}

}  // namespace starsec::conic
