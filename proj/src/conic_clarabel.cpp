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

#include <cmath>
#include <cstdint>

extern "C" {

struct ClarabelFfiSettings {
    std::uint32_t max_iter;
    double time_limit;
    double tol_gap_abs;
    double tol_gap_rel;
    double tol_feas;
    double tol_infeas_abs;
    double tol_infeas_rel;
    std::uint8_t verbose;
};

struct ClarabelFfiInfo {
    std::uint32_t status;
    std::uint32_t iterations;
    double obj_val;
    double obj_val_dual;
    double r_prim;
    double r_dual;
    double solve_time;
};

int clarabel_ffi_solve(std::size_t n, std::size_t m, const std::size_t *a_colptr, const std::size_t *a_rowval,
                       const double *a_nzval, const double *b, const double *q, const std::uint8_t *cone_codes,
                       const std::size_t *cone_dims, std::size_t ncones, const ClarabelFfiSettings *settings,
                       double *x_out, ClarabelFfiInfo *info_out);
}

namespace starsec::conic {

namespace {

SolveStatus map_status(std::uint32_t code)
{
    switch (code) {
    case 1:
        return SolveStatus::Optimal;
    case 4:
        return SolveStatus::NearOptimal;
    case 2:
    case 5:
        return SolveStatus::Infeasible;
    case 3:
    case 6:
        return SolveStatus::Unbounded;
    default:
        return SolveStatus::IterationLimit;
    }
}

std::uint8_t cone_code(ConeKind k)
{
    switch (k) {
    case ConeKind::Zero:
        return 0;
    case ConeKind::NonNegative:
        return 1;
    case ConeKind::SecondOrder:
        return 2;
    case ConeKind::Psd:
        return 3;
    case ConeKind::Exponential:
        return 4;
    }
    return 255;
}

}  // namespace

ClarabelSolver::ClarabelSolver(SolverSettings settings) : settings_(settings) {}

SolverSettings ClarabelSolver::default_settings()
{
    return SolverSettings{};
}

Solution ClarabelSolver::solve(const Program &program) const
{
    auto lp = detail::lower(program, detail::SvecOrder::UpperColumnMajor);
    Solution out;
    if (detail::solve_degenerate(program, lp, out))
        return out;

    std::vector<std::size_t> colptr(lp.colptr.begin(), lp.colptr.end());
    std::vector<std::size_t> rowidx(lp.rowidx.begin(), lp.rowidx.end());
    std::vector<std::uint8_t> codes;
    std::vector<std::size_t> dims;
    for (const auto &blk : lp.cones) {
        codes.push_back(cone_code(blk.kind));
        dims.push_back(static_cast<std::size_t>(blk.kind == ConeKind::Exponential ? 0 : blk.dim));
    }

    ClarabelFfiSettings st{};
    st.max_iter = static_cast<std::uint32_t>(settings_.max_iters);
    st.time_limit = settings_.time_limit_secs;
    st.tol_gap_abs = settings_.eps_abs;
    st.tol_gap_rel = settings_.eps_rel;
    st.tol_feas = settings_.eps_abs;
    st.tol_infeas_abs = settings_.eps_infeas;
    st.tol_infeas_rel = settings_.eps_infeas;
    st.verbose = settings_.verbose ? 1 : 0;

    std::vector<double> x(static_cast<size_t>(lp.n), 0.0);
    ClarabelFfiInfo info{};
    const int rc = clarabel_ffi_solve(static_cast<std::size_t>(lp.n), static_cast<std::size_t>(lp.m), colptr.data(),
                                      rowidx.data(), lp.values.data(), lp.b.data(), lp.c.data(), codes.data(),
                                      dims.data(), codes.size(), &st, x.data(), &info);
    if (rc != 0)
        throw std::runtime_error("clarabel rejected the conic program (code " + std::to_string(rc) + ")");

    out.status = map_status(info.status);
    out.iterations = static_cast<int>(info.iterations);
    out.primal_residual = info.r_prim;
    out.dual_residual = info.r_dual;
    out.gap = std::abs(info.obj_val - info.obj_val_dual);
    out.x.assign(x.size(), 0.0);
    for (size_t j = 0; j < x.size(); ++j)
        out.x[j] = std::isfinite(x[j]) ? x[j] : 0.0;
    out.objective = program.objective().evaluate(out.x);
    return out;
}

std::unique_ptr<ConicSolver> make_solver(const std::string &name)
{
    std::string which = name;
    if (which.empty()) {
        const char *env = std::getenv("STARSEC_SOLVER");
        which = env ? env : "clarabel";
    }
    if (which == "clarabel")
        return std::make_unique<ClarabelSolver>();
    if (which == "scs")
        return std::make_unique<ScsSolver>();
    throw std::invalid_argument("unknown conic solver '" + which + "'");
}

Solution solve(const Program &program)
{
    static const auto solver = make_solver();
    return solver->solve(program);
}

}  // namespace starsec::conic
