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

// Minimal C ABI over Clarabel, used by the C++ conic layer.
//
// Problem form (Clarabel standard form):
//     minimize    q'x
//     subject to  A x + s = b,  s in K
// with A in compressed sparse column form and K a product of cones listed in
// order. Cone codes: 0 zero, 1 nonnegative, 2 second-order, 3 PSD triangle
// (dimension = matrix order; rows are the scaled upper triangle in
// column-major order), 4 exponential (one triple per entry).

use clarabel::algebra::CscMatrix;
use clarabel::solver::*;
use std::slice;

#[repr(C)]
pub struct ClarabelFfiSettings {
    pub max_iter: u32,
    pub time_limit: f64,
    pub tol_gap_abs: f64,
    pub tol_gap_rel: f64,
    pub tol_feas: f64,
    pub tol_infeas_abs: f64,
    pub tol_infeas_rel: f64,
    pub verbose: u8,
}

#[repr(C)]
pub struct ClarabelFfiInfo {
    pub status: u32,
    pub iterations: u32,
    pub obj_val: f64,
    pub obj_val_dual: f64,
    pub r_prim: f64,
    pub r_dual: f64,
    pub solve_time: f64,
}

/// Returns 0 when the solver ran (see `info.status`), nonzero when the input
/// was rejected before solving.
///
/// # Safety
/// All pointers must reference arrays of the documented lengths.
#[no_mangle]
pub unsafe extern "C" fn clarabel_ffi_solve(
    n: usize,
    m: usize,
    a_colptr: *const usize,
    a_rowval: *const usize,
    a_nzval: *const f64,
    b: *const f64,
    q: *const f64,
    cone_codes: *const u8,
    cone_dims: *const usize,
    ncones: usize,
    settings: *const ClarabelFfiSettings,
    x_out: *mut f64,
    info_out: *mut ClarabelFfiInfo,
) -> i32 {
    let colptr = slice::from_raw_parts(a_colptr, n + 1).to_vec();
    let nnz = colptr[n];
    let rowval = slice::from_raw_parts(a_rowval, nnz).to_vec();
    let nzval = slice::from_raw_parts(a_nzval, nnz).to_vec();
    let a = CscMatrix::new(m, n, colptr, rowval, nzval);
    let bvec = slice::from_raw_parts(b, m).to_vec();
    let qvec = slice::from_raw_parts(q, n).to_vec();
    let p = CscMatrix::<f64>::zeros((n, n));

    let codes = slice::from_raw_parts(cone_codes, ncones);
    let dims = slice::from_raw_parts(cone_dims, ncones);
    let mut cones: Vec<SupportedConeT<f64>> = Vec::with_capacity(ncones);
    for (c, d) in codes.iter().zip(dims.iter()) {
        let cone = match c {
            0 => ZeroConeT(*d),
            1 => NonnegativeConeT(*d),
            2 => SecondOrderConeT(*d),
            3 => PSDTriangleConeT(*d),
            4 => ExponentialConeT(),
            _ => return 2,
        };
        cones.push(cone);
    }

    let s = &*settings;
    let mut st = DefaultSettings::<f64>::default();
    st.max_iter = s.max_iter;
    st.time_limit = if s.time_limit > 0.0 { s.time_limit } else { f64::INFINITY };
    st.tol_gap_abs = s.tol_gap_abs;
    st.tol_gap_rel = s.tol_gap_rel;
    st.tol_feas = s.tol_feas;
    st.tol_infeas_abs = s.tol_infeas_abs;
    st.tol_infeas_rel = s.tol_infeas_rel;
    st.verbose = s.verbose != 0;
    st.max_threads = 1;

    let mut solver = match DefaultSolver::new(&p, &qvec, &a, &bvec, &cones, st) {
        Ok(sv) => sv,
        Err(_) => return 1,
    };
    solver.solve();
    let sol = &solver.solution;
    let out = slice::from_raw_parts_mut(x_out, n);
    out.copy_from_slice(&sol.x);

    let info = &mut *info_out;
    info.status = match sol.status {
        SolverStatus::Unsolved => 0,
        SolverStatus::Solved => 1,
        SolverStatus::PrimalInfeasible => 2,
        SolverStatus::DualInfeasible => 3,
        SolverStatus::AlmostSolved => 4,
        SolverStatus::AlmostPrimalInfeasible => 5,
        SolverStatus::AlmostDualInfeasible => 6,
        SolverStatus::MaxIterations => 7,
        SolverStatus::MaxTime => 8,
        SolverStatus::NumericalError => 9,
        SolverStatus::InsufficientProgress => 10,
        _ => 11,
    };
    info.iterations = sol.iterations;
    info.obj_val = sol.obj_val;
    info.obj_val_dual = sol.obj_val_dual;
    info.r_prim = sol.r_prim;
    info.r_dual = sol.r_dual;
    info.solve_time = sol.solve_time;
    0
}
