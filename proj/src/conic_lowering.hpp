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

// Internal: lowering of a Program to the standard form shared by the
// backends,  min c'x  s.t.  A x + s = b,  s in K.

#ifndef STARSEC_CONIC_LOWERING_HPP
#define STARSEC_CONIC_LOWERING_HPP

#include "starsec/conic.hpp"

#include <vector>

namespace starsec::conic::detail {

enum class SvecOrder { LowerColumnMajor, UpperColumnMajor };

struct ConeBlock {
    ConeKind kind;
    int dim;  // rows for Zero/NonNegative/SecondOrder, matrix order for Psd, 3 for Exponential
};

struct LoweredProgram {
    int n = 0;
    int m = 0;
    std::vector<int> colptr;
    std::vector<int> rowidx;
    std::vector<double> values;
    std::vector<double> b;
    std::vector<double> c;  // minimisation form
    std::vector<ConeBlock> cones;
};

// Rows are grouped as zero, nonnegative, second-order, PSD, exponential.
// PSD off-diagonal rows carry the sqrt(2) svec scaling.
LoweredProgram lower(const Program &program, SvecOrder order);

// Handles programs with no variables or no constraints, which the backends
// reject.  Returns true when `out` was filled.
bool solve_degenerate(const Program &program, const LoweredProgram &lp, Solution &out);

}  // namespace starsec::conic::detail

#endif  // STARSEC_CONIC_LOWERING_HPP
