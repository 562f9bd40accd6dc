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

#include <array>
#include <cmath>
#include <numbers>

namespace starsec::conic::detail {

namespace {

struct Triplet {
    int row;
    int col;
    double val;
};

constexpr std::array<ConeKind, 5> kOrder = {ConeKind::Zero, ConeKind::NonNegative, ConeKind::SecondOrder,
                                            ConeKind::Psd, ConeKind::Exponential};

// Index into the lower-triangle column-major row list of entry (r, c), r >= c.
size_t lower_index(int r, int c, int dim)
{
    return static_cast<size_t>(c * dim - c * (c - 1) / 2 + (r - c));
}

}  // namespace

LoweredProgram lower(const Program &program, SvecOrder order)
{
    program.validate();

    LoweredProgram lp;
    lp.n = program.variable_count();
    const double sign = program.sense() == Sense::Maximize ? -1.0 : 1.0;
    lp.c.assign(static_cast<size_t>(lp.n), 0.0);
    for (const auto &t : program.objective().terms())
        lp.c[static_cast<size_t>(t.var)] += sign * t.coef;

    std::vector<Triplet> trip;
    auto emit = [&](const AffineExpr &row, double scale) {
        const int r = static_cast<int>(lp.b.size());
        for (const auto &t : row.terms())
            trip.push_back({r, t.var, -scale * t.coef});
        lp.b.push_back(scale * row.constant());
    };

    for (ConeKind kind : kOrder) {
        int linear_rows = 0;
        for (const auto &con : program.constraints()) {
            if (con.kind != kind)
                continue;
            switch (kind) {
            case ConeKind::Zero:
            case ConeKind::NonNegative:
                emit(con.rows[0], 1.0);
                ++linear_rows;
                break;
            case ConeKind::SecondOrder:
                for (const auto &r : con.rows)
                    emit(r, 1.0);
                lp.cones.push_back({kind, static_cast<int>(con.rows.size())});
                break;
            case ConeKind::Exponential:
                for (const auto &r : con.rows)
                    emit(r, 1.0);
                lp.cones.push_back({kind, 3});
                break;
            case ConeKind::Psd: {
                const int d = con.psd_dim;
                if (order == SvecOrder::LowerColumnMajor) {
                    for (int c = 0; c < d; ++c)
                        for (int r = c; r < d; ++r)
                            emit(con.rows[lower_index(r, c, d)], r == c ? 1.0 : std::numbers::sqrt2);
                } else {
                    // upper (i, j), i <= j, column-major == lower (j, i)
                    for (int j = 0; j < d; ++j)
                        for (int i = 0; i <= j; ++i)
                            emit(con.rows[lower_index(j, i, d)], i == j ? 1.0 : std::numbers::sqrt2);
                }
                lp.cones.push_back({kind, d});
                break;
            }
            }
        }
        if (linear_rows > 0)
            lp.cones.push_back({kind, linear_rows});
    }
    lp.m = static_cast<int>(lp.b.size());

    // CSC assembly with duplicate (row, col) pairs merged; rows within a
    // column come out sorted because triplets were emitted row by row.
    std::vector<int> count(static_cast<size_t>(lp.n) + 1, 0);
    for (const auto &t : trip)
        ++count[static_cast<size_t>(t.col) + 1];
    for (int j = 0; j < lp.n; ++j)
        count[static_cast<size_t>(j) + 1] += count[static_cast<size_t>(j)];
    std::vector<int> rows(trip.size());
    std::vector<double> vals(trip.size());
    {
        std::vector<int> next(count.begin(), count.end() - 1);
        for (const auto &t : trip) {
            const auto pos = static_cast<size_t>(next[static_cast<size_t>(t.col)]++);
            rows[pos] = t.row;
            vals[pos] = t.val;
        }
    }
    lp.colptr.assign(static_cast<size_t>(lp.n) + 1, 0);
    for (int j = 0; j < lp.n; ++j) {
        const auto beg = static_cast<size_t>(count[static_cast<size_t>(j)]);
        const auto end = static_cast<size_t>(count[static_cast<size_t>(j) + 1]);
        lp.colptr[static_cast<size_t>(j)] = static_cast<int>(lp.rowidx.size());
        for (size_t p = beg; p < end; ++p) {
            if (lp.rowidx.size() > static_cast<size_t>(lp.colptr[static_cast<size_t>(j)]) &&
                lp.rowidx.back() == rows[p]) {
                lp.values.back() += vals[p];
            } else {
                lp.rowidx.push_back(rows[p]);
                lp.values.push_back(vals[p]);
            }
        }
    }
    lp.colptr[static_cast<size_t>(lp.n)] = static_cast<int>(lp.rowidx.size());
    return lp;
}

bool solve_degenerate(const Program &program, const LoweredProgram &lp, Solution &out)
{
    if (lp.n > 0 && lp.m > 0)
        return false;
    out.x.assign(static_cast<size_t>(lp.n), 0.0);
    if (lp.m == 0) {
        bool any_obj = false;
        for (double v : lp.c)
            any_obj = any_obj || v != 0.0;
        out.status = any_obj ? SolveStatus::Unbounded : SolveStatus::Optimal;
        out.objective = program.objective().constant();
        return true;
    }
    // No variables: every constraint is a constant vector.
    for (const auto &con : program.constraints()) {
        std::vector<double> v;
        for (const auto &r : con.rows)
            v.push_back(r.constant());
        bool ok = true;
        switch (con.kind) {
        case ConeKind::Zero:
            ok = v[0] == 0.0;
            break;
        case ConeKind::NonNegative:
            ok = v[0] >= 0.0;
            break;
        case ConeKind::SecondOrder: {
            double s = 0.0;
            for (size_t i = 1; i < v.size(); ++i)
                s += v[i] * v[i];
            ok = std::sqrt(s) <= v[0];
            break;
        }
        case ConeKind::Exponential:
            ok = (v[1] > 0.0 && v[1] * std::exp(v[0] / v[1]) <= v[2]) ||
                 (v[1] == 0.0 && v[0] <= 0.0 && v[2] >= 0.0);
            break;
        case ConeKind::Psd: {
            const int d = con.psd_dim;
            Eigen::MatrixXd S(d, d);
            size_t k = 0;
            for (int c = 0; c < d; ++c)
                for (int r = c; r < d; ++r, ++k)
                    S(r, c) = S(c, r) = v[k];
            ok = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues().minCoeff() >= 0.0;
            break;
        }
        }
        if (!ok) {
            out.status = SolveStatus::Infeasible;
            return true;
        }
    }
    out.status = SolveStatus::Optimal;
    out.objective = program.objective().constant();
    return true;
}

}  // namespace starsec::conic::detail
