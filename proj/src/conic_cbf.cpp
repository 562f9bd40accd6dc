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

#include "starsec/conic.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace starsec::conic {

// Conic Benchmark Format, version 3.  Scalar variables are free; scalar cone
// rows go to CON, matrix inequalities to PSDCON with HCOORD/DCOORD entries.
// CBF orders the exponential cone as (z, y, x) with z >= y exp(x / y).
void Program::write_cbf(std::ostream &os) const
{
    validate();
    std::ostringstream acoord, bcoord, hcoord, dcoord;
    acoord << std::setprecision(17);
    bcoord << std::setprecision(17);
    hcoord << std::setprecision(17);
    dcoord << std::setprecision(17);
    int a_nnz = 0, b_nnz = 0, h_nnz = 0, d_nnz = 0;

    std::vector<std::pair<std::string, int>> con_blocks;
    std::vector<int> psd_dims;
    int row = 0;

    auto emit_row = [&](const AffineExpr &e) {
        for (const auto &t : e.terms()) {
            acoord << row << ' ' << t.var << ' ' << t.coef << '\n';
            ++a_nnz;
        }
        if (e.constant() != 0.0) {
            bcoord << row << ' ' << e.constant() << '\n';
            ++b_nnz;
        }
        ++row;
    };

    for (const auto &c : constraints_) {
        switch (c.kind) {
        case ConeKind::Zero:
            emit_row(c.rows[0]);
            con_blocks.emplace_back("L=", 1);
            break;
        case ConeKind::NonNegative:
            emit_row(c.rows[0]);
            con_blocks.emplace_back("L+", 1);
            break;
        case ConeKind::SecondOrder:
            for (const auto &r : c.rows)
                emit_row(r);
            con_blocks.emplace_back("Q", static_cast<int>(c.rows.size()));
            break;
        case ConeKind::Exponential:
            emit_row(c.rows[2]);
            emit_row(c.rows[1]);
            emit_row(c.rows[0]);
            con_blocks.emplace_back("EXP", 3);
            break;
        case ConeKind::Psd: {
            const int id = static_cast<int>(psd_dims.size());
            psd_dims.push_back(c.psd_dim);
            size_t k = 0;
            for (int col = 0; col < c.psd_dim; ++col) {
                for (int r = col; r < c.psd_dim; ++r, ++k) {
                    const auto &e = c.rows[k];
                    for (const auto &t : e.terms()) {
                        hcoord << id << ' ' << t.var << ' ' << r << ' ' << col << ' ' << t.coef << '\n';
                        ++h_nnz;
                    }
                    if (e.constant() != 0.0) {
                        dcoord << id << ' ' << r << ' ' << col << ' ' << e.constant() << '\n';
                        ++d_nnz;
                    }
                }
            }
            break;
        }
        }
    }

    os << std::setprecision(17);
    os << "VER\n3\n\n";
    os << "OBJSENSE\n" << (sense_ == Sense::Maximize ? "MAX" : "MIN") << "\n\n";
    os << "VAR\n" << variable_count() << " 1\nF " << variable_count() << "\n\n";
    if (!psd_dims.empty()) {
        os << "PSDCON\n" << psd_dims.size() << '\n';
        for (int d : psd_dims)
            os << d << '\n';
        os << '\n';
    }
    if (row > 0) {
        // Merge adjacent blocks of the same linear kind.
        std::vector<std::pair<std::string, int>> merged;
        for (const auto &blk : con_blocks) {
            if (!merged.empty() && merged.back().first == blk.first && (blk.first == "L=" || blk.first == "L+"))
                merged.back().second += blk.second;
            else
                merged.push_back(blk);
        }
        os << "CON\n" << row << ' ' << merged.size() << '\n';
        for (const auto &[kind, len] : merged)
            os << kind << ' ' << len << '\n';
        os << '\n';
    }
    int obj_nnz = static_cast<int>(objective_.terms().size());
    if (obj_nnz > 0) {
        os << "OBJACOORD\n" << obj_nnz << '\n';
        for (const auto &t : objective_.terms())
            os << t.var << ' ' << t.coef << '\n';
        os << '\n';
    }
    if (objective_.constant() != 0.0)
        os << "OBJBCOORD\n" << objective_.constant() << "\n\n";
    if (a_nnz > 0)
        os << "ACOORD\n" << a_nnz << '\n' << acoord.str() << '\n';
    if (b_nnz > 0)
        os << "BCOORD\n" << b_nnz << '\n' << bcoord.str() << '\n';
    if (h_nnz > 0)
        os << "HCOORD\n" << h_nnz << '\n' << hcoord.str() << '\n';
    if (d_nnz > 0)
        os << "DCOORD\n" << d_nnz << '\n' << dcoord.str() << '\n';
}

}  // namespace starsec::conic
