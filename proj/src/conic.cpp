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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace starsec::conic {

// ---------------------------------------------------------------- AffineExpr

AffineExpr AffineExpr::variable(VarIndex var, double coef)
{
    AffineExpr e;
    e.terms_.push_back({var, coef});
    return e;
}

AffineExpr &AffineExpr::operator+=(const AffineExpr &other)
{
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    constant_ += other.constant_;
    return *this;
}

AffineExpr &AffineExpr::operator-=(const AffineExpr &other)
{
    terms_.reserve(terms_.size() + other.terms_.size());
    for (const auto &t : other.terms_)
        terms_.push_back({t.var, -t.coef});
    constant_ -= other.constant_;
    return *this;
}

AffineExpr &AffineExpr::operator*=(double s)
{
    for (auto &t : terms_)
        t.coef *= s;
    constant_ *= s;
    return *this;
}

void AffineExpr::add_term(VarIndex var, double coef)
{
    terms_.push_back({var, coef});
}

VarIndex AffineExpr::max_var() const
{
    VarIndex m = -1;
    for (const auto &t : terms_)
        m = std::max(m, t.var);
    return m;
}

void AffineExpr::normalize()
{
    std::sort(terms_.begin(), terms_.end(), [](const Term &a, const Term &b) { return a.var < b.var; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (const auto &t : terms_) {
        if (!merged.empty() && merged.back().var == t.var)
            merged.back().coef += t.coef;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const Term &t) { return t.coef == 0.0; });
    terms_ = std::move(merged);
}

double AffineExpr::evaluate(std::span<const double> x) const
{
    double v = constant_;
    for (const auto &t : terms_)
        v += t.coef * x[static_cast<size_t>(t.var)];
    return v;
}

// -------------------------------------------------------------- HermitianVar

VarIndex HermitianVar::re_index(int i, int j) const
{
    if (i > j)
        std::swap(i, j);
    return first_ + i * dim_ - i * (i - 1) / 2 + (j - i);
}

VarIndex HermitianVar::im_index(int i, int j) const
{
    // i < j required
    const int re_count = dim_ * (dim_ + 1) / 2;
    return first_ + re_count + i * (dim_ - 1) - i * (i - 1) / 2 + (j - i - 1);
}

AffineExpr HermitianVar::re(int i, int j) const
{
    return AffineExpr::variable(re_index(i, j));
}

AffineExpr HermitianVar::im(int i, int j) const
{
    if (i == j)
        return AffineExpr{};
    if (i < j)
        return AffineExpr::variable(im_index(i, j));
    return AffineExpr::variable(im_index(j, i), -1.0);
}

AffineExpr HermitianVar::trace_product(const Eigen::MatrixXcd &C) const
{
    if (C.rows() != dim_ || C.cols() != dim_)
        throw std::invalid_argument("trace_product: coefficient matrix has wrong shape");
    // Re Tr(XC) = sum_ij Xr(i,j) Re C(j,i) - Xi(i,j) Im C(j,i)
    AffineExpr e;
    for (int i = 0; i < dim_; ++i) {
        e.add_term(re_index(i, i), C(i, i).real());
        for (int j = i + 1; j < dim_; ++j) {
            e.add_term(re_index(i, j), C(j, i).real() + C(i, j).real());
            // Xi(i,j) = p, Xi(j,i) = -p
            e.add_term(im_index(i, j), -C(j, i).imag() + C(i, j).imag());
        }
    }
    e.normalize();
    return e;
}

AffineExpr HermitianVar::trace() const
{
    AffineExpr e;
    for (int i = 0; i < dim_; ++i)
        e.add_term(re_index(i, i), 1.0);
    return e;
}

std::vector<AffineExpr> HermitianVar::frobenius_coordinates(const Eigen::MatrixXcd &offset) const
{
    if (offset.rows() != dim_ || offset.cols() != dim_)
        throw std::invalid_argument("frobenius_coordinates: offset has wrong shape");
    const Eigen::MatrixXcd h = 0.5 * (offset + offset.adjoint());
    const double s2 = std::numbers::sqrt2;
    std::vector<AffineExpr> out;
    out.reserve(static_cast<size_t>(dim_ * dim_));
    for (int i = 0; i < dim_; ++i)
        out.push_back(re(i, i) - h(i, i).real());
    for (int i = 0; i < dim_; ++i) {
        for (int j = i + 1; j < dim_; ++j) {
            out.push_back(s2 * (re(i, j) - h(i, j).real()));
            out.push_back(s2 * (im(i, j) - h(i, j).imag()));
        }
    }
    return out;
}

Eigen::MatrixXcd HermitianVar::value(std::span<const double> x) const
{
    Eigen::MatrixXcd X(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        X(i, i) = {x[static_cast<size_t>(re_index(i, i))], 0.0};
        for (int j = i + 1; j < dim_; ++j) {
            const double r = x[static_cast<size_t>(re_index(i, j))];
            const double p = x[static_cast<size_t>(im_index(i, j))];
            X(i, j) = {r, p};
            X(j, i) = {r, -p};
        }
    }
    return X;
}

// ------------------------------------------------------------------- Program

VarIndex Program::add_variable(std::string name)
{
    const auto idx = static_cast<VarIndex>(names_.size());
    if (name.empty())
        name = "x" + std::to_string(idx);
    names_.push_back(std::move(name));
    return idx;
}

std::vector<VarIndex> Program::add_variables(int count, const std::string &prefix)
{
    std::vector<VarIndex> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(add_variable(prefix.empty() ? std::string{} : prefix + std::to_string(i)));
    return out;
}

HermitianVar Program::add_hermitian_psd(int dim)
{
    if (dim < 1)
        throw std::invalid_argument("add_hermitian_psd: dimension must be at least 1");
    const auto hid = std::to_string(hermitian_.size());
    const VarIndex first = variable_count();
    for (int k = 0; k < dim * dim; ++k)
        add_variable("H" + hid + "_" + std::to_string(k));
    HermitianVar h(first, dim);
    hermitian_.push_back(h);

    // lower triangle of [[Xr, -Xi], [Xi, Xr]], column-major
    const int n2 = 2 * dim;
    std::vector<AffineExpr> lower;
    lower.reserve(static_cast<size_t>(n2 * (n2 + 1) / 2));
    for (int c = 0; c < n2; ++c) {
        for (int r = c; r < n2; ++r) {
            if (r < dim)
                lower.push_back(h.re(r, c));
            else if (c < dim)
                lower.push_back(h.im(r - dim, c));
            else
                lower.push_back(h.re(r - dim, c - dim));
        }
    }
    add_psd(n2, std::move(lower));
    return h;
}

void Program::add_equality(AffineExpr lhs, const AffineExpr &rhs)
{
    lhs -= rhs;
    lhs.normalize();
    constraints_.push_back({ConeKind::Zero, {std::move(lhs)}, 0});
}

void Program::add_less_equal(AffineExpr lhs, const AffineExpr &rhs)
{
    AffineExpr slack = rhs - lhs;
    slack.normalize();
    constraints_.push_back({ConeKind::NonNegative, {std::move(slack)}, 0});
}

void Program::add_second_order(AffineExpr t, std::vector<AffineExpr> x)
{
    std::vector<AffineExpr> rows;
    rows.reserve(x.size() + 1);
    t.normalize();
    rows.push_back(std::move(t));
    for (auto &e : x) {
        e.normalize();
        rows.push_back(std::move(e));
    }
    constraints_.push_back({ConeKind::SecondOrder, std::move(rows), 0});
}

void Program::add_exponential(AffineExpr x, AffineExpr y, AffineExpr z)
{
    x.normalize();
    y.normalize();
    z.normalize();
    constraints_.push_back({ConeKind::Exponential, {std::move(x), std::move(y), std::move(z)}, 0});
}

void Program::add_pow2_leq_affine(const AffineExpr &x, const AffineExpr &a)
{
    add_exponential(x * std::numbers::ln2, AffineExpr(1.0), a);
}

void Program::add_squared_norm_leq(std::vector<AffineExpr> x, const AffineExpr &r)
{
    for (auto &e : x)
        e *= 2.0;
    x.push_back(r - 1.0);
    add_second_order(r + 1.0, std::move(x));
}

void Program::add_psd(int dim, std::vector<AffineExpr> lower)
{
    if (dim < 1 || static_cast<int>(lower.size()) != dim * (dim + 1) / 2)
        throw std::invalid_argument("add_psd: lower triangle has wrong size");
    for (auto &e : lower)
        e.normalize();
    constraints_.push_back({ConeKind::Psd, std::move(lower), dim});
}

void Program::set_objective(Sense sense, AffineExpr objective)
{
    objective.normalize();
    sense_ = sense;
    objective_ = std::move(objective);
}

void Program::check_expr(const AffineExpr &e) const
{
    for (const auto &t : e.terms()) {
        if (t.var < 0 || t.var >= variable_count())
            throw std::invalid_argument("conic program references unregistered variable " + std::to_string(t.var));
        if (!std::isfinite(t.coef))
            throw std::invalid_argument("conic program has a non-finite coefficient");
    }
    if (!std::isfinite(e.constant()))
        throw std::invalid_argument("conic program has a non-finite constant");
}

void Program::validate() const
{
    check_expr(objective_);
    for (const auto &c : constraints_) {
        for (const auto &row : c.rows)
            check_expr(row);
        switch (c.kind) {
        case ConeKind::Zero:
        case ConeKind::NonNegative:
            if (c.rows.size() != 1)
                throw std::invalid_argument("linear constraint must have one row");
            break;
        case ConeKind::SecondOrder:
            if (c.rows.empty())
                throw std::invalid_argument("second-order cone needs at least one row");
            break;
        case ConeKind::Exponential:
            if (c.rows.size() != 3)
                throw std::invalid_argument("exponential cone needs exactly three rows");
            break;
        case ConeKind::Psd:
            if (static_cast<int>(c.rows.size()) != c.psd_dim * (c.psd_dim + 1) / 2)
                throw std::invalid_argument("PSD block has wrong number of rows");
            break;
        }
    }
}

// ---------------------------------------------------------------- settings

const char *to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Optimal:
        return "optimal";
    case SolveStatus::NearOptimal:
        return "near-optimal";
    case SolveStatus::Infeasible:
        return "infeasible";
    case SolveStatus::Unbounded:
        return "unbounded";
    case SolveStatus::IterationLimit:
        return "iteration-limit";
    }
    return "unknown";
}

SolverSettings SolverSettings::from_environment(SolverSettings base)
{
    if (const char *eps = std::getenv("STARSEC_SOLVER_EPS")) {
        char *end = nullptr;
        const double v = std::strtod(eps, &end);
        if (end != eps && v > 0.0) {
            base.eps_abs = v;
            base.eps_rel = v;
        }
    }
    if (const char *it = std::getenv("STARSEC_SOLVER_MAX_ITERS")) {
        const long v = std::strtol(it, nullptr, 10);
        if (v > 0)
            base.max_iters = static_cast<int>(v);
    }
    return base;
}

}  // namespace starsec::conic
