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

#ifndef STARSEC_CONIC_HPP
#define STARSEC_CONIC_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace starsec::conic {

using VarIndex = int;

// Affine expression sum_i a_i x_i + c over the scalar variables of a Program.
// Terms are kept unmerged until normalize() is called; evaluation and
// lowering both tolerate duplicates.
class AffineExpr {
public:
    struct Term {
        VarIndex var;
        double coef;
    };

    AffineExpr() = default;
    AffineExpr(double constant) : constant_(constant) {}  // NOLINT: implicit by design of the DSL

    static AffineExpr variable(VarIndex var, double coef = 1.0);

    AffineExpr &operator+=(const AffineExpr &other);
    AffineExpr &operator-=(const AffineExpr &other);
    AffineExpr &operator*=(double s);

    friend AffineExpr operator+(AffineExpr a, const AffineExpr &b) { return a += b; }
    friend AffineExpr operator-(AffineExpr a, const AffineExpr &b) { return a -= b; }
    friend AffineExpr operator*(AffineExpr a, double s) { return a *= s; }
    friend AffineExpr operator*(double s, AffineExpr a) { return a *= s; }
    friend AffineExpr operator-(AffineExpr a) { return a *= -1.0; }

    void add_term(VarIndex var, double coef);

    const std::vector<Term> &terms() const { return terms_; }
    double constant() const { return constant_; }
    VarIndex max_var() const;

    // Merges duplicate variables and drops exact zeros.
    void normalize();

    double evaluate(std::span<const double> x) const;

private:
    std::vector<Term> terms_;
    double constant_ = 0.0;
};

// Complex Hermitian matrix variable stored through its free real parameters:
// the real part's upper triangle (with diagonal) and the imaginary part's
// strict upper triangle.  The PSD cone is imposed on the real embedding
// [[X_re, -X_im], [X_im, X_re]].
class HermitianVar {
public:
    HermitianVar() = default;

    int dim() const { return dim_; }

    AffineExpr re(int i, int j) const;
    AffineExpr im(int i, int j) const;

    // Re Tr(X C) for a complex coefficient matrix C (Hermitian part used).
    AffineExpr trace_product(const Eigen::MatrixXcd &C) const;
    AffineExpr trace() const;

    // Real coordinates of X as an Euclidean vector: ||X||_F^2 equals the sum
    // of squares of these expressions after the offset matrix is subtracted.
    std::vector<AffineExpr> frobenius_coordinates(const Eigen::MatrixXcd &offset) const;

    Eigen::MatrixXcd value(std::span<const double> x) const;

    VarIndex first_index() const { return first_; }
    int parameter_count() const { return dim_ * dim_; }

private:
    friend class Program;
    HermitianVar(VarIndex first, int dim) : first_(first), dim_(dim) {}

    VarIndex re_index(int i, int j) const;
    VarIndex im_index(int i, int j) const;

    VarIndex first_ = 0;
    int dim_ = 0;
};

enum class ConeKind { Zero, NonNegative, SecondOrder, Psd, Exponential };

// One cone membership constraint: the vector of affine rows lies in the cone.
// Psd rows hold the lower triangle of a symmetric matrix in column-major
// order without any off-diagonal scaling; SecondOrder rows are (t, x...) with
// ||x|| <= t; Exponential rows are (x, y, z) with y exp(x / y) <= z.
struct ConeConstraint {
    ConeKind kind;
    std::vector<AffineExpr> rows;
    int psd_dim = 0;
};

enum class Sense { Minimize, Maximize };

class Program {
public:
    VarIndex add_variable(std::string name = {});
    std::vector<VarIndex> add_variables(int count, const std::string &prefix = {});
    HermitianVar add_hermitian_psd(int dim);

    void add_equality(AffineExpr lhs, const AffineExpr &rhs = 0.0);
    void add_less_equal(AffineExpr lhs, const AffineExpr &rhs);
    void add_greater_equal(const AffineExpr &lhs, AffineExpr rhs) { add_less_equal(std::move(rhs), lhs); }
    void add_second_order(AffineExpr t, std::vector<AffineExpr> x);
    void add_exponential(AffineExpr x, AffineExpr y, AffineExpr z);
    // 2^x <= a, lowered to the exponential cone as exp(x ln 2) <= a.
    void add_pow2_leq_affine(const AffineExpr &x, const AffineExpr &a);
    // ||x||^2 <= r, lowered to ||(2x, r - 1)|| <= r + 1.
    void add_squared_norm_leq(std::vector<AffineExpr> x, const AffineExpr &r);
    // Symmetric matrix whose lower triangle (column-major) is given is PSD.
    void add_psd(int dim, std::vector<AffineExpr> lower);

    void set_objective(Sense sense, AffineExpr objective);
    void maximize(AffineExpr objective) { set_objective(Sense::Maximize, std::move(objective)); }
    void minimize(AffineExpr objective) { set_objective(Sense::Minimize, std::move(objective)); }

    int variable_count() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string> &variable_names() const { return names_; }
    const std::vector<ConeConstraint> &constraints() const { return constraints_; }
    Sense sense() const { return sense_; }
    const AffineExpr &objective() const { return objective_; }
    const std::vector<HermitianVar> &hermitian_vars() const { return hermitian_; }

    // Throws std::invalid_argument when an expression references an
    // unregistered variable or a cone block has the wrong arity.
    void validate() const;

    // Sparse conic text dump (CBF version 3) for cross-checking elsewhere.
    void write_cbf(std::ostream &os) const;

private:
    void check_expr(const AffineExpr &e) const;

    std::vector<std::string> names_;
    std::vector<ConeConstraint> constraints_;
    std::vector<HermitianVar> hermitian_;
    Sense sense_ = Sense::Minimize;
    AffineExpr objective_;
};

enum class SolveStatus { Optimal, NearOptimal, Infeasible, Unbounded, IterationLimit };

const char *to_string(SolveStatus s);

struct Solution {
    SolveStatus status = SolveStatus::IterationLimit;
    std::vector<double> x;
    double objective = 0.0;  // in the program's own sense, constant included
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    int iterations = 0;

    bool usable() const { return status == SolveStatus::Optimal || status == SolveStatus::NearOptimal; }
    double value(VarIndex v) const { return x.at(static_cast<size_t>(v)); }
    double value(const AffineExpr &e) const { return e.evaluate(x); }
    Eigen::MatrixXcd value(const HermitianVar &h) const { return h.value(x); }
};

struct SolverSettings {
    double eps_abs = 1e-8;
    double eps_rel = 1e-8;
    double eps_infeas = 1e-9;
    int max_iters = 200;
    double time_limit_secs = 0.0;  // 0 = none
    bool verbose = false;

    // Applies STARSEC_SOLVER_EPS (overrides eps_abs and eps_rel) and
    // STARSEC_SOLVER_MAX_ITERS when set.
    static SolverSettings from_environment(SolverSettings base);
};

class ConicSolver {
public:
    virtual ~ConicSolver() = default;
    virtual std::string name() const = 0;
    virtual Solution solve(const Program &program) const = 0;
};

// Interior-point conic solver (Clarabel).  Default backend.
class ClarabelSolver final : public ConicSolver {
public:
    explicit ClarabelSolver(SolverSettings settings = SolverSettings::from_environment(default_settings()));

    // Tolerances 1e-8 (feasibility and duality gap), 200 iterations.
    static SolverSettings default_settings();

    std::string name() const override { return "clarabel"; }
    Solution solve(const Program &program) const override;

    const SolverSettings &settings() const { return settings_; }

private:
    SolverSettings settings_;
};

// Splitting conic solver (SCS) with the direct linear-system backend.
// Much slower to reach tight residuals; kept for cross-checking.
class ScsSolver final : public ConicSolver {
public:
    explicit ScsSolver(SolverSettings settings = SolverSettings::from_environment(default_settings()));

    static SolverSettings default_settings();

    std::string name() const override { return "scs"; }
    Solution solve(const Program &program) const override;

    const SolverSettings &settings() const { return settings_; }

private:
    SolverSettings settings_;
};

// "clarabel" or "scs"; empty selects STARSEC_SOLVER, defaulting to clarabel.
std::unique_ptr<ConicSolver> make_solver(const std::string &name = {});

// Convenience entry point using the default backend.
Solution solve(const Program &program);

}  // namespace starsec::conic

#endif  // STARSEC_CONIC_HPP
