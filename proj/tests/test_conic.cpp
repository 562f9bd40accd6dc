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

#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

using namespace starsec::conic;

namespace {

AffineExpr var(VarIndex v)
{
    return AffineExpr::variable(v);
}

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64 &rng)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = {g(rng), g(rng)};
    return 0.5 * (A + A.adjoint());
}

}  // namespace

TEST_CASE("affine expressions merge, scale and evaluate")
{
    AffineExpr e = 2.0 * var(0) + var(1) - var(0) + 3.0;
    e.normalize();
    REQUIRE(e.terms().size() == 2);
    CHECK(e.terms()[0].coef == 1.0);
    const std::vector<double> x{4.0, -1.0};
    CHECK(e.evaluate(x) == 6.0);
    AffineExpr z = var(0) - var(0);
    z.normalize();
    CHECK(z.terms().empty());
    CHECK(e.max_var() == 1);
}

TEST_CASE("empty program is optimal at zero")
{
    Program p;
    p.maximize(0.0);
    const Solution s = solve(p);
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.objective == 0.0);
}

TEST_CASE("linear program reaches its bound")
{
    Program p;
    const VarIndex x = p.add_variable("x");
    p.add_less_equal(var(x), 0.37);
    p.maximize(var(x));
    const Solution s = solve(p);
    REQUIRE(s.usable());
    CHECK(s.value(x) == doctest::Approx(0.37).epsilon(1e-7));
    CHECK(s.objective == doctest::Approx(s.value(p.objective())).epsilon(1e-12));
}

TEST_CASE("infeasible program is reported")
{
    Program p;
    const VarIndex x = p.add_variable();
    p.add_greater_equal(var(x), 1.0);
    p.add_less_equal(var(x), 0.0);
    p.minimize(var(x));
    CHECK(solve(p).status == SolveStatus::Infeasible);
}

TEST_CASE("exponential cone encodes powers of two")
{
    for (auto [x0, expected, tol] : {std::tuple{1.0, 2.0, 1e-6}, std::tuple{0.0, 1.0, 1e-6},
                                     std::tuple{3.3219, std::pow(2.0, 3.3219), 1e-3}}) {
        Program p;
        const VarIndex x = p.add_variable(), a = p.add_variable();
        p.add_equality(var(x), x0);
        p.add_pow2_leq_affine(var(x), var(a));
        p.minimize(var(a));
        const Solution s = solve(p);
        REQUIRE(s.usable());
        CHECK(std::abs(s.value(a) - expected) <= tol);
    }
    CHECK(std::abs(std::pow(2.0, 3.3219) - 10.0) < 1e-3);
}

TEST_CASE("squared-norm epigraph")
{
    Program p;
    const VarIndex x = p.add_variable(), y = p.add_variable(), r = p.add_variable();
    p.add_equality(var(x), 3.0);
    p.add_equality(var(y), -1.0);
    p.add_squared_norm_leq({var(x) - 1.0, var(y)}, var(r));
    p.minimize(var(r));
    const Solution s = solve(p);
    REQUIRE(s.usable());
    CHECK(s.value(r) == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("scalar Hermitian variable embeds as a 2x2 block with no imaginary part")
{
    Program p;
    const HermitianVar h = p.add_hermitian_psd(1);
    CHECK(h.parameter_count() == 1);
    CHECK(h.im(0, 0).terms().empty());
    REQUIRE(p.constraints().size() == 1);
    CHECK(p.constraints()[0].kind == ConeKind::Psd);
    CHECK(p.constraints()[0].psd_dim == 2);
}

TEST_CASE("pinned Hermitian matrix round-trips")
{
    Eigen::MatrixXcd target(2, 2);
    target << 1.0, std::complex<double>(0.3, -0.4), std::complex<double>(0.3, 0.4), 2.0;
    for (Eigen::MatrixXcd T : {Eigen::MatrixXcd(Eigen::Vector2cd(1.0, 2.0).asDiagonal()), target}) {
        Program p;
        const HermitianVar h = p.add_hermitian_psd(2);
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                p.add_equality(h.re(i, j), T(i, j).real());
                if (i != j)
                    p.add_equality(h.im(i, j), T(i, j).imag());
            }
        p.minimize(0.0);
        const Solution s = solve(p);
        REQUIRE(s.usable());
        const Eigen::MatrixXcd X = s.value(h);
        CHECK((X - T).norm() <= 1e-7);
        CHECK((X - X.adjoint()).norm() <= 1e-10);
    }
}

TEST_CASE("trace-constrained SDP attains the extreme eigenvalues")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXcd C = random_hermitian(3, rng);
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(C).eigenvalues();
        for (Sense sense : {Sense::Minimize, Sense::Maximize}) {
            Program p;
            const HermitianVar h = p.add_hermitian_psd(3);
            p.add_equality(h.trace(), 1.0);
            p.set_objective(sense, h.trace_product(C));
            const Solution s = solve(p);
            REQUIRE(s.usable());
            const double expected = sense == Sense::Minimize ? ev(0) : ev(2);
            CHECK(s.objective == doctest::Approx(expected).epsilon(1e-6));
            const Eigen::MatrixXcd X = s.value(h);
            CHECK((X - X.adjoint()).norm() <= 1e-10);
            CHECK((X * C).trace().real() == doctest::Approx(s.objective).epsilon(1e-6));
        }
    }
}

TEST_CASE("trace product matches the complex trace")
{
    std::mt19937_64 rng(4);
    const Eigen::MatrixXcd C = random_hermitian(3, rng);
    const Eigen::MatrixXcd X = random_hermitian(3, rng);
    Program p;
    const HermitianVar h = p.add_hermitian_psd(3);
    std::vector<double> x(static_cast<size_t>(p.variable_count()), 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            x[static_cast<size_t>(h.re(i, j).terms()[0].var)] = X(i, j).real();
            if (i != j)
                x[static_cast<size_t>(h.im(i, j).terms()[0].var)] = X(i, j).imag();
        }
    CHECK((h.value(x) - X).norm() <= 1e-15);
    CHECK(h.trace_product(C).evaluate(x) == doctest::Approx((X * C).trace().real()));
    double sq = 0.0;
    for (const auto &e : h.frobenius_coordinates(Eigen::MatrixXcd::Zero(3, 3)))
        sq += e.evaluate(x) * e.evaluate(x);
    CHECK(sq == doctest::Approx(X.squaredNorm()));
}

TEST_CASE("splitting backend agrees with the interior-point backend")
{
    std::mt19937_64 rng(5);
    const Eigen::MatrixXcd C = random_hermitian(3, rng);
    Program p;
    const HermitianVar h = p.add_hermitian_psd(3);
    const VarIndex a = p.add_variable();
    p.add_equality(h.trace(), 1.0);
    p.add_pow2_leq_affine(var(a), h.re(0, 0) + 1.0);
    p.maximize(h.trace_product(C) + 0.1 * var(a));
    const Solution x = ClarabelSolver().solve(p);
    const Solution y = ScsSolver().solve(p);
    REQUIRE(x.usable());
    REQUIRE(y.usable());
    CHECK(std::abs(x.objective - y.objective) <= 1e-5);
    CHECK(make_solver("scs")->name() == "scs");
    CHECK_THROWS_AS(make_solver("nope"), std::invalid_argument);
}

TEST_CASE("malformed programs are rejected")
{
    Program p;
    p.add_variable();
    p.maximize(var(3));
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    Program q;
    const VarIndex x = q.add_variable();
    q.add_less_equal(var(x), std::nan(""));
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    CHECK_THROWS_AS(q.add_hermitian_psd(0), std::invalid_argument);
}

TEST_CASE("CBF dump names every block")
{
    Program p;
    const HermitianVar h = p.add_hermitian_psd(2);
    const VarIndex a = p.add_variable();
    p.add_equality(h.trace(), 1.0);
    p.add_pow2_leq_affine(var(a), h.re(0, 0) + 1.0);
    p.add_second_order(var(a) + 2.0, {h.re(0, 1)});
    p.maximize(var(a));
    std::ostringstream os;
    p.write_cbf(os);
    const std::string s = os.str();
    CHECK(s.find("VER\n3") != std::string::npos);
    CHECK(s.find("EXP") != std::string::npos);
    CHECK(s.find("Q ") != std::string::npos);
    CHECK(s.find("PSDCON") != std::string::npos);
}

TEST_CASE("solver settings honour the environment")
{
    setenv("STARSEC_SOLVER_EPS", "1e-6", 1);
    setenv("STARSEC_SOLVER_MAX_ITERS", "77", 1);
    const SolverSettings s = SolverSettings::from_environment(ClarabelSolver::default_settings());
    unsetenv("STARSEC_SOLVER_EPS");
    unsetenv("STARSEC_SOLVER_MAX_ITERS");
    CHECK(s.eps_abs == 1e-6);
    CHECK(s.eps_rel == 1e-6);
    CHECK(s.max_iters == 77);
}
