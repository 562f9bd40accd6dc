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

#include "starsec/experiment.hpp"

#include "doctest.h"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace starsec;

namespace {

ResultRow row(const std::string &scheme, double x, std::uint64_t seed, std::optional<double> v)
{
    ResultRow r;
    r.scheme = scheme;
    r.axis = std::to_string(static_cast<int>(x));
    r.axis_value = x;
    r.seed = seed;
    r.min_secrecy = v;
    r.converged = v.has_value();
    return r;
}

ExperimentSpec tiny(ExperimentKind kind)
{
    ExperimentSpec s = ExperimentSpec::desk(kind);
    s.dims = {{2, 4}};
    s.trials = 2;
    return s;
}

}  // namespace

TEST_CASE("experiment names and desk defaults")
{
    for (auto k : {ExperimentKind::Convergence, ExperimentKind::PowerSweep, ExperimentKind::BitsSweep,
                   ExperimentKind::OracleAudit})
        CHECK(experiment_from_string(to_string(k)) == k);
    CHECK(experiment_from_string("power-sweep") == ExperimentKind::PowerSweep);
    CHECK_THROWS(experiment_from_string("sweep"));
    const ExperimentSpec p = ExperimentSpec::desk(ExperimentKind::PowerSweep);
    CHECK(p.trials == 20);
    CHECK(p.dims.front() == std::pair{4, 8});
    CHECK(p.schemes.size() == 5);
    ExperimentSpec big = p;
    big.apply_full_scale();
    CHECK(big.dims.front() == std::pair{8, 20});
    CHECK(big.trials == 100);
    CHECK(p.seed(0) == 1);
    CHECK(p.seed(19) == 20);
}

TEST_CASE("spec validation rejects empty axes")
{
    ExperimentSpec s = ExperimentSpec::desk(ExperimentKind::PowerSweep);
    CHECK_NOTHROW(s.validate());
    s.trials = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = ExperimentSpec::desk(ExperimentKind::PowerSweep);
    s.P_max_dBm.clear();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = ExperimentSpec::desk(ExperimentKind::BitsSweep);
    s.q_bits = {0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = ExperimentSpec::desk(ExperimentKind::OracleAudit);
    s.dims = {{4, 8}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("spec JSON round trip keeps 64-bit seeds")
{
    ExperimentSpec s = ExperimentSpec::desk(ExperimentKind::BitsSweep);
    s.base_seed = 18446744073709551000ULL;
    s.q_bits = {2, 4};
    s.workers = 3;
    const nlohmann::json j = s;
    CHECK(j.at("base_seed").is_string());
    const ExperimentSpec back = j.get<ExperimentSpec>();
    CHECK(back.base_seed == s.base_seed);
    CHECK(back.q_bits == s.q_bits);
    CHECK(back.workers == 3);
    CHECK(back.kind == ExperimentKind::BitsSweep);
    CHECK(nlohmann::json(back) == j);

    const auto net = nlohmann::json::parse(R"({"experiment": "power", "network": {"M": 3, "N": 6}})");
    const ExperimentSpec from_net = net.get<ExperimentSpec>();
    CHECK(from_net.dims.front() == std::pair{3, 6});
}

TEST_CASE("aggregates match an independent recomputation")
{
    ResultTable t;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(1.0, 0.3);
    std::vector<double> values;
    for (std::uint64_t s = 1; s <= 7; ++s) {
        values.push_back(g(rng));
        t.rows.push_back(row("coupled-star", -5, s, values.back()));
    }
    t.rows.push_back(row("coupled-star", -5, 8, std::nullopt));
    t.rows.push_back(row("ts-star", -5, 1, 2.0));
    const auto agg = t.aggregate();
    REQUIRE(agg.size() == 2);
    const AggregateRow &a = agg[0].scheme == "coupled-star" ? agg[0] : agg[1];
    double mean = 0.0;
    for (double v : values)
        mean += v / 7.0;
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    CHECK(a.count == 7);
    CHECK(a.infeasible == 1);
    CHECK(a.converged == 7);
    CHECK(a.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(a.stderr_mean == doctest::Approx(std::sqrt(ss / 6.0) / std::sqrt(7.0)).epsilon(1e-12));
    CHECK(table_mean(t, "ts-star", "-5") == 2.0);
}

TEST_CASE("CSV layout and row order")
{
    ResultTable t;
    t.rows.push_back(row("b", 5, 1, 0.5));
    t.rows.push_back(row("a", 5, 2, 0.25));
    t.rows.push_back(row("a", -5, 3, std::nullopt));
    t.rows.push_back(row("a", 5, 1, 0.125));
    t.rows.back().wall_ms = 12.5;
    t.sort();
    CHECK(t.rows[0].axis_value == -5);
    CHECK(t.rows[1].seed == 1);
    CHECK(t.rows[2].seed == 2);
    CHECK(t.rows[3].scheme == "b");
    std::ostringstream os;
    t.write_csv(os, false);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "scheme,axis,seed,min_secrecy,Rs_I,Rs_O,converged,outer_iters,wall_ms");
    std::getline(in, line);
    CHECK(line.rfind("a,-5,3,infeasible,,,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("a,5,1,0.125,", 0) == 0);
    CHECK(line.back() == ',');
    std::ostringstream timed;
    t.write_csv(timed, true);
    CHECK(timed.str().find(",12.5\n") != std::string::npos);
    std::ostringstream agg;
    t.write_aggregate_csv(agg);
    CHECK(agg.str().rfind("scheme,axis,count,infeasible,converged,mean,stderr\n", 0) == 0);
    std::ostringstream plot;
    t.write_plot_data(plot);
    CHECK(plot.str().rfind("scheme,x,mean,stderr\n", 0) == 0);
}

TEST_CASE("thread pool visits every index once and rethrows")
{
    std::vector<std::atomic<int>> hits(50);
    run_parallel(50, 3, [&](int i) { hits[static_cast<size_t>(i)]++; });
    for (auto &h : hits)
        CHECK(h.load() == 1);
    CHECK_THROWS_AS(run_parallel(10, 2,
                                 [](int i) {
                                     if (i == 7)
                                         throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("trial seeds are independent of the trial count")
{
    ExperimentSpec a = tiny(ExperimentKind::PowerSweep);
    a.schemes = {SchemeId::RandomPhase};
    a.P_max_dBm = {0.0};
    a.trials = 3;
    ExperimentSpec b = a;
    b.base_seed = 2;
    b.trials = 2;
    const auto ra = run_power_sweep(a), rb = run_power_sweep(b);
    REQUIRE(ra.table.rows.size() == 3);
    REQUIRE(rb.table.rows.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(ra.table.rows[static_cast<size_t>(i) + 1].seed == rb.table.rows[static_cast<size_t>(i)].seed);
        CHECK(*ra.table.rows[static_cast<size_t>(i) + 1].min_secrecy == *rb.table.rows[static_cast<size_t>(i)].min_secrecy);
        CHECK(ra.channel_hashes[static_cast<size_t>(i) + 1] == rb.channel_hashes[static_cast<size_t>(i)]);
    }
}

TEST_CASE("one-bit coupled rows are flagged, not scored")
{
    ExperimentSpec s = tiny(ExperimentKind::BitsSweep);
    s.trials = 1;
    s.q_bits = {1, 2};
    s.schemes = {SchemeId::CoupledStar};
    const auto out = run_bits_sweep(s);
    int flagged = 0, scored = 0;
    for (const ResultRow &r : out.table.rows) {
        if (r.axis == "1") {
            CHECK(!r.min_secrecy);
            CHECK(r.note == "coupling-unrepresentable");
            ++flagged;
        } else {
            CHECK(r.min_secrecy.has_value());
            ++scored;
        }
    }
    CHECK(flagged == 1);
    CHECK(scored == 2);  // continuous and q = 2
}

TEST_CASE("grid projection oracle agrees with brute force")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mag(0.0, 2.0), ph(0.0, 6.283185307179586);
    for (int i = 0; i < 5; ++i) {
        const std::complex<double> ut = std::polar(mag(rng), ph(rng)), ur = std::polar(mag(rng), ph(rng));
        CHECK(grid_projection_optimum(ut, ur, 512, 129) >= grid_projection_brute_force(ut, ur, 512, 129) - 1e-12);
    }
    // a lone transmission reference is matched by full transmission
    CHECK(grid_projection_optimum({1.5, 0.0}, {0.0, 0.0}) == doctest::Approx(1.5).epsilon(1e-9));
    const ProjectionAudit a = audit_projection(50, 3, 5);
    CHECK(a.passed == 50);
    CHECK(a.worst_gap <= 1e-6);
}

TEST_CASE("rate audit and discrete oracle")
{
    const RateAudit r = audit_rates(2, 4, 10, 1);
    CHECK(r.instances == 10);
    CHECK(r.max_abs_diff <= 1e-9);

    CascadeSet zero;
    zero.V_I = zero.V_O = zero.V_E1 = zero.V_E2 = Eigen::MatrixXcd::Zero(1, 2);
    CHECK(discrete_search_optimum(zero, 1.0, 1.0, 2, 11) == 0.0);
    CHECK_THROWS_AS(discrete_search_optimum(zero, 1.0, 1.0, 1, 11), CouplingUnrepresentable);

    NetworkConfig c;
    c.M = 1;
    c.N = 2;
    c.rng_seed = 4;
    c.P_max = dbm_to_watt(-5.0);
    const CascadeSet cs = build_cascades(generate_channels(c));
    CHECK(discrete_search_optimum(cs, c.P_max, c.sigma2, 3, 101) >= 0.0);
}

TEST_CASE("small convergence study and file outputs")
{
    ExperimentSpec s = tiny(ExperimentKind::Convergence);
    s.trials = 1;
    const auto dir = std::filesystem::temp_directory_path() / "starsec_experiment_test";
    std::filesystem::remove_all(dir);
    s.out_dir = dir.string();
    CHECK(run_experiment(s) == 0);
    for (const char *f : {"spec.json", "results.csv", "aggregates.csv", "plot_data.csv", "traces.jsonl"})
        CHECK(std::filesystem::exists(dir / f));
    const auto conv = run_convergence_study(s);
    REQUIRE(conv.trials.size() == 1);
    CHECK(conv.trials[0].error.empty());
    CHECK(conv.trials[0].max_inner_drop <= 1e-6);
    CHECK(conv.table.rows[0].axis == "2x4");
    std::ifstream in(dir / "spec.json");
    CHECK(nlohmann::json::parse(in).at("experiment") == "convergence");
    std::filesystem::remove_all(dir);
}
