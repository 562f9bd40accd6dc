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

// Acceptance run at desk scale (M = 4, N = 8, 20 seeds): one PASS or FAIL
// line per criterion, exit status 1 when any criterion fails.

#include "starsec/experiment.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace starsec;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string &title, const Verdict &v, Clock::time_point start)
{
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s  %d. %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
}

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

template <class F>
void run(int id, const std::string &title, F &&body)
{
    const auto start = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception &e) {
        v = {false, std::string("threw: ") + e.what()};
    }
    report(id, title, v, start);
}

double circular_distance(double a, double b)
{
    const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

// Energy conservation and pi/2 or 3pi/2 phase coupling on every element.
bool coupling_exact(const StarCoefficients &c, double tol = 1e-9)
{
    for (int n = 0; n < c.size(); ++n) {
        if (std::abs(c.beta_t(n) + c.beta_r(n) - 1.0) > 1e-12 || c.beta_t(n) < 0.0 || c.beta_r(n) < 0.0)
            return false;
        const double d = std::fmod(c.theta_r(n) - c.theta_t(n) + 4.0 * kPi, 2.0 * kPi);
        if (std::min(circular_distance(d, 0.5 * kPi), circular_distance(d, 1.5 * kPi)) > tol)
            return false;
    }
    return true;
}

std::string csv_of(const ResultTable &t)
{
    std::ostringstream os;
    t.write_csv(os, false);
    return os.str();
}

// Value of a scheme at an axis for one seed; NaN when absent.
double row_value(const ResultTable &t, const std::string &scheme, const std::string &axis, std::uint64_t seed)
{
    for (const auto &r : t.rows)
        if (r.scheme == scheme && r.axis == axis && r.seed == seed && r.min_secrecy)
            return *r.min_secrecy;
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Acceptance criteria at desk scale"};
    int trials = 20;
    std::uint64_t seed = 1;
    app.add_option("--trials", trials, "seeds per study")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "base seed");
    CLI11_PARSE(app, argc, argv);

    const double slack = 1e-9;

    run(1, "projection optimality", [&] {
        const ProjectionAudit a = audit_projection(1000, seed);
        return Verdict{a.passed == a.elements && a.seconds < 60.0,
                       fmt("%d/%d elements within 1e-6 of the grid oracle, worst gap %.3g, %.1f s", a.passed,
                           a.elements, a.worst_gap, a.seconds)};
    });

    run(2, "rate-formula equivalence", [&] {
        const RateAudit a = audit_rates(4, 8, 100, seed);
        return Verdict{a.max_abs_diff <= 1e-9,
                       fmt("cascade vs direct form over %d instances, max |diff| %.3g", a.instances, a.max_abs_diff)};
    });

    ExperimentSpec conv = ExperimentSpec::desk(ExperimentKind::Convergence);
    conv.trials = trials;
    conv.base_seed = seed;
    const auto conv_start = Clock::now();
    ConvergenceOutput study;
    std::string study_error;
    try {
        study = run_convergence_study(conv);
    } catch (const std::exception &e) {
        study_error = e.what();
    }
    const double study_secs = std::chrono::duration<double>(Clock::now() - conv_start).count();
    std::printf("      convergence study: %d trials at M = 4, N = 8 in %.1f s\n", trials, study_secs);

    run(3, "inner-loop monotonicity", [&] {
        if (!study_error.empty())
            return Verdict{false, "study failed: " + study_error};
        int bad = 0, errors = 0;
        double worst = 0.0;
        for (const auto &t : study.trials) {
            errors += t.error.empty() ? 0 : 1;
            worst = std::max(worst, t.max_inner_drop);
            bad += t.max_inner_drop > 1e-6 ? 1 : 0;
        }
        return Verdict{bad == 0 && errors == 0,
                       fmt("%d/%zu traces non-decreasing within 1e-6 (largest drop %.3g, %d errors)",
                           static_cast<int>(study.trials.size()) - bad, study.trials.size(), worst, errors)};
    });

    run(4, "penalty convergence", [&] {
        if (!study_error.empty())
            return Verdict{false, "study failed: " + study_error};
        int converged = 0, exact = 0, budget = 0, max_outer = 0;
        for (const auto &t : study.trials) {
            if (!t.error.empty())
                continue;
            const double P = trial_network(conv, t.M, t.N, t.seed, conv.P_max_dBm.front()).P_max;
            max_outer = std::max(max_outer, t.result.outer_iters);
            if (t.result.converged && t.result.outer_iters <= 300 && t.result.final_V <= conv.psb.eps_th) {
                ++converged;
                exact += coupling_exact(t.result.coeffs) ? 1 : 0;
                budget += t.power <= P * (1.0 + 1e-6) ? 1 : 0;
            }
        }
        const int n = static_cast<int>(study.trials.size());
        return Verdict{converged * 10 >= n * 9 && exact == converged && budget == converged,
                       fmt("%d/%d runs reached V <= 1e-3 (most outer iterations %d); coupling exact on %d, "
                           "power within budget on %d",
                           converged, n, max_outer, exact, budget)};
    });

    run(5, "rank-one beamformers", [&] {
        if (!study_error.empty())
            return Verdict{false, "study failed: " + study_error};
        double worst = 0.0;
        int bad = 0;
        for (const auto &t : study.trials) {
            const double r = std::max(t.result.rank_residual[0], t.result.rank_residual[1]);
            worst = std::max(worst, r);
            bad += (!t.error.empty() || r > 1e-3) ? 1 : 0;
        }
        return Verdict{bad == 0, fmt("lambda2/lambda1 <= 1e-3 on %d/%zu runs, worst %.3g",
                                     static_cast<int>(study.trials.size()) - bad, study.trials.size(), worst)};
    });

    run(6, "scheme ordering", [&] {
        ExperimentSpec mid = ExperimentSpec::desk(ExperimentKind::PowerSweep);
        mid.trials = trials;
        mid.base_seed = seed;
        mid.P_max_dBm = {-5.0};
        mid.schemes = {SchemeId::CoupledStar, SchemeId::IndependentStar, SchemeId::CRis, SchemeId::RandomPhase};
        const ResultTable a = run_power_sweep(mid).table;

        ExperimentSpec ends = mid;
        ends.P_max_dBm = {-15.0, 5.0};
        ends.schemes = {SchemeId::CoupledStar, SchemeId::TsStar};
        const ResultTable b = run_power_sweep(ends).table;

        const double ind = table_mean(a, "independent-star", "-5"), cpl = table_mean(a, "coupled-star", "-5");
        const double rnd = table_mean(a, "random-phase", "-5"), cris = table_mean(a, "c-ris", "-5");
        int ind_ok = 0, rnd_ok = 0;
        for (int i = 0; i < trials; ++i) {
            const std::uint64_t s = mid.seed(i);
            const double c = row_value(a, "coupled-star", "-5", s);
            ind_ok += row_value(a, "independent-star", "-5", s) >= c - slack ? 1 : 0;
            rnd_ok += c >= row_value(a, "random-phase", "-5", s) - slack ? 1 : 0;
        }
        const double ts_lo = table_mean(b, "ts-star", "-15"), es_lo = table_mean(b, "coupled-star", "-15");
        const double ts_hi = table_mean(b, "ts-star", "5"), es_hi = table_mean(b, "coupled-star", "5");

        const bool chain = ind >= cpl - slack && cpl >= rnd - slack && ind_ok * 10 >= trials * 9 &&
                           rnd_ok * 10 >= trials * 9;
        const bool cris_ok = cpl >= cris - slack;
        const bool low = ts_lo >= es_lo - slack, high = es_hi >= ts_hi - slack;
        return Verdict{chain && cris_ok && low && high,
                       fmt("-5 dBm means independent %.4f, coupled %.4f, random %.4f, C-RIS %.4f "
                           "(per seed %d/%d and %d/%d); TS %.4f vs ES %.4f at -15 dBm [%s], "
                           "ES %.4f vs TS %.4f at +5 dBm [%s]",
                           ind, cpl, rnd, cris, ind_ok, trials, rnd_ok, trials, ts_lo, es_lo, low ? "ok" : "violated",
                           es_hi, ts_hi, high ? "ok" : "violated")};
    });

    run(7, "quantization", [&] {
        ExperimentSpec bits = ExperimentSpec::desk(ExperimentKind::BitsSweep);
        bits.trials = trials;
        bits.base_seed = seed;
        bits.q_bits = {1, 2, 3, 4, 5};
        const ResultTable t = run_bits_sweep(bits).table;
        bool ok = true;
        std::string detail;
        for (const std::string scheme : {"coupled-star", "independent-star"}) {
            const double cont = table_mean(t, scheme, "continuous");
            const double q4 = table_mean(t, scheme, "4");
            const bool near = std::abs(q4 - cont) <= 0.05 * std::abs(cont);
            bool monotone = true;
            std::string means;
            for (int q = 2; q <= 5; ++q) {
                const double m = table_mean(t, scheme, std::to_string(q));
                means += fmt("%s%.4f", q == 2 ? "" : " ", m);
                if (q > 2 && m < table_mean(t, scheme, std::to_string(q - 1)) - 1e-12)
                    monotone = false;
            }
            ok = ok && near && monotone;
            detail += fmt("%s: q4 %.4f vs continuous %.4f (%.1f%%), q2..5 %s%s; ", scheme.c_str(), q4, cont,
                          100.0 * std::abs(q4 - cont) / std::abs(cont), means.c_str(),
                          monotone ? "" : " not monotone");
        }
        int flagged = 0, q1_rows = 0;
        for (const auto &r : t.rows)
            if (r.scheme == "coupled-star" && r.axis == "1") {
                ++q1_rows;
                flagged += (!r.min_secrecy && r.note == "coupling-unrepresentable") ? 1 : 0;
            }
        ok = ok && q1_rows == trials && flagged == q1_rows;
        detail += fmt("coupled q = 1 flagged on %d/%d rows", flagged, q1_rows);
        return Verdict{ok, detail};
    });

    run(8, "end-to-end oracle audit", [&] {
        ExperimentSpec audit = ExperimentSpec::desk(ExperimentKind::OracleAudit);
        audit.trials = 20;
        audit.base_seed = seed;
        const AuditOutput a = run_oracle_audit(audit);
        double worst = 1.0;
        for (const auto &c : a.end_to_end)
            if (c.oracle > 0.0)
                worst = std::min(worst, c.psb / c.oracle);
        return Verdict{a.end_to_end_passed >= 18 && a.seconds < 600.0,
                       fmt("%d/%zu seeds reach 90%% of the exhaustive optimum at M = 1, N = 2, q = 3 "
                           "(worst ratio %.3f), %.1f s",
                           a.end_to_end_passed, a.end_to_end.size(), worst, a.seconds)};
    });

    run(9, "determinism", [&] {
        ExperimentSpec small = ExperimentSpec::desk(ExperimentKind::PowerSweep);
        small.dims = {{2, 4}};
        small.trials = 2;
        small.base_seed = seed;
        small.P_max_dBm = {-5.0, 5.0};
        const std::string first = csv_of(run_power_sweep(small).table);
        const std::string second = csv_of(run_power_sweep(small).table);
        small.workers = 2;
        const PowerSweepOutput threaded = run_power_sweep(small);
        const std::string third = csv_of(threaded.table);

        // one channel realization per (power, seed) across schemes
        bool shared = true;
        for (size_t i = 0; i < threaded.table.rows.size(); ++i)
            for (size_t j = 0; j < i; ++j)
                if (threaded.table.rows[i].axis == threaded.table.rows[j].axis &&
                    threaded.table.rows[i].seed == threaded.table.rows[j].seed &&
                    threaded.channel_hashes[i] != threaded.channel_hashes[j])
                    shared = false;
        const bool same = first == second && first == third;
        return Verdict{same && shared, fmt("repeat %s, two workers %s, %zu bytes; channel shared across schemes %s",
                                           first == second ? "identical" : "differs",
                                           first == third ? "identical" : "differs", first.size(),
                                           shared ? "yes" : "no")};
    });

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
