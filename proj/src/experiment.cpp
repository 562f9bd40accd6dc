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

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace starsec {

namespace {

using Clock = std::chrono::steady_clock;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Shortest round-trip representation; identical bits give identical text.
std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string dims_label(int M, int N)
{
    return std::to_string(M) + "x" + std::to_string(N);
}

PsbConfig trial_config(const ExperimentSpec &spec, std::uint64_t seed)
{
    PsbConfig c = spec.psb;
    c.init_seed = seed;
    return c;
}

ResultRow row_from(const SchemeResult &r, std::string axis, double axis_value, std::uint64_t seed)
{
    ResultRow row;
    row.scheme = to_string(r.scheme);
    row.axis = std::move(axis);
    row.axis_value = axis_value;
    row.seed = seed;
    row.min_secrecy = r.min_secrecy;
    row.Rs_I = r.Rs_I;
    row.Rs_O = r.Rs_O;
    row.converged = r.converged;
    row.outer_iters = r.outer_iters;
    row.wall_ms = r.wall_ms;
    row.note = r.note;
    return row;
}

ResultRow error_row(const std::string &scheme, std::string axis, double axis_value, std::uint64_t seed,
                    const std::string &what)
{
    ResultRow row;
    row.scheme = scheme;
    row.axis = std::move(axis);
    row.axis_value = axis_value;
    row.seed = seed;
    row.note = "error: " + what;
    return row;
}

double max_inner_drop(const std::vector<PsbTraceRecord> &trace)
{
    double worst = 0.0;
    for (const auto &rec : trace)
        for (size_t i = 1; i < rec.inner_trace.size(); ++i)
            worst = std::max(worst, rec.inner_trace[i - 1] - rec.inner_trace[i]);
    return worst;
}

// Rates at M = 1 from scalar cascade gains; mirrors secrecy_report.
struct ScalarGains {
    double c[4];  // |V_x u_side|^2 / sigma2 for I, O, E1, E2
};

double min_secrecy_scalar(const ScalarGains &g, double p_I, double p_O)
{
    auto rate = [&](int x, double own, double other) { return std::log2(1.0 + own * g.c[x] / (other * g.c[x] + 1.0)); };
    const double rs_I = std::max(rate(0, p_I, p_O) - std::max(rate(2, p_I, p_O), rate(3, p_I, p_O)), 0.0);
    const double rs_O = std::max(rate(1, p_O, p_I) - std::max(rate(2, p_O, p_I), rate(3, p_O, p_I)), 0.0);
    return std::min(rs_I, rs_O);
}

}  // namespace

// ---------------------------------------------------------------- spec

const char *to_string(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::Convergence:
        return "convergence";
    case ExperimentKind::PowerSweep:
        return "power";
    case ExperimentKind::BitsSweep:
        return "bits";
    case ExperimentKind::OracleAudit:
        return "audit";
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string &name)
{
    if (name == "convergence")
        return ExperimentKind::Convergence;
    if (name == "power" || name == "power-sweep")
        return ExperimentKind::PowerSweep;
    if (name == "bits" || name == "bits-sweep")
        return ExperimentKind::BitsSweep;
    if (name == "audit" || name == "oracle-audit")
        return ExperimentKind::OracleAudit;
    throw std::invalid_argument("unknown experiment: " + name);
}

ExperimentSpec ExperimentSpec::desk(ExperimentKind kind)
{
    ExperimentSpec s;
    s.kind = kind;
    switch (kind) {
    case ExperimentKind::Convergence:
        break;
    case ExperimentKind::PowerSweep:
        s.P_max_dBm = {-15.0, -10.0, -5.0, 0.0, 5.0};
        s.schemes.assign(all_schemes().begin(), all_schemes().end());
        break;
    case ExperimentKind::BitsSweep:
        s.schemes = {SchemeId::CoupledStar, SchemeId::IndependentStar};
        break;
    case ExperimentKind::OracleAudit:
        s.dims = {{1, 2}};
        s.q_bits = {3};
        break;
    }
    return s;
}

void ExperimentSpec::apply_full_scale()
{
    if (kind != ExperimentKind::OracleAudit)
        dims = {{8, 20}};
    network.M = dims.front().first;
    network.N = dims.front().second;
    trials = 100;
}

void ExperimentSpec::validate() const
{
    if (trials < 1)
        throw std::invalid_argument("experiment: trials must be at least 1");
    if (P_max_dBm.empty() || dims.empty())
        throw std::invalid_argument("experiment: sweep axes must be non-empty");
    if (kind == ExperimentKind::BitsSweep && q_bits.empty())
        throw std::invalid_argument("experiment: bits axis must be non-empty");
    for (int q : q_bits)
        if (q < 1 || q > 8)
            throw std::invalid_argument("experiment: bits must lie in 1..8");
    for (const auto &[M, N] : dims)
        if (M < 1 || N < 1)
            throw std::invalid_argument("experiment: dimensions must be positive");
    if (kind == ExperimentKind::OracleAudit)
        for (const auto &[M, N] : dims)
            if (M > 2 || N > 2)
                throw std::invalid_argument("experiment: the oracle audit needs M <= 2 and N <= 2");
    if ((kind == ExperimentKind::PowerSweep || kind == ExperimentKind::BitsSweep) && schemes.empty())
        throw std::invalid_argument("experiment: scheme list must be non-empty");
    if (workers < 1)
        throw std::invalid_argument("experiment: workers must be at least 1");
    psb.validate();
}

void to_json(nlohmann::json &j, const ExperimentSpec &s)
{
    nlohmann::json dims = nlohmann::json::array();
    for (const auto &[M, N] : s.dims)
        dims.push_back({M, N});
    nlohmann::json schemes = nlohmann::json::array();
    for (SchemeId id : s.schemes)
        schemes.push_back(to_string(id));
    j = nlohmann::json{{"experiment", to_string(s.kind)},
                       {"network", s.network},
                       {"psb", s.psb},
                       {"P_max_dBm", s.P_max_dBm},
                       {"q_bits", s.q_bits},
                       {"dims", dims},
                       {"schemes", schemes},
                       {"trials", s.trials},
                       {"base_seed", std::to_string(s.base_seed)},
                       {"workers", s.workers},
                       {"reoptimize_quantized", s.reoptimize_quantized},
                       {"record_timing", s.record_timing}};
}

void from_json(const nlohmann::json &j, ExperimentSpec &s)
{
    if (j.contains("experiment"))
        s = ExperimentSpec::desk(experiment_from_string(j.at("experiment").get<std::string>()));
    if (j.contains("network")) {
        s.network = j.at("network").get<NetworkConfig>();
        if (!j.contains("dims") && s.kind != ExperimentKind::OracleAudit)
            s.dims = {{s.network.M, s.network.N}};
    }
    if (j.contains("psb"))
        s.psb = j.at("psb").get<PsbConfig>();
    if (j.contains("P_max_dBm"))
        s.P_max_dBm = j.at("P_max_dBm").get<std::vector<double>>();
    if (j.contains("q_bits"))
        s.q_bits = j.at("q_bits").get<std::vector<int>>();
    if (j.contains("dims")) {
        s.dims.clear();
        for (const auto &d : j.at("dims"))
            s.dims.emplace_back(d.at(0).get<int>(), d.at(1).get<int>());
    }
    if (j.contains("schemes")) {
        s.schemes.clear();
        for (const auto &n : j.at("schemes"))
            s.schemes.push_back(scheme_from_string(n.get<std::string>()));
    }
    s.trials = j.value("trials", s.trials);
    if (j.contains("base_seed")) {
        const auto &b = j.at("base_seed");
        s.base_seed = b.is_string() ? std::stoull(b.get<std::string>()) : b.get<std::uint64_t>();
    }
    s.workers = j.value("workers", s.workers);
    s.reoptimize_quantized = j.value("reoptimize_quantized", s.reoptimize_quantized);
    s.record_timing = j.value("record_timing", s.record_timing);
}

// ---------------------------------------------------------------- tables

void ResultTable::sort()
{
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
        if (a.scheme != b.scheme)
            return a.scheme < b.scheme;
        if (a.axis_value != b.axis_value)
            return a.axis_value < b.axis_value;
        return a.seed < b.seed;
    });
}

std::vector<AggregateRow> ResultTable::aggregate() const
{
    std::map<std::pair<std::string, std::pair<double, std::string>>, std::vector<const ResultRow *>> groups;
    for (const auto &r : rows)
        groups[{r.scheme, {r.axis_value, r.axis}}].push_back(&r);
    std::vector<AggregateRow> out;
    for (const auto &[key, members] : groups) {
        AggregateRow a;
        a.scheme = key.first;
        a.axis_value = key.second.first;
        a.axis = key.second.second;
        std::vector<double> values;
        for (const ResultRow *r : members) {
            a.converged += r->converged ? 1 : 0;
            if (r->min_secrecy)
                values.push_back(*r->min_secrecy);
            else
                ++a.infeasible;
        }
        a.count = static_cast<int>(values.size());
        if (a.count > 0) {
            double sum = 0.0;
            for (double v : values)
                sum += v;
            a.mean = sum / a.count;
            if (a.count > 1) {
                double ss = 0.0;
                for (double v : values)
                    ss += (v - a.mean) * (v - a.mean);
                a.stderr_mean = std::sqrt(ss / (a.count - 1)) / std::sqrt(static_cast<double>(a.count));
            }
        } else {
            a.mean = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(a);
    }
    return out;
}

void ResultTable::write_csv(std::ostream &os, bool with_timing) const
{
    os << "scheme,axis,seed,min_secrecy,Rs_I,Rs_O,converged,outer_iters,wall_ms\n";
    for (const auto &r : rows) {
        os << r.scheme << ',' << r.axis << ',' << r.seed << ',';
        if (r.min_secrecy)
            os << num(*r.min_secrecy) << ',' << num(r.Rs_I) << ',' << num(r.Rs_O);
        else
            os << (r.note.empty() ? std::string("infeasible") : r.note) << ",,";
        os << ',' << (r.converged ? "true" : "false") << ',' << r.outer_iters << ',';
        if (with_timing)
            os << num(r.wall_ms);
        os << '\n';
    }
}

void ResultTable::write_aggregate_csv(std::ostream &os) const
{
    os << "scheme,axis,count,infeasible,converged,mean,stderr\n";
    for (const auto &a : aggregate())
        os << a.scheme << ',' << a.axis << ',' << a.count << ',' << a.infeasible << ',' << a.converged << ','
           << num(a.mean) << ',' << num(a.stderr_mean) << '\n';
}

void ResultTable::write_plot_data(std::ostream &os) const
{
    os << "scheme,x,mean,stderr\n";
    for (const auto &a : aggregate())
        os << a.scheme << ',' << num(a.axis_value) << ',' << num(a.mean) << ',' << num(a.stderr_mean) << '\n';
}

double table_mean(const ResultTable &t, const std::string &scheme, const std::string &axis)
{
    for (const auto &a : t.aggregate())
        if (a.scheme == scheme && a.axis == axis)
            return a.mean;
    return std::numeric_limits<double>::quiet_NaN();
}

void to_json(nlohmann::json &j, const AuditOutput &a)
{
    nlohmann::json cases = nlohmann::json::array();
    for (const auto &c : a.end_to_end)
        cases.push_back({{"seed", std::to_string(c.seed)}, {"oracle", c.oracle}, {"psb", c.psb}, {"passed", c.passed}});
    j = nlohmann::json{{"projection",
                        {{"elements", a.projection.elements},
                         {"passed", a.projection.passed},
                         {"worst_gap", a.projection.worst_gap}}},
                       {"rates", {{"instances", a.rates.instances}, {"max_abs_diff", a.rates.max_abs_diff}}},
                       {"end_to_end", cases},
                       {"end_to_end_passed", a.end_to_end_passed}};
}

// ---------------------------------------------------------------- workers

void run_parallel(int count, int workers, const std::function<void(int)> &task)
{
    if (count <= 0)
        return;
    workers = std::max(1, std::min(workers, count));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
    auto guarded = [&](int i) {
        try {
            task(i);
        } catch (...) {
            errors[static_cast<size_t>(i)] = std::current_exception();
        }
    };
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            guarded(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next++; i < count; i = next++)
                    guarded(i);
            });
        for (auto &t : pool)
            t.join();
    }
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

NetworkConfig trial_network(const ExperimentSpec &spec, int M, int N, std::uint64_t seed, double P_max_dBm)
{
    NetworkConfig c = spec.network;
    c.M = M;
    c.N = N;
    c.rng_seed = seed;
    c.P_max = dbm_to_watt(P_max_dBm);
    return c;
}

// ---------------------------------------------------------------- studies

ConvergenceOutput run_convergence_study(const ExperimentSpec &spec)
{
    spec.validate();
    ConvergenceOutput out;
    const int per_dims = spec.trials;
    const int total = per_dims * static_cast<int>(spec.dims.size());
    out.trials.resize(static_cast<size_t>(total));
    std::vector<ResultRow> rows(static_cast<size_t>(total));

    run_parallel(total, spec.workers, [&](int i) {
        const auto &[M, N] = spec.dims[static_cast<size_t>(i / per_dims)];
        const std::uint64_t seed = spec.seed(i % per_dims);
        ConvergenceTrial &t = out.trials[static_cast<size_t>(i)];
        t.M = M;
        t.N = N;
        t.seed = seed;
        const std::string axis = dims_label(M, N);
        const double axis_value = M * 1000.0 + N;
        try {
            const NetworkConfig net = trial_network(spec, M, N, seed, spec.P_max_dBm.front());
            const auto start = Clock::now();
            t.result = run_psb(trial_config(spec, seed), build_cascades(generate_channels(net)), net.P_max, net.sigma2);
            const double ms = elapsed_ms(start);
            t.power = t.result.beams.power();
            t.max_inner_drop = max_inner_drop(t.result.trace);
            ResultRow &row = rows[static_cast<size_t>(i)];
            row.scheme = to_string(SchemeId::CoupledStar);
            row.axis = axis;
            row.axis_value = axis_value;
            row.seed = seed;
            row.min_secrecy = t.result.report.min_secrecy;
            row.Rs_I = t.result.report.Rs_I;
            row.Rs_O = t.result.report.Rs_O;
            row.converged = t.result.converged;
            row.outer_iters = t.result.outer_iters;
            row.wall_ms = ms;
        } catch (const std::exception &e) {
            t.error = e.what();
            rows[static_cast<size_t>(i)] = error_row(to_string(SchemeId::CoupledStar), axis, axis_value, seed, e.what());
        }
    });
    out.table.rows = std::move(rows);
    out.table.sort();
    return out;
}

PowerSweepOutput run_power_sweep(const ExperimentSpec &spec)
{
    spec.validate();
    const auto &[M, N] = spec.dims.front();
    const int per_power = spec.trials;
    const int total = per_power * static_cast<int>(spec.P_max_dBm.size());
    const size_t S = spec.schemes.size();
    std::vector<ResultRow> rows(static_cast<size_t>(total) * S);
    std::vector<std::uint64_t> hashes(rows.size());

    // Coupled first so the independent baseline can start from it.
    std::vector<SchemeId> order = spec.schemes;
    std::stable_partition(order.begin(), order.end(), [](SchemeId id) { return id == SchemeId::CoupledStar; });

    run_parallel(total, spec.workers, [&](int i) {
        const double dbm = spec.P_max_dBm[static_cast<size_t>(i / per_power)];
        const std::uint64_t seed = spec.seed(i % per_power);
        const NetworkConfig net = trial_network(spec, M, N, seed, dbm);
        const ChannelSet channels = generate_channels(net);
        const std::uint64_t hash = channel_hash(channels);
        SchemeInstance inst{build_cascades(channels), net.P_max, net.sigma2};
        const PsbConfig config = trial_config(spec, seed);
        std::optional<SchemeResult> coupled;
        for (SchemeId id : order) {
            const size_t slot = static_cast<size_t>(i) * S +
                                static_cast<size_t>(std::find(spec.schemes.begin(), spec.schemes.end(), id) -
                                                    spec.schemes.begin());
            try {
                SchemeResult r = run_scheme(id, config, inst, coupled ? &*coupled : nullptr);
                r.seed = seed;
                r.P_max_dBm = dbm;
                rows[slot] = row_from(r, num(dbm), dbm, seed);
                if (id == SchemeId::CoupledStar)
                    coupled = std::move(r);
            } catch (const std::exception &e) {
                rows[slot] = error_row(to_string(id), num(dbm), dbm, seed, e.what());
            }
            hashes[slot] = hash;
        }
    });

    // Sort rows and hashes together.
    std::vector<size_t> idx(rows.size());
    for (size_t k = 0; k < idx.size(); ++k)
        idx[k] = k;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        const ResultRow &x = rows[a], &y = rows[b];
        if (x.scheme != y.scheme)
            return x.scheme < y.scheme;
        if (x.axis_value != y.axis_value)
            return x.axis_value < y.axis_value;
        return x.seed < y.seed;
    });
    PowerSweepOutput out;
    for (size_t k : idx) {
        out.table.rows.push_back(rows[k]);
        out.channel_hashes.push_back(hashes[k]);
    }
    return out;
}

BitsSweepOutput run_bits_sweep(const ExperimentSpec &spec)
{
    spec.validate();
    const auto &[M, N] = spec.dims.front();
    const double dbm = spec.P_max_dBm.front();
    std::vector<SchemeId> schemes;
    for (SchemeId id : {SchemeId::CoupledStar, SchemeId::IndependentStar})
        if (std::find(spec.schemes.begin(), spec.schemes.end(), id) != spec.schemes.end())
            schemes.push_back(id);
    if (schemes.empty())
        throw std::invalid_argument("bits sweep: needs coupled-star or independent-star");

    std::vector<std::vector<ResultRow>> per_trial(static_cast<size_t>(spec.trials));
    run_parallel(spec.trials, spec.workers, [&](int i) {
        const std::uint64_t seed = spec.seed(i);
        const NetworkConfig net = trial_network(spec, M, N, seed, dbm);
        SchemeInstance inst{build_cascades(generate_channels(net)), net.P_max, net.sigma2};
        PsbConfig config = trial_config(spec, seed);
        config.q_bits = 0;
        std::optional<SchemeResult> coupled;
        auto &rows = per_trial[static_cast<size_t>(i)];
        for (SchemeId id : {SchemeId::CoupledStar, SchemeId::IndependentStar}) {
            const bool wanted = std::find(schemes.begin(), schemes.end(), id) != schemes.end();
            if (!wanted && !(id == SchemeId::CoupledStar && schemes.size() == 2))
                continue;
            const bool is_coupled = id == SchemeId::CoupledStar;
            SchemeResult cont;
            try {
                cont = run_scheme(id, config, inst, coupled ? &*coupled : nullptr);
            } catch (const std::exception &e) {
                rows.push_back(error_row(to_string(id), "continuous", 0.0, seed, e.what()));
                continue;
            }
            cont.seed = seed;
            if (is_coupled)
                coupled = cont;
            rows.push_back(row_from(cont, "continuous", 0.0, seed));
            const PsbProblem problem = PsbProblem::standard(inst.cascades, inst.P_max, inst.sigma2, is_coupled);
            for (int q : spec.q_bits) {
                const auto start = Clock::now();
                ResultRow row = row_from(cont, std::to_string(q), q, seed);
                try {
                    const StarCoefficients qc = quantize_coupled(cont.coeffs, q, is_coupled);
                    SecrecyReport rep;
                    if (spec.reoptimize_quantized)
                        rep = optimize_beamforming(problem, qc, config).report;
                    else
                        rep = secrecy_report(inst.cascades, qc, cont.beams, inst.sigma2);
                    row.min_secrecy = rep.min_secrecy;
                    row.Rs_I = rep.Rs_I;
                    row.Rs_O = rep.Rs_O;
                } catch (const CouplingUnrepresentable &e) {
                    row.min_secrecy.reset();
                    row.Rs_I = row.Rs_O = 0.0;
                    row.note = e.what();
                }
                row.wall_ms = elapsed_ms(start);
                rows.push_back(std::move(row));
            }
        }
    });
    BitsSweepOutput out;
    for (auto &rows : per_trial)
        for (auto &r : rows)
            out.table.rows.push_back(std::move(r));
    out.table.sort();
    return out;
}

// ---------------------------------------------------------------- oracles

double grid_projection_optimum(cd u_t, cd u_r, int phases, int amplitudes)
{
    const double step = 2.0 * kPi / phases;
    double best = -std::numeric_limits<double>::infinity();
    for (int branch = 0; branch < 2; ++branch) {
        const cd rot = std::polar(1.0, branch == 0 ? 0.5 * kPi : 1.5 * kPi);
        for (int k = 0; k < amplitudes; ++k) {
            const double psi = 0.5 * kPi * k / (amplitudes - 1);
            // objective = Re(e^{j theta} z), z = a conj(u_t) + b e^{j phi} conj(u_r)
            const cd z = std::cos(psi) * std::conj(u_t) + std::sin(psi) * rot * std::conj(u_r);
            const double target = -std::arg(z);
            const double idx = std::floor(target / step + 0.5);
            for (double d : {idx - 1.0, idx, idx + 1.0})
                best = std::max(best, (std::polar(1.0, d * step) * z).real());
        }
    }
    return best;
}

double grid_projection_brute_force(cd u_t, cd u_r, int phases, int amplitudes)
{
    const double step = 2.0 * kPi / phases;
    double best = -std::numeric_limits<double>::infinity();
    for (int branch = 0; branch < 2; ++branch) {
        const double offset = branch == 0 ? 0.5 * kPi : 1.5 * kPi;
        for (int k = 0; k < amplitudes; ++k) {
            const double psi = 0.5 * kPi * k / (amplitudes - 1);
            const double a = std::cos(psi), b = std::sin(psi);
            for (int p = 0; p < phases; ++p) {
                const double th = p * step;
                best = std::max(best, projection_objective(u_t, u_r, std::polar(a, th), std::polar(b, th + offset)));
            }
        }
    }
    return best;
}

ProjectionAudit audit_projection(int elements, std::uint64_t seed, int brute_force)
{
    const auto start = Clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.0, 1.0), ph(0.0, 2.0 * kPi);
    Eigen::VectorXcd ut(elements), ur(elements);
    for (int n = 0; n < elements; ++n) {
        ut(n) = std::polar(mag(rng), ph(rng));
        ur(n) = std::polar(mag(rng), ph(rng));
    }
    Eigen::VectorXcd xt, xr;
    const Eigen::VectorXcd prev = Eigen::VectorXcd::Constant(elements, cd(std::sqrt(0.5), 0.0));
    project_elements(ut, ur, ProjectionMode::Coupled, {}, false, prev, prev * cd(0.0, 1.0), xt, xr);

    ProjectionAudit a;
    a.elements = elements;
    for (int n = 0; n < elements; ++n) {
        const double got = projection_objective(ut(n), ur(n), xt(n), xr(n));
        double oracle = grid_projection_optimum(ut(n), ur(n));
        if (n < brute_force)
            oracle = std::max(oracle, grid_projection_brute_force(ut(n), ur(n)));
        const double feas = std::abs(std::norm(xt(n)) + std::norm(xr(n)) - 1.0);
        const double gap = std::abs(oracle - got);
        a.worst_gap = std::max(a.worst_gap, gap);
        if (gap <= 1e-6 && feas <= 1e-9)
            ++a.passed;
    }
    a.seconds = elapsed_ms(start) / 1000.0;
    return a;
}

RateAudit audit_rates(int M, int N, int instances, std::uint64_t seed)
{
    RateAudit a;
    a.instances = instances;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < instances; ++i) {
        NetworkConfig net;
        net.M = M;
        net.N = N;
        net.rng_seed = seed + static_cast<std::uint64_t>(i);
        const ChannelSet ch = generate_channels(net);
        const CascadeSet cas = build_cascades(ch);
        StarCoefficients c = random_coupled_coefficients(N, seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i)));
        for (int n = 0; n < N; ++n) {
            c.beta_t(n) = unit(rng);
            c.beta_r(n) = 1.0 - c.beta_t(n);
        }
        Eigen::VectorXcd wI(M), wO(M);
        for (int m = 0; m < M; ++m) {
            wI(m) = {gauss(rng), gauss(rng)};
            wO(m) = {gauss(rng), gauss(rng)};
        }
        const double scale = std::sqrt(net.P_max / (wI.squaredNorm() + wO.squaredNorm()));
        const BeamformingSolution beams = BeamformingSolution::from_vectors(wI * scale, wO * scale);
        const SecrecyReport x = secrecy_report(cas, c, beams, net.sigma2);
        const SecrecyReport y = secrecy_report_theta(ch, c, beams, net.sigma2);
        double d = std::max({std::abs(x.R_I - y.R_I), std::abs(x.R_O - y.R_O), std::abs(x.Rs_I - y.Rs_I),
                             std::abs(x.Rs_O - y.Rs_O), std::abs(x.min_secrecy - y.min_secrecy)});
        for (int k = 0; k < 2; ++k)
            for (int r = 0; r < 2; ++r)
                d = std::max(d, std::abs(x.R_E[k][r] - y.R_E[k][r]));
        a.max_abs_diff = std::max(a.max_abs_diff, d);
    }
    return a;
}

double discrete_search_optimum(const CascadeSet &cascades, double P_max, double sigma2, int q, int power_steps)
{
    if (cascades.M() != 1)
        throw std::invalid_argument("discrete_search_optimum: needs M = 1");
    if (q < 2)
        throw CouplingUnrepresentable();
    const int N = cascades.N();
    const int levels = 1 << q;
    const std::array<double, 5> betas{0.0, 0.25, 0.5, 0.75, 1.0};
    const int per_element = levels * 2 * static_cast<int>(betas.size());
    long long combos = 1;
    for (int n = 0; n < N; ++n)
        combos *= per_element;
    if (combos > 10'000'000)
        throw std::invalid_argument("discrete_search_optimum: search space too large");

    const Eigen::MatrixXcd *V[4] = {&cascades.V_I, &cascades.V_O, &cascades.V_E1, &cascades.V_E2};
    const bool transmit[4] = {true, false, true, false};
    double best = 0.0;
    Eigen::VectorXcd ut(N), ur(N);
    for (long long c = 0; c < combos; ++c) {
        long long rest = c;
        for (int n = 0; n < N; ++n) {
            const int code = static_cast<int>(rest % per_element);
            rest /= per_element;
            const int k = code % levels;
            const int branch = (code / levels) % 2;
            const double beta = betas[static_cast<size_t>(code / (2 * levels))];
            const double th = 2.0 * kPi * k / levels;
            const double off = 2.0 * kPi * (branch == 0 ? levels / 4 : 3 * levels / 4) / levels;
            ut(n) = std::polar(std::sqrt(beta), th);
            ur(n) = std::polar(std::sqrt(1.0 - beta), th + off);
        }
        ScalarGains g;
        for (int x = 0; x < 4; ++x)
            g.c[x] = std::norm((V[x]->row(0) * (transmit[x] ? ut : ur))(0)) / sigma2;
        for (int s = 0; s < power_steps; ++s) {
            const double frac = static_cast<double>(s) / (power_steps - 1);
            best = std::max(best, min_secrecy_scalar(g, frac * P_max, (1.0 - frac) * P_max));
        }
    }
    return best;
}

AuditOutput run_oracle_audit(const ExperimentSpec &spec)
{
    spec.validate();
    const auto start = Clock::now();
    AuditOutput out;
    out.projection = audit_projection(1000, spec.base_seed);
    out.rates = audit_rates(std::max(1, spec.network.M), std::max(1, spec.network.N), 100, spec.base_seed);

    const auto &[M, N] = spec.dims.front();
    const int q = spec.q_bits.front();
    out.end_to_end.resize(static_cast<size_t>(spec.trials));
    run_parallel(spec.trials, spec.workers, [&](int i) {
        const std::uint64_t seed = spec.seed(i);
        const NetworkConfig net = trial_network(spec, M, N, seed, spec.P_max_dBm.front());
        const CascadeSet cas = build_cascades(generate_channels(net));
        EndToEndCase &c = out.end_to_end[static_cast<size_t>(i)];
        c.seed = seed;
        c.oracle = discrete_search_optimum(cas, net.P_max, net.sigma2, q);
        PsbConfig config = trial_config(spec, seed);
        config.q_bits = q;
        c.psb = run_psb(config, cas, net.P_max, net.sigma2).report.min_secrecy;
        c.passed = c.oracle <= 0.0 ? c.psb >= -1e-12 : c.psb >= 0.9 * c.oracle;
    });
    for (const auto &c : out.end_to_end)
        out.end_to_end_passed += c.passed ? 1 : 0;
    out.seconds = elapsed_ms(start) / 1000.0;
    return out;
}

// ---------------------------------------------------------------- driver

namespace {

void write_timings(std::ostream &os, const ResultTable &t)
{
    os << "scheme,axis,seed,wall_ms\n";
    for (const auto &r : t.rows)
        os << r.scheme << ',' << r.axis << ',' << r.seed << ',' << num(r.wall_ms) << '\n';
}

void write_table_files(const std::filesystem::path &dir, const ResultTable &t, bool with_timing)
{
    std::ofstream(dir / "results.csv") << [&] {
        std::ostringstream os;
        t.write_csv(os, with_timing);
        return os.str();
    }();
    std::ofstream agg(dir / "aggregates.csv");
    t.write_aggregate_csv(agg);
    std::ofstream plot(dir / "plot_data.csv");
    t.write_plot_data(plot);
    std::ofstream tim(dir / "timings.csv");
    write_timings(tim, t);
}

void print_aggregates(const ResultTable &t)
{
    for (const auto &a : t.aggregate())
        std::cout << "  " << a.scheme << " @ " << a.axis << ": mean " << num(a.mean) << " (stderr "
                  << num(a.stderr_mean) << ", n=" << a.count << ", converged " << a.converged << ")\n";
}

}  // namespace

int run_experiment(const ExperimentSpec &spec)
{
    spec.validate();
    if (spec.out_dir.empty())
        throw std::invalid_argument("experiment: output directory is required");
    const std::filesystem::path dir(spec.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "spec.json") << nlohmann::json(spec).dump(2) << '\n';

    int status = 0;
    std::cout << "experiment " << to_string(spec.kind) << ", " << spec.trials << " trials, seeds from "
              << spec.base_seed << '\n';
    switch (spec.kind) {
    case ExperimentKind::Convergence: {
        const ConvergenceOutput out = run_convergence_study(spec);
        write_table_files(dir, out.table, spec.record_timing);
        std::ofstream traces(dir / "traces.jsonl");
        int failures = 0;
        for (const auto &t : out.trials) {
            for (const auto &rec : t.result.trace) {
                nlohmann::json j = rec;
                j["M"] = t.M;
                j["N"] = t.N;
                j["seed"] = std::to_string(t.seed);
                traces << j.dump() << '\n';
            }
            const bool ok = t.error.empty() && t.result.converged && t.max_inner_drop <= 1e-6;
            if (!ok) {
                ++failures;
                std::cout << "  trial " << dims_label(t.M, t.N) << " seed " << t.seed << ": "
                          << (t.error.empty() ? "" : t.error + "; ") << "converged=" << t.result.converged
                          << " max inner drop " << num(t.max_inner_drop) << '\n';
            }
        }
        print_aggregates(out.table);
        std::cout << "  " << out.trials.size() - static_cast<size_t>(failures) << "/" << out.trials.size()
                  << " trials converged with monotone inner traces\n";
        status = failures == 0 ? 0 : 1;
        break;
    }
    case ExperimentKind::PowerSweep: {
        const PowerSweepOutput out = run_power_sweep(spec);
        write_table_files(dir, out.table, spec.record_timing);
        print_aggregates(out.table);
        break;
    }
    case ExperimentKind::BitsSweep: {
        const BitsSweepOutput out = run_bits_sweep(spec);
        write_table_files(dir, out.table, spec.record_timing);
        print_aggregates(out.table);
        break;
    }
    case ExperimentKind::OracleAudit: {
        const AuditOutput out = run_oracle_audit(spec);
        std::ofstream(dir / "audit.json") << nlohmann::json(out).dump(2) << '\n';
        std::cout << "  projection " << out.projection.passed << "/" << out.projection.elements << " (worst gap "
                  << num(out.projection.worst_gap) << ")\n"
                  << "  rates max |diff| " << num(out.rates.max_abs_diff) << " over " << out.rates.instances
                  << " instances\n"
                  << "  end-to-end " << out.end_to_end_passed << "/" << out.end_to_end.size() << '\n';
        for (const auto &c : out.end_to_end)
            if (!c.passed)
                std::cout << "    seed " << c.seed << ": psb " << num(c.psb) << " oracle " << num(c.oracle) << '\n';
        const bool ok = out.projection.passed == out.projection.elements && out.rates.max_abs_diff <= 1e-9 &&
                        out.end_to_end_passed * 10 >= static_cast<int>(out.end_to_end.size()) * 9;
        status = ok ? 0 : 1;
        break;
    }
    }
    return status;
}

}  // namespace starsec
