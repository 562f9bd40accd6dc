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

#ifndef STARSEC_EXPERIMENT_HPP
#define STARSEC_EXPERIMENT_HPP

#include "starsec/baselines.hpp"
#include "starsec/channel_model.hpp"
#include "starsec/psb.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace starsec {

enum class ExperimentKind { Convergence, PowerSweep, BitsSweep, OracleAudit };

const char *to_string(ExperimentKind k);
// Accepts "convergence", "power", "bits", "audit" and the long forms
// "power-sweep", "bits-sweep", "oracle-audit".
ExperimentKind experiment_from_string(const std::string &name);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Convergence;
    NetworkConfig network;                        // template; M, N, P_max, seed overridden per trial
    PsbConfig psb;
    std::vector<double> P_max_dBm{-5.0};          // power sweep axis (other studies use the first)
    std::vector<int> q_bits{1, 2, 3, 4, 5, 6};    // bits sweep axis; continuous is always included
    std::vector<std::pair<int, int>> dims{{4, 8}};  // (M, N); sweeps use the first
    std::vector<SchemeId> schemes{SchemeId::CoupledStar};
    int trials = 20;
    std::uint64_t base_seed = 1;
    int workers = 1;
    bool reoptimize_quantized = false;            // bits sweep: beamforming again at the quantized point
    bool record_timing = false;                   // real wall_ms in results.csv (breaks byte identity)
    std::string out_dir;

    // Desk defaults (M = 4, N = 8, 20 trials) for the given study.
    static ExperimentSpec desk(ExperimentKind kind);
    // M = 8, N = 20, 100 trials.
    void apply_full_scale();
    std::uint64_t seed(int trial) const { return base_seed + static_cast<std::uint64_t>(trial); }
    // Throws std::invalid_argument on an empty axis or trials < 1.
    void validate() const;
};

void to_json(nlohmann::json &j, const ExperimentSpec &s);
void from_json(const nlohmann::json &j, ExperimentSpec &s);

struct ResultRow {
    std::string scheme;
    std::string axis;           // "4x8", "-5", "3", "continuous"
    double axis_value = 0.0;    // numeric sort key
    std::uint64_t seed = 0;
    std::optional<double> min_secrecy;  // empty when infeasible
    double Rs_I = 0.0;
    double Rs_O = 0.0;
    bool converged = false;
    int outer_iters = 0;
    double wall_ms = 0.0;
    std::string note;           // e.g. "coupling-unrepresentable"
};

struct AggregateRow {
    std::string scheme;
    std::string axis;
    double axis_value = 0.0;
    int count = 0;              // rows with a value
    int infeasible = 0;
    int converged = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;   // sample standard deviation / sqrt(count)
};

struct ResultTable {
    std::vector<ResultRow> rows;

    // Orders rows by (scheme, axis value, seed), the merge key.
    void sort();
    std::vector<AggregateRow> aggregate() const;
    // Header scheme,axis,seed,min_secrecy,Rs_I,Rs_O,converged,outer_iters,wall_ms.
    // wall_ms is left empty unless `with_timing`.
    void write_csv(std::ostream &os, bool with_timing) const;
    void write_aggregate_csv(std::ostream &os) const;
    // (scheme, x, mean, stderr) triples for any plotting tool.
    void write_plot_data(std::ostream &os) const;
};

// Mean of a scheme's values at an axis point, or NaN when absent.
double table_mean(const ResultTable &t, const std::string &scheme, const std::string &axis);

struct ConvergenceTrial {
    int M = 0;
    int N = 0;
    std::uint64_t seed = 0;
    PsbResult result;
    double power = 0.0;               // Tr(W_I) + Tr(W_O) of the returned beams
    double max_inner_drop = 0.0;      // largest decrease inside any inner trace
    std::string error;                // non-empty when the trial threw
};

struct ConvergenceOutput {
    ResultTable table;
    std::vector<ConvergenceTrial> trials;
};

struct PowerSweepOutput {
    ResultTable table;
    // channel hash per (axis, seed, scheme) row, same order as the table
    std::vector<std::uint64_t> channel_hashes;
};

struct BitsSweepOutput {
    ResultTable table;
};

struct ProjectionAudit {
    int elements = 0;
    int passed = 0;
    double worst_gap = 0.0;           // oracle minus projection objective
    double seconds = 0.0;
};

struct RateAudit {
    int instances = 0;
    double max_abs_diff = 0.0;
};

struct EndToEndCase {
    std::uint64_t seed = 0;
    double oracle = 0.0;              // exhaustive discrete optimum
    double psb = 0.0;                 // quantized PSB
    bool passed = false;
};

struct AuditOutput {
    ProjectionAudit projection;
    RateAudit rates;
    std::vector<EndToEndCase> end_to_end;
    int end_to_end_passed = 0;
    double seconds = 0.0;
};

void to_json(nlohmann::json &j, const AuditOutput &a);

// Runs `count` independent tasks on `workers` threads; task i writes only
// slot i, so the merged output never depends on completion order.
void run_parallel(int count, int workers, const std::function<void(int)> &task);

// Per-trial network for (M, N, seed) and the P_max in dBm.
NetworkConfig trial_network(const ExperimentSpec &spec, int M, int N, std::uint64_t seed, double P_max_dBm);

ConvergenceOutput run_convergence_study(const ExperimentSpec &spec);
PowerSweepOutput run_power_sweep(const ExperimentSpec &spec);
BitsSweepOutput run_bits_sweep(const ExperimentSpec &spec);
AuditOutput run_oracle_audit(const ExperimentSpec &spec);

// Projection of `elements` random references against the grid oracle; the
// first `brute_force` elements are also checked by plain enumeration.
ProjectionAudit audit_projection(int elements, std::uint64_t seed, int brute_force = 20);
// Cascade-form versus channel-form rates on random feasible points.
RateAudit audit_rates(int M, int N, int instances, std::uint64_t seed);

// Per-element grid optimum of projection_objective over the coupled set:
// `phases` values of theta_t, `amplitudes` energy splits
// (sqrt(beta_t), sqrt(beta_r)) = (cos psi, sin psi) with psi uniform on
// [0, pi/2], and both branches.  The phase maximum is taken in closed form
// (the grid point nearest the continuous optimum).
double grid_projection_optimum(std::complex<double> u_t, std::complex<double> u_r, int phases = 4096,
                               int amplitudes = 1025);
// Same optimum by enumerating every grid point.
double grid_projection_brute_force(std::complex<double> u_t, std::complex<double> u_r, int phases = 4096,
                                   int amplitudes = 1025);

// Exhaustive optimum at M = 1 over q-bit coupled phases, amplitude levels
// {0, 1/4, 1/2, 3/4, 1} and a 1-D power split grid.
double discrete_search_optimum(const CascadeSet &cascades, double P_max, double sigma2, int q, int power_steps = 1001);

// Writes results.csv, aggregates.csv, plot_data.csv, timings.csv, spec.json
// and, per study, traces.jsonl or audit.json into spec.out_dir.  Returns
// the process exit status (0 on success).
int run_experiment(const ExperimentSpec &spec);

}  // namespace starsec

#endif  // STARSEC_EXPERIMENT_HPP
