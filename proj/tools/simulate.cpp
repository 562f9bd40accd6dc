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

// Batch driver for the Monte-Carlo studies.

#include "starsec/experiment.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
            out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char **argv)
{
    using namespace starsec;

    CLI::App app{"Secrecy beamforming studies for coupled phase-shift STAR-RIS networks"};
    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::string schemes;
    std::string powers;
    std::string bits;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> antennas;
    std::optional<int> elements;
    std::optional<double> noise_dbm;
    std::vector<double> ris_position;
    bool full_scale = false;
    bool record_timing = false;
    bool reoptimize = false;

    app.add_option("--experiment", experiment, "convergence, power, bits or audit")
        ->required()
        ->check(CLI::IsMember({"convergence", "power", "bits", "audit", "power-sweep", "bits-sweep", "oracle-audit"}));
    app.add_option("--config", config_path, "JSON experiment description; flags override it")->check(CLI::ExistingFile);
    app.add_option("--trials", trials, "Monte-Carlo trials per sweep point")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "base seed; trial i uses seed + i");
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_flag("--paper-scale", full_scale, "M = 8, N = 20, 100 trials");
    app.add_option("--schemes", schemes, "comma-separated scheme names");
    app.add_option("--power-dbm", powers, "comma-separated transmit budgets in dBm");
    app.add_option("--bits", bits, "comma-separated quantization bit counts");
    app.add_option("-M,--antennas", antennas, "BS antennas")->check(CLI::PositiveNumber);
    app.add_option("-N,--elements", elements, "STAR-RIS elements")->check(CLI::PositiveNumber);
    app.add_option("--noise-dbm", noise_dbm, "receiver noise power in dBm");
    app.add_option("--ris-position", ris_position, "surface position x y z in metres (users move with it)")
        ->expected(3);
    app.add_option("--workers", workers, "parallel trials")->check(CLI::PositiveNumber);
    app.add_flag("--record-timing", record_timing, "write wall-clock times into results.csv");
    app.add_flag("--reoptimize-quantized", reoptimize, "re-run beamforming at the quantized coefficients");
    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentKind kind = experiment_from_string(experiment);
        ExperimentSpec spec = ExperimentSpec::desk(kind);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            nlohmann::json j = nlohmann::json::parse(in);
            j["experiment"] = to_string(kind);
            spec = j.get<ExperimentSpec>();
        }
        if (full_scale)
            spec.apply_full_scale();
        if (antennas || elements) {
            for (auto &[M, N] : spec.dims) {
                M = antennas.value_or(M);
                N = elements.value_or(N);
            }
        }
        if (trials)
            spec.trials = *trials;
        if (seed)
            spec.base_seed = *seed;
        if (workers)
            spec.workers = *workers;
        if (!schemes.empty()) {
            spec.schemes.clear();
            for (const auto &name : split_list(schemes))
                spec.schemes.push_back(scheme_from_string(name));
        }
        if (!powers.empty()) {
            spec.P_max_dBm.clear();
            for (const auto &p : split_list(powers))
                spec.P_max_dBm.push_back(std::stod(p));
        }
        if (!bits.empty()) {
            spec.q_bits.clear();
            for (const auto &b : split_list(bits))
                spec.q_bits.push_back(std::stoi(b));
        }
        if (noise_dbm)
            spec.network.sigma2 = dbm_to_watt(*noise_dbm);
        if (!ris_position.empty()) {
            const Vec3 shift{ris_position[0] - spec.network.pos_RIS[0], ris_position[1] - spec.network.pos_RIS[1],
                             ris_position[2] - spec.network.pos_RIS[2]};
            for (Vec3 *p : {&spec.network.pos_RIS, &spec.network.pos_IU, &spec.network.pos_OU, &spec.network.pos_E1,
                            &spec.network.pos_E2})
                for (int k = 0; k < 3; ++k)
                    (*p)[static_cast<size_t>(k)] += shift[static_cast<size_t>(k)];
        }
        spec.record_timing = spec.record_timing || record_timing;
        spec.reoptimize_quantized = spec.reoptimize_quantized || reoptimize;
        spec.out_dir = out_dir;
        return run_experiment(spec);
    } catch (const std::exception &e) {
        std::cerr << "simulate: " << e.what() << '\n';
        return 2;
    }
}
