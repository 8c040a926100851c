// SPDX-License-Identifier: Apache-2.0
//
// irsee: energy-efficient beamforming for IRS-assisted short-packet downlinks
// Copyright (C) 2026 The irsee authors
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

#ifndef IRSEE_EXPERIMENTS_HPP
#define IRSEE_EXPERIMENTS_HPP

#include "irsee/ao_driver.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace irsee
{
    inline constexpr const char *kArtifactVersion = "1.0.0";

    enum class SweepAxis
    {
        epsilon,     // error probability of every user
        blocklength, // symbols per packet
        irs_elements // surface size
    };

    const char *to_string(SweepAxis a);
    // Throws std::invalid_argument for unknown names
    SweepAxis axis_from_string(const std::string &name);

    struct SweepSpec
    {
        Scenario base = Scenario::defaults();
        AOConfig ao;
        SweepAxis axis = SweepAxis::epsilon;
        std::vector<double> grid;
        std::size_t drops = 1;
        std::vector<Scheme> schemes{Scheme::proposed, Scheme::fixed_irs, Scheme::no_irs};
        std::string output;   // CSV path, empty writes nowhere
        std::size_t jobs = 1; // worker threads

        // Throws std::invalid_argument on an empty or unsorted grid, zero drops or no schemes
        void validate() const;

        // Scenario of one grid point and drop; the seed is base.seed + drop
        Scenario scenario(double grid_value, std::size_t drop) const;
    };

    // One (grid value, drop, scheme) result. CSV columns, in order:
    // seed,N,m_d,epsilon,scheme,ee,sum_rate,power,outer_iters,min_rank_ratio,status
    struct SweepRow
    {
        double grid_value = 0.0;
        std::uint64_t seed = 0;
        std::size_t N = 0;
        double m_d = 0.0;
        double epsilon = 0.0;
        Scheme scheme = Scheme::proposed;
        double ee = 0.0;
        double sum_rate = 0.0;
        double power = 0.0;
        int outer_iters = 0;
        double min_rank_ratio = 1.0;
        RunStatus status = RunStatus::iteration_cap;
        bool fallback = false; // not a CSV column
    };

    // Mean and sample standard deviation per (grid value, scheme) over the drops that produced a design
    struct SweepAggregate
    {
        double grid_value = 0.0;
        Scheme scheme = Scheme::proposed;
        std::size_t count = 0;
        double ee_mean = 0.0, ee_std = 0.0;
        double sum_rate_mean = 0.0, sum_rate_std = 0.0;
        double power_mean = 0.0, power_std = 0.0;
        double outer_iters_mean = 0.0, outer_iters_std = 0.0;
        double min_rank_mean = 0.0, min_rank_std = 0.0;
    };

    struct SweepResult
    {
        std::vector<SweepRow> rows;             // sorted by (grid value, seed, scheme)
        std::vector<SweepAggregate> aggregates; // sorted by (grid value, scheme)
    };

    // Whether a row enters the aggregates
    bool produced_design(RunStatus s);

    std::vector<SweepAggregate> aggregate(const std::vector<SweepRow> &rows);

    // Runs every drop of every grid point on spec.jobs workers; does not write spec.output
    SweepResult run_sweep(const SweepSpec &spec);

    // Row for one finished run
    SweepRow make_row(double grid_value, const Scenario &s, Scheme scheme, const AOResult &r);

    // Hash of the canonical configuration, output path and worker count excluded
    std::string config_hash(const SweepSpec &spec);

    // '#' metadata lines, the column header, data rows, then the aggregate rows
    // (seed column "mean" or "std", status column "n=<count>")
    void write_csv(std::ostream &os, const SweepSpec &spec, const SweepResult &result);

    // Throws std::runtime_error when the file cannot be written
    void write_csv_file(const std::string &path, const SweepSpec &spec, const SweepResult &result);

    // Human-readable summary of one run, fixed formatting
    void write_summary(std::ostream &os, const Scenario &s, const AOResult &r);

} // namespace irsee

#endif
