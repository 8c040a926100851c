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

#ifndef IRSEE_REPORT_HPP
#define IRSEE_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace irsee
{
    enum class RunStatus
    {
        converged,
        iteration_cap,
        stalled,    // no acceptable step could be found
        infeasible, // QoS cannot be met
        solver_failure
    };

    const char *to_string(RunStatus s);

    // One row per outer iteration of a sub-problem solver
    struct IterationRecord
    {
        int index = 0;
        double rho = 0.0;            // fractional parameter used in the solve (0 for the phase step)
        double objective = 0.0;      // sub-problem objective at the accepted point
        double model = 0.0;          // model sum rate at the accepted point, without the rank penalty
        double penalty = 0.0;        // rank penalty weight
        double min_rank_ratio = 1.0; // over all lifted variables of the accepted point
        double metric = 0.0;         // true EE (beamforming) or true sum rate (phases)
        double damping = 0.0;        // proximal weight used for the accepted step
        int attempts = 0;            // conic solves spent on this iteration
        std::string solver_status;
    };

    struct SolveReport
    {
        std::string kind;
        RunStatus status = RunStatus::iteration_cap;
        std::vector<IterationRecord> rows;
        int fallback_events = 0; // randomized recoveries
        int repair_passes = 0;

        // Text record: a header line then one comma-separated row per iteration
        void write(std::ostream &os) const;
    };

} // namespace irsee

#endif
