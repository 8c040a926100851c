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

#include "irsee/report.hpp"

#include <iomanip>
#include <ostream>

namespace irsee
{
    const char *to_string(RunStatus s)
    {
        switch (s)
        {
        case RunStatus::converged:
            return "converged";
        case RunStatus::iteration_cap:
            return "iteration-cap";
        case RunStatus::stalled:
            return "stalled";
        case RunStatus::infeasible:
            return "infeasible";
        case RunStatus::solver_failure:
            return "solver-failure";
        }
        return "unknown";
    }

    void SolveReport::write(std::ostream &os) const
    {
        const auto flags = os.flags();
        const auto prec = os.precision(10);
        os << "# " << kind << " status=" << to_string(status) << " fallbacks=" << fallback_events
           << " repairs=" << repair_passes << '\n';
        os << "iter,rho,objective,model,penalty,min_rank_ratio,metric,damping,attempts,solver_status\n";
        for (const auto &r : rows)
            os << r.index << ',' << r.rho << ',' << r.objective << ',' << r.model << ',' << r.penalty << ',' << r.min_rank_ratio << ','
               << r.metric << ',' << r.damping << ',' << r.attempts << ',' << r.solver_status << '\n';
        os.flags(flags);
        os.precision(prec);
    }

} // namespace irsee
