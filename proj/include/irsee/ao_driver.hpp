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
#ifndef IRSEE_AO_DRIVER_HPP
#define IRSEE_AO_DRIVER_HPP

#include "irsee/beamform_opt.hpp"
#include "irsee/phase_opt.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace irsee
{
    enum class Scheme
    {
        proposed,  // alternating beamformer and reflection design
        fixed_irs, // beamformers only, reflection held fixed
        no_irs     // beamformers only, surface absent and unpowered
    };

    const char *to_string(Scheme s);
    // Throws std::invalid_argument for unknown names
    Scheme scheme_from_string(const std::string &name);

    struct AOConfig
    {
        int max_outer = 15;   // alternating rounds
        double tol = 1e-2;    // stop when a round improves EE by at most this
        bool warm_rho = true; // later rounds start the fractional parameter at the current EE
        bool random_fixed_phases = false; // fixed-irs baseline: seeded random phases instead of zero phases
        std::uint64_t fixed_phase_seed = 1;
        BeamformConfig beamform;
        PhaseConfig phase;
    };

    struct AOResult
    {
        Scheme scheme = Scheme::proposed;
        RunStatus status = RunStatus::iteration_cap;
        BeamformerSet beams;
        PhaseLift phases;
        std::vector<double> rates;    // true per-user rates
        double ee = 0.0;
        double sum_rate = 0.0;        // clamped at zero per user
        double power = 0.0;           // transmit power
        double static_power = 0.0;
        std::vector<double> ee_trace; // true EE after each accepted half-step
        int outer_iters = 0;
        double min_rank_ratio = 1.0;  // of the lifted solutions behind the reported point
        bool fallback = false;        // reported point came from randomized recovery
        std::vector<SolveReport> reports;
    };

    AOResult alternating_optimize(const ChannelSet &c, const Scenario &s, const AOConfig &cfg = {});

    // Beamformers only, with the zero-phase (or seeded random) reflection
    AOResult baseline_fixed_irs(const ChannelSet &c, const Scenario &s, const AOConfig &cfg = {});

    // Beamformers only over the direct links; the surface power is excluded
    AOResult baseline_no_irs(const ChannelSet &c, const Scenario &s, const AOConfig &cfg = {});

    AOResult run_scheme(Scheme scheme, const ChannelSet &c, const Scenario &s, const AOConfig &cfg = {});

    // True EE of beamformers and a reflection, recomputed from the channels
    Evaluation evaluate_design(const ChannelSet &c, const Scenario &s, const BeamVectors &omega, const CVector &psi);

} // namespace irsee

#endif
