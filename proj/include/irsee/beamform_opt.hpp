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

#ifndef IRSEE_BEAMFORM_OPT_HPP
#define IRSEE_BEAMFORM_OPT_HPP

#include "irsee/channel.hpp"
#include "irsee/cvxsolver.hpp"
#include "irsee/fbl.hpp"
#include "irsee/report.hpp"
#include "irsee/surrogate.hpp"

#include <cstdint>
#include <vector>

namespace irsee
{
    struct BeamformConfig
    {
        int max_outer = 30;           // Dinkelbach iterations
        double rho0 = 0.0;            // initial fractional parameter
        double tol = 1e-3;            // stop when |F| <= tol
        double penalty0 = 1e-3;       // initial rank penalty
        double nu = 3.0;              // penalty growth
        double theta_max = 1e4;       // penalty cap
        double damping0 = 1.0;        // proximal weight floor, relative to each stream's power
        double damping_floor = 1e-3;  // stream power below this fraction of p_max is damped as if at it
        double damping_growth = 4.0;  // factor applied after a rejected step
        int max_attempts = 25;        // solves per iteration before declaring a stall
        double qos_slack = 1e-4;      // true-rate QoS tolerance when accepting a step
        int repair_passes = 3;        // extra fixed-parameter passes when QoS is still violated
        double rank_threshold = 0.99; // rank-one acceptance
        double silent_power = 1e-8;   // streams below this fraction of p_max are off and not rank-checked
        int randomization_candidates = 100;
        std::uint64_t randomization_seed = 1;
        SolverOptions solver;
    };

    // Everything sub-problem 1 needs about one drop once the reflection is fixed
    struct BeamformInput
    {
        std::vector<CVector> h;      // combined channels, one M-vector per user
        Scenario scenario;
        double static_power = 0.0;   // non-transmit power in the EE denominator
    };

    struct BeamformerSet
    {
        BeamMatrices Omega;  // [k][l], zero for slots past the deadline
        BeamVectors omega;   // extracted vectors
        double rho = 0.0;    // final fractional parameter
    };

    struct BeamformResult
    {
        BeamformerSet set;
        SolveReport report;
        std::vector<double> rho_trace; // parameter used at each iteration
        std::vector<double> rates;     // true per-user rates of the extracted vectors
        double ee = 0.0;
        double power = 0.0;
        double min_rank_ratio = 1.0;   // of the lifted solution before extraction
        bool fallback = false;         // randomized recovery used
    };

    // Index of each lifted variable and its rank slack in an assembled problem
    struct P5Layout
    {
        static constexpr std::size_t none = static_cast<std::size_t>(-1);
        std::vector<std::vector<std::size_t>> var;   // [k][l]
        std::vector<std::vector<std::size_t>> slack; // [k][l]
        std::vector<double> qos_offset;              // constant part of each user's model rate
    };

    // Noise-normalized lifted channels h_k h_k^H / sigma2_k
    std::vector<CMatrix> lifted_channels(const std::vector<CVector> &h, const std::vector<double> &sigma2);

    // x[k][i][l] = Tr(Hn_k Omega_il)
    std::vector<std::vector<std::vector<double>>> lifted_powers(const std::vector<CMatrix> &Hn,
                                                                const BeamMatrices &Omega);

    // Beamformer sub-problem at fixed parameter rho and penalty. bases[k][l] may be empty (no rank LMI).
    ConicProblem assemble_P5(const SurrogateCoefficients &c, const std::vector<CMatrix> &Hn, double rho,
                             double penalty, const std::vector<std::vector<CMatrix>> &bases, const Scenario &s,
                             double static_power, P5Layout *layout = nullptr);

    // Maximum-ratio transmission with equal power over the active streams, lifted
    BeamMatrices mrt_init(const std::vector<CVector> &h, const Scenario &s);

    // True per-user rates, transmit power and EE of lifted beamformers
    struct Evaluation
    {
        std::vector<double> rates;
        double sum_rate = 0.0;
        double power = 0.0;
        double ee = 0.0;
        double qos_violation = 0.0; // max_k (R_min,k - R_k)^+
    };
    Evaluation evaluate(const BeamformInput &in, const BeamMatrices &Omega);
    Evaluation evaluate(const BeamformInput &in, const BeamVectors &omega);

    // Dinkelbach loop with successive linearization and rank penalty
    BeamformResult dinkelbach_sca(const BeamformInput &in, const BeamMatrices &Omega_init,
                                  const BeamformConfig &cfg = {});

    // Principal component sqrt(lambda_max) v_max; zero matrix gives the zero vector
    CVector extract_beamformer(const CMatrix &Omega);

    struct Extraction
    {
        BeamVectors omega;
        bool fallback = false;
        int fallback_streams = 0;
    };

    // Principal components, or Gaussian randomization when a stream is not rank one or the
    // principal components violate QoS; keeps the feasible candidate with the best true EE
    Extraction extract_beamformers(const BeamformInput &in, const BeamMatrices &Omega, const BeamformConfig &cfg);

} // namespace irsee

#endif
