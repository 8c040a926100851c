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
#ifndef IRSEE_PHASE_OPT_HPP
#define IRSEE_PHASE_OPT_HPP

#include "irsee/beamform_opt.hpp"
#include "irsee/channel.hpp"
#include "irsee/cvxsolver.hpp"
#include "irsee/report.hpp"
#include "irsee/surrogate.hpp"

#include <cstdint>
#include <vector>

namespace irsee
{
    struct PhaseConfig
    {
        int max_iter = 30;            // linearization rounds
        double tol = 1e-3;            // stop when the sub-problem objective changes by at most this
        double penalty0 = 1e-3;       // initial rank penalty
        double nu = 3.0;              // penalty growth
        double theta_max = 1e4;       // penalty cap
        double damping = 0.0;         // proximal weight on E, 0 disables
        double qos_slack = 1e-4;      // true-rate QoS tolerance
        double rank_threshold = 0.99;
        int randomization_candidates = 100;
        std::uint64_t randomization_seed = 7;
        SolverOptions solver;
    };

    // Lifted reflection. The lifted vector is v = [conj(psi); 1] up to a common phase,
    // so that h_k^H w = v^H Z_k w with Z_k from lifting_matrix.
    struct PhaseLift
    {
        CMatrix E;          // (N+1) x (N+1), unit diagonal
        CVector e;          // N unit-modulus entries of the lifted vector after de-rotation
        CVector reflection; // psi = conj(e), the coefficients applied by the surface
        cx psi_dummy{1.0, 0.0}; // phase of the last lifted entry before de-rotation
    };

    // Rank-one lift of a reflection vector
    PhaseLift lift_reflection(const CVector &psi);

    // Z_k = [diag(h_irs_k^H) H ; h_bs_k^H], (N+1) x M
    CMatrix lifting_matrix(const ChannelSet &c, std::size_t k);

    // Y_k = Z_k^H E Z_k, the M x M effective lifted channel of user k
    CMatrix effective_channel(const CMatrix &Z, const CMatrix &E);

    // Noise-normalized received-power data in the lifted reflection:
    // x[k][i][l] = Tr(E A[k][i][l]) with A = Z_k Omega_il Z_k^H / sigma2_k
    struct LiftedPhaseData
    {
        std::size_t K = 0, L = 0, dim = 0;
        std::vector<std::vector<std::vector<CMatrix>>> A; // [k][i][l], empty for idle streams
    };
    LiftedPhaseData lift_channels(const ChannelSet &c, const BeamMatrices &Omega, const std::vector<double> &sigma2);

    std::vector<std::vector<std::vector<double>>> lifted_powers(const LiftedPhaseData &d, const CMatrix &E);

    struct P7Layout
    {
        std::size_t E = 0;
        static constexpr std::size_t none = static_cast<std::size_t>(-1);
        std::size_t slack = none; // none when the basis is empty
        std::vector<double> qos_offset;
    };

    // Reflection sub-problem: model sum rate minus rank penalty, model QoS, unit diagonal,
    // and the rank LMI when a basis is given
    ConicProblem assemble_P7(const SurrogateCoefficients &c, const LiftedPhaseData &d, const CMatrix &basis,
                             double penalty, const Scenario &s, P7Layout *layout = nullptr);

    // Dominant eigenvector de-rotated by its last entry and projected to unit modulus.
    // When the last entry vanishes the raw phases are used and *dummy_zero is set.
    CVector extract_unit_modulus(const CMatrix &E, bool *dummy_zero = nullptr, cx *dummy = nullptr);

    struct PhaseResult
    {
        PhaseLift lift;
        SolveReport report;
        std::vector<double> rates; // true rates with the returned reflection
        double sum_rate = 0.0;     // sum of rates clamped at zero
        double min_rank_ratio = 1.0;     // of the lifted matrix the returned reflection was rounded from
        bool fallback = false;           // the returned reflection came from randomized recovery
        bool kept_incoming = false;      // no candidate beat the incoming reflection
    };

    // Linearized rank-penalized ascent on the lifted reflection for fixed beamformers
    PhaseResult optimize_phases(const ChannelSet &c, const Scenario &s, const BeamVectors &omega,
                                const CMatrix &E_init, const PhaseConfig &cfg = {});

} // namespace irsee

#endif
