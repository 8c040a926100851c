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

#ifndef IRSEE_RANKRELAX_HPP
#define IRSEE_RANKRELAX_HPP

#include "irsee/cvxsolver.hpp"
#include "irsee/linalg.hpp"

namespace irsee
{
    // Rank-one enforcement state for one lifted variable
    struct RankRelaxState
    {
        CMatrix basis;          // n x m, orthonormal columns spanning the m smallest eigenvectors
        double varpi = 0.0;     // slack of the LMI varpi I - basis^H X basis >= 0
        double penalty = 1e-3;  // weight of the slack in the objective
        double nu = 3.0;        // growth factor, > 1
        double theta_max = 1e4; // penalty cap

        // Throws std::invalid_argument when the invariants do not hold
        void validate() const;
    };

    inline constexpr double kRankOneThreshold = 0.99;

    // Orthonormal basis of the m smallest-eigenvalue eigenspace of a Hermitian X, 1 <= m < n
    CMatrix smallest_eigvec_basis(const CMatrix &X, std::size_t m);

    // varpi I - basis^H X basis >= 0 with X the matrix variable `var` and varpi the scalar `slack`
    Lmi rank_lmi(std::size_t var, std::size_t slack, const CMatrix &basis);

    // Same block with X given as data; only the slack is a decision variable
    Lmi rank_lmi(const CMatrix &X, std::size_t slack, const CMatrix &basis);

    // Smallest slack for which the LMI holds: the largest eigenvalue of basis^H X basis (floored at 0)
    double min_feasible_slack(const CMatrix &X, const CMatrix &basis);

    // min(nu * penalty, theta_max); throws when nu <= 1 or the cap is below the penalty
    double penalty_step(const RankRelaxState &s);

    // Number of steps to reach the cap from `start`
    int penalty_steps_to_cap(double start, double nu, double theta_max);

    // lambda_max(X) / Tr(X); throws when the trace is not positive
    double rank_one_ratio(const CMatrix &X);

    // Rank-one ratio with zero matrices counted as rank one
    double rank_one_ratio_or_one(const CMatrix &X);

} // namespace irsee

#endif
