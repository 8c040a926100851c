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

#ifndef IRSEE_FBL_HPP
#define IRSEE_FBL_HPP

#include "irsee/linalg.hpp"

#include <vector>

namespace irsee
{
    // log2(e)
    inline constexpr double kLog2e = 1.4426950408889634074;

    // Gaussian tail probability Q(z) = P(X > z), X ~ N(0,1)
    double qfunc(double z);

    // z such that Q(z) = eps; throws std::invalid_argument outside (0,1)
    double qinv(double eps);

    // Short-packet rate penalty coefficient Q^{-1}(eps) / sqrt(blocklength)
    double rate_penalty_coef(double eps, double blocklength);

    // Channel dispersion (log2 e)^2 (1 - (1+gamma)^-2)
    double dispersion(double gamma);

    // Normal-approximation rate of one slot: log2(1+gamma) - beta sqrt(dispersion)
    double slot_rate(double gamma, double beta);

    // Sum of slot rates for one user; the raw value can be negative
    double rate(const std::vector<double> &gamma_per_slot, double beta);

    // Per-slot beamformers: W[k][l] is the M-vector of user k in slot l
    using BeamVectors = std::vector<std::vector<CVector>>;
    // Per-slot lifted beamformers: Omega[k][l] is M x M Hermitian PSD
    using BeamMatrices = std::vector<std::vector<CMatrix>>;

    // gamma[k][l] for combined channels h[k] (column vectors, the receiver applies h^H)
    std::vector<std::vector<double>> sinr(const std::vector<CVector> &h, const BeamVectors &W,
                                          const std::vector<double> &sigma2);

    // Same quantity through traces Tr(h h^H Omega)
    std::vector<std::vector<double>> sinr_lifted(const std::vector<CVector> &h, const BeamMatrices &Omega,
                                                 const std::vector<double> &sigma2);

    struct RateTerms
    {
        std::vector<std::vector<double>> gamma; // [k][l]
        std::vector<std::vector<double>> delta; // [k][l]
        std::vector<double> beta;               // [k]
        std::vector<double> U, V, R;            // [k]
    };

    RateTerms rate_terms(const std::vector<std::vector<double>> &gamma, const std::vector<double> &beta);

    double transmit_power(const BeamVectors &W);
    double transmit_power(const BeamMatrices &Omega);

    // Sum of per-user rates clamped at zero over total consumed power
    double energy_efficiency(const std::vector<double> &rates, double transmit_power, double static_power);

} // namespace irsee

#endif
