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

#ifndef IRSEE_SURROGATE_HPP
#define IRSEE_SURROGATE_HPP

#include "irsee/fbl.hpp"
#include "irsee/linalg.hpp"

#include <vector>

namespace irsee
{
    // Received-power bookkeeping at the linearization point.
    // x[k][i][l] is the power of stream (i,l) seen by user k.
    struct ExpansionPoint
    {
        std::size_t K = 0, L = 0;
        std::vector<std::vector<std::vector<double>>> x; // [k][i][l]
        std::vector<std::vector<double>> b;              // [k][l], sum_i x + sigma2
        std::vector<std::vector<double>> gamma;          // [k][l]
        std::vector<std::vector<double>> delta;          // [k][l]
        std::vector<double> sigma2;                      // [k]
        std::vector<std::vector<std::vector<cx>>> a;     // [k][i][l] amplitudes h_k^H w_il, empty for lifted input
    };

    // From received powers directly
    ExpansionPoint expansion_point(const std::vector<std::vector<std::vector<double>>> &x,
                                   const std::vector<double> &sigma2);

    // From combined channels and beam vectors
    ExpansionPoint expansion_point(const std::vector<CVector> &h, const BeamVectors &W,
                                   const std::vector<double> &sigma2);

    // From combined channels and lifted beamformers
    ExpansionPoint expansion_point_lifted(const std::vector<CVector> &h, const BeamMatrices &Omega,
                                          const std::vector<double> &sigma2);

    // Affine model of one slot rate in (s, b) = (own received power, total received power):
    //   value = xi + w_signal * s + w_total * b
    struct SlotCoefficients
    {
        double rho = 0.0;        // slope of the dispersion term with respect to own power
        double gamma_coef = 0.0; // Gamma0 / (b0 ln 2)
        double xi = 0.0;         // rate at the linearization point
        double w_signal = 0.0;
        double w_total = 0.0;
        double s0 = 0.0, b0 = 0.0;

        double value(double s, double b) const { return xi + w_signal * (s - s0) + w_total * (b - b0); }
    };

    struct SurrogateCoefficients
    {
        std::size_t K = 0, L = 0;
        std::vector<double> beta;                       // [k]
        std::vector<double> sigma2;                     // [k]
        std::vector<std::vector<SlotCoefficients>> kl;  // [k][l]

        // Weight of x[k][i][l] in the model of user k
        double weight(std::size_t k, std::size_t i, std::size_t l) const
        {
            return kl[k][l].w_total + (i == k ? kl[k][l].w_signal : 0.0);
        }
        // Constant term of the model of user k in slot l once b is expanded as sum_i x + sigma2
        double offset(std::size_t k, std::size_t l) const
        {
            const auto &c = kl[k][l];
            return c.xi - c.w_signal * c.s0 - c.w_total * c.b0 + c.w_total * sigma2[k];
        }
    };

    inline constexpr double kGammaFloor = 1e-8;

    // beta[k] = Q^{-1}(eps_k)/sqrt(blocklength)
    SurrogateCoefficients build_surrogate(const ExpansionPoint &ep, const std::vector<double> &beta);
    SurrogateCoefficients build_surrogate(const ExpansionPoint &ep, const std::vector<double> &eps,
                                          double blocklength);

    // Per-user model value at candidate received powers x[k][i][l]
    std::vector<double> eval_surrogate(const SurrogateCoefficients &c,
                                       const std::vector<std::vector<std::vector<double>>> &x);

    // Per-user model value at lifted beamformers through combined channels
    std::vector<double> eval_surrogate(const SurrogateCoefficients &c, const std::vector<CVector> &h,
                                       const BeamMatrices &Omega);

    // Received powers x[k][i][l] = h_k^H Omega_il h_k
    std::vector<std::vector<std::vector<double>>> received_powers(const std::vector<CVector> &h,
                                                                  const BeamMatrices &Omega);

    // True per-user rates from received powers
    std::vector<double> true_rates(const std::vector<std::vector<std::vector<double>>> &x,
                                   const std::vector<double> &sigma2, const std::vector<double> &beta);

} // namespace irsee

#endif
