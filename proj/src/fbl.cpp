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

#include "irsee/fbl.hpp"

#include <cmath>
#include <stdexcept>

namespace irsee
{
    double qfunc(double z)
    {
        return 0.5 * std::erfc(z / std::sqrt(2.0));
    }

    double qinv(double eps)
    {
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("qinv: probability must lie in (0,1)");
        if (eps == 0.5)
            return 0.0;
        if (eps > 0.5)
            return -qinv(1.0 - eps);

        // Bracket, bisect to a coarse root, then polish with Newton on log Q
        double lo = 0.0, hi = 1.0;
        while (qfunc(hi) > eps)
            hi *= 2.0;
        for (int it = 0; it < 60 && hi - lo > 1e-6; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (qfunc(mid) > eps ? lo : hi) = mid;
        }
        double z = 0.5 * (lo + hi);
        const double log_eps = std::log(eps);
        for (int it = 0; it < 50; ++it)
        {
            const double q = qfunc(z);
            const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
            // d/dz log Q(z) = -pdf / Q
            const double step = (std::log(q) - log_eps) / (pdf / q);
            z += step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z)))
                break;
        }
        return z;
    }

    double rate_penalty_coef(double eps, double blocklength)
    {
        if (!(blocklength >= 1.0))
            throw std::invalid_argument("rate_penalty_coef: blocklength must be >= 1");
        return qinv(eps) / std::sqrt(blocklength);
    }

    double dispersion(double gamma)
    {
        if (gamma < 0.0)
            throw std::invalid_argument("dispersion: negative SINR");
        // gamma (gamma + 2) / (1 + gamma)^2, no cancellation at small SINR
        const double inv = 1.0 / (1.0 + gamma);
        return kLog2e * kLog2e * gamma * (gamma + 2.0) * inv * inv;
    }

    double slot_rate(double gamma, double beta)
    {
        return std::log1p(gamma) * kLog2e - beta * std::sqrt(dispersion(gamma));
    }

    double rate(const std::vector<double> &gamma_per_slot, double beta)
    {
        double r = 0.0;
        for (double g : gamma_per_slot)
            r += slot_rate(g, beta);
        return r;
    }

    std::vector<std::vector<double>> sinr(const std::vector<CVector> &h, const BeamVectors &W,
                                          const std::vector<double> &sigma2)
    {
        const std::size_t K = h.size();
        if (W.size() != K || sigma2.size() != K)
            throw std::invalid_argument("sinr: user count mismatch");
        const std::size_t L = K ? W[0].size() : 0;
        std::vector<std::vector<double>> g(K, std::vector<double>(L, 0.0));
        for (std::size_t k = 0; k < K; ++k)
        {
            if (!(sigma2[k] > 0.0))
                throw std::invalid_argument("sinr: noise power must be positive");
            for (std::size_t l = 0; l < L; ++l)
            {
                double interf = sigma2[k];
                double sig = 0.0;
                for (std::size_t i = 0; i < K; ++i)
                {
                    if (W[i].size() != L)
                        throw std::invalid_argument("sinr: slot count mismatch");
                    const double x = std::norm(dot(h[k], W[i][l]));
                    (i == k ? sig : interf) += x;
                }
                g[k][l] = sig / interf;
            }
        }
        return g;
    }

    std::vector<std::vector<double>> sinr_lifted(const std::vector<CVector> &h, const BeamMatrices &Omega,
                                                 const std::vector<double> &sigma2)
    {
        const std::size_t K = h.size();
        if (Omega.size() != K || sigma2.size() != K)
            throw std::invalid_argument("sinr_lifted: user count mismatch");
        const std::size_t L = K ? Omega[0].size() : 0;
        std::vector<std::vector<double>> g(K, std::vector<double>(L, 0.0));
        for (std::size_t k = 0; k < K; ++k)
        {
            if (!(sigma2[k] > 0.0))
                throw std::invalid_argument("sinr_lifted: noise power must be positive");
            const CMatrix Hk = CMatrix::outer(h[k], h[k]);
            for (std::size_t l = 0; l < L; ++l)
            {
                double interf = sigma2[k];
                double sig = 0.0;
                for (std::size_t i = 0; i < K; ++i)
                {
                    const double x = trace_inner_real(Hk, Omega[i][l]);
                    (i == k ? sig : interf) += x;
                }
                g[k][l] = sig / interf;
            }
        }
        return g;
    }

    RateTerms rate_terms(const std::vector<std::vector<double>> &gamma, const std::vector<double> &beta)
    {
        if (gamma.size() != beta.size())
            throw std::invalid_argument("rate_terms: user count mismatch");
        RateTerms t;
        t.gamma = gamma;
        t.beta = beta;
        const std::size_t K = gamma.size();
        t.delta.resize(K);
        t.U.assign(K, 0.0);
        t.V.assign(K, 0.0);
        t.R.assign(K, 0.0);
        for (std::size_t k = 0; k < K; ++k)
        {
            for (double g : gamma[k])
            {
                const double d = dispersion(g);
                t.delta[k].push_back(d);
                t.U[k] += std::log2(1.0 + g);
                t.V[k] += beta[k] * std::sqrt(d);
            }
            t.R[k] = t.U[k] - t.V[k];
        }
        return t;
    }

    double transmit_power(const BeamVectors &W)
    {
        double p = 0.0;
        for (const auto &user : W)
            for (const auto &w : user)
                p += norm2(w);
        return p;
    }

    double transmit_power(const BeamMatrices &Omega)
    {
        double p = 0.0;
        for (const auto &user : Omega)
            for (const auto &O : user)
                p += O.trace().real();
        return p;
    }

    double energy_efficiency(const std::vector<double> &rates, double transmit_power, double static_power)
    {
        const double denom = transmit_power + static_power;
        if (!(denom > 0.0))
            throw std::invalid_argument("energy_efficiency: total consumed power must be positive");
        double num = 0.0;
        for (double r : rates)
            num += std::max(r, 0.0);
        return num / denom;
    }

} // namespace irsee
