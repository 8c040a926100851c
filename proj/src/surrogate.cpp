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

#include "irsee/surrogate.hpp"

#include <cmath>
#include <stdexcept>

namespace irsee
{
    namespace
    {
        void fill_derived(ExpansionPoint &ep)
        {
            ep.b.assign(ep.K, std::vector<double>(ep.L, 0.0));
            ep.gamma = ep.b;
            ep.delta = ep.b;
            for (std::size_t k = 0; k < ep.K; ++k)
            {
                if (!(ep.sigma2[k] > 0.0))
                    throw std::invalid_argument("expansion_point: noise power must be positive");
                for (std::size_t l = 0; l < ep.L; ++l)
                {
                    double b = ep.sigma2[k];
                    for (std::size_t i = 0; i < ep.K; ++i)
                    {
                        if (ep.x[k][i][l] < 0.0)
                            throw std::invalid_argument("expansion_point: negative received power");
                        b += ep.x[k][i][l];
                    }
                    const double s = ep.x[k][k][l];
                    if (!(b > s))
                        throw std::invalid_argument("expansion_point: total power does not exceed own power");
                    ep.b[k][l] = b;
                    ep.gamma[k][l] = s / (b - s);
                    ep.delta[k][l] = dispersion(ep.gamma[k][l]);
                }
            }
        }
    } // namespace

    ExpansionPoint expansion_point(const std::vector<std::vector<std::vector<double>>> &x,
                                   const std::vector<double> &sigma2)
    {
        ExpansionPoint ep;
        ep.K = x.size();
        ep.L = ep.K ? x[0][0].size() : 0;
        if (sigma2.size() != ep.K)
            throw std::invalid_argument("expansion_point: user count mismatch");
        for (const auto &xk : x)
        {
            if (xk.size() != ep.K)
                throw std::invalid_argument("expansion_point: stream count mismatch");
            for (const auto &xki : xk)
                if (xki.size() != ep.L)
                    throw std::invalid_argument("expansion_point: slot count mismatch");
        }
        ep.x = x;
        ep.sigma2 = sigma2;
        fill_derived(ep);
        return ep;
    }

    ExpansionPoint expansion_point(const std::vector<CVector> &h, const BeamVectors &W,
                                   const std::vector<double> &sigma2)
    {
        const std::size_t K = h.size();
        if (W.size() != K)
            throw std::invalid_argument("expansion_point: user count mismatch");
        const std::size_t L = K ? W[0].size() : 0;
        std::vector<std::vector<std::vector<double>>> x(K, std::vector<std::vector<double>>(K, std::vector<double>(L)));
        std::vector<std::vector<std::vector<cx>>> a(K, std::vector<std::vector<cx>>(K, std::vector<cx>(L)));
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t i = 0; i < K; ++i)
                for (std::size_t l = 0; l < L; ++l)
                {
                    a[k][i][l] = dot(h[k], W[i][l]);
                    x[k][i][l] = std::norm(a[k][i][l]);
                }
        ExpansionPoint ep = expansion_point(x, sigma2);
        ep.a = std::move(a);
        return ep;
    }

    std::vector<std::vector<std::vector<double>>> received_powers(const std::vector<CVector> &h,
                                                                  const BeamMatrices &Omega)
    {
        const std::size_t K = h.size();
        if (Omega.size() != K)
            throw std::invalid_argument("received_powers: user count mismatch");
        const std::size_t L = K ? Omega[0].size() : 0;
        std::vector<std::vector<std::vector<double>>> x(K, std::vector<std::vector<double>>(K, std::vector<double>(L)));
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t i = 0; i < K; ++i)
                for (std::size_t l = 0; l < L; ++l)
                {
                    const CVector Oh = Omega[i][l] * h[k];
                    x[k][i][l] = std::max(dot(h[k], Oh).real(), 0.0);
                }
        return x;
    }

    ExpansionPoint expansion_point_lifted(const std::vector<CVector> &h, const BeamMatrices &Omega,
                                          const std::vector<double> &sigma2)
    {
        return expansion_point(received_powers(h, Omega), sigma2);
    }

    SurrogateCoefficients build_surrogate(const ExpansionPoint &ep, const std::vector<double> &beta)
    {
        if (beta.size() != ep.K)
            throw std::invalid_argument("build_surrogate: user count mismatch");
        const double ln2 = std::log(2.0);
        SurrogateCoefficients c;
        c.K = ep.K;
        c.L = ep.L;
        c.beta = beta;
        c.sigma2 = ep.sigma2;
        c.kl.assign(ep.K, std::vector<SlotCoefficients>(ep.L));
        for (std::size_t k = 0; k < ep.K; ++k)
            for (std::size_t l = 0; l < ep.L; ++l)
            {
                SlotCoefficients &sc = c.kl[k][l];
                const double s0 = ep.x[k][k][l];
                const double b0 = ep.b[k][l];
                const double i0 = b0 - s0;
                const double g0 = ep.gamma[k][l];
                const double gf = std::max(g0, kGammaFloor);

                // Shannon part: log2(b) - log2(b - s), tangent plane at (s0, b0)
                const double u_s = 1.0 / (i0 * ln2);
                const double u_b = -g0 / (b0 * ln2);

                // Dispersion part: beta * log2(e) * sqrt(1 - ((b - s)/b)^2)
                sc.rho = beta[k] * kLog2e / (b0 * std::sqrt(gf * gf + 2.0 * gf));
                const double v_s = sc.rho;
                const double v_b = -sc.rho * s0 / b0;

                sc.gamma_coef = g0 / (b0 * ln2);
                sc.w_signal = u_s - v_s;
                sc.w_total = u_b - v_b;
                sc.xi = slot_rate(g0, beta[k]);
                sc.s0 = s0;
                sc.b0 = b0;
            }
        return c;
    }

    SurrogateCoefficients build_surrogate(const ExpansionPoint &ep, const std::vector<double> &eps,
                                          double blocklength)
    {
        std::vector<double> beta;
        for (double e : eps)
            beta.push_back(rate_penalty_coef(e, blocklength));
        return build_surrogate(ep, beta);
    }

    std::vector<double> eval_surrogate(const SurrogateCoefficients &c,
                                       const std::vector<std::vector<std::vector<double>>> &x)
    {
        if (x.size() != c.K)
            throw std::invalid_argument("eval_surrogate: user count mismatch");
        std::vector<double> r(c.K, 0.0);
        for (std::size_t k = 0; k < c.K; ++k)
            for (std::size_t l = 0; l < c.L; ++l)
            {
                double b = c.sigma2[k];
                for (std::size_t i = 0; i < c.K; ++i)
                    b += x[k][i][l];
                r[k] += c.kl[k][l].value(x[k][k][l], b);
            }
        return r;
    }

    std::vector<double> eval_surrogate(const SurrogateCoefficients &c, const std::vector<CVector> &h,
                                       const BeamMatrices &Omega)
    {
        return eval_surrogate(c, received_powers(h, Omega));
    }

    std::vector<double> true_rates(const std::vector<std::vector<std::vector<double>>> &x,
                                   const std::vector<double> &sigma2, const std::vector<double> &beta)
    {
        const std::size_t K = x.size();
        std::vector<double> r(K, 0.0);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < x[k][k].size(); ++l)
            {
                double interf = sigma2[k];
                for (std::size_t i = 0; i < K; ++i)
                    if (i != k)
                        interf += x[k][i][l];
                r[k] += slot_rate(x[k][k][l] / interf, beta[k]);
            }
        return r;
    }

} // namespace irsee
