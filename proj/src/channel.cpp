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

#include "irsee/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace irsee
{
    Scenario Scenario::defaults(std::size_t N)
    {
        Scenario s;
        s.N = N;
        s.deadline.assign(s.K, s.L + 1);
        s.eps.assign(s.K, 1e-7);
        s.r_min.assign(s.K, 1.6);
        s.sigma2.assign(s.K, noise_power(-174.0, 1e6));
        return s;
    }

    void Scenario::validate() const
    {
        if (M == 0 || K == 0 || L == 0)
            throw std::invalid_argument("Scenario: M, K and L must be positive");
        if (deadline.size() != K || eps.size() != K || r_min.size() != K || sigma2.size() != K)
            throw std::invalid_argument("Scenario: per-user vectors must have K entries");
        for (std::size_t k = 0; k < K; ++k)
        {
            if (deadline[k] < 1 || deadline[k] > L + 1)
                throw std::invalid_argument("Scenario: deadline outside 1..L+1");
            if (!(eps[k] > 0.0 && eps[k] < 1.0))
                throw std::invalid_argument("Scenario: error probability outside (0,1)");
            if (!(sigma2[k] > 0.0))
                throw std::invalid_argument("Scenario: noise power must be positive");
        }
        if (!(p_max > 0.0))
            throw std::invalid_argument("Scenario: p_max must be positive");
        if (p_irs < 0.0 || p_element < 0.0 || p_circuit < 0.0)
            throw std::invalid_argument("Scenario: powers must be non-negative");
        if (!(blocklength >= 1.0))
            throw std::invalid_argument("Scenario: blocklength must be >= 1");
        if (!user_pos.empty() && user_pos.size() != K)
            throw std::invalid_argument("Scenario: user positions must be empty or have K entries");
        if (!(area_max[0] > area_min[0] && area_max[1] > area_min[1]))
            throw std::invalid_argument("Scenario: empty user area");
    }

    double Scenario::static_power() const
    {
        return p_irs + static_cast<double>(N) * p_element + p_circuit;
    }

    double noise_power(double density_dbm_hz, double bandwidth_hz)
    {
        const double dbm = density_dbm_hz + 10.0 * std::log10(bandwidth_hz);
        return std::pow(10.0, dbm / 10.0) * 1e-3;
    }

    double path_loss_db(double d)
    {
        if (!(d > 0.0))
            throw std::invalid_argument("path_loss_db: distance must be positive");
        return 35.3 + 37.6 * std::log10(d);
    }

    double path_gain(double d)
    {
        return std::pow(10.0, -path_loss_db(d) / 10.0);
    }

    namespace
    {
        double distance(const Position &a, const Position &b)
        {
            return std::hypot(a[0] - b[0], a[1] - b[1]);
        }

        struct CNSource
        {
            std::mt19937_64 eng;
            std::normal_distribution<double> nd{0.0, 1.0};
            explicit CNSource(std::uint64_t seed) : eng(seed) {}
            cx operator()()
            {
                const double re = nd(eng);
                const double im = nd(eng);
                return cx(re, im) * std::sqrt(0.5);
            }
        };
    } // namespace

    ChannelSet generate_channels(const Scenario &s)
    {
        s.validate();
        ChannelSet c;
        CNSource cn(s.seed);

        c.user_pos = s.user_pos;
        if (c.user_pos.empty())
        {
            std::uniform_real_distribution<double> ux(s.area_min[0], s.area_max[0]);
            std::uniform_real_distribution<double> uy(s.area_min[1], s.area_max[1]);
            for (std::size_t k = 0; k < s.K; ++k)
            {
                const double x = ux(cn.eng);
                const double y = uy(cn.eng);
                c.user_pos.push_back({x, y});
            }
        }

        const double g_bi = s.N ? std::sqrt(path_gain(distance(s.bs_pos, s.irs_pos))) : 0.0;
        c.H = CMatrix(s.N, s.M);
        for (std::size_t n = 0; n < s.N; ++n)
            for (std::size_t m = 0; m < s.M; ++m)
                c.H(n, m) = g_bi * cn();

        for (std::size_t k = 0; k < s.K; ++k)
        {
            CVector hi(s.N), hb(s.M);
            if (s.N)
            {
                const double g_iu = std::sqrt(path_gain(distance(s.irs_pos, c.user_pos[k])));
                for (auto &z : hi)
                    z = g_iu * cn();
            }
            const double g_bu = std::sqrt(path_gain(distance(s.bs_pos, c.user_pos[k])));
            for (auto &z : hb)
                z = g_bu * cn();
            c.h_irs.push_back(std::move(hi));
            c.h_bs.push_back(std::move(hb));
        }
        return c;
    }

    std::vector<CVector> combined_channel(const ChannelSet &c, const CVector &psi)
    {
        const std::size_t N = c.H.rows(), M = c.h_bs.empty() ? c.H.cols() : c.h_bs[0].size();
        if (psi.size() != N)
            throw std::invalid_argument("combined_channel: reflection vector length mismatch");
        for (const cx &p : psi)
            if (!(std::abs(p) <= 1.0 + 1e-12))
                throw std::invalid_argument("combined_channel: reflection coefficient exceeds unit modulus");
        std::vector<CVector> h;
        for (std::size_t k = 0; k < c.h_bs.size(); ++k)
        {
            if (c.h_bs[k].size() != M || c.h_irs[k].size() != N)
                throw std::invalid_argument("combined_channel: channel dimension mismatch");
            CVector hk = c.h_bs[k];
            // h_k = H^H diag(conj psi) h_irs_k + h_bs_k
            for (std::size_t n = 0; n < N; ++n)
            {
                const cx a = std::conj(psi[n]) * c.h_irs[k][n];
                if (a == cx(0.0, 0.0))
                    continue;
                for (std::size_t m = 0; m < M; ++m)
                    hk[m] += std::conj(c.H(n, m)) * a;
            }
            h.push_back(std::move(hk));
        }
        return h;
    }

    std::vector<CVector> combined_channel(const ChannelSet &c, const CMatrix &Psi)
    {
        const std::size_t N = c.H.rows();
        if (Psi.rows() != N || Psi.cols() != N)
            throw std::invalid_argument("combined_channel: reflection matrix dimension mismatch");
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j && Psi(i, j) != cx(0.0, 0.0))
                    throw std::invalid_argument("combined_channel: reflection matrix must be diagonal");
        return combined_channel(c, Psi.diagonal());
    }

} // namespace irsee
