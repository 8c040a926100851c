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

#ifndef IRSEE_CHANNEL_HPP
#define IRSEE_CHANNEL_HPP

#include "irsee/linalg.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace irsee
{
    using Position = std::array<double, 2>; // metres

    // Static network parameters for one simulated cell
    struct Scenario
    {
        std::size_t M = 5;  // BS antennas
        std::size_t N = 20; // IRS elements
        std::size_t K = 4;  // users
        std::size_t L = 2;  // scheduling slots

        std::vector<std::size_t> deadline;  // per user, 1..L+1; slots l >= deadline (1-based) stay empty
        double blocklength = 250.0;         // symbols per packet
        std::vector<double> eps;            // per-user decoding error probability
        std::vector<double> r_min;          // per-user minimum rate [bits/s/Hz]
        double p_max = 1.0;                 // BS power budget [W]
        std::vector<double> sigma2;         // per-user noise power [W]
        double p_irs = 0.1;                 // IRS static power [W]
        double p_element = 5e-3;            // per-element IRS power [W]
        double p_circuit = 0.5;             // BS circuit power [W]

        Position bs_pos{0.0, 0.0};
        Position irs_pos{50.0, 0.0};
        std::vector<Position> user_pos;     // empty: drawn uniformly inside the user area per drop
        Position area_min{0.0, 0.0};
        Position area_max{100.0, 100.0};

        std::uint64_t seed = 1;

        // Builds the default cell with per-user vectors filled
        static Scenario defaults(std::size_t N = 20);

        // Throws std::invalid_argument on inconsistent fields
        void validate() const;

        // Whether user k may be served in 0-based slot l
        bool slot_active(std::size_t k, std::size_t l) const { return l + 1 < deadline.at(k); }

        // P_IRS + N P_d + P_c
        double static_power() const;
    };

    // Noise power [W] for a density in dBm/Hz over a bandwidth in Hz
    double noise_power(double density_dbm_hz, double bandwidth_hz);

    // Distance-dependent attenuation [dB], distance in metres
    double path_loss_db(double d);

    // Linear power gain 10^(-dB/10)
    double path_gain(double d);

    struct ChannelSet
    {
        CMatrix H;                   // N x M, BS to IRS
        std::vector<CVector> h_irs;  // K vectors of length N, IRS to user
        std::vector<CVector> h_bs;   // K vectors of length M, BS to user
        std::vector<Position> user_pos;
    };

    ChannelSet generate_channels(const Scenario &s);

    // h_k with h_k^H = h_irs_k^H diag(psi) H + h_bs_k^H
    std::vector<CVector> combined_channel(const ChannelSet &c, const CVector &psi);
    std::vector<CVector> combined_channel(const ChannelSet &c, const CMatrix &Psi);

} // namespace irsee

#endif
