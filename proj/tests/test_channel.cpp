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

#include "doctest.h"

#include <cmath>

using namespace irsee;

TEST_CASE("path loss in metres")
{
    CHECK(path_loss_db(1.0) == doctest::Approx(35.3));
    CHECK(path_loss_db(50.0) == doctest::Approx(99.18).epsilon(1e-4));
    CHECK(path_loss_db(100.0) == doctest::Approx(110.5));
    CHECK(path_gain(100.0) == doctest::Approx(std::pow(10.0, -11.05)));
    CHECK_THROWS_AS(path_loss_db(0.0), std::invalid_argument);
    for (double d : {3.0, 17.0, 80.0})
        CHECK(path_loss_db(2.5 * d) - path_loss_db(d) == doctest::Approx(37.6 * std::log10(2.5)));
}

TEST_CASE("noise power from density")
{
    CHECK(noise_power(-174.0, 1e6) == doctest::Approx(3.981071705534973e-15).epsilon(1e-12));
}

TEST_CASE("default scenario")
{
    const Scenario s = Scenario::defaults(30);
    CHECK(s.N == 30);
    CHECK(s.K == 4);
    CHECK(s.deadline.size() == 4);
    CHECK(s.deadline[0] == s.L + 1);
    CHECK(s.static_power() == doctest::Approx(0.1 + 30 * 5e-3 + 0.5));
    CHECK_NOTHROW(s.validate());
    Scenario bad = s;
    bad.eps[1] = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.deadline[0] = s.L + 2;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("channel drops are deterministic and sized")
{
    Scenario s = Scenario::defaults(20);
    s.seed = 42;
    const ChannelSet a = generate_channels(s);
    const ChannelSet b = generate_channels(s);
    CHECK(a.H == b.H);
    CHECK(a.h_irs == b.h_irs);
    CHECK(a.h_bs == b.h_bs);
    CHECK(a.H.rows() == 20);
    CHECK(a.H.cols() == 5);
    CHECK(a.h_irs.size() == 4);
    CHECK(a.h_bs[3].size() == 5);
    s.seed = 43;
    CHECK_FALSE(generate_channels(s).H == a.H);

    s.N = 0;
    const ChannelSet c = generate_channels(s);
    CHECK(c.H.rows() == 0);
    CHECK(c.h_irs[0].empty());
    CHECK(c.h_bs[0].size() == 5);
}

TEST_CASE("average channel power follows the path loss")
{
    Scenario s = Scenario::defaults(2);
    s.user_pos = {{30.0, 40.0}, {14.0, 48.0}, {0.0, 50.0}, {40.0, 30.0}};
    double acc[4] = {0, 0, 0, 0};
    const int draws = 10000;
    for (int d = 0; d < draws; ++d)
    {
        s.seed = std::uint64_t(d + 1);
        const ChannelSet c = generate_channels(s);
        for (std::size_t k = 0; k < 4; ++k)
            acc[k] += norm2(c.h_bs[k]) / double(s.M);
    }
    const double g = path_gain(50.0);
    for (double a : acc)
        CHECK(a / draws == doctest::Approx(g).epsilon(0.03));
}

TEST_CASE("combined channel")
{
    Scenario s = Scenario::defaults(6);
    s.seed = 5;
    const ChannelSet c = generate_channels(s);
    const auto h0 = combined_channel(c, CVector(6, 0.0));
    CHECK(h0 == c.h_bs);

    ChannelSet z = c;
    z.H = CMatrix(6, s.M);
    CHECK(combined_channel(z, CVector(6, 1.0)) == c.h_bs);

    // scalar hand expansion: h^H = conj(h_irs) psi H + conj(h_bs)
    ChannelSet one;
    one.H = CMatrix{{cx(0.3, -0.2)}};
    one.h_irs = {CVector{cx(1.0, 2.0)}};
    one.h_bs = {CVector{cx(-0.5, 0.1)}};
    const cx psi(0.6, 0.8);
    const cx hh = std::conj(one.h_irs[0][0]) * psi * one.H(0, 0) + std::conj(one.h_bs[0][0]);
    CHECK(std::abs(combined_channel(one, CVector{psi})[0][0] - std::conj(hh)) < 1e-15);

    // the reflected part is linear in the reflection vector
    ChannelSet r = c;
    for (auto &v : r.h_bs)
        v.assign(v.size(), 0.0);
    CVector p1(6), p2(6);
    for (std::size_t n = 0; n < 6; ++n)
    {
        p1[n] = std::polar(1.0, 0.3 * double(n));
        p2[n] = std::polar(0.5, -0.7 * double(n));
    }
    const double a = 0.4, b = 0.3;
    CVector mix(6);
    for (std::size_t n = 0; n < 6; ++n)
        mix[n] = a * p1[n] + b * p2[n];
    const auto hm = combined_channel(r, mix);
    const auto h1 = combined_channel(r, p1);
    const auto h2 = combined_channel(r, p2);
    for (std::size_t k = 0; k < s.K; ++k)
        for (std::size_t m = 0; m < s.M; ++m)
        {
            const cx rhs = a * h1[k][m] + b * h2[k][m];
            CHECK(std::abs(hm[k][m] - rhs) <= 1e-12 * std::abs(rhs));
        }

    CHECK(combined_channel(r, CMatrix::diag(p1)) == h1);
    CHECK_THROWS_AS(combined_channel(c, CVector(5, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(combined_channel(c, CVector(6, 2.0)), std::invalid_argument);
}
