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
#include "irsee/phase_opt.hpp"
#include "irsee/rankrelax.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace irsee;

namespace
{
    cx cn(std::mt19937_64 &g)
    {
        std::normal_distribution<double> nd;
        return cx(nd(g), nd(g)) * std::sqrt(0.5);
    }

    CVector random_vec(std::mt19937_64 &g, std::size_t n)
    {
        CVector v(n);
        for (auto &z : v)
            z = cn(g);
        return v;
    }

    CVector random_phases(std::mt19937_64 &g, std::size_t n)
    {
        std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
        CVector v(n);
        for (auto &z : v)
            z = std::polar(1.0, u(g));
        return v;
    }

    ChannelSet random_channels(std::mt19937_64 &g, std::size_t M, std::size_t N, std::size_t K)
    {
        ChannelSet c;
        c.H = CMatrix(N, M);
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t m = 0; m < M; ++m)
                c.H(n, m) = cn(g);
        for (std::size_t k = 0; k < K; ++k)
        {
            c.h_irs.push_back(random_vec(g, N));
            c.h_bs.push_back(random_vec(g, M));
        }
        return c;
    }

    double wrap(double a)
    {
        return std::remainder(a, 2.0 * std::numbers::pi);
    }

    Scenario tiny_scenario(std::size_t M, std::size_t N)
    {
        Scenario s;
        s.M = M;
        s.N = N;
        s.K = 1;
        s.L = 1;
        s.deadline = {2};
        s.eps = {1e-7};
        s.r_min = {0.0};
        s.sigma2 = {1.0};
        return s;
    }

    double clamped_sum(const std::vector<double> &r)
    {
        double t = 0.0;
        for (double v : r)
            t += std::max(v, 0.0);
        return t;
    }
} // namespace

TEST_CASE("lifted received power equals the direct expression on random draws")
{
    std::mt19937_64 g(2024);
    std::uniform_int_distribution<int> dm(1, 5), dn(1, 8);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        const std::size_t M = std::size_t(dm(g)), N = std::size_t(dn(g)), K = 2;
        const ChannelSet c = random_channels(g, M, N, K);
        const CVector psi = random_phases(g, N);
        const CVector w = random_vec(g, M);
        const BeamMatrices O{{CMatrix::outer(w, w)}, {CMatrix(M, M)}};
        const LiftedPhaseData d = lift_channels(c, O, {1.0, 1.0});
        const PhaseLift lift = lift_reflection(psi);
        const auto x = lifted_powers(d, lift.E);
        const std::vector<CVector> h = combined_channel(c, psi);
        for (std::size_t k = 0; k < K; ++k)
        {
            const double direct = std::norm(dot(h[k], w));
            worst = std::max(worst, std::abs(x[k][0][0] - direct) / std::max(direct, 1e-300));
            const CMatrix Y = effective_channel(lifting_matrix(c, k), lift.E);
            const double viaY = dot(w, Y * w).real();
            worst = std::max(worst, std::abs(viaY - direct) / std::max(direct, 1e-300));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("single-element lift matches the hand expansion")
{
    ChannelSet c;
    const cx H(0.3, -1.1), hi(0.7, 0.2), hb(-0.4, 0.9), w(1.2, -0.5);
    c.H = CMatrix(1, 1, H);
    c.h_irs = {{hi}};
    c.h_bs = {{hb}};
    const cx psi = std::polar(1.0, 0.83);
    const LiftedPhaseData d = lift_channels(c, {{CMatrix(1, 1, w * std::conj(w))}}, {1.0});
    const auto x = lifted_powers(d, lift_reflection({psi}).E);
    const double oracle = std::norm(std::conj(hi) * psi * H * w + std::conj(hb) * w);
    CHECK(x[0][0][0] == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("without the surface link only the direct path counts")
{
    std::mt19937_64 g(5);
    ChannelSet c = random_channels(g, 3, 4, 1);
    c.H = CMatrix(4, 3);
    const CVector w = random_vec(g, 3);
    const LiftedPhaseData d = lift_channels(c, {{CMatrix::outer(w, w)}}, {1.0});
    const double direct = std::norm(dot(c.h_bs[0], w));
    // the maximally mixed lift and a random rank-one lift
    CHECK(lifted_powers(d, CMatrix::identity(5))[0][0][0] == doctest::Approx(direct).epsilon(1e-12));
    CHECK(lifted_powers(d, lift_reflection(random_phases(g, 4)).E)[0][0][0] ==
          doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("structural count of the reflection sub-problem")
{
    ChannelSet c;
    c.H = CMatrix(1, 1, 1.0);
    c.h_irs = {{cx(0.5, 0.5)}};
    c.h_bs = {{cx(1.0, 0.0)}};
    const Scenario s = tiny_scenario(1, 1);
    const LiftedPhaseData d = lift_channels(c, {{CMatrix(1, 1, 1.0)}}, s.sigma2);
    const CMatrix E = lift_reflection({1.0}).E;
    const SurrogateCoefficients coef = build_surrogate(expansion_point(lifted_powers(d, E), {1.0}), s.eps, s.blocklength);
    P7Layout lay;
    ConicProblem p = assemble_P7(coef, d, smallest_eigvec_basis(E, 1), 1.0, s, &lay);
    CHECK(p.matrix_dims == std::vector<std::size_t>{2});
    int eq = 0;
    for (const auto &con : p.constraints)
        eq += con.rel == Relation::equal ? 1 : 0;
    CHECK(eq == 2);
    CHECK(p.constraints.size() == 2);
    CHECK(p.lmis.size() == 1);
    CHECK(lay.slack != P7Layout::none);

    // without penalty and basis the plain relaxation remains
    p = assemble_P7(coef, d, CMatrix(), 0.0, s, &lay);
    CHECK(p.lmis.empty());
    CHECK(p.num_scalars == 0);
    CHECK(lay.slack == P7Layout::none);
}

TEST_CASE("reflection sub-problem without the surface link returns the direct rate")
{
    std::mt19937_64 g(9);
    ChannelSet c = random_channels(g, 2, 3, 2);
    c.H = CMatrix(3, 2);
    for (auto &h : c.h_bs)
        for (auto &z : h)
            z *= 3.0;
    Scenario s = tiny_scenario(2, 3);
    s.K = 2;
    s.deadline = {2, 2};
    s.eps = {1e-5, 1e-5};
    s.r_min = {0.0, 0.0};
    s.sigma2 = {1.0, 1.0};
    const CVector w1 = random_vec(g, 2), w2 = random_vec(g, 2);
    const BeamMatrices O{{CMatrix::outer(w1, w1)}, {CMatrix::outer(w2, w2)}};
    const LiftedPhaseData d = lift_channels(c, O, s.sigma2);
    const CMatrix E = lift_reflection(CVector(3, 1.0)).E;
    const auto x = lifted_powers(d, E);
    std::vector<double> beta;
    for (double e : s.eps)
        beta.push_back(rate_penalty_coef(e, s.blocklength));
    const SurrogateCoefficients coef = build_surrogate(expansion_point(x, {1.0, 1.0}), beta);
    const ConicSolution sol = solve(assemble_P7(coef, d, CMatrix(), 0.0, s));
    REQUIRE(sol.status == SolveStatus::optimal);
    const std::vector<double> r = true_rates(x, s.sigma2, beta);
    CHECK(sol.objective == doctest::Approx(r[0] + r[1]).epsilon(1e-6));
}

TEST_CASE("unit-modulus recovery")
{
    std::mt19937_64 g(17);
    SUBCASE("exact rank-one lift with a rotated auxiliary entry")
    {
        for (int t = 0; t < 50; ++t)
        {
            const CVector e = random_phases(g, 6);
            CVector v = e;
            v.push_back(1.0);
            const cx rot = std::polar(1.0, 2.0 * t + 0.3);
            for (auto &z : v)
                z *= rot;
            bool zero = true;
            const CVector got = extract_unit_modulus(CMatrix::outer(v, v), &zero);
            CHECK_FALSE(zero);
            double err = 0.0;
            for (std::size_t i = 0; i < e.size(); ++i)
                err = std::max(err, std::abs(got[i] - e[i]));
            CHECK(err <= 1e-8);
        }
    }
    SUBCASE("maximally mixed lift still gives unit modulus")
    {
        const CVector got = extract_unit_modulus(CMatrix::identity(5));
        REQUIRE(got.size() == 4);
        for (const cx &z : got)
            CHECK(std::abs(std::abs(z) - 1.0) <= 1e-15);
    }
    SUBCASE("vanishing auxiliary entry falls back to raw phases")
    {
        const CMatrix E{{1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
        bool zero = false;
        const CVector got = extract_unit_modulus(E, &zero);
        CHECK(zero);
        CHECK(std::abs(got[0] - got[1]) <= 1e-12);
        for (const cx &z : got)
            CHECK(std::abs(std::abs(z) - 1.0) <= 1e-15);
    }
}

TEST_CASE("single-element reflection aligns the two paths")
{
    ChannelSet c;
    const cx H(0.8, 0.6), hi(-0.5, 1.2), hb(0.9, -0.3);
    c.H = CMatrix(1, 1, H);
    c.h_irs = {{hi}};
    c.h_bs = {{hb}};
    Scenario s = tiny_scenario(1, 1);
    s.sigma2 = {0.1};
    const cx w(0.6, 0.2);
    const BeamVectors omega{{{w}}};

    // exhaustive sweep of the true rate over the phase
    const double beta = rate_penalty_coef(s.eps[0], s.blocklength);
    double best_phase = 0.0, best = -1.0;
    const int grid = 10000;
    for (int i = 0; i < grid; ++i)
    {
        const double th = 2.0 * std::numbers::pi * i / grid;
        const double gain = std::norm(std::conj(hi) * std::polar(1.0, th) * H * w + std::conj(hb) * w);
        const double r = slot_rate(gain / s.sigma2[0], beta);
        if (r > best)
        {
            best = r;
            best_phase = th;
        }
    }
    const double formula = std::arg(std::conj(hb) * w) - std::arg(std::conj(hi) * H * w);
    CHECK(std::abs(wrap(best_phase - formula)) <= 2.0 * std::numbers::pi / grid);

    // start from the worst phase so that the step has work to do
    const PhaseResult p = optimize_phases(c, s, omega, lift_reflection({std::polar(1.0, formula + 3.0)}).E);
    REQUIRE(p.lift.reflection.size() == 1);
    CHECK(std::abs(wrap(std::arg(p.lift.reflection[0]) - best_phase)) <= 1e-2);
    CHECK(std::abs(std::abs(p.lift.reflection[0]) - 1.0) <= 1e-15);
}

TEST_CASE("reflection step on default drops")
{
    const PhaseConfig cfg;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        CAPTURE(seed);
        Scenario s = Scenario::defaults(20);
        s.seed = seed;
        const ChannelSet c = generate_channels(s);
        const CVector ones(s.N, 1.0);
        const std::vector<CVector> h = combined_channel(c, ones);
        BeamVectors omega;
        for (const auto &row : mrt_init(h, s))
        {
            omega.emplace_back();
            for (const auto &X : row)
                omega.back().push_back(extract_beamformer(X));
        }
        const PhaseResult p = optimize_phases(c, s, omega, lift_reflection(ones).E, cfg);

        // unit diagonal of the lift behind the answer
        for (std::size_t i = 0; i <= s.N; ++i)
            CHECK(std::abs(p.lift.E(i, i) - 1.0) <= 1e-6);
        for (const cx &z : p.lift.reflection)
            CHECK(std::abs(std::abs(z) - 1.0) <= 1e-14);

        // never worse than the incoming reflection
        BeamformInput in;
        in.scenario = s;
        in.h = h;
        const double incoming = clamped_sum(evaluate(in, omega).rates);
        CHECK(p.sum_rate >= incoming - 1e-4);
        in.h = combined_channel(c, p.lift.reflection);
        CHECK(clamped_sum(evaluate(in, omega).rates) == doctest::Approx(p.sum_rate).epsilon(1e-12));

        // model sum rate across rounds, up to the stopping tolerance
        for (std::size_t r = 1; r < p.report.rows.size(); ++r)
            CHECK(p.report.rows[r].model >= p.report.rows[r - 1].model - cfg.tol);
        CHECK((p.min_rank_ratio >= cfg.rank_threshold || p.report.fallback_events > 0));
    }
}

TEST_CASE("starting at the answer is a fixed point")
{
    Scenario s = Scenario::defaults(8);
    s.seed = 3;
    const ChannelSet c = generate_channels(s);
    const std::vector<CVector> h = combined_channel(c, CVector(s.N, 1.0));
    BeamVectors omega;
    for (const auto &row : mrt_init(h, s))
    {
        omega.emplace_back();
        for (const auto &X : row)
            omega.back().push_back(extract_beamformer(X));
    }
    const PhaseResult first = optimize_phases(c, s, omega, lift_reflection(CVector(s.N, 1.0)).E);
    const PhaseResult again = optimize_phases(c, s, omega, lift_reflection(first.lift.reflection).E);
    REQUIRE_FALSE(again.report.rows.empty());
    CHECK(std::abs(again.report.rows[0].model - first.sum_rate) <= PhaseConfig{}.tol);
    CHECK(again.sum_rate >= first.sum_rate);
}

TEST_CASE("invalid initial lifts are rejected")
{
    Scenario s = Scenario::defaults(4);
    const ChannelSet c = generate_channels(s);
    const BeamVectors omega(s.K, std::vector<CVector>(s.L, CVector(s.M, 0.1)));
    CMatrix E = CMatrix::identity(5);
    E(2, 2) = 2.0;
    CHECK_THROWS_AS(optimize_phases(c, s, omega, E), std::invalid_argument);
    CMatrix F = CMatrix::identity(5);
    F(0, 1) = 3.0;
    F(1, 0) = 3.0;
    CHECK_THROWS_AS(optimize_phases(c, s, omega, F), std::invalid_argument);
    CHECK_THROWS_AS(optimize_phases(c, s, omega, CMatrix::identity(4)), std::invalid_argument);
}
