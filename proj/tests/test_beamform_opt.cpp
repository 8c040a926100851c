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
#include "irsee/beamform_opt.hpp"
#include "irsee/rankrelax.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>

using namespace irsee;

namespace
{
    // Single antenna, single user, single slot, no dispersion penalty
    Scenario scalar_scenario(double p_max)
    {
        Scenario s;
        s.M = 1;
        s.K = 1;
        s.L = 1;
        s.N = 0;
        s.deadline = {2};
        s.eps = {0.5};
        s.r_min = {0.0};
        s.sigma2 = {1.0};
        s.p_max = p_max;
        return s;
    }

    // Maximizer of a smooth concave-enough function on [lo, hi]: grid then Newton on the derivative
    double argmax_1d(const std::function<double(double)> &f, double lo, double hi)
    {
        const int n = 20000;
        double best = lo, fbest = f(lo);
        for (int i = 1; i <= n; ++i)
        {
            const double x = lo + (hi - lo) * i / n;
            if (f(x) > fbest)
            {
                fbest = f(x);
                best = x;
            }
        }
        if (best == lo || best == hi)
            return best;
        const double h = 1e-5;
        for (int it = 0; it < 50; ++it)
        {
            const double d1 = (f(best + h) - f(best - h)) / (2 * h);
            const double d2 = (f(best + h) - 2 * f(best) + f(best - h)) / (h * h);
            if (!(d2 < 0.0))
                break;
            const double next = std::clamp(best - d1 / d2, lo, hi);
            if (std::abs(next - best) < 1e-13)
                break;
            best = next;
        }
        return best;
    }
} // namespace

TEST_CASE("structural count of the beamformer sub-problem")
{
    Scenario s = scalar_scenario(1.0);
    s.M = 2;
    const std::vector<CVector> h{{1.0, cx(0.0, 1.0)}};
    const std::vector<CMatrix> Hn = lifted_channels(h, s.sigma2);
    const BeamMatrices O{{CMatrix::identity(2) * 0.5}};
    const SurrogateCoefficients c = build_surrogate(expansion_point(lifted_powers(Hn, O), {1.0}), {0.0});
    const std::vector<std::vector<CMatrix>> bases{{smallest_eigvec_basis(O[0][0], 1)}};
    ConicProblem p = assemble_P5(c, Hn, 0.0, 1.0, bases, s, 1.0);
    CHECK(p.matrix_dims.size() == 1);
    CHECK(p.num_scalars == 1);
    CHECK(p.constraints.size() == 1);
    CHECK(p.lmis.size() == 1);

    s.r_min = {0.5};
    p = assemble_P5(c, Hn, 0.0, 1.0, bases, s, 1.0);
    CHECK(p.constraints.size() == 2);

    // a user whose deadline is the first slot gets no variable in the second one
    Scenario s2 = Scenario::defaults(4);
    s2.deadline = {2, 3, 3, 3};
    const std::vector<CVector> h2(s2.K, CVector(s2.M, 1.0));
    const std::vector<CMatrix> Hn2 = lifted_channels(h2, s2.sigma2);
    const BeamMatrices O2 = mrt_init(h2, s2);
    const SurrogateCoefficients c2 = build_surrogate(expansion_point(lifted_powers(Hn2, O2), std::vector<double>(4, 1.0)),
                                                     s2.eps, s2.blocklength);
    const std::vector<std::vector<CMatrix>> none(s2.K, std::vector<CMatrix>(s2.L));
    P5Layout lay;
    p = assemble_P5(c2, Hn2, 0.0, 0.0, none, s2, s2.static_power(), &lay);
    CHECK(p.matrix_dims.size() == 7);
    CHECK(lay.var[0][1] == P5Layout::none);
    CHECK(p.lmis.empty());
}

TEST_CASE("objective reduces to the model sum rate without price and penalty")
{
    Scenario s = Scenario::defaults(4);
    s.eps.assign(s.K, 0.5);
    const ChannelSet ch = generate_channels(s);
    const std::vector<CVector> h = combined_channel(ch, CVector(s.N, 1.0));
    const std::vector<CMatrix> Hn = lifted_channels(h, s.sigma2);
    const BeamMatrices O = mrt_init(h, s);
    const SurrogateCoefficients c =
        build_surrogate(expansion_point(lifted_powers(Hn, O), std::vector<double>(s.K, 1.0)), s.eps, s.blocklength);
    const std::vector<std::vector<CMatrix>> none(s.K, std::vector<CMatrix>(s.L));
    P5Layout lay;
    const ConicProblem p = assemble_P5(c, Hn, 0.0, 0.0, none, s, s.static_power(), &lay);

    // evaluate at a point away from the expansion point
    BeamMatrices Y = O;
    std::vector<CMatrix> X(p.matrix_dims.size());
    for (std::size_t k = 0; k < s.K; ++k)
        for (std::size_t l = 0; l < s.L; ++l)
        {
            Y[k][l] = O[k][l] * (0.5 + 0.3 * double(k + l));
            X[lay.var[k][l]] = Y[k][l];
        }
    double model = 0.0;
    for (double r : eval_surrogate(c, lifted_powers(Hn, Y)))
        model += r;
    const double obj = p.affine_objective(X, {});
    CHECK(obj == doctest::Approx(model).epsilon(1e-10));
}

TEST_CASE("fixed-parameter linearized ascent reaches the scalar optimum")
{
    const Scenario s = scalar_scenario(5.0);
    const double rho = 0.5, pc = 1.0;
    const std::vector<CMatrix> Hn = lifted_channels({{1.0}}, s.sigma2);
    const std::vector<std::vector<CMatrix>> none{{CMatrix()}};

    BeamMatrices O{{CMatrix::identity(1)}};
    for (int it = 0; it < 300; ++it)
    {
        const SurrogateCoefficients c = build_surrogate(expansion_point(lifted_powers(Hn, O), {1.0}), {0.0});
        ConicProblem p = assemble_P5(c, Hn, rho, 0.0, none, s, pc);
        p.prox_weight = {1.0 / std::log(2.0)};
        p.prox_center = {O[0][0]};
        const ConicSolution sol = solve(p);
        REQUIRE(sol.status == SolveStatus::optimal);
        O[0][0] = sol.X[0];
    }
    const double p_star = argmax_1d([&](double p) { return std::log2(1.0 + p) - rho * (p + pc); }, 0.0, s.p_max);
    CHECK(p_star == doctest::Approx(1.0 / (rho * std::log(2.0)) - 1.0).epsilon(1e-8));
    CHECK(std::abs(O[0][0](0, 0).real() - p_star) <= 1e-4);
}

TEST_CASE("Dinkelbach matches the scalar fractional optimum")
{
    const Scenario s = scalar_scenario(5.0);
    BeamformInput in;
    in.h = {{cx(0.6, 0.8) * 2.0}};
    in.scenario = s;
    in.static_power = 1.0;
    const double g = norm2(in.h[0]);
    const BeamformResult r = dinkelbach_sca(in, mrt_init(in.h, s));
    CHECK(r.report.status == RunStatus::converged);

    const auto ee = [&](double p) { return std::log2(1.0 + g * p) / (p + in.static_power); };
    const double p_star = argmax_1d(ee, 0.0, s.p_max);
    CHECK(std::abs(r.ee - ee(p_star)) <= 1e-4);
    CHECK(r.set.rho <= ee(p_star) + 1e-9);
    CHECK(std::abs(r.power - p_star) <= 1e-2);
    for (std::size_t d = 1; d < r.rho_trace.size(); ++d)
        CHECK(r.rho_trace[d] >= r.rho_trace[d - 1] - 1e-9);
}

TEST_CASE("maximum-ratio initialization")
{
    Scenario s = Scenario::defaults(8);
    s.deadline = {3, 2, 3, 1};
    const ChannelSet ch = generate_channels(s);
    const std::vector<CVector> h = combined_channel(ch, CVector(s.N, 1.0));
    const BeamMatrices O = mrt_init(h, s);
    double p = 0.0;
    for (std::size_t k = 0; k < s.K; ++k)
        for (std::size_t l = 0; l < s.L; ++l)
        {
            const double tr = O[k][l].trace().real();
            p += tr;
            if (!s.slot_active(k, l))
            {
                CHECK(tr == 0.0);
                continue;
            }
            CHECK(tr == doctest::Approx(s.p_max / 5.0));
            // aligned with the channel
            CHECK(trace_inner_real(CMatrix::outer(h[k], h[k]), O[k][l]) == doctest::Approx(norm2(h[k]) * tr));
        }
    CHECK(p == doctest::Approx(s.p_max));
}

TEST_CASE("beamformer extraction")
{
    const CVector w{cx(1.0, 2.0), cx(-0.5, 0.1), 3.0};
    const CVector r = extract_beamformer(CMatrix::outer(w, w));
    CHECK(std::abs(dot(w, r)) == doctest::Approx(norm2(w)).epsilon(1e-10));

    const CVector z = extract_beamformer(CMatrix(3, 3));
    CHECK(norm(z) == 0.0);

    Scenario s = scalar_scenario(4.0);
    s.M = 2;
    BeamformInput in;
    in.h = {{1.0, cx(0.3, -0.2)}};
    in.scenario = s;
    in.static_power = 1.0;
    const Extraction ex = extract_beamformers(in, {{CMatrix::identity(2)}}, BeamformConfig{});
    CHECK(ex.fallback);
    CHECK(ex.fallback_streams == 1);
    CHECK(norm2(ex.omega[0][0]) == doctest::Approx(2.0).epsilon(1e-12));
    const Evaluation e = evaluate(in, ex.omega);
    CHECK(e.power <= s.p_max);

    const Extraction ex1 = extract_beamformers(in, {{CMatrix::outer(in.h[0], in.h[0])}}, BeamformConfig{});
    CHECK_FALSE(ex1.fallback);

    // a full-rank stream at solver-residue power is off, not a rank failure
    const Extraction ex2 = extract_beamformers(in, {{CMatrix::identity(2) * 1e-12}}, BeamformConfig{});
    CHECK_FALSE(ex2.fallback);
    BeamformConfig strict;
    strict.silent_power = 0.0;
    CHECK(extract_beamformers(in, {{CMatrix::identity(2) * 1e-12}}, strict).fallback);
}

TEST_CASE("Dinkelbach on random drops")
{
    for (std::uint64_t seed : {11u, 12u})
    {
        Scenario s = Scenario::defaults(10);
        s.seed = seed;
        const ChannelSet ch = generate_channels(s);
        BeamformInput in;
        in.h = combined_channel(ch, CVector(s.N, 1.0));
        in.scenario = s;
        in.static_power = s.static_power();
        const BeamformResult r = dinkelbach_sca(in, mrt_init(in.h, s));
        INFO("seed " << seed);
        REQUIRE(r.report.status != RunStatus::solver_failure);
        for (std::size_t d = 1; d < r.rho_trace.size(); ++d)
            CHECK(r.rho_trace[d] >= r.rho_trace[d - 1] - 1e-9);
        if (r.report.status == RunStatus::converged)
            CHECK(std::abs(r.report.rows.back().objective) <= 1e-3);
        if (r.report.status != RunStatus::infeasible)
            for (std::size_t k = 0; k < s.K; ++k)
                CHECK(r.rates[k] >= s.r_min[k] - 1e-4);
        CHECK(r.power <= s.p_max + 1e-6);
        CHECK((r.min_rank_ratio >= 0.99 || r.fallback));
        CHECK(r.ee == doctest::Approx(evaluate(in, r.set.omega).ee).epsilon(1e-12));
    }
}
