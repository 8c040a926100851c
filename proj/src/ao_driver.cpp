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
#include "irsee/ao_driver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace irsee
{
    namespace
    {
        void check_config(const AOConfig &c)
        {
            if (c.max_outer < 1 || !(c.tol > 0.0))
                throw std::invalid_argument("AOConfig: invalid setting");
        }

        BeamformInput make_input(const ChannelSet &c, const Scenario &s, const CVector &psi, double static_power)
        {
            BeamformInput in;
            in.h = combined_channel(c, psi);
            in.scenario = s;
            in.static_power = static_power;
            return in;
        }

        BeamMatrices lift_vectors(const BeamVectors &omega)
        {
            BeamMatrices O(omega.size());
            for (std::size_t k = 0; k < omega.size(); ++k)
                for (const auto &w : omega[k])
                    O[k].push_back(CMatrix::outer(w, w));
            return O;
        }

        void finish(AOResult &r, const Evaluation &e)
        {
            r.rates = e.rates;
            r.ee = e.ee;
            r.power = e.power;
            r.sum_rate = 0.0;
            for (double v : e.rates)
                r.sum_rate += std::max(v, 0.0);
        }

        // Beamformer design alone for a fixed combined channel
        AOResult beamformers_only(Scheme scheme, const ChannelSet &c, const Scenario &s, const CVector &psi,
                                  double static_power, const AOConfig &cfg)
        {
            check_config(cfg);
            AOResult res;
            res.scheme = scheme;
            res.static_power = static_power;
            res.phases = lift_reflection(psi);
            const BeamformInput in = make_input(c, s, psi, static_power);
            const BeamformResult bf = dinkelbach_sca(in, mrt_init(in.h, s), cfg.beamform);
            res.reports.push_back(bf.report);
            res.beams = bf.set;
            res.outer_iters = 1;
            res.min_rank_ratio = bf.min_rank_ratio;
            res.fallback = bf.fallback;
            const Evaluation e = evaluate(in, bf.set.omega);
            finish(res, e);
            res.ee_trace.push_back(e.ee);
            res.status = bf.report.status;
            return res;
        }
    } // namespace

    const char *to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::proposed:
            return "proposed";
        case Scheme::fixed_irs:
            return "fixed-irs";
        case Scheme::no_irs:
            return "no-irs";
        }
        return "unknown";
    }

    Scheme scheme_from_string(const std::string &name)
    {
        for (Scheme s : {Scheme::proposed, Scheme::fixed_irs, Scheme::no_irs})
            if (name == to_string(s))
                return s;
        throw std::invalid_argument("unknown scheme: " + name);
    }

    Evaluation evaluate_design(const ChannelSet &c, const Scenario &s, const BeamVectors &omega, const CVector &psi)
    {
        return evaluate(make_input(c, s, psi, s.static_power()), omega);
    }

    AOResult alternating_optimize(const ChannelSet &c, const Scenario &s, const AOConfig &cfg)
    {
        check_config(cfg);
        s.validate();
        const double static_power = s.static_power();
        auto feasible = [&](const Evaluation &e) { return e.qos_violation <= cfg.beamform.qos_slack; };

        AOResult res;
        res.scheme = Scheme::proposed;
        res.static_power = static_power;
        CVector psi(c.H.rows(), 1.0);
        res.phases = lift_reflection(psi);

        BeamformInput in = make_input(c, s, psi, static_power);
        const BeamformResult first = dinkelbach_sca(in, mrt_init(in.h, s), cfg.beamform);
        res.reports.push_back(first.report);
        res.beams = first.set;
        Evaluation cur = evaluate(in, first.set.omega);
        double bf_rank = first.min_rank_ratio, ph_rank = 1.0;
        bool bf_fallback = first.fallback, ph_fallback = false;
        res.outer_iters = 1;
        if (first.report.status == RunStatus::infeasible)
        {
            res.status = RunStatus::infeasible;
            res.min_rank_ratio = bf_rank;
            res.fallback = bf_fallback;
            finish(res, cur);
            res.ee_trace.push_back(cur.ee);
            return res;
        }
        res.ee_trace.push_back(cur.ee);

        res.status = RunStatus::iteration_cap;
        for (int round = 1; round <= cfg.max_outer; ++round)
        {
            res.outer_iters = round;
            const double start = cur.ee;
            if (round > 1)
            {
                BeamformConfig bc = cfg.beamform;
                if (cfg.warm_rho && feasible(cur))
                    bc.rho0 = cur.ee;
                in = make_input(c, s, psi, static_power);
                const BeamformResult b = dinkelbach_sca(in, lift_vectors(res.beams.omega), bc);
                res.reports.push_back(b.report);
                const Evaluation e = evaluate(in, b.set.omega);
                // keep the previous beamformers when the new design does not help
                if (b.report.status != RunStatus::infeasible && feasible(e) && e.ee >= cur.ee)
                {
                    res.beams = b.set;
                    cur = e;
                    bf_rank = b.min_rank_ratio;
                    bf_fallback = b.fallback;
                    res.ee_trace.push_back(cur.ee);
                }
            }

            if (!psi.empty())
            {
                const PhaseResult p = optimize_phases(c, s, res.beams.omega, lift_reflection(psi).E, cfg.phase);
                res.reports.push_back(p.report);
                if (!p.kept_incoming)
                {
                    const Evaluation e = evaluate_design(c, s, res.beams.omega, p.lift.reflection);
                    if (feasible(e) && e.ee >= cur.ee)
                    {
                        psi = p.lift.reflection;
                        res.phases = p.lift;
                        cur = e;
                        ph_rank = p.min_rank_ratio;
                        ph_fallback = p.fallback;
                        res.ee_trace.push_back(cur.ee);
                    }
                }
            }

            if (round > 1 && cur.ee - start <= cfg.tol)
            {
                res.status = RunStatus::converged;
                break;
            }
        }
        res.min_rank_ratio = std::min(bf_rank, ph_rank);
        res.fallback = bf_fallback || ph_fallback;
        finish(res, cur);
        return res;
    }

    AOResult baseline_fixed_irs(const ChannelSet &c, const Scenario &s, const AOConfig &cfg)
    {
        s.validate();
        CVector psi(c.H.rows(), 1.0);
        if (cfg.random_fixed_phases)
        {
            std::mt19937_64 eng(cfg.fixed_phase_seed);
            std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
            for (auto &z : psi)
                z = std::polar(1.0, u(eng));
        }
        return beamformers_only(Scheme::fixed_irs, c, s, psi, s.static_power(), cfg);
    }

    AOResult baseline_no_irs(const ChannelSet &c, const Scenario &s, const AOConfig &cfg)
    {
        s.validate();
        ChannelSet direct = c;
        direct.H = CMatrix(0, c.H.cols());
        for (auto &h : direct.h_irs)
            h.clear();
        AOResult r = beamformers_only(Scheme::no_irs, direct, s, CVector(), s.p_circuit, cfg);
        return r;
    }

    AOResult run_scheme(Scheme scheme, const ChannelSet &c, const Scenario &s, const AOConfig &cfg)
    {
        switch (scheme)
        {
        case Scheme::proposed:
            return alternating_optimize(c, s, cfg);
        case Scheme::fixed_irs:
            return baseline_fixed_irs(c, s, cfg);
        case Scheme::no_irs:
            return baseline_no_irs(c, s, cfg);
        }
        throw std::invalid_argument("run_scheme: unknown scheme");
    }

} // namespace irsee
