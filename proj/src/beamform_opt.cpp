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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace irsee
{
    namespace
    {
        using Powers = std::vector<std::vector<std::vector<double>>>;

        std::vector<double> penalty_coefs(const Scenario &s)
        {
            std::vector<double> beta;
            for (double e : s.eps)
                beta.push_back(rate_penalty_coef(e, s.blocklength));
            return beta;
        }

        // Streams carrying less than `silent` watts are switched off and count as rank one
        double stream_rank_ratio(const CMatrix &X, double silent)
        {
            return X.trace().real() <= silent ? 1.0 : rank_one_ratio_or_one(X);
        }

        double min_rank_ratio(const BeamMatrices &Omega, double silent)
        {
            double r = 1.0;
            for (const auto &row : Omega)
                for (const auto &X : row)
                    if (!X.empty())
                        r = std::min(r, stream_rank_ratio(X, silent));
            return r;
        }

        BeamMatrices lift(const BeamVectors &omega)
        {
            BeamMatrices O(omega.size());
            for (std::size_t k = 0; k < omega.size(); ++k)
                for (const auto &w : omega[k])
                    O[k].push_back(CMatrix::outer(w, w));
            return O;
        }

        void check_config(const BeamformConfig &c)
        {
            if (c.max_outer < 1 || !(c.rho0 >= 0.0) || !(c.tol > 0.0) || !(c.penalty0 >= 0.0) || !(c.nu > 1.0) ||
                !(c.theta_max >= c.penalty0) || !(c.damping0 > 0.0) || !(c.damping_growth > 1.0) ||
                c.max_attempts < 1 || !(c.qos_slack >= 0.0) || c.repair_passes < 0 ||
                !(c.rank_threshold > 0.0 && c.rank_threshold <= 1.0) || c.randomization_candidates < 0 ||
                !(c.silent_power >= 0.0 && c.silent_power < 1.0))
                throw std::invalid_argument("BeamformConfig: invalid setting");
        }
    } // namespace

    std::vector<CMatrix> lifted_channels(const std::vector<CVector> &h, const std::vector<double> &sigma2)
    {
        if (h.size() != sigma2.size())
            throw std::invalid_argument("lifted_channels: user count mismatch");
        std::vector<CMatrix> Hn;
        for (std::size_t k = 0; k < h.size(); ++k)
            Hn.push_back(CMatrix::outer(h[k], h[k]) * (1.0 / sigma2[k]));
        return Hn;
    }

    Powers lifted_powers(const std::vector<CMatrix> &Hn, const BeamMatrices &Omega)
    {
        const std::size_t K = Hn.size();
        if (Omega.size() != K)
            throw std::invalid_argument("lifted_powers: user count mismatch");
        const std::size_t L = K ? Omega[0].size() : 0;
        Powers x(K, std::vector<std::vector<double>>(K, std::vector<double>(L, 0.0)));
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t i = 0; i < K; ++i)
            {
                if (Omega[i].size() != L)
                    throw std::invalid_argument("lifted_powers: slot count mismatch");
                for (std::size_t l = 0; l < L; ++l)
                    if (!Omega[i][l].empty())
                        x[k][i][l] = std::max(trace_inner_real(Hn[k], Omega[i][l]), 0.0);
            }
        return x;
    }

    ConicProblem assemble_P5(const SurrogateCoefficients &c, const std::vector<CMatrix> &Hn, double rho,
                             double penalty, const std::vector<std::vector<CMatrix>> &bases, const Scenario &s,
                             double static_power, P5Layout *layout)
    {
        const std::size_t K = s.K, L = s.L, M = s.M;
        if (c.K != K || c.L != L || Hn.size() != K || bases.size() != K)
            throw std::invalid_argument("assemble_P5: dimension mismatch");
        if (!(rho >= 0.0) || !(penalty >= 0.0))
            throw std::invalid_argument("assemble_P5: parameter and penalty must be non-negative");

        P5Layout lay;
        lay.var.assign(K, std::vector<std::size_t>(L, P5Layout::none));
        lay.slack = lay.var;
        lay.qos_offset.assign(K, 0.0);

        ConicProblem p;
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < L; ++l)
            {
                if (!s.slot_active(k, l))
                    continue;
                const std::size_t v = p.add_matrix(M);
                lay.var[k][l] = v;
                if (bases[k].size() != L)
                    throw std::invalid_argument("assemble_P5: basis slot count mismatch");
                const CMatrix &B = bases[k][l];
                if (!B.empty())
                {
                    if (B.rows() != M)
                        throw std::invalid_argument("assemble_P5: basis dimension mismatch");
                    const std::size_t w = p.add_scalar();
                    lay.slack[k][l] = w;
                    p.obj_scalar[w] = -penalty;
                    p.lmis.push_back(rank_lmi(v, w, B));
                }
            }

        // Objective: surrogate sum rate minus rho times consumed power
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t l = 0; l < L; ++l)
            {
                const std::size_t v = lay.var[i][l];
                if (v == P5Layout::none)
                    continue;
                CMatrix C = CMatrix::identity(M) * -rho;
                for (std::size_t k = 0; k < K; ++k)
                    if (s.slot_active(k, l))
                        C += Hn[k] * c.weight(k, i, l);
                p.obj_matrix[v] = C;
            }
        p.obj_constant = -rho * static_power;
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < L; ++l)
                if (s.slot_active(k, l))
                {
                    lay.qos_offset[k] += c.offset(k, l);
                    p.obj_constant += c.offset(k, l);
                }

        // Per-user QoS on the model rate
        for (std::size_t k = 0; k < K; ++k)
        {
            if (!(s.r_min[k] > 0.0))
                continue;
            LinearConstraint q;
            q.rel = Relation::greater_equal;
            q.bound = s.r_min[k] - lay.qos_offset[k];
            q.label = "qos" + std::to_string(k);
            for (std::size_t l = 0; l < L; ++l)
            {
                if (!s.slot_active(k, l))
                    continue;
                for (std::size_t i = 0; i < K; ++i)
                    if (lay.var[i][l] != P5Layout::none)
                        q.f.matrix_terms.emplace_back(lay.var[i][l], Hn[k] * c.weight(k, i, l));
            }
            p.constraints.push_back(std::move(q));
        }

        // Power budget
        LinearConstraint pw;
        pw.rel = Relation::less_equal;
        pw.bound = s.p_max;
        pw.label = "power";
        for (std::size_t v = 0; v < p.matrix_dims.size(); ++v)
            pw.f.matrix_terms.emplace_back(v, CMatrix::identity(M));
        p.constraints.push_back(std::move(pw));

        if (layout)
            *layout = std::move(lay);
        return p;
    }

    BeamMatrices mrt_init(const std::vector<CVector> &h, const Scenario &s)
    {
        if (h.size() != s.K)
            throw std::invalid_argument("mrt_init: user count mismatch");
        std::size_t active = 0;
        for (std::size_t k = 0; k < s.K; ++k)
            for (std::size_t l = 0; l < s.L; ++l)
                active += s.slot_active(k, l) ? 1 : 0;
        BeamMatrices O(s.K, std::vector<CMatrix>(s.L, CMatrix(s.M, s.M)));
        if (active == 0)
            return O;
        const double p = s.p_max / double(active);
        for (std::size_t k = 0; k < s.K; ++k)
        {
            const double n = norm(h[k]);
            for (std::size_t l = 0; l < s.L; ++l)
            {
                if (!s.slot_active(k, l) || n == 0.0)
                    continue;
                CVector w = h[k];
                for (auto &z : w)
                    z *= std::sqrt(p) / n;
                O[k][l] = CMatrix::outer(w, w);
            }
        }
        return O;
    }

    Evaluation evaluate(const BeamformInput &in, const BeamMatrices &Omega)
    {
        const Scenario &s = in.scenario;
        const std::vector<CMatrix> Hn = lifted_channels(in.h, s.sigma2);
        const Powers x = lifted_powers(Hn, Omega);
        Evaluation e;
        e.rates = true_rates(x, std::vector<double>(s.K, 1.0), penalty_coefs(s));
        for (std::size_t k = 0; k < s.K; ++k)
        {
            e.sum_rate += e.rates[k];
            e.qos_violation = std::max(e.qos_violation, s.r_min[k] - e.rates[k]);
        }
        for (const auto &row : Omega)
            for (const auto &X : row)
                if (!X.empty())
                    e.power += X.trace().real();
        e.ee = energy_efficiency(e.rates, e.power, in.static_power);
        return e;
    }

    Evaluation evaluate(const BeamformInput &in, const BeamVectors &omega) { return evaluate(in, lift(omega)); }

    CVector extract_beamformer(const CMatrix &Omega)
    {
        const std::size_t M = Omega.rows();
        const DominantEig d = dominant_eigvec(Omega);
        if (d.degenerate || !(d.value > 0.0))
            return CVector(M, 0.0);
        CVector w = d.vector;
        for (auto &z : w)
            z *= std::sqrt(d.value);
        return w;
    }

    Extraction extract_beamformers(const BeamformInput &in, const BeamMatrices &Omega, const BeamformConfig &cfg)
    {
        const Scenario &s = in.scenario;
        Extraction ex;
        ex.omega.assign(s.K, std::vector<CVector>(s.L, CVector(s.M, 0.0)));

        struct Stream
        {
            std::size_t k, l;
            EigenResult eig;
            bool low_rank;
        };
        std::vector<Stream> streams;
        for (std::size_t k = 0; k < s.K; ++k)
            for (std::size_t l = 0; l < s.L; ++l)
            {
                const CMatrix &X = Omega.at(k).at(l);
                if (X.empty() || !(X.trace().real() > 0.0))
                    continue;
                ex.omega[k][l] = extract_beamformer(X);
                Stream st{k, l, hermitian_eig(X, HermitianCheck::symmetrize), false};
                st.low_rank = stream_rank_ratio(X, cfg.silent_power * s.p_max) < cfg.rank_threshold;
                streams.push_back(std::move(st));
            }

        const Evaluation base = evaluate(in, ex.omega);
        bool need = base.qos_violation > cfg.qos_slack;
        for (const auto &st : streams)
            need = need || st.low_rank;
        if (!need || cfg.randomization_candidates == 0)
            return ex;

        // Gaussian randomization shaped by each lifted matrix, power kept at its trace
        const bool all_streams = std::none_of(streams.begin(), streams.end(), [](const Stream &st) { return st.low_rank; });
        std::mt19937_64 eng(cfg.randomization_seed);
        std::normal_distribution<double> nd;
        BeamVectors best = ex.omega;
        double best_ee = base.qos_violation <= cfg.qos_slack ? base.ee : -std::numeric_limits<double>::infinity();
        double best_viol = base.qos_violation;
        for (int c = 0; c < cfg.randomization_candidates; ++c)
        {
            BeamVectors cand = ex.omega;
            for (const auto &st : streams)
            {
                if (!(st.low_rank || all_streams))
                    continue;
                const std::size_t M = s.M;
                CVector r(M);
                for (auto &z : r)
                    z = cx(nd(eng), nd(eng)) * std::sqrt(0.5);
                CVector w(M, 0.0);
                for (std::size_t j = 0; j < M; ++j)
                {
                    const double lam = std::max(st.eig.values[j], 0.0);
                    for (std::size_t i = 0; i < M; ++i)
                        w[i] += st.eig.vectors(i, j) * std::sqrt(lam) * r[j];
                }
                const double nw = norm2(w);
                const double tr = Omega[st.k][st.l].trace().real();
                if (nw > 0.0)
                    for (auto &z : w)
                        z *= std::sqrt(tr / nw);
                cand[st.k][st.l] = w;
            }
            const Evaluation e = evaluate(in, cand);
            const bool ok = e.qos_violation <= cfg.qos_slack && e.power <= s.p_max * (1.0 + 1e-12);
            if (ok && e.ee > best_ee)
            {
                best_ee = e.ee;
                best_viol = e.qos_violation;
                best = std::move(cand);
            }
            else if (!(best_ee > -std::numeric_limits<double>::infinity()) && e.qos_violation < best_viol)
            {
                best_viol = e.qos_violation;
                best = std::move(cand);
            }
        }
        ex.fallback = true;
        for (const auto &st : streams)
            ex.fallback_streams += (st.low_rank || all_streams) ? 1 : 0;
        ex.omega = std::move(best);
        return ex;
    }

    BeamformResult dinkelbach_sca(const BeamformInput &in, const BeamMatrices &Omega_init, const BeamformConfig &cfg)
    {
        check_config(cfg);
        const Scenario &s = in.scenario;
        s.validate();
        if (in.h.size() != s.K)
            throw std::invalid_argument("dinkelbach_sca: channel count mismatch");
        for (const auto &h : in.h)
            if (h.size() != s.M)
                throw std::invalid_argument("dinkelbach_sca: channel length mismatch");
        if (Omega_init.size() != s.K)
            throw std::invalid_argument("dinkelbach_sca: initial point has wrong user count");
        double p0 = 0.0;
        for (std::size_t k = 0; k < s.K; ++k)
        {
            if (Omega_init[k].size() != s.L)
                throw std::invalid_argument("dinkelbach_sca: initial point has wrong slot count");
            for (std::size_t l = 0; l < s.L; ++l)
            {
                const CMatrix &X = Omega_init[k][l];
                if (X.rows() != s.M || X.cols() != s.M)
                    throw std::invalid_argument("dinkelbach_sca: initial matrix has wrong size");
                const double tr = X.trace().real();
                if (!s.slot_active(k, l) && tr > 1e-8)
                    throw std::invalid_argument("dinkelbach_sca: initial point serves a user past its deadline");
                p0 += tr;
            }
        }
        if (p0 > s.p_max * (1.0 + 1e-9))
            throw std::invalid_argument("dinkelbach_sca: initial point exceeds the power budget");

        const std::vector<CMatrix> Hn = lifted_channels(in.h, s.sigma2);
        const std::vector<double> beta = penalty_coefs(s);
        const std::vector<double> ones(s.K, 1.0);

        BeamformResult res;
        res.report.kind = "beamforming";
        BeamMatrices Omega = Omega_init;
        for (std::size_t k = 0; k < s.K; ++k)
            for (std::size_t l = 0; l < s.L; ++l)
                if (!s.slot_active(k, l))
                    Omega[k][l] = CMatrix(s.M, s.M);
        Evaluation cur = evaluate(in, Omega);

        const double silent = cfg.silent_power * s.p_max;
        double rho = cfg.rho0, penalty = cfg.penalty0, tau = cfg.damping0;
        auto merit = [&](const Evaluation &e) { return e.sum_rate - rho * (e.power + in.static_power); };
        auto feasible = [&](const Evaluation &e) { return e.qos_violation <= cfg.qos_slack; };
        auto acceptable = [&](const Evaluation &e)
        {
            if (feasible(cur))
            {
                const double m0 = merit(cur);
                return feasible(e) && merit(e) >= m0 - cfg.solver.tol * std::max(1.0, std::abs(m0));
            }
            return feasible(e) || e.qos_violation < cur.qos_violation;
        };

        struct Step
        {
            bool accepted = false;
            bool infeasible = false;
            int attempts = 0;
            double F = 0.0;
            double model = 0.0;
            std::string solver_status = "none";
            BeamMatrices Omega;
            Evaluation eval;
        };

        // One damped linearized step at the current parameter
        auto step = [&]() -> Step
        {
            Step st;
            const SurrogateCoefficients c = build_surrogate(expansion_point(lifted_powers(Hn, Omega), ones), beta);
            std::vector<std::vector<CMatrix>> bases(s.K, std::vector<CMatrix>(s.L));
            if (s.M > 1)
                for (std::size_t k = 0; k < s.K; ++k)
                    for (std::size_t l = 0; l < s.L; ++l)
                        if (s.slot_active(k, l))
                            bases[k][l] = smallest_eigvec_basis(Omega[k][l], s.M - 1);
            P5Layout lay;
            ConicProblem p = assemble_P5(c, Hn, rho, penalty, bases, s, in.static_power, &lay);
            p.prox_center.assign(p.matrix_dims.size(), CMatrix());
            for (std::size_t k = 0; k < s.K; ++k)
                for (std::size_t l = 0; l < s.L; ++l)
                    if (lay.var[k][l] != P5Layout::none)
                        p.prox_center[lay.var[k][l]] = Omega[k][l];
            for (int a = 0; a < cfg.max_attempts; ++a)
            {
                // weight each stream by its own power so the step is relative to it
                p.prox_weight.assign(p.matrix_dims.size(), 0.0);
                for (std::size_t k = 0; k < s.K; ++k)
                    for (std::size_t l = 0; l < s.L; ++l)
                        if (lay.var[k][l] != P5Layout::none)
                        {
                            const double scale = std::max(Omega[k][l].trace().real(), cfg.damping_floor * s.p_max);
                            p.prox_weight[lay.var[k][l]] = tau / (scale * scale);
                        }
                const ConicSolution sol = solve(p, cfg.solver);
                ++st.attempts;
                st.solver_status = to_string(sol.status);
                if (sol.status == SolveStatus::infeasible)
                {
                    st.infeasible = true;
                    return st;
                }
                if (sol.usable())
                {
                    BeamMatrices cand(s.K, std::vector<CMatrix>(s.L, CMatrix(s.M, s.M)));
                    for (std::size_t k = 0; k < s.K; ++k)
                        for (std::size_t l = 0; l < s.L; ++l)
                            if (lay.var[k][l] != P5Layout::none)
                            {
                                cand[k][l] = sol.X[lay.var[k][l]];
                                cand[k][l].symmetrize();
                            }
                    Evaluation e = evaluate(in, cand);
                    if (acceptable(e))
                    {
                        st.accepted = true;
                        st.F = sol.affine_objective;
                        for (double v : eval_surrogate(c, lifted_powers(Hn, cand)))
                            st.model += v;
                        st.Omega = std::move(cand);
                        st.eval = std::move(e);
                        return st;
                    }
                }
                tau *= cfg.damping_growth;
            }
            return st;
        };

        auto record = [&](int index, const Step &st)
        {
            IterationRecord r;
            r.index = index;
            r.rho = rho;
            r.objective = st.F;
            r.model = st.model;
            r.penalty = penalty;
            r.min_rank_ratio = min_rank_ratio(Omega, silent);
            r.metric = cur.ee;
            r.damping = tau;
            r.attempts = st.attempts;
            r.solver_status = st.solver_status;
            res.report.rows.push_back(r);
        };

        RunStatus status = RunStatus::iteration_cap;
        for (int d = 0; d < cfg.max_outer; ++d)
        {
            Step st = step();
            if (st.infeasible)
            {
                status = RunStatus::infeasible;
                break;
            }
            if (!st.accepted)
            {
                status = RunStatus::stalled;
                break;
            }
            const bool was_feasible = feasible(cur);
            Omega = std::move(st.Omega);
            cur = std::move(st.eval);
            res.rho_trace.push_back(rho);
            record(d, st);
            if (was_feasible && std::abs(st.F) <= cfg.tol && min_rank_ratio(Omega, silent) >= cfg.rank_threshold)
            {
                status = RunStatus::converged;
                break;
            }
            if (feasible(cur))
                rho = std::max(rho, cur.ee);
            penalty = std::min(cfg.nu * penalty, cfg.theta_max);
            // relax the damping only after a step that was accepted at once
            if (st.attempts == 1)
                tau = std::max(tau / cfg.damping_growth, cfg.damping0);
        }

        // Fixed-parameter repair passes when the true QoS is still violated
        if (status != RunStatus::infeasible && !feasible(cur))
        {
            for (int r = 0; r < cfg.repair_passes && !feasible(cur); ++r)
            {
                Step st = step();
                ++res.report.repair_passes;
                if (st.infeasible || !st.accepted)
                    break;
                Omega = std::move(st.Omega);
                cur = std::move(st.eval);
                record(int(res.report.rows.size()), st);
            }
            if (!feasible(cur))
                status = RunStatus::infeasible;
        }

        res.report.status = status;
        res.set.Omega = Omega;
        res.set.rho = rho;
        res.min_rank_ratio = min_rank_ratio(Omega, silent);

        const Extraction ex = extract_beamformers(in, Omega, cfg);
        res.set.omega = ex.omega;
        res.fallback = ex.fallback;
        res.report.fallback_events = ex.fallback ? 1 : 0;
        const Evaluation fin = evaluate(in, ex.omega);
        res.rates = fin.rates;
        res.ee = fin.ee;
        res.power = fin.power;
        return res;
    }

} // namespace irsee
