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

        void check_config(const PhaseConfig &c)
        {
            if (c.max_iter < 1 || !(c.tol > 0.0) || !(c.penalty0 >= 0.0) || !(c.nu > 1.0) ||
                !(c.theta_max >= c.penalty0) || !(c.damping >= 0.0) || !(c.qos_slack >= 0.0) ||
                !(c.rank_threshold > 0.0 && c.rank_threshold <= 1.0) || c.randomization_candidates < 0)
                throw std::invalid_argument("PhaseConfig: invalid setting");
        }

        CVector unit_phases(const CVector &v, std::size_t n, cx ref)
        {
            CVector e(n);
            for (std::size_t i = 0; i < n; ++i)
                e[i] = std::polar(1.0, std::arg(v[i] / ref));
            return e;
        }

        CVector conj_all(CVector v)
        {
            for (auto &z : v)
                z = std::conj(z);
            return v;
        }

        // True rates and QoS of one reflection for fixed beamformers
        struct Candidate
        {
            CVector psi;
            std::vector<double> rates;
            double metric = -std::numeric_limits<double>::infinity();
            double violation = std::numeric_limits<double>::infinity();
        };
    } // namespace

    PhaseLift lift_reflection(const CVector &psi)
    {
        PhaseLift p;
        CVector v = conj_all(psi);
        v.push_back(1.0);
        p.E = CMatrix::outer(v, v);
        p.e = conj_all(psi);
        p.reflection = psi;
        return p;
    }

    CMatrix lifting_matrix(const ChannelSet &c, std::size_t k)
    {
        const std::size_t N = c.H.rows(), M = c.H.cols();
        if (k >= c.h_bs.size() || c.h_irs.at(k).size() != N || c.h_bs[k].size() != M)
            throw std::invalid_argument("lifting_matrix: channel dimension mismatch");
        CMatrix Z(N + 1, M);
        for (std::size_t n = 0; n < N; ++n)
        {
            const cx a = std::conj(c.h_irs[k][n]);
            for (std::size_t m = 0; m < M; ++m)
                Z(n, m) = a * c.H(n, m);
        }
        for (std::size_t m = 0; m < M; ++m)
            Z(N, m) = std::conj(c.h_bs[k][m]);
        return Z;
    }

    CMatrix effective_channel(const CMatrix &Z, const CMatrix &E)
    {
        if (E.rows() != Z.rows() || E.cols() != Z.rows())
            throw std::invalid_argument("effective_channel: dimension mismatch");
        return Z.adjoint() * E * Z;
    }

    LiftedPhaseData lift_channels(const ChannelSet &c, const BeamMatrices &Omega, const std::vector<double> &sigma2)
    {
        LiftedPhaseData d;
        d.K = c.h_bs.size();
        d.dim = c.H.rows() + 1;
        if (Omega.size() != d.K || sigma2.size() != d.K)
            throw std::invalid_argument("lift_channels: user count mismatch");
        d.L = d.K ? Omega[0].size() : 0;
        std::vector<CMatrix> Z;
        for (std::size_t k = 0; k < d.K; ++k)
            Z.push_back(lifting_matrix(c, k));
        d.A.assign(d.K, std::vector<std::vector<CMatrix>>(d.K, std::vector<CMatrix>(d.L)));
        for (std::size_t i = 0; i < d.K; ++i)
        {
            if (Omega[i].size() != d.L)
                throw std::invalid_argument("lift_channels: slot count mismatch");
            for (std::size_t l = 0; l < d.L; ++l)
            {
                const CMatrix &X = Omega[i][l];
                if (X.empty() || X.max_abs() == 0.0)
                    continue;
                if (X.rows() != c.H.cols())
                    throw std::invalid_argument("lift_channels: beamformer dimension mismatch");
                for (std::size_t k = 0; k < d.K; ++k)
                {
                    CMatrix A = Z[k] * X * Z[k].adjoint() * (1.0 / sigma2[k]);
                    A.symmetrize();
                    d.A[k][i][l] = std::move(A);
                }
            }
        }
        return d;
    }

    Powers lifted_powers(const LiftedPhaseData &d, const CMatrix &E)
    {
        if (E.rows() != d.dim || E.cols() != d.dim)
            throw std::invalid_argument("lifted_powers: dimension mismatch");
        Powers x(d.K, std::vector<std::vector<double>>(d.K, std::vector<double>(d.L, 0.0)));
        for (std::size_t k = 0; k < d.K; ++k)
            for (std::size_t i = 0; i < d.K; ++i)
                for (std::size_t l = 0; l < d.L; ++l)
                    if (!d.A[k][i][l].empty())
                        x[k][i][l] = std::max(trace_inner_real(d.A[k][i][l], E), 0.0);
        return x;
    }

    ConicProblem assemble_P7(const SurrogateCoefficients &c, const LiftedPhaseData &d, const CMatrix &basis,
                             double penalty, const Scenario &s, P7Layout *layout)
    {
        if (c.K != d.K || c.L != d.L || s.K != d.K || s.L != d.L)
            throw std::invalid_argument("assemble_P7: dimension mismatch");
        if (!(penalty >= 0.0))
            throw std::invalid_argument("assemble_P7: penalty must be non-negative");
        const std::size_t n = d.dim;
        P7Layout lay;
        lay.qos_offset.assign(d.K, 0.0);

        ConicProblem p;
        lay.E = p.add_matrix(n);
        if (!basis.empty())
        {
            if (basis.rows() != n)
                throw std::invalid_argument("assemble_P7: basis dimension mismatch");
            lay.slack = p.add_scalar();
            p.obj_scalar[lay.slack] = -penalty;
            p.lmis.push_back(rank_lmi(lay.E, lay.slack, basis));
        }

        // Model rate of user k as a trace functional of E
        std::vector<CMatrix> user(d.K, CMatrix(n, n));
        for (std::size_t k = 0; k < d.K; ++k)
            for (std::size_t l = 0; l < d.L; ++l)
            {
                if (!s.slot_active(k, l))
                    continue;
                lay.qos_offset[k] += c.offset(k, l);
                for (std::size_t i = 0; i < d.K; ++i)
                    if (!d.A[k][i][l].empty())
                        user[k] += d.A[k][i][l] * c.weight(k, i, l);
            }

        CMatrix C(n, n);
        for (std::size_t k = 0; k < d.K; ++k)
        {
            C += user[k];
            p.obj_constant += lay.qos_offset[k];
        }
        p.obj_matrix[lay.E] = C;

        for (std::size_t k = 0; k < d.K; ++k)
        {
            if (!(s.r_min[k] > 0.0))
                continue;
            LinearConstraint q;
            q.rel = Relation::greater_equal;
            q.bound = s.r_min[k] - lay.qos_offset[k];
            q.label = "qos" + std::to_string(k);
            q.f.matrix_terms.emplace_back(lay.E, user[k]);
            p.constraints.push_back(std::move(q));
        }

        for (std::size_t i = 0; i < n; ++i)
        {
            LinearConstraint u;
            u.rel = Relation::equal;
            u.bound = 1.0;
            u.label = "diag" + std::to_string(i);
            CMatrix W(n, n);
            W(i, i) = 1.0;
            u.f.matrix_terms.emplace_back(lay.E, std::move(W));
            p.constraints.push_back(std::move(u));
        }

        if (layout)
            *layout = std::move(lay);
        return p;
    }

    CVector extract_unit_modulus(const CMatrix &E, bool *dummy_zero, cx *dummy)
    {
        const std::size_t n = E.rows();
        if (n < 2 || E.cols() != n)
            throw std::invalid_argument("extract_unit_modulus: expected a square matrix of size >= 2");
        const DominantEig d = dominant_eigvec(E);
        const CVector &v = d.vector;
        double vmax = 0.0;
        for (const cx &z : v)
            vmax = std::max(vmax, std::abs(z));
        const cx last = v[n - 1];
        const bool zero = !(std::abs(last) > 1e-12 * vmax);
        if (dummy_zero)
            *dummy_zero = zero;
        if (dummy)
            *dummy = zero ? cx(1.0, 0.0) : last / std::abs(last);
        return unit_phases(v, n - 1, zero ? cx(1.0, 0.0) : last);
    }

    PhaseResult optimize_phases(const ChannelSet &c, const Scenario &s, const BeamVectors &omega,
                                const CMatrix &E_init, const PhaseConfig &cfg)
    {
        check_config(cfg);
        s.validate();
        const std::size_t n = c.H.rows() + 1;
        if (n < 2)
            throw std::invalid_argument("optimize_phases: the surface has no elements");
        if (E_init.rows() != n || E_init.cols() != n)
            throw std::invalid_argument("optimize_phases: initial lift has the wrong size");
        if (!is_hermitian(E_init, 1e-9))
            throw std::invalid_argument("optimize_phases: initial lift is not Hermitian");
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(E_init(i, i) - 1.0) > 1e-6)
                throw std::invalid_argument("optimize_phases: initial lift must have a unit diagonal");
        {
            const EigenResult ev = hermitian_eig(E_init, HermitianCheck::symmetrize);
            if (ev.values.front() < -1e-9 * std::max(1.0, ev.values.back()))
                throw std::invalid_argument("optimize_phases: initial lift is not positive semidefinite");
        }
        if (omega.size() != s.K)
            throw std::invalid_argument("optimize_phases: beamformer user count mismatch");

        BeamMatrices Omega(s.K);
        for (std::size_t k = 0; k < s.K; ++k)
        {
            if (omega[k].size() != s.L)
                throw std::invalid_argument("optimize_phases: beamformer slot count mismatch");
            for (const auto &w : omega[k])
                Omega[k].push_back(CMatrix::outer(w, w));
        }
        const LiftedPhaseData d = lift_channels(c, Omega, s.sigma2);
        std::vector<double> beta;
        for (double e : s.eps)
            beta.push_back(rate_penalty_coef(e, s.blocklength));
        const std::vector<double> ones(s.K, 1.0);

        BeamformInput in;
        in.scenario = s;
        in.static_power = s.static_power();
        auto assess = [&](const CVector &psi)
        {
            Candidate cd;
            cd.psi = psi;
            in.h = combined_channel(c, psi);
            const Evaluation e = evaluate(in, omega);
            cd.rates = e.rates;
            cd.metric = 0.0;
            for (double r : e.rates)
                cd.metric += std::max(r, 0.0);
            cd.violation = e.qos_violation;
            return cd;
        };
        auto better = [&](const Candidate &a, const Candidate &b)
        {
            const bool fa = a.violation <= cfg.qos_slack, fb = b.violation <= cfg.qos_slack;
            if (fa != fb)
                return fa;
            if (fa)
                return a.metric > b.metric;
            return a.violation < b.violation;
        };

        PhaseResult res;
        res.report.kind = "phases";
        const Candidate incoming = assess(conj_all(extract_unit_modulus(E_init)));
        Candidate best = incoming;
        CMatrix best_E = E_init;
        cx best_dummy{1.0, 0.0};
        bool improved = false, best_random = false;
        auto consider = [&](const CVector &psi, const CMatrix &src, cx dummy, bool random)
        {
            Candidate cd = assess(psi);
            if (better(cd, best))
            {
                best = cd;
                best_E = src;
                best_dummy = dummy;
                best_random = random;
                improved = true;
            }
            return cd.metric;
        };

        CMatrix E = E_init;
        E.symmetrize();
        double penalty = cfg.penalty0;
        double prev = std::numeric_limits<double>::quiet_NaN();
        RunStatus status = RunStatus::iteration_cap;
        for (int g = 0; g < cfg.max_iter; ++g)
        {
            const SurrogateCoefficients coef = build_surrogate(expansion_point(lifted_powers(d, E), ones), beta);
            const CMatrix basis = smallest_eigvec_basis(E, n - 1);
            P7Layout lay;
            ConicProblem p = assemble_P7(coef, d, basis, penalty, s, &lay);
            if (cfg.damping > 0.0)
            {
                p.prox_weight = {cfg.damping};
                p.prox_center = {E};
            }
            const ConicSolution sol = solve(p, cfg.solver);
            if (sol.status == SolveStatus::infeasible)
            {
                status = RunStatus::infeasible;
                break;
            }
            if (!sol.usable())
            {
                status = RunStatus::stalled;
                break;
            }
            E = sol.X[lay.E];
            E.symmetrize();

            IterationRecord r;
            r.index = g;
            r.objective = sol.affine_objective;
            r.penalty = penalty;
            r.min_rank_ratio = rank_one_ratio_or_one(E);
            r.model = sol.affine_objective;
            if (lay.slack != P7Layout::none)
                r.model += penalty * sol.t[lay.slack];
            // only certified rank-one iterates are rounded directly
            cx dummy;
            const CVector e = extract_unit_modulus(E, nullptr, &dummy);
            if (r.min_rank_ratio >= cfg.rank_threshold)
                r.metric = consider(conj_all(e), E, dummy, false);
            else
                r.metric = assess(conj_all(e)).metric;
            r.damping = cfg.damping;
            r.attempts = 1;
            r.solver_status = to_string(sol.status);
            res.report.rows.push_back(r);

            if (std::abs(sol.affine_objective - prev) <= cfg.tol && r.min_rank_ratio >= cfg.rank_threshold)
            {
                status = RunStatus::converged;
                break;
            }
            prev = sol.affine_objective;
            penalty = std::min(cfg.nu * penalty, cfg.theta_max);
        }

        if (rank_one_ratio_or_one(E) < cfg.rank_threshold && cfg.randomization_candidates > 0 &&
            status != RunStatus::infeasible)
        {
            // Gaussian randomization shaped by the last lifted solution
            const EigenResult ev = hermitian_eig(E, HermitianCheck::symmetrize);
            std::mt19937_64 eng(cfg.randomization_seed);
            std::normal_distribution<double> nd;
            for (int t = 0; t < cfg.randomization_candidates; ++t)
            {
                CVector g(n), v(n, 0.0);
                for (auto &z : g)
                    z = cx(nd(eng), nd(eng)) * std::sqrt(0.5);
                for (std::size_t j = 0; j < n; ++j)
                {
                    const cx a = std::sqrt(std::max(ev.values[j], 0.0)) * g[j];
                    for (std::size_t i = 0; i < n; ++i)
                        v[i] += ev.vectors(i, j) * a;
                }
                const cx ref = std::abs(v[n - 1]) > 0.0 ? v[n - 1] : cx(1.0, 0.0);
                consider(conj_all(unit_phases(v, n - 1, ref)), E, ref / std::abs(ref), true);
            }
            res.report.fallback_events = 1;
        }

        res.report.status = status;
        res.kept_incoming = !improved;
        res.lift = lift_reflection(best.psi);
        res.lift.E = best_E;
        res.lift.psi_dummy = best_dummy;
        res.min_rank_ratio = rank_one_ratio_or_one(best_E);
        res.fallback = best_random;
        res.rates = best.rates;
        res.sum_rate = best.metric;
        return res;
    }

} // namespace irsee
