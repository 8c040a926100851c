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

#include "irsee/selftest.hpp"

#include "irsee/ao_driver.hpp"
#include "irsee/rankrelax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>

namespace irsee
{
    namespace
    {
        class Checker
        {
        public:
            explicit Checker(std::ostream &os) : os_(os) {}

            // Passes when err <= tol; both are printed
            void bound(const std::string &name, double err, double tol)
            {
                char buf[96];
                std::snprintf(buf, sizeof buf, "  err %.3e  tol %.1e", err, tol);
                report(name, err <= tol, buf);
            }

            void truth(const std::string &name, bool ok) { report(name, ok, ""); }

            int failures() const { return failures_; }

        private:
            void report(const std::string &name, bool ok, const std::string &detail)
            {
                if (!ok)
                    ++failures_;
                os_ << (ok ? "PASS  " : "FAIL  ") << name << detail << '\n';
            }

            std::ostream &os_;
            int failures_ = 0;
        };

        double slot_at(double s, double b, double beta)
        {
            return slot_rate(s / (b - s), beta);
        }

        void check_fbl(Checker &ck)
        {
            ck.bound("inverse Q at 1e-7", std::abs(qinv(1e-7) - 5.199337582192816), 1e-9);
            double worst = 0.0;
            for (double e : {1e-9, 1e-7, 1e-5, 1e-3, 0.1, 0.4})
                worst = std::max(worst, std::abs(qfunc(qinv(e)) - e) / e);
            ck.bound("Q of inverse Q round trip", worst, 1e-10);
            const double beta = 0.3;
            const double hand = 1.0 - beta * kLog2e * std::sqrt(0.75);
            ck.bound("slot rate at unit SINR", std::abs(slot_rate(1.0, beta) - hand), 1e-14);
        }

        void check_surrogate(Checker &ck)
        {
            std::mt19937_64 eng(11);
            std::uniform_real_distribution<double> u(0.05, 2.0), pert(0.9, 1.1);
            const std::size_t K = 4, L = 2;
            const double beta = rate_penalty_coef(1e-7, 250.0);
            const std::vector<double> s2(K, 1.0);
            double tight = 0.0, tangent = 0.0;
            long below = 0, total = 0;
            for (int trial = 0; trial < 20; ++trial)
            {
                const double scale = std::pow(10.0, trial % 4);
                std::vector<std::vector<std::vector<double>>> x(K, std::vector<std::vector<double>>(K, std::vector<double>(L)));
                for (auto &a : x)
                    for (auto &b : a)
                        for (double &v : b)
                            v = scale * u(eng);
                const ExpansionPoint ep = expansion_point(x, s2);
                const SurrogateCoefficients c = build_surrogate(ep, std::vector<double>(K, beta));
                const auto model = eval_surrogate(c, x);
                const auto truth = true_rates(x, s2, c.beta);
                for (std::size_t k = 0; k < K; ++k)
                {
                    tight = std::max(tight, std::abs(model[k] - truth[k]));
                    for (std::size_t l = 0; l < L; ++l)
                    {
                        const double s0 = ep.x[k][k][l], b0 = ep.b[k][l];
                        const double h = 1e-6 * std::max(1.0, s0);
                        const double ds = (slot_at(s0 + h, b0, beta) - slot_at(s0 - h, b0, beta)) / (2 * h);
                        const double db = (slot_at(s0, b0 + h, beta) - slot_at(s0, b0 - h, beta)) / (2 * h);
                        tangent = std::max(tangent, std::abs(c.kl[k][l].w_signal - ds) / std::max(std::abs(ds), 1e-3));
                        tangent = std::max(tangent, std::abs(c.kl[k][l].w_total - db) / std::max(std::abs(db), 1e-3));
                    }
                }
                for (int p = 0; p < 50; ++p)
                {
                    auto y = x;
                    for (auto &a : y)
                        for (auto &b : a)
                            for (double &v : b)
                                v *= pert(eng);
                    const auto m = eval_surrogate(c, y);
                    const auto t = true_rates(y, s2, c.beta);
                    for (std::size_t k = 0; k < K; ++k, ++total)
                        below += m[k] <= t[k] + 1e-12;
                }
            }
            ck.bound("surrogate equals the rate at the expansion point", tight, 1e-8);
            ck.bound("surrogate gradient matches finite differences", tangent, 1e-5);
            ck.bound("surrogate below the rate under 10% perturbations (miss fraction)",
                     1.0 - static_cast<double>(below) / static_cast<double>(total), 0.01);
        }

        void check_rank_lmi(Checker &ck)
        {
            std::mt19937_64 eng(23);
            std::normal_distribution<double> g;
            double worst = 0.0;
            bool equivalence = true;
            for (int trial = 0; trial < 200; ++trial)
            {
                const std::size_t n = 2 + trial % 7;
                const std::size_t r = 1 + trial % 3;
                CMatrix A(n, r);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < r; ++j)
                        A(i, j) = cx(g(eng), g(eng));
                CMatrix X = A * A.adjoint();
                X.symmetrize();
                const EigenResult eig = hermitian_eig(X);
                const double slack = min_feasible_slack(X, smallest_eigvec_basis(X, n - 1));
                const double scale = eig.values.back();
                worst = std::max(worst, std::abs(slack - std::max(eig.values[n - 2], 0.0)) / scale);
                const bool rank_one = eig.values[n - 2] <= 1e-10 * scale;
                equivalence = equivalence && (rank_one == (slack <= 1e-9 * scale));
            }
            ck.bound("minimal rank slack equals the second largest eigenvalue", worst, 1e-9);
            ck.truth("rank one exactly when the zero-slack LMI holds", equivalence);
        }

        void check_solver(Checker &ck)
        {
            const CMatrix C{{2.0, cx(0.0, 1.0), 0.0}, {cx(0.0, -1.0), 1.0, 0.5}, {0.0, 0.5, -1.0}};
            ConicProblem p;
            const auto v = p.add_matrix(3);
            p.obj_matrix[v] = C;
            LinearConstraint tr;
            tr.f.matrix_terms.push_back({v, CMatrix::identity(3)});
            tr.rel = Relation::equal;
            tr.bound = 1.0;
            p.constraints.push_back(tr);
            const ConicSolution s = solve(p);
            ck.truth("spectraplex problem solves to optimality", s.status == SolveStatus::optimal);
            ck.bound("spectraplex optimum equals the largest eigenvalue",
                     std::abs(s.affine_objective - hermitian_eig(C).values.back()), 1e-6);
        }

        void check_dinkelbach(Checker &ck)
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
            s.p_max = 5.0;
            BeamformInput in;
            in.h = {{cx(1.2, 1.6)}};
            in.scenario = s;
            in.static_power = 1.0;
            const double g = norm2(in.h[0]);
            const BeamformResult r = dinkelbach_sca(in, mrt_init(in.h, s));
            double best = 0.0;
            for (int i = 0; i <= 200000; ++i)
            {
                const double p = s.p_max * i / 200000.0;
                best = std::max(best, std::log2(1.0 + g * p) / (p + in.static_power));
            }
            ck.truth("scalar fractional problem converges", r.report.status == RunStatus::converged);
            ck.bound("scalar fractional optimum matches the grid", std::abs(r.ee - best), 1e-4);
        }

        void check_drop(Checker &ck, std::uint64_t seed)
        {
            Scenario s = Scenario::defaults(8);
            s.seed = seed;
            const ChannelSet c = generate_channels(s);
            const AOResult r = alternating_optimize(c, s);
            const std::string tag = "drop " + std::to_string(seed) + ": ";
            ck.truth(tag + "design produced", r.status == RunStatus::converged || r.status == RunStatus::iteration_cap);

            double drop = 0.0;
            for (std::size_t i = 1; i < r.ee_trace.size(); ++i)
                drop = std::max(drop, r.ee_trace[i - 1] - r.ee_trace[i]);
            ck.bound(tag + "EE trace non-decreasing", drop, 1e-6);

            const Evaluation e = evaluate_design(c, s, r.beams.omega, r.phases.reflection);
            ck.bound(tag + "EE recomputed from the design", std::abs(e.ee - r.ee), 1e-6);
            ck.bound(tag + "rate targets met", e.qos_violation, 1e-4);
            ck.bound(tag + "power budget met", std::max(e.power - s.p_max, 0.0), 1e-6);
            double modulus = 0.0;
            for (const cx &v : r.phases.reflection)
                modulus = std::max(modulus, std::abs(std::abs(v) - 1.0));
            ck.bound(tag + "unit-modulus reflection", modulus, 1e-12);
            ck.truth(tag + "rank one or logged fallback", r.min_rank_ratio >= 0.99 || r.fallback);

            const AOResult again = alternating_optimize(c, s);
            ck.truth(tag + "repeat run identical", again.ee == r.ee && again.ee_trace == r.ee_trace &&
                                                       again.outer_iters == r.outer_iters);
        }
    } // namespace

    int run_selftest(std::ostream &os)
    {
        Checker ck(os);
        check_fbl(ck);
        check_surrogate(ck);
        check_rank_lmi(ck);
        check_solver(ck);
        check_dinkelbach(ck);
        for (std::uint64_t seed : {1, 2})
            check_drop(ck, seed);
        os << (ck.failures() ? "selftest failed: " : "selftest passed: ") << ck.failures() << " failure(s)\n";
        return ck.failures();
    }

} // namespace irsee
