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

#include "irsee/rankrelax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsee
{
    void RankRelaxState::validate() const
    {
        if (!(nu > 1.0))
            throw std::invalid_argument("RankRelaxState: growth factor must exceed one");
        if (!(penalty <= theta_max))
            throw std::invalid_argument("RankRelaxState: penalty above cap");
        if (!(varpi >= 0.0))
            throw std::invalid_argument("RankRelaxState: negative slack");
        if (!basis.empty())
        {
            const CMatrix G = basis.adjoint() * basis;
            if ((G - CMatrix::identity(G.rows())).max_abs() > 1e-10)
                throw std::invalid_argument("RankRelaxState: basis is not orthonormal");
        }
    }

    CMatrix smallest_eigvec_basis(const CMatrix &X, std::size_t m)
    {
        const std::size_t n = X.rows();
        if (X.cols() != n)
            throw std::invalid_argument("smallest_eigvec_basis: matrix must be square");
        if (m < 1 || m >= n)
            throw std::invalid_argument("smallest_eigvec_basis: basis size must satisfy 1 <= m < n");
        const EigenResult r = hermitian_eig(X, HermitianCheck::symmetrize);
        CMatrix B(n, m);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < n; ++i)
                B(i, j) = r.vectors(i, j);
        return B;
    }

    Lmi rank_lmi(std::size_t var, std::size_t slack, const CMatrix &basis)
    {
        Lmi L;
        L.dim = basis.cols();
        L.constant = CMatrix(L.dim, L.dim);
        L.terms.push_back({var, basis, -1.0});
        L.scalar_terms.push_back({slack, CMatrix::identity(L.dim)});
        L.label = "rank";
        return L;
    }

    Lmi rank_lmi(const CMatrix &X, std::size_t slack, const CMatrix &basis)
    {
        if (X.rows() != basis.rows() || X.cols() != basis.rows())
            throw std::invalid_argument("rank_lmi: dimension mismatch");
        Lmi L;
        L.dim = basis.cols();
        L.constant = congruence(basis, X) * -1.0;
        L.constant.symmetrize();
        L.scalar_terms.push_back({slack, CMatrix::identity(L.dim)});
        L.label = "rank";
        return L;
    }

    double min_feasible_slack(const CMatrix &X, const CMatrix &basis)
    {
        if (X.rows() != basis.rows())
            throw std::invalid_argument("min_feasible_slack: dimension mismatch");
        const EigenResult r = hermitian_eig(congruence(basis, X), HermitianCheck::symmetrize);
        return std::max(r.values.back(), 0.0);
    }

    double penalty_step(const RankRelaxState &s)
    {
        if (!(s.nu > 1.0))
            throw std::invalid_argument("penalty_step: growth factor must exceed one");
        if (!(s.theta_max >= s.penalty))
            throw std::invalid_argument("penalty_step: penalty above cap");
        return std::min(s.nu * s.penalty, s.theta_max);
    }

    int penalty_steps_to_cap(double start, double nu, double theta_max)
    {
        if (!(start > 0.0) || !(nu > 1.0) || !(theta_max >= start))
            throw std::invalid_argument("penalty_steps_to_cap: invalid schedule");
        int n = 0;
        RankRelaxState s;
        s.penalty = start;
        s.nu = nu;
        s.theta_max = theta_max;
        while (s.penalty < theta_max)
        {
            s.penalty = penalty_step(s);
            ++n;
        }
        return n;
    }

    double rank_one_ratio(const CMatrix &X)
    {
        const double tr = X.trace().real();
        if (!(tr > 0.0))
            throw std::invalid_argument("rank_one_ratio: trace must be positive");
        const EigenResult r = hermitian_eig(X, HermitianCheck::symmetrize);
        return std::clamp(r.values.back() / tr, 0.0, 1.0);
    }

    double rank_one_ratio_or_one(const CMatrix &X)
    {
        if (!(X.trace().real() > 0.0) || X.max_abs() == 0.0)
            return 1.0;
        return rank_one_ratio(X);
    }

} // namespace irsee
