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

// Primal-dual interior-point method for
//   minimize 1/2 x'Px + q'x  s.t.  Gx + s = h, Ax = b, s in K
// with K a product of nonnegative orthants and complex Hermitian PSD cones,
// Nesterov-Todd scaling and Mehrotra predictor-corrector steps.

#include "irsee/cvxsolver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace irsee
{
    using Eigen::MatrixXcd;
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    const char *to_string(SolveStatus s)
    {
        switch (s)
        {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::infeasible:
            return "infeasible";
        case SolveStatus::iteration_cap:
            return "iteration-cap";
        }
        return "unknown";
    }

    std::size_t ConicProblem::add_matrix(std::size_t dim)
    {
        matrix_dims.push_back(dim);
        obj_matrix.emplace_back();
        if (!prox_weight.empty())
        {
            prox_weight.push_back(0.0);
            prox_center.emplace_back();
        }
        return matrix_dims.size() - 1;
    }

    std::size_t ConicProblem::add_scalar()
    {
        obj_scalar.resize(num_scalars, 0.0);
        obj_scalar.push_back(0.0);
        return num_scalars++;
    }

    namespace
    {
        void check_matrix(const CMatrix &W, std::size_t n, const char *what)
        {
            if (W.rows() != n || W.cols() != n)
                throw std::invalid_argument(std::string("ConicProblem: dimension mismatch in ") + what);
            if (!is_hermitian(W, 1e-10))
                throw std::invalid_argument(std::string("ConicProblem: non-Hermitian data in ") + what);
        }

        void check_functional(const ConicProblem &p, const Functional &f)
        {
            for (const auto &[j, W] : f.matrix_terms)
            {
                if (j >= p.matrix_dims.size())
                    throw std::invalid_argument("ConicProblem: functional references unknown matrix variable");
                check_matrix(W, p.matrix_dims[j], "functional");
            }
            for (const auto &[s, a] : f.scalar_terms)
            {
                if (s >= p.num_scalars)
                    throw std::invalid_argument("ConicProblem: functional references unknown scalar");
                if (!std::isfinite(a))
                    throw std::invalid_argument("ConicProblem: non-finite functional weight");
            }
        }
    } // namespace

    void ConicProblem::validate() const
    {
        const std::size_t nm = matrix_dims.size();
        for (std::size_t d : matrix_dims)
            if (d == 0)
                throw std::invalid_argument("ConicProblem: zero-sized matrix variable");
        if (!obj_matrix.empty() && obj_matrix.size() != nm)
            throw std::invalid_argument("ConicProblem: objective matrix count mismatch");
        for (std::size_t j = 0; j < obj_matrix.size(); ++j)
            if (!obj_matrix[j].empty())
                check_matrix(obj_matrix[j], matrix_dims[j], "objective");
        if (!obj_scalar.empty() && obj_scalar.size() != num_scalars)
            throw std::invalid_argument("ConicProblem: objective scalar count mismatch");
        if (!prox_weight.empty())
        {
            if (prox_weight.size() != nm || prox_center.size() != nm)
                throw std::invalid_argument("ConicProblem: damping data count mismatch");
            for (std::size_t j = 0; j < nm; ++j)
            {
                if (!(prox_weight[j] >= 0.0))
                    throw std::invalid_argument("ConicProblem: negative damping weight");
                if (prox_weight[j] > 0.0)
                    check_matrix(prox_center[j], matrix_dims[j], "damping centre");
            }
        }
        for (const auto &c : constraints)
        {
            check_functional(*this, c.f);
            if (!std::isfinite(c.bound))
                throw std::invalid_argument("ConicProblem: non-finite bound");
        }
        for (const auto &L : lmis)
        {
            if (L.dim == 0)
                throw std::invalid_argument("ConicProblem: zero-sized LMI");
            if (!L.constant.empty())
                check_matrix(L.constant, L.dim, "LMI constant");
            for (const auto &t : L.terms)
            {
                if (t.var >= nm)
                    throw std::invalid_argument("ConicProblem: LMI references unknown matrix variable");
                if (t.P.rows() != matrix_dims[t.var] || t.P.cols() != L.dim)
                    throw std::invalid_argument("ConicProblem: LMI congruence factor has wrong shape");
            }
            for (const auto &t : L.scalar_terms)
            {
                if (t.scalar >= num_scalars)
                    throw std::invalid_argument("ConicProblem: LMI references unknown scalar");
                check_matrix(t.F, L.dim, "LMI scalar term");
            }
        }
    }

    double ConicProblem::evaluate(const Functional &f, const std::vector<CMatrix> &X, const std::vector<double> &t)
    {
        double v = 0.0;
        for (const auto &[j, W] : f.matrix_terms)
            v += trace_inner_real(W, X.at(j));
        for (const auto &[s, a] : f.scalar_terms)
            v += a * t.at(s);
        return v;
    }

    double ConicProblem::affine_objective(const std::vector<CMatrix> &X, const std::vector<double> &t) const
    {
        double v = obj_constant;
        for (std::size_t j = 0; j < obj_matrix.size(); ++j)
            if (!obj_matrix[j].empty())
                v += trace_inner_real(obj_matrix[j], X.at(j));
        for (std::size_t s = 0; s < obj_scalar.size(); ++s)
            v += obj_scalar[s] * t.at(s);
        return v;
    }

    // ------------------------------------------------------------------
    // Hermitian coordinates
    // ------------------------------------------------------------------

    std::vector<double> hermitian_coords(const CMatrix &X)
    {
        const std::size_t n = X.rows();
        std::vector<double> x(n * n);
        std::size_t a = 0;
        for (std::size_t p = 0; p < n; ++p)
            x[a++] = X(p, p).real();
        const double r2 = std::sqrt(2.0);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                const cx z = 0.5 * (X(p, q) + std::conj(X(q, p)));
                x[a++] = r2 * z.real();
                x[a++] = r2 * z.imag();
            }
        return x;
    }

    CMatrix hermitian_from_coords(const double *x, std::size_t n)
    {
        CMatrix X(n, n);
        std::size_t a = 0;
        for (std::size_t p = 0; p < n; ++p)
            X(p, p) = x[a++];
        const double ir2 = 1.0 / std::sqrt(2.0);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                const cx z(x[a] * ir2, x[a + 1] * ir2);
                a += 2;
                X(p, q) = z;
                X(q, p) = std::conj(z);
            }
        return X;
    }

    namespace
    {
        // Sparse description of the orthonormal basis of n x n Hermitian matrices
        struct BasisEntry
        {
            int p, q;
            cx a;
        };

        struct Basis
        {
            std::size_t n = 0;
            std::vector<std::array<BasisEntry, 2>> e;
            std::vector<int> cnt;
        };

        Basis make_basis(std::size_t n)
        {
            Basis B;
            B.n = n;
            const double ir2 = 1.0 / std::sqrt(2.0);
            for (std::size_t p = 0; p < n; ++p)
            {
                B.e.push_back({BasisEntry{int(p), int(p), 1.0}, BasisEntry{0, 0, 0.0}});
                B.cnt.push_back(1);
            }
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q)
                {
                    B.e.push_back({BasisEntry{int(p), int(q), ir2}, BasisEntry{int(q), int(p), ir2}});
                    B.cnt.push_back(2);
                    B.e.push_back({BasisEntry{int(p), int(q), cx(0.0, ir2)}, BasisEntry{int(q), int(p), cx(0.0, -ir2)}});
                    B.cnt.push_back(2);
                }
            return B;
        }

        void to_coords(const MatrixXcd &X, double *x)
        {
            const Eigen::Index n = X.rows();
            Eigen::Index a = 0;
            for (Eigen::Index p = 0; p < n; ++p)
                x[a++] = X(p, p).real();
            const double r2 = std::sqrt(2.0);
            for (Eigen::Index p = 0; p < n; ++p)
                for (Eigen::Index q = p + 1; q < n; ++q)
                {
                    const cx z = 0.5 * (X(p, q) + std::conj(X(q, p)));
                    x[a++] = r2 * z.real();
                    x[a++] = r2 * z.imag();
                }
        }

        MatrixXcd from_coords(const double *x, Eigen::Index n)
        {
            MatrixXcd X(n, n);
            Eigen::Index a = 0;
            for (Eigen::Index p = 0; p < n; ++p)
                X(p, p) = x[a++];
            const double ir2 = 1.0 / std::sqrt(2.0);
            for (Eigen::Index p = 0; p < n; ++p)
                for (Eigen::Index q = p + 1; q < n; ++q)
                {
                    const cx z(x[a] * ir2, x[a + 1] * ir2);
                    a += 2;
                    X(p, q) = z;
                    X(q, p) = std::conj(z);
                }
            return X;
        }

        MatrixXcd to_eigen(const CMatrix &A)
        {
            MatrixXcd M(A.rows(), A.cols());
            for (std::size_t i = 0; i < A.rows(); ++i)
                for (std::size_t j = 0; j < A.cols(); ++j)
                    M(Eigen::Index(i), Eigen::Index(j)) = A(i, j);
            return M;
        }

        CMatrix from_eigen(const MatrixXcd &M)
        {
            CMatrix A(std::size_t(M.rows()), std::size_t(M.cols()));
            for (Eigen::Index i = 0; i < M.rows(); ++i)
                for (Eigen::Index j = 0; j < M.cols(); ++j)
                    A(std::size_t(i), std::size_t(j)) = M(i, j);
            return A;
        }

        MatrixXcd herm(const MatrixXcd &X) { return 0.5 * (X + X.adjoint()); }

        // ------------------------------------------------------------------
        // Internal standard form
        // ------------------------------------------------------------------

        struct VarBlock
        {
            Eigen::Index offset;
            Eigen::Index n;
        };

        struct MatTerm
        {
            std::size_t var;   // index into vars
            MatrixXcd P;       // n_var x dim, unused when identity
            bool identity = false;
            double coef = 1.0;
        };

        struct CoordTerm
        {
            Eigen::Index index; // coordinate of x
            MatrixXcd F;
        };

        // Block value: h - Gx = constant + sum coef P^H X P + sum x_c F
        struct SBlock
        {
            Eigen::Index dim;
            MatrixXcd h;
            std::vector<MatTerm> mterms;
            std::vector<CoordTerm> cterms;
        };

        // Row value: h - g'x >= 0
        struct LRow
        {
            std::vector<std::pair<Eigen::Index, double>> g;
            double h;
        };

        struct Standard
        {
            Eigen::Index nx = 0;
            VectorXd Pdiag, q;
            std::vector<VarBlock> vars;
            std::vector<LRow> lrows;
            MatrixXd A;
            VectorXd b;
            std::vector<SBlock> sblocks;
        };

        struct ConeVec
        {
            VectorXd l;
            std::vector<MatrixXcd> s;
        };

        ConeVec cone_zeros(const Standard &S)
        {
            ConeVec v;
            v.l = VectorXd::Zero(Eigen::Index(S.lrows.size()));
            for (const auto &B : S.sblocks)
                v.s.push_back(MatrixXcd::Zero(B.dim, B.dim));
            return v;
        }

        ConeVec cone_identity(const Standard &S)
        {
            ConeVec v;
            v.l = VectorXd::Ones(Eigen::Index(S.lrows.size()));
            for (const auto &B : S.sblocks)
                v.s.push_back(MatrixXcd::Identity(B.dim, B.dim));
            return v;
        }

        double cone_dot(const ConeVec &a, const ConeVec &b)
        {
            double d = a.l.dot(b.l);
            for (std::size_t i = 0; i < a.s.size(); ++i)
                d += (a.s[i].conjugate().cwiseProduct(b.s[i])).sum().real();
            return d;
        }

        double cone_norm(const ConeVec &a) { return std::sqrt(std::max(cone_dot(a, a), 0.0)); }

        void axpy(double alpha, const ConeVec &x, ConeVec &y)
        {
            y.l += alpha * x.l;
            for (std::size_t i = 0; i < y.s.size(); ++i)
                y.s[i] += alpha * x.s[i];
        }

        // G x
        ConeVec apply_G(const Standard &S, const VectorXd &x)
        {
            ConeVec r = cone_zeros(S);
            for (std::size_t i = 0; i < S.lrows.size(); ++i)
            {
                double v = 0.0;
                for (const auto &[c, g] : S.lrows[i].g)
                    v += g * x[c];
                r.l[Eigen::Index(i)] = v;
            }
            for (std::size_t bi = 0; bi < S.sblocks.size(); ++bi)
            {
                const SBlock &B = S.sblocks[bi];
                MatrixXcd acc = MatrixXcd::Zero(B.dim, B.dim);
                for (const auto &t : B.mterms)
                {
                    const VarBlock &v = S.vars[t.var];
                    const MatrixXcd X = from_coords(x.data() + v.offset, v.n);
                    if (t.identity)
                        acc += t.coef * X;
                    else
                        acc += t.coef * (t.P.adjoint() * X * t.P);
                }
                for (const auto &t : B.cterms)
                    acc += x[t.index] * t.F;
                r.s[bi] = -acc;
            }
            return r;
        }

        // G' z
        VectorXd apply_Gt(const Standard &S, const ConeVec &z)
        {
            VectorXd r = VectorXd::Zero(S.nx);
            for (std::size_t i = 0; i < S.lrows.size(); ++i)
                for (const auto &[c, g] : S.lrows[i].g)
                    r[c] += g * z.l[Eigen::Index(i)];
            std::vector<double> buf;
            for (std::size_t bi = 0; bi < S.sblocks.size(); ++bi)
            {
                const SBlock &B = S.sblocks[bi];
                const MatrixXcd &Z = z.s[bi];
                for (const auto &t : B.mterms)
                {
                    const VarBlock &v = S.vars[t.var];
                    const MatrixXcd Y = t.identity ? MatrixXcd(Z) : MatrixXcd(t.P * Z * t.P.adjoint());
                    buf.assign(std::size_t(v.n * v.n), 0.0);
                    to_coords(herm(Y), buf.data());
                    for (Eigen::Index a = 0; a < v.n * v.n; ++a)
                        r[v.offset + a] -= t.coef * buf[std::size_t(a)];
                }
                for (const auto &t : B.cterms)
                    r[t.index] -= (t.F.conjugate().cwiseProduct(Z)).sum().real();
            }
            return r;
        }

        ConeVec h_vec(const Standard &S)
        {
            ConeVec h = cone_zeros(S);
            for (std::size_t i = 0; i < S.lrows.size(); ++i)
                h.l[Eigen::Index(i)] = S.lrows[i].h;
            for (std::size_t bi = 0; bi < S.sblocks.size(); ++bi)
                h.s[bi] = S.sblocks[bi].h;
            return h;
        }

        // Nesterov-Todd scaling of the current pair (s, z)
        struct Scaling
        {
            VectorXd d;                    // orthant: W = diag(d)
            std::vector<MatrixXcd> r, rinv; // PSD: W(z) = r^H z r
            ConeVec lambda;                 // W z = W^{-T} s, diagonal for PSD blocks
            std::vector<VectorXd> lam_s;    // eigenvalue vectors of PSD blocks
        };

        bool compute_scaling(const Standard &S, const ConeVec &s, const ConeVec &z, Scaling &W)
        {
            const Eigen::Index nl = Eigen::Index(S.lrows.size());
            W.d.resize(nl);
            W.lambda = cone_zeros(S);
            for (Eigen::Index i = 0; i < nl; ++i)
            {
                if (!(s.l[i] > 0.0 && z.l[i] > 0.0))
                    return false;
                W.d[i] = std::sqrt(s.l[i] / z.l[i]);
                W.lambda.l[i] = std::sqrt(s.l[i] * z.l[i]);
            }
            W.r.resize(S.sblocks.size());
            W.rinv.resize(S.sblocks.size());
            W.lam_s.resize(S.sblocks.size());
            for (std::size_t bi = 0; bi < S.sblocks.size(); ++bi)
            {
                Eigen::LLT<MatrixXcd> ls(herm(s.s[bi])), lz(herm(z.s[bi]));
                if (ls.info() != Eigen::Success || lz.info() != Eigen::Success)
                    return false;
                const MatrixXcd Ls = ls.matrixL();
                const MatrixXcd Lz = lz.matrixL();
                Eigen::JacobiSVD<MatrixXcd> svd(Lz.adjoint() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
                const VectorXd sv = svd.singularValues();
                if (!(sv.minCoeff() > 0.0))
                    return false;
                const VectorXd isq = sv.cwiseSqrt().cwiseInverse();
                W.r[bi] = Ls * svd.matrixV() * isq.asDiagonal();
                W.rinv[bi] = isq.asDiagonal() * svd.matrixU().adjoint() * Lz.adjoint();
                W.lam_s[bi] = sv;
                W.lambda.s[bi] = sv.cast<cx>().asDiagonal();
            }
            return true;
        }

        void identity_scaling(const Standard &S, Scaling &W)
        {
            W.d = VectorXd::Ones(Eigen::Index(S.lrows.size()));
            W.lambda = cone_identity(S);
            W.r.clear();
            W.rinv.clear();
            W.lam_s.clear();
            for (const auto &B : S.sblocks)
            {
                W.r.push_back(MatrixXcd::Identity(B.dim, B.dim));
                W.rinv.push_back(MatrixXcd::Identity(B.dim, B.dim));
                W.lam_s.push_back(VectorXd::Ones(B.dim));
            }
        }

        // H_ab += scale * Re Tr(B_a Q B_b Q^H) for the blocks of variables (v1, v2).
        // Column b holds the coordinates of Q B_b Q^H in the basis of the first block.
        void add_congruence_block(MatrixXd &H, const VarBlock &v1, const VarBlock &v2, const Basis &B2,
                                  const MatrixXcd &Q, double scale)
        {
            const Eigen::Index n2 = v2.n * v2.n;
            MatrixXcd M(Q.rows(), Q.rows());
            std::vector<double> buf(std::size_t(v1.n * v1.n));
            for (Eigen::Index b = 0; b < n2; ++b)
            {
                const auto &eb = B2.e[std::size_t(b)];
                const auto &e0 = eb[0];
                M.noalias() = e0.a * Q.col(e0.p) * Q.col(e0.q).adjoint();
                if (B2.cnt[std::size_t(b)] == 2)
                    M.noalias() += eb[1].a * Q.col(eb[1].p) * Q.col(eb[1].q).adjoint();
                to_coords(M, buf.data());
                for (Eigen::Index a = 0; a < v1.n * v1.n; ++a)
                    H(v1.offset + a, v2.offset + b) += scale * buf[std::size_t(a)];
            }
        }

        // Coordinates that interact only through rows of G spanning several of them.
        // The reduced matrix is then block diagonal plus a low-rank term from those rows.
        struct Partition
        {
            std::vector<std::vector<Eigen::Index>> groups;
            std::vector<std::size_t> coupling; // indices into S.lrows
            std::vector<bool> is_coupling;     // per l-row
            bool use = false;
        };

        Partition make_partition(const Standard &S)
        {
            std::vector<Eigen::Index> parent(std::size_t(S.nx));
            for (Eigen::Index i = 0; i < S.nx; ++i)
                parent[std::size_t(i)] = i;
            auto find = [&](Eigen::Index i)
            {
                while (parent[std::size_t(i)] != i)
                {
                    parent[std::size_t(i)] = parent[std::size_t(parent[std::size_t(i)])];
                    i = parent[std::size_t(i)];
                }
                return i;
            };
            auto unite = [&](Eigen::Index a, Eigen::Index b) { parent[std::size_t(find(a))] = find(b); };
            for (const auto &v : S.vars)
                for (Eigen::Index a = 1; a < v.n * v.n; ++a)
                    unite(v.offset + a, v.offset);
            for (const auto &B : S.sblocks)
            {
                Eigen::Index root = -1;
                auto join = [&](Eigen::Index c)
                {
                    if (root < 0)
                        root = c;
                    else
                        unite(c, root);
                };
                for (const auto &t : B.mterms)
                    join(S.vars[t.var].offset);
                for (const auto &c : B.cterms)
                    join(c.index);
            }

            Partition P;
            P.is_coupling.assign(S.lrows.size(), false);
            for (std::size_t i = 0; i < S.lrows.size(); ++i)
            {
                const auto &g = S.lrows[i].g;
                for (const auto &e : g)
                    if (find(e.first) != find(g.front().first))
                    {
                        P.is_coupling[i] = true;
                        P.coupling.push_back(i);
                        break;
                    }
            }
            std::vector<Eigen::Index> slot(std::size_t(S.nx), -1);
            for (Eigen::Index i = 0; i < S.nx; ++i)
            {
                const Eigen::Index r = find(i);
                if (slot[std::size_t(r)] < 0)
                {
                    slot[std::size_t(r)] = Eigen::Index(P.groups.size());
                    P.groups.emplace_back();
                }
                P.groups[std::size_t(slot[std::size_t(r)])].push_back(i);
            }
            P.use = P.groups.size() > 1 && 4 * P.coupling.size() <= std::size_t(S.nx);
            return P;
        }

        struct Kkt
        {
            bool structured = false;
            Eigen::LLT<MatrixXd> H;               // dense path
            std::vector<Eigen::LLT<MatrixXd>> blocks; // structured path: one factor per group
            MatrixXd U;                           // coupling rows, scaled by 1/d
            MatrixXd BiUt;                        // block part inverse times U'
            Eigen::LLT<MatrixXd> cap;             // I + U B^{-1} U'
            Eigen::LLT<MatrixXd> Schur;
            MatrixXd HiAt;
            MatrixXd Hfull; // unregularized (block part only on the structured path), for refinement
            bool has_eq = false;
        };

        VectorXd block_solve(const Partition &P, const Kkt &K, const VectorXd &v)
        {
            VectorXd x(v.size());
            for (std::size_t g = 0; g < P.groups.size(); ++g)
            {
                const VectorXd vg = v(P.groups[g]);
                const VectorXd xg = K.blocks[g].solve(vg);
                x(P.groups[g]) = xg;
            }
            return x;
        }

        VectorXd h_solve(const Partition &P, const Kkt &K, const VectorXd &v)
        {
            if (!K.structured)
                return K.H.solve(v);
            const VectorXd x = block_solve(P, K, v);
            if (K.U.rows() == 0)
                return x;
            return x - K.BiUt * K.cap.solve(K.U * x);
        }

        VectorXd h_apply(const Kkt &K, const VectorXd &x)
        {
            VectorXd y = K.Hfull * x;
            if (K.structured && K.U.rows())
                y += K.U.transpose() * (K.U * x);
            return y;
        }

        bool factor_llt(const MatrixXd &H, Eigen::LLT<MatrixXd> &F)
        {
            const double dmax = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
            double reg = 0.0;
            for (int attempt = 0; attempt < 8; ++attempt)
            {
                MatrixXd Hr = H;
                if (reg > 0.0)
                    Hr.diagonal().array() += reg;
                F.compute(Hr);
                if (F.info() == Eigen::Success)
                    return true;
                reg = (reg == 0.0) ? 1e-14 * dmax : reg * 100.0;
            }
            return false;
        }

        bool factor_kkt(const Standard &S, const Partition &P, const Scaling &W, const std::vector<Basis> &bases,
                        Kkt &K)
        {
            MatrixXd H = MatrixXd::Zero(S.nx, S.nx);
            H.diagonal() += S.Pdiag;
            K.structured = P.use;
            std::size_t nc = 0;
            if (K.structured)
                K.U = MatrixXd::Zero(Eigen::Index(P.coupling.size()), S.nx);
            for (std::size_t i = 0; i < S.lrows.size(); ++i)
            {
                const double w = 1.0 / (W.d[Eigen::Index(i)] * W.d[Eigen::Index(i)]);
                const auto &g = S.lrows[i].g;
                if (K.structured && P.is_coupling[i])
                {
                    const double sw = std::sqrt(w);
                    for (const auto &[c, gc] : g)
                        K.U(Eigen::Index(nc), c) += sw * gc;
                    ++nc;
                    continue;
                }
                if (g.size() > 16)
                {
                    VectorXd gv = VectorXd::Zero(S.nx);
                    for (const auto &[c, gc] : g)
                        gv[c] += gc;
                    H.noalias() += w * gv * gv.transpose();
                    continue;
                }
                for (const auto &[c1, g1] : g)
                    for (const auto &[c2, g2] : g)
                        H(c1, c2) += w * g1 * g2;
            }
            for (std::size_t bi = 0; bi < S.sblocks.size(); ++bi)
            {
                const SBlock &B = S.sblocks[bi];
                const MatrixXcd T = W.rinv[bi].adjoint() * W.rinv[bi];
                for (const auto &t1 : B.mterms)
                {
                    const VarBlock &v1 = S.vars[t1.var];
                    for (const auto &t2 : B.mterms)
                    {
                        const VarBlock &v2 = S.vars[t2.var];
                        const Basis &B2 = bases[std::size_t(v2.n)];
                        MatrixXcd Q;
                        if (t1.identity && t2.identity)
                            Q = T;
                        else if (t1.identity)
                            Q = T * t2.P.adjoint();
                        else if (t2.identity)
                            Q = t1.P * T;
                        else
                            Q = t1.P * T * t2.P.adjoint();
                        add_congruence_block(H, v1, v2, B2, Q, t1.coef * t2.coef);
                    }
                    std::vector<double> buf(std::size_t(v1.n * v1.n));
                    for (const auto &c : B.cterms)
                    {
                        const MatrixXcd TFT = T * c.F * T;
                        const MatrixXcd Y = t1.identity ? TFT : MatrixXcd(t1.P * TFT * t1.P.adjoint());
                        to_coords(herm(Y), buf.data());
                        for (Eigen::Index a = 0; a < v1.n * v1.n; ++a)
                        {
                            H(v1.offset + a, c.index) += t1.coef * buf[std::size_t(a)];
                            H(c.index, v1.offset + a) += t1.coef * buf[std::size_t(a)];
                        }
                    }
                }
                for (const auto &c1 : B.cterms)
                {
                    const MatrixXcd TF = T * c1.F * T;
                    for (const auto &c2 : B.cterms)
                        H(c1.index, c2.index) += (TF.conjugate().cwiseProduct(c2.F)).sum().real();
                }
            }

            K.Hfull = H;
            if (K.structured)
            {
                K.blocks.resize(P.groups.size());
                for (std::size_t g = 0; g < P.groups.size(); ++g)
                    if (!factor_llt(H(P.groups[g], P.groups[g]), K.blocks[g]))
                        return false;
                if (K.U.rows())
                {
                    K.BiUt.resize(S.nx, K.U.rows());
                    for (Eigen::Index r = 0; r < K.U.rows(); ++r)
                        K.BiUt.col(r) = block_solve(P, K, K.U.row(r).transpose());
                    MatrixXd C = K.U * K.BiUt;
                    C.diagonal().array() += 1.0;
                    K.cap.compute(C);
                    if (K.cap.info() != Eigen::Success)
                        return false;
                }
            }
            else if (!factor_llt(H, K.H))
                return false;
            K.has_eq = S.A.rows() > 0;
            if (K.has_eq)
            {
                K.HiAt.resize(S.nx, S.A.rows());
                if (K.structured)
                    for (Eigen::Index r = 0; r < S.A.rows(); ++r)
                        K.HiAt.col(r) = h_solve(P, K, S.A.row(r).transpose());
                else
                    K.HiAt = K.H.solve(S.A.transpose());
                MatrixXd Sc = S.A * K.HiAt;
                K.Schur.compute(Sc);
                if (K.Schur.info() != Eigen::Success)
                {
                    Sc.diagonal().array() += 1e-14 * std::max(1.0, Sc.diagonal().cwiseAbs().maxCoeff());
                    K.Schur.compute(Sc);
                    if (K.Schur.info() != Eigen::Success)
                        return false;
                }
            }
            return true;
        }

        // lambda \ ds
        ConeVec jordan_div(const Scaling &W, const ConeVec &ds)
        {
            ConeVec u;
            u.l = ds.l.cwiseQuotient(W.lambda.l);
            for (std::size_t bi = 0; bi < ds.s.size(); ++bi)
            {
                const VectorXd &lam = W.lam_s[bi];
                MatrixXcd m = ds.s[bi];
                for (Eigen::Index i = 0; i < m.rows(); ++i)
                    for (Eigen::Index j = 0; j < m.cols(); ++j)
                        m(i, j) *= 2.0 / (lam[i] + lam[j]);
                u.s.push_back(m);
            }
            return u;
        }

        ConeVec jordan_prod(const ConeVec &a, const ConeVec &b)
        {
            ConeVec r;
            r.l = a.l.cwiseProduct(b.l);
            for (std::size_t bi = 0; bi < a.s.size(); ++bi)
                r.s.push_back(0.5 * (a.s[bi] * b.s[bi] + b.s[bi] * a.s[bi]));
            return r;
        }

        struct Direction
        {
            VectorXd x, y;
            ConeVec z, s;          // unscaled
            ConeVec zt, st;        // scaled: W dz and W^{-T} ds
        };

        void reduced_solve(const Standard &S, const Partition &P, const Kkt &K, const VectorXd &rhs,
                           const VectorXd &by, VectorXd &x, VectorXd &y)
        {
            if (K.has_eq)
            {
                const VectorXd Hr = h_solve(P, K, rhs);
                y = K.Schur.solve(S.A * Hr - by);
                x = Hr - K.HiAt * y;
            }
            else
            {
                x = h_solve(P, K, rhs);
                y = VectorXd::Zero(0);
            }
        }

        // Solves  P dx + A'dy + G'dz = bx,  A dx = by,  G dx + ds = bz,  lambda o (W dz + W^{-T} ds) = dsc
        Direction kkt_solve(const Standard &S, const Partition &P, const Scaling &W, const Kkt &K, const VectorXd &bx,
                            const VectorXd &by, const ConeVec &bz, const ConeVec &dsc)
        {
            const ConeVec u = jordan_div(W, dsc);
            // v = (W'W)^{-1} bz - W^{-1} u
            ConeVec v;
            v.l = bz.l.cwiseQuotient(W.d.cwiseProduct(W.d)) - u.l.cwiseQuotient(W.d);
            for (std::size_t bi = 0; bi < bz.s.size(); ++bi)
            {
                const MatrixXcd &ri = W.rinv[bi];
                const MatrixXcd T = ri.adjoint() * ri;
                v.s.push_back(herm(T * bz.s[bi] * T - ri.adjoint() * u.s[bi] * ri));
            }
            const VectorXd rhs = bx + apply_Gt(S, v);
            Direction d;
            reduced_solve(S, P, K, rhs, by, d.x, d.y);
            // iterative refinement on  H x + A'y = rhs,  A x = by
            for (int pass = 0; pass < 3; ++pass)
            {
                VectorXd r1 = rhs - h_apply(K, d.x);
                if (K.has_eq)
                    r1 -= S.A.transpose() * d.y;
                const VectorXd r2 = K.has_eq ? VectorXd(by - S.A * d.x) : VectorXd::Zero(0);
                const double rn = std::max(r1.norm(), r2.size() ? r2.norm() : 0.0);
                if (!(rn > 1e-14 * std::max(1.0, rhs.norm())))
                    break;
                VectorXd ex, ey;
                reduced_solve(S, P, K, r1, r2, ex, ey);
                d.x += ex;
                if (K.has_eq)
                    d.y += ey;
            }
            // dz = (W'W)^{-1} G dx - v
            const ConeVec Gdx = apply_G(S, d.x);
            d.z.l = Gdx.l.cwiseQuotient(W.d.cwiseProduct(W.d)) - v.l;
            d.zt.l = d.z.l.cwiseProduct(W.d);
            // ds from the linear equation directly; going through the scaling loses accuracy near the boundary
            d.s.l = bz.l - Gdx.l;
            d.st.l = d.s.l.cwiseQuotient(W.d);
            for (std::size_t bi = 0; bi < bz.s.size(); ++bi)
            {
                const MatrixXcd &r = W.r[bi];
                const MatrixXcd &ri = W.rinv[bi];
                const MatrixXcd T = ri.adjoint() * ri;
                const MatrixXcd dz = herm(T * Gdx.s[bi] * T - v.s[bi]);
                const MatrixXcd zt = herm(r.adjoint() * dz * r);
                const MatrixXcd ds = herm(bz.s[bi] - Gdx.s[bi]);
                d.z.s.push_back(dz);
                d.zt.s.push_back(zt);
                d.st.s.push_back(herm(ri * ds * ri.adjoint()));
                d.s.s.push_back(ds);
            }
            return d;
        }

        // Largest alpha with lambda + alpha * dir in the cone (scaled coordinates, lambda diagonal)
        double max_step_scaled(const Scaling &W, const ConeVec &dir)
        {
            double amax = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < dir.l.size(); ++i)
                if (dir.l[i] < 0.0)
                    amax = std::min(amax, -W.lambda.l[i] / dir.l[i]);
            for (std::size_t bi = 0; bi < dir.s.size(); ++bi)
            {
                const VectorXd isq = W.lam_s[bi].cwiseSqrt().cwiseInverse();
                const MatrixXcd M = herm(isq.asDiagonal() * dir.s[bi] * isq.asDiagonal());
                Eigen::SelfAdjointEigenSolver<MatrixXcd> es(M, Eigen::EigenvaluesOnly);
                const double mn = es.eigenvalues().minCoeff();
                if (mn < 0.0)
                    amax = std::min(amax, -1.0 / mn);
            }
            return amax;
        }

        // Smallest t with v + t e in the cone
        double cone_shift(const ConeVec &v)
        {
            double t = -std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < v.l.size(); ++i)
                t = std::max(t, -v.l[i]);
            for (const auto &M : v.s)
            {
                Eigen::SelfAdjointEigenSolver<MatrixXcd> es(herm(M), Eigen::EigenvaluesOnly);
                t = std::max(t, -es.eigenvalues().minCoeff());
            }
            return t;
        }

        void add_identity(ConeVec &v, double t)
        {
            v.l.array() += t;
            for (auto &M : v.s)
                M.diagonal().array() += t;
        }

        Eigen::Index cone_degree(const Standard &S)
        {
            Eigen::Index m = Eigen::Index(S.lrows.size());
            for (const auto &B : S.sblocks)
                m += B.dim;
            return m;
        }

        struct IpmResult
        {
            bool converged = false;
            bool diverged = false;
            bool reduced = false; // converged only to the looser fallback tolerance
            int iterations = 0;
            VectorXd x, y;
            ConeVec s, z;
            double pres = 0.0, dres = 0.0, gap = 0.0;
        };

        IpmResult run_ipm(const Standard &S, double tol, int max_iter)
        {
            IpmResult R;
            std::vector<Basis> bases(1);
            for (const auto &v : S.vars)
                while (bases.size() <= std::size_t(v.n))
                    bases.push_back(make_basis(bases.size()));

            const ConeVec h = h_vec(S);
            const double resx0 = std::max(1.0, S.q.norm());
            const double resy0 = std::max(1.0, S.b.size() ? S.b.norm() : 0.0);
            const double resz0 = std::max(1.0, cone_norm(h));
            const double feastol = tol, abstol = 1e-2 * tol, reltol = tol;
            const Eigen::Index m = cone_degree(S);

            // Initial point from the identity-scaled KKT system
            Scaling W;
            identity_scaling(S, W);
            const Partition P = make_partition(S);
            Kkt K;
            if (!factor_kkt(S, P, W, bases, K))
                return R;
            {
                ConeVec zero = cone_zeros(S);
                Direction d0 = kkt_solve(S, P, W, K, -S.q, S.b, h, zero);
                R.x = d0.x;
                R.y = d0.y;
                R.z = d0.z;
                R.s = d0.z;
                R.s.l = -R.s.l;
                for (auto &M : R.s.s)
                    M = -M;
                const double nrms = std::max(1.0, cone_norm(R.s));
                const double nrmz = std::max(1.0, cone_norm(R.z));
                const double ts = cone_shift(R.s);
                if (ts >= -1e-8 * nrms)
                    add_identity(R.s, 1.0 + ts);
                const double tz = cone_shift(R.z);
                if (tz >= -1e-8 * nrmz)
                    add_identity(R.z, 1.0 + tz);
            }

            IpmResult near;
            bool have_near = false;
            auto stalled = [&]() -> IpmResult {
                if (have_near)
                    return near;
                R.diverged = true;
                return R;
            };
            const double blow_up = 1e13 * std::max({1.0, resx0, resz0, resy0});
            for (int it = 0; it <= max_iter; ++it)
            {
                R.iterations = it;
                // Residuals
                const VectorXd Px = S.Pdiag.cwiseProduct(R.x);
                const VectorXd rx = Px + S.q + (S.A.rows() ? VectorXd(S.A.transpose() * R.y) : VectorXd::Zero(S.nx)) +
                                    apply_Gt(S, R.z);
                const VectorXd ry = S.A.rows() ? VectorXd(S.A * R.x - S.b) : VectorXd::Zero(0);
                ConeVec rz = apply_G(S, R.x);
                axpy(1.0, R.s, rz);
                axpy(-1.0, h, rz);
                const double gap = cone_dot(R.s, R.z);
                const double mu = gap / double(m);
                const double pcost = 0.5 * R.x.dot(Px) + S.q.dot(R.x);
                const double dcost = pcost + (ry.size() ? R.y.dot(ry) : 0.0) + cone_dot(R.z, rz) - gap;
                const double pres = std::max(ry.size() ? ry.norm() / resy0 : 0.0, cone_norm(rz) / resz0);
                const double dres = rx.norm() / resx0;
                double relgap = std::numeric_limits<double>::infinity();
                if (pcost < 0.0)
                    relgap = gap / -pcost;
                else if (dcost > 0.0)
                    relgap = gap / dcost;
                R.pres = pres;
                R.dres = dres;
                R.gap = gap;
                if (pres <= feastol && dres <= feastol && (gap <= abstol || relgap <= reltol))
                {
                    R.converged = true;
                    return R;
                }
                // fallback when the method stalls close to the optimum
                if (pres <= 1e2 * feastol && dres <= 1e2 * feastol && (gap <= 1e2 * abstol || relgap <= 1e2 * reltol))
                {
                    near = R;
                    near.converged = true;
                    near.reduced = true;
                    have_near = true;
                }
                if (it == max_iter)
                    return have_near ? near : R;
                if (!std::isfinite(gap) || R.x.norm() > blow_up || cone_norm(R.z) > blow_up ||
                    cone_norm(R.s) > blow_up)
                {
                    return stalled();
                }

                if (!compute_scaling(S, R.s, R.z, W) || !factor_kkt(S, P, W, bases, K))
                {
                    return stalled();
                }

                // Predictor
                ConeVec ds = jordan_prod(W.lambda, W.lambda);
                ds.l = -ds.l;
                for (auto &M : ds.s)
                    M = -M;
                ConeVec mrz = rz;
                mrz.l = -mrz.l;
                for (auto &M : mrz.s)
                    M = -M;
                const VectorXd mrx = -rx, mry = -ry;
                const Direction da = kkt_solve(S, P, W, K, mrx, mry, mrz, ds);
                const double amax_a = std::min(max_step_scaled(W, da.st), max_step_scaled(W, da.zt));
                const double alpha_a = std::min(1.0, amax_a);
                const double sigma = std::pow(std::max(0.0, 1.0 - alpha_a), 3);

                // Corrector
                ConeVec dsc = jordan_prod(da.st, da.zt);
                axpy(1.0, jordan_prod(W.lambda, W.lambda), dsc);
                dsc.l = -dsc.l;
                for (auto &M : dsc.s)
                    M = -M;
                ConeVec sme = cone_identity(S);
                axpy(sigma * mu, sme, dsc);
                const Direction dc = kkt_solve(S, P, W, K, mrx, mry, mrz, dsc);
                const double amax = std::min(max_step_scaled(W, dc.st), max_step_scaled(W, dc.zt));
                const double alpha = std::min(1.0, 0.99 * amax);
                if (!(alpha > 1e-12))
                {
                    return stalled();
                }
                R.x += alpha * dc.x;
                if (R.y.size())
                    R.y += alpha * dc.y;
                axpy(alpha, dc.s, R.s);
                axpy(alpha, dc.z, R.z);
                for (auto &M : R.s.s)
                    M = herm(M);
                for (auto &M : R.z.s)
                    M = herm(M);
            }
            return R;
        }

        Standard build_standard(const ConicProblem &p)
        {
            Standard S;
            const std::size_t nm = p.matrix_dims.size();
            Eigen::Index off = 0;
            for (std::size_t j = 0; j < nm; ++j)
            {
                const Eigen::Index n = Eigen::Index(p.matrix_dims[j]);
                S.vars.push_back({off, n});
                off += n * n;
            }
            const Eigen::Index soff = off;
            S.nx = off + Eigen::Index(p.num_scalars);
            S.Pdiag = VectorXd::Zero(S.nx);
            S.q = VectorXd::Zero(S.nx);

            // Objective: maximize -> minimize the negative
            std::vector<double> buf;
            for (std::size_t j = 0; j < p.obj_matrix.size(); ++j)
                if (!p.obj_matrix[j].empty())
                {
                    buf = hermitian_coords(p.obj_matrix[j]);
                    for (std::size_t a = 0; a < buf.size(); ++a)
                        S.q[S.vars[j].offset + Eigen::Index(a)] -= buf[a];
                }
            for (std::size_t s = 0; s < p.obj_scalar.size(); ++s)
                S.q[soff + Eigen::Index(s)] -= p.obj_scalar[s];
            if (!p.prox_weight.empty())
                for (std::size_t j = 0; j < nm; ++j)
                {
                    const double w = p.prox_weight[j];
                    if (w <= 0.0)
                        continue;
                    buf = hermitian_coords(p.prox_center[j]);
                    for (std::size_t a = 0; a < buf.size(); ++a)
                    {
                        S.Pdiag[S.vars[j].offset + Eigen::Index(a)] += w;
                        S.q[S.vars[j].offset + Eigen::Index(a)] -= w * buf[a];
                    }
                }

            auto functional_row = [&](const Functional &f)
            {
                VectorXd g = VectorXd::Zero(S.nx);
                for (const auto &[j, W] : f.matrix_terms)
                {
                    buf = hermitian_coords(W);
                    for (std::size_t a = 0; a < buf.size(); ++a)
                        g[S.vars[j].offset + Eigen::Index(a)] += buf[a];
                }
                for (const auto &[s, a] : f.scalar_terms)
                    g[soff + Eigen::Index(s)] += a;
                return g;
            };
            auto sparse = [](const VectorXd &g, double sign)
            {
                std::vector<std::pair<Eigen::Index, double>> r;
                for (Eigen::Index i = 0; i < g.size(); ++i)
                    if (g[i] != 0.0)
                        r.emplace_back(i, sign * g[i]);
                return r;
            };

            std::vector<VectorXd> eq_rows;
            std::vector<double> eq_b;
            for (const auto &c : p.constraints)
            {
                const VectorXd g = functional_row(c.f);
                switch (c.rel)
                {
                case Relation::less_equal:
                    S.lrows.push_back({sparse(g, 1.0), c.bound});
                    break;
                case Relation::greater_equal:
                    S.lrows.push_back({sparse(g, -1.0), -c.bound});
                    break;
                case Relation::equal:
                    eq_rows.push_back(g);
                    eq_b.push_back(c.bound);
                    break;
                }
            }
            for (std::size_t s = 0; s < p.num_scalars; ++s)
                S.lrows.push_back({{{soff + Eigen::Index(s), -1.0}}, 0.0});

            S.A = MatrixXd::Zero(Eigen::Index(eq_rows.size()), S.nx);
            S.b = VectorXd::Zero(Eigen::Index(eq_rows.size()));
            for (std::size_t i = 0; i < eq_rows.size(); ++i)
            {
                S.A.row(Eigen::Index(i)) = eq_rows[i].transpose();
                S.b[Eigen::Index(i)] = eq_b[i];
            }

            for (std::size_t j = 0; j < nm; ++j)
            {
                SBlock B;
                B.dim = S.vars[j].n;
                B.h = MatrixXcd::Zero(B.dim, B.dim);
                MatTerm t;
                t.var = j;
                t.identity = true;
                B.mterms.push_back(t);
                S.sblocks.push_back(std::move(B));
            }
            for (const auto &L : p.lmis)
            {
                SBlock B;
                B.dim = Eigen::Index(L.dim);
                B.h = L.constant.empty() ? MatrixXcd::Zero(B.dim, B.dim) : to_eigen(L.constant);
                for (const auto &t : L.terms)
                {
                    MatTerm m;
                    m.var = t.var;
                    m.P = to_eigen(t.P);
                    m.coef = t.coef;
                    B.mterms.push_back(std::move(m));
                }
                for (const auto &t : L.scalar_terms)
                    B.cterms.push_back({soff + Eigen::Index(t.scalar), to_eigen(t.F)});
                S.sblocks.push_back(std::move(B));
            }
            return S;
        }

        // min t  s.t.  h - Gx + t e in K,  Ax = b,  t >= -1
        Standard phase_one(const Standard &S0)
        {
            Standard S = S0;
            const Eigen::Index it = S.nx;
            S.nx += 1;
            S.Pdiag = VectorXd::Zero(S.nx);
            S.q = VectorXd::Zero(S.nx);
            S.q[it] = 1.0;
            for (auto &r : S.lrows)
                r.g.emplace_back(it, -1.0);
            S.lrows.push_back({{{it, -1.0}}, 1.0});
            if (S.A.rows())
            {
                MatrixXd A = MatrixXd::Zero(S.A.rows(), S.nx);
                A.leftCols(S.A.cols()) = S.A;
                S.A = A;
            }
            else
                S.A = MatrixXd::Zero(0, S.nx);
            for (auto &B : S.sblocks)
                B.cterms.push_back({it, MatrixXcd::Identity(B.dim, B.dim)});
            return S;
        }
    } // namespace

    ConicSolution solve(const ConicProblem &p, const SolverOptions &opt)
    {
        if (!(opt.tol > 0.0) || opt.max_iter < 1)
            throw std::invalid_argument("solve: tolerance and iteration cap must be positive");
        p.validate();
        const Standard S = build_standard(p);
        const IpmResult R = run_ipm(S, opt.tol, opt.max_iter);

        ConicSolution sol;
        sol.iterations = R.iterations;
        sol.primal_residual = R.pres;
        sol.dual_residual = R.dres;
        sol.gap = R.gap;

        auto extract = [&](const VectorXd &x)
        {
            sol.X.clear();
            sol.t.clear();
            for (std::size_t j = 0; j < p.matrix_dims.size(); ++j)
            {
                const auto &v = S.vars[j];
                CMatrix X = from_eigen(from_coords(x.data() + v.offset, v.n));
                sol.X.push_back(std::move(X));
            }
            const Eigen::Index soff = S.vars.empty() ? 0 : S.vars.back().offset + S.vars.back().n * S.vars.back().n;
            for (std::size_t s = 0; s < p.num_scalars; ++s)
                sol.t.push_back(x[soff + Eigen::Index(s)]);
            sol.affine_objective = p.affine_objective(sol.X, sol.t);
            sol.objective = sol.affine_objective;
            if (!p.prox_weight.empty())
                for (std::size_t j = 0; j < p.matrix_dims.size(); ++j)
                    if (p.prox_weight[j] > 0.0)
                    {
                        const double f = (sol.X[j] - p.prox_center[j]).frobenius();
                        sol.objective -= 0.5 * p.prox_weight[j] * f * f;
                    }
        };

        if (R.converged)
        {
            sol.status = R.reduced ? SolveStatus::iteration_cap : SolveStatus::optimal;
            sol.near_optimal = R.reduced;
            extract(R.x);
            return sol;
        }

        // No convergence: decide between infeasibility and a numerical stall
        const Standard P1 = phase_one(S);
        const IpmResult R1 = run_ipm(P1, opt.tol, opt.max_iter);
        const double tstar = R1.x.size() ? R1.x[P1.nx - 1] : 0.0;
        sol.infeasibility = tstar;
        const double scale = std::max(1.0, cone_norm(h_vec(S)));
        if (R1.converged && tstar > std::sqrt(opt.tol) * scale)
        {
            sol.status = SolveStatus::infeasible;
            if (R.x.size())
                extract(R.x);
            return sol;
        }
        sol.status = SolveStatus::iteration_cap;
        if (R.x.size() == S.nx)
            extract(R.x);
        return sol;
    }

    void write_problem(std::ostream &os, const ConicProblem &p)
    {
        const auto old_prec = os.precision(17);
        auto write_matrix = [&](const CMatrix &M)
        {
            os << M.rows() << ' ' << M.cols() << '\n';
            for (std::size_t i = 0; i < M.rows(); ++i)
            {
                for (std::size_t j = 0; j < M.cols(); ++j)
                    os << M(i, j).real() << ' ' << M(i, j).imag() << (j + 1 < M.cols() ? ' ' : '\n');
            }
        };
        auto write_functional = [&](const Functional &f)
        {
            os << "matrix_terms " << f.matrix_terms.size() << '\n';
            for (const auto &[j, W] : f.matrix_terms)
            {
                os << "var " << j << '\n';
                write_matrix(W);
            }
            os << "scalar_terms " << f.scalar_terms.size() << '\n';
            for (const auto &[s, a] : f.scalar_terms)
                os << s << ' ' << a << '\n';
        };
        os << "variables " << p.matrix_dims.size() << '\n';
        for (std::size_t d : p.matrix_dims)
            os << d << '\n';
        os << "scalars " << p.num_scalars << '\n';
        os << "objective_constant " << p.obj_constant << '\n';
        for (std::size_t j = 0; j < p.obj_matrix.size(); ++j)
            if (!p.obj_matrix[j].empty())
            {
                os << "objective_matrix " << j << '\n';
                write_matrix(p.obj_matrix[j]);
            }
        for (std::size_t s = 0; s < p.obj_scalar.size(); ++s)
            os << "objective_scalar " << s << ' ' << p.obj_scalar[s] << '\n';
        for (std::size_t j = 0; j < p.prox_weight.size(); ++j)
            if (p.prox_weight[j] > 0.0)
            {
                os << "damping " << j << ' ' << p.prox_weight[j] << '\n';
                write_matrix(p.prox_center[j]);
            }
        for (const auto &c : p.constraints)
        {
            os << "constraint " << (c.label.empty() ? "-" : c.label) << ' '
               << (c.rel == Relation::less_equal ? "<=" : c.rel == Relation::equal ? "==" : ">=") << ' ' << c.bound
               << '\n';
            write_functional(c.f);
        }
        for (const auto &L : p.lmis)
        {
            os << "lmi " << (L.label.empty() ? "-" : L.label) << ' ' << L.dim << '\n';
            os << "constant\n";
            write_matrix(L.constant.empty() ? CMatrix(L.dim, L.dim) : L.constant);
            for (const auto &t : L.terms)
            {
                os << "term var " << t.var << " coef " << t.coef << '\n';
                write_matrix(t.P);
            }
            for (const auto &t : L.scalar_terms)
            {
                os << "scalar_term " << t.scalar << '\n';
                write_matrix(t.F);
            }
        }
        os.precision(old_prec);
    }

} // namespace irsee
