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

#include "irsee/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace irsee
{
    CMatrix::CMatrix(std::size_t rows, std::size_t cols, cx fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    CMatrix::CMatrix(std::initializer_list<std::initializer_list<cx>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto &r : rows)
        {
            if (r.size() != cols_)
                throw std::invalid_argument("CMatrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    CMatrix CMatrix::identity(std::size_t n)
    {
        CMatrix I(n, n);
        for (std::size_t i = 0; i < n; ++i)
            I(i, i) = 1.0;
        return I;
    }

    CMatrix CMatrix::diag(const std::vector<double> &d)
    {
        CMatrix D(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            D(i, i) = d[i];
        return D;
    }

    CMatrix CMatrix::diag(const CVector &d)
    {
        CMatrix D(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            D(i, i) = d[i];
        return D;
    }

    CMatrix CMatrix::outer(const CVector &a, const CVector &b)
    {
        CMatrix R(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                R(i, j) = a[i] * std::conj(b[j]);
        return R;
    }

    CMatrix CMatrix::column(const CVector &v)
    {
        CMatrix R(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i)
            R(i, 0) = v[i];
        return R;
    }

    CMatrix CMatrix::adjoint() const
    {
        CMatrix R(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                R(j, i) = std::conj((*this)(i, j));
        return R;
    }

    CMatrix CMatrix::transpose() const
    {
        CMatrix R(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                R(j, i) = (*this)(i, j);
        return R;
    }

    CMatrix CMatrix::conj() const
    {
        CMatrix R(*this);
        for (auto &z : R.data_)
            z = std::conj(z);
        return R;
    }

    CVector CMatrix::col(std::size_t c) const
    {
        CVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            v[i] = (*this)(i, c);
        return v;
    }

    void CMatrix::set_col(std::size_t c, const CVector &v)
    {
        if (v.size() != rows_)
            throw std::invalid_argument("CMatrix::set_col: size mismatch");
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, c) = v[i];
    }

    CVector CMatrix::diagonal() const
    {
        const std::size_t n = std::min(rows_, cols_);
        CVector d(n);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = (*this)(i, i);
        return d;
    }

    cx CMatrix::trace() const
    {
        if (rows_ != cols_)
            throw std::invalid_argument("CMatrix::trace: not square");
        cx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            t += (*this)(i, i);
        return t;
    }

    double CMatrix::max_abs() const
    {
        double m = 0.0;
        for (const auto &z : data_)
            m = std::max(m, std::abs(z));
        return m;
    }

    double CMatrix::frobenius() const
    {
        double s = 0.0;
        for (const auto &z : data_)
            s += std::norm(z);
        return std::sqrt(s);
    }

    void CMatrix::symmetrize()
    {
        if (rows_ != cols_)
            throw std::invalid_argument("CMatrix::symmetrize: not square");
        for (std::size_t i = 0; i < rows_; ++i)
        {
            (*this)(i, i) = cx((*this)(i, i).real(), 0.0);
            for (std::size_t j = i + 1; j < cols_; ++j)
            {
                const cx m = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
                (*this)(i, j) = m;
                (*this)(j, i) = std::conj(m);
            }
        }
    }

    CMatrix &CMatrix::operator+=(const CMatrix &o)
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("CMatrix +=: dimension mismatch");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += o.data_[i];
        return *this;
    }

    CMatrix &CMatrix::operator-=(const CMatrix &o)
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("CMatrix -=: dimension mismatch");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] -= o.data_[i];
        return *this;
    }

    CMatrix &CMatrix::operator*=(cx s)
    {
        for (auto &z : data_)
            z *= s;
        return *this;
    }

    CMatrix &CMatrix::operator*=(double s)
    {
        for (auto &z : data_)
            z *= s;
        return *this;
    }

    CMatrix operator+(CMatrix a, const CMatrix &b) { return a += b; }
    CMatrix operator-(CMatrix a, const CMatrix &b) { return a -= b; }
    CMatrix operator*(CMatrix a, cx s) { return a *= s; }
    CMatrix operator*(cx s, CMatrix a) { return a *= s; }
    CMatrix operator*(CMatrix a, double s) { return a *= s; }
    CMatrix operator*(double s, CMatrix a) { return a *= s; }

    CMatrix operator*(const CMatrix &a, const CMatrix &b)
    {
        if (a.cols() != b.rows())
            throw std::invalid_argument("CMatrix *: dimension mismatch");
        CMatrix R(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t k = 0; k < a.cols(); ++k)
            {
                const cx aik = a(i, k);
                if (aik == cx(0.0, 0.0))
                    continue;
                for (std::size_t j = 0; j < b.cols(); ++j)
                    R(i, j) += aik * b(k, j);
            }
        return R;
    }

    CVector operator*(const CMatrix &a, const CVector &v)
    {
        if (a.cols() != v.size())
            throw std::invalid_argument("CMatrix * CVector: dimension mismatch");
        CVector r(a.rows(), cx(0.0, 0.0));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t k = 0; k < a.cols(); ++k)
                r[i] += a(i, k) * v[k];
        return r;
    }

    CMatrix congruence(const CMatrix &P, const CMatrix &X)
    {
        return P.adjoint() * (X * P);
    }

    cx dot(const CVector &a, const CVector &b)
    {
        if (a.size() != b.size())
            throw std::invalid_argument("dot: size mismatch");
        cx s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += std::conj(a[i]) * b[i];
        return s;
    }

    double norm2(const CVector &a)
    {
        double s = 0.0;
        for (const auto &z : a)
            s += std::norm(z);
        return s;
    }

    double norm(const CVector &a) { return std::sqrt(norm2(a)); }

    cx trace_inner(const CMatrix &A, const CMatrix &B)
    {
        if (A.rows() != B.rows() || A.cols() != B.cols())
            throw std::invalid_argument("trace_inner: dimension mismatch");
        cx s = 0.0;
        const std::size_t n = A.rows() * A.cols();
        for (std::size_t i = 0; i < n; ++i)
            s += std::conj(A.data()[i]) * B.data()[i];
        return s;
    }

    double trace_inner_real(const CMatrix &A, const CMatrix &B)
    {
        return trace_inner(A, B).real();
    }

    bool is_hermitian(const CMatrix &A, double rel_tol)
    {
        if (A.rows() != A.cols())
            return false;
        const double scale = A.max_abs();
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = i; j < A.cols(); ++j)
                if (std::abs(A(i, j) - std::conj(A(j, i))) > rel_tol * scale)
                    return false;
        return true;
    }

    namespace
    {
        // Rotates the phase so that the largest-modulus entry (first one on ties) is real positive
        void fix_phase(CVector &v)
        {
            std::size_t imax = 0;
            double amax = -1.0;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                const double a = std::abs(v[i]);
                if (a > amax * (1.0 + 1e-10))
                {
                    amax = a;
                    imax = i;
                }
            }
            if (amax <= 0.0)
                return;
            const cx ph = std::conj(v[imax]) / amax;
            for (auto &z : v)
                z *= ph;
            v[imax] = cx(v[imax].real(), 0.0);
        }

        bool lex_less_real(const CVector &a, const CVector &b)
        {
            for (std::size_t i = 0; i < a.size(); ++i)
            {
                if (a[i].real() < b[i].real() - 1e-12)
                    return true;
                if (a[i].real() > b[i].real() + 1e-12)
                    return false;
            }
            return false;
        }
    } // namespace

    EigenResult hermitian_eig(const CMatrix &A_in, HermitianCheck check, int max_sweeps, double tol)
    {
        if (A_in.rows() != A_in.cols())
            throw std::invalid_argument("hermitian_eig: matrix is not square");
        const std::size_t n = A_in.rows();
        for (std::size_t i = 0; i < n * n; ++i)
            if (!std::isfinite(A_in.data()[i].real()) || !std::isfinite(A_in.data()[i].imag()))
                throw std::invalid_argument("hermitian_eig: non-finite entry");
        if (check == HermitianCheck::reject && !is_hermitian(A_in, 1e-12))
            throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");

        CMatrix A(A_in);
        A.symmetrize();
        CMatrix V = CMatrix::identity(n);
        EigenResult res;

        const double scale = std::max(A.frobenius(), 1e-300);
        auto off_norm = [&]()
        {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    s += std::norm(A(i, j));
            return std::sqrt(2.0 * s);
        };

        int sweep = 0;
        bool converged = off_norm() <= tol * scale;
        while (!converged && sweep < max_sweeps)
        {
            ++sweep;
            for (std::size_t p = 0; p + 1 < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q)
                {
                    const cx apq = A(p, q);
                    const double mag = std::abs(apq);
                    if (mag == 0.0)
                        continue;
                    const double app = A(p, p).real(), aqq = A(q, q).real();
                    if (mag <= 1e-300 || (std::abs(app) + mag == std::abs(app) && std::abs(aqq) + mag == std::abs(aqq)))
                    {
                        A(p, q) = A(q, p) = 0.0;
                        continue;
                    }
                    const cx ph = apq / mag; // e^{i phi}
                    const double tau = (aqq - app) / (2.0 * mag);
                    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    // G = [[c, s e^{i phi}], [-s e^{-i phi}, c]] acting on (p, q)
                    const cx g_pq = s * ph, g_qp = -s * std::conj(ph);
                    for (std::size_t k = 0; k < n; ++k)
                    {
                        const cx akp = A(k, p), akq = A(k, q);
                        A(k, p) = akp * c + akq * g_qp;
                        A(k, q) = akp * g_pq + akq * c;
                    }
                    for (std::size_t k = 0; k < n; ++k)
                    {
                        const cx apk = A(p, k), aqk = A(q, k);
                        A(p, k) = c * apk + std::conj(g_qp) * aqk;
                        A(q, k) = std::conj(g_pq) * apk + c * aqk;
                    }
                    A(p, q) = A(q, p) = 0.0;
                    A(p, p) = A(p, p).real();
                    A(q, q) = A(q, q).real();
                    for (std::size_t k = 0; k < n; ++k)
                    {
                        const cx vkp = V(k, p), vkq = V(k, q);
                        V(k, p) = vkp * c + vkq * g_qp;
                        V(k, q) = vkp * g_pq + vkq * c;
                    }
                }
            converged = off_norm() <= tol * scale;
        }
        if (!converged)
            throw std::runtime_error("hermitian_eig: no convergence within sweep cap");

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b)
                         { return A(a, a).real() < A(b, b).real(); });

        res.values.resize(n);
        std::vector<CVector> vecs(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            res.values[i] = A(order[i], order[i]).real();
            vecs[i] = V.col(order[i]);
        }

        // Deterministic treatment of (near) ties: re-orthogonalize each cluster in index order,
        // normalize phases and order the cluster lexicographically by real parts
        const double lam_scale = std::max(1.0, std::max(std::abs(res.values.front()), std::abs(res.values.back())));
        std::size_t start = 0;
        while (start < n)
        {
            std::size_t end = start + 1;
            while (end < n && res.values[end] - res.values[end - 1] <= 1e-10 * lam_scale)
                ++end;
            if (end - start > 1)
            {
                for (std::size_t i = start; i < end; ++i)
                {
                    for (std::size_t j = start; j < i; ++j)
                    {
                        const cx proj = dot(vecs[j], vecs[i]);
                        for (std::size_t k = 0; k < n; ++k)
                            vecs[i][k] -= proj * vecs[j][k];
                    }
                    const double nv = norm(vecs[i]);
                    for (auto &z : vecs[i])
                        z /= nv;
                    fix_phase(vecs[i]);
                }
                std::stable_sort(vecs.begin() + static_cast<std::ptrdiff_t>(start),
                                 vecs.begin() + static_cast<std::ptrdiff_t>(end), lex_less_real);
            }
            else
                fix_phase(vecs[start]);
            start = end;
        }

        res.vectors = CMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            res.vectors.set_col(i, vecs[i]);
        res.sweeps = sweep;
        res.converged = true;
        return res;
    }

    DominantEig dominant_eigvec(const CMatrix &A)
    {
        DominantEig d;
        const std::size_t n = A.rows();
        if (n == 0)
            throw std::invalid_argument("dominant_eigvec: empty matrix");
        if (A.max_abs() == 0.0)
        {
            d.value = 0.0;
            d.vector = CVector(n, 0.0);
            d.vector[0] = 1.0;
            d.degenerate = true;
            return d;
        }
        const EigenResult e = hermitian_eig(A, HermitianCheck::symmetrize);
        d.value = e.values.back();
        d.vector = e.vectors.col(n - 1);
        return d;
    }

    bool cholesky(const CMatrix &A, CMatrix &L)
    {
        const std::size_t n = A.rows();
        L = CMatrix(n, n);
        for (std::size_t j = 0; j < n; ++j)
        {
            double d = A(j, j).real();
            for (std::size_t k = 0; k < j; ++k)
                d -= std::norm(L(j, k));
            if (!(d > 0.0))
                return false;
            const double ljj = std::sqrt(d);
            L(j, j) = ljj;
            for (std::size_t i = j + 1; i < n; ++i)
            {
                cx s = A(i, j);
                for (std::size_t k = 0; k < j; ++k)
                    s -= L(i, k) * std::conj(L(j, k));
                L(i, j) = s / ljj;
            }
        }
        return true;
    }

    CMatrix lower_inverse(const CMatrix &L)
    {
        const std::size_t n = L.rows();
        CMatrix X(n, n);
        for (std::size_t j = 0; j < n; ++j)
        {
            X(j, j) = 1.0 / L(j, j);
            for (std::size_t i = j + 1; i < n; ++i)
            {
                cx s = 0.0;
                for (std::size_t k = j; k < i; ++k)
                    s += L(i, k) * X(k, j);
                X(i, j) = -s / L(i, i);
            }
        }
        return X;
    }

} // namespace irsee
