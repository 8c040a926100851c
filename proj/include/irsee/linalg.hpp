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

#ifndef IRSEE_LINALG_HPP
#define IRSEE_LINALG_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace irsee
{
    using cx = std::complex<double>;
    using CVector = std::vector<cx>;

    // Dense complex matrix, row-major storage
    class CMatrix
    {
    public:
        CMatrix() = default;
        CMatrix(std::size_t rows, std::size_t cols, cx fill = cx(0.0, 0.0));
        CMatrix(std::initializer_list<std::initializer_list<cx>> rows);

        static CMatrix identity(std::size_t n);
        static CMatrix diag(const std::vector<double> &d);
        static CMatrix diag(const CVector &d);
        static CMatrix outer(const CVector &a, const CVector &b); // a * b^H
        static CMatrix column(const CVector &v);

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }
        bool empty() const { return data_.empty(); }

        cx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
        const cx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

        const cx *data() const { return data_.data(); }
        cx *data() { return data_.data(); }

        CMatrix adjoint() const;
        CMatrix transpose() const;
        CMatrix conj() const;
        CVector col(std::size_t c) const;
        void set_col(std::size_t c, const CVector &v);
        CVector diagonal() const;

        cx trace() const;
        double max_abs() const;
        double frobenius() const;

        // Replaces A by (A + A^H)/2
        void symmetrize();

        CMatrix &operator+=(const CMatrix &o);
        CMatrix &operator-=(const CMatrix &o);
        CMatrix &operator*=(cx s);
        CMatrix &operator*=(double s);

        bool operator==(const CMatrix &o) const = default;

    private:
        std::size_t rows_ = 0, cols_ = 0;
        std::vector<cx> data_;
    };

    CMatrix operator+(CMatrix a, const CMatrix &b);
    CMatrix operator-(CMatrix a, const CMatrix &b);
    CMatrix operator*(const CMatrix &a, const CMatrix &b);
    CMatrix operator*(CMatrix a, cx s);
    CMatrix operator*(cx s, CMatrix a);
    CMatrix operator*(CMatrix a, double s);
    CMatrix operator*(double s, CMatrix a);
    CVector operator*(const CMatrix &a, const CVector &v);

    // P^H X P
    CMatrix congruence(const CMatrix &P, const CMatrix &X);

    cx dot(const CVector &a, const CVector &b); // a^H b
    double norm2(const CVector &a);              // squared Euclidean norm
    double norm(const CVector &a);

    // Tr(A^H B)
    cx trace_inner(const CMatrix &A, const CMatrix &B);

    // Re Tr(A^H B); the imaginary residue is dropped
    double trace_inner_real(const CMatrix &A, const CMatrix &B);

    bool is_hermitian(const CMatrix &A, double rel_tol = 1e-12);

    struct EigenResult
    {
        std::vector<double> values; // ascending
        CMatrix vectors;            // columns are unit eigenvectors
        int sweeps = 0;
        bool converged = false;
    };

    enum class HermitianCheck
    {
        reject,
        symmetrize
    };

    // Cyclic Jacobi eigendecomposition of a Hermitian matrix.
    // Throws std::invalid_argument for non-Hermitian input under HermitianCheck::reject
    // and std::runtime_error when the sweep cap is reached.
    EigenResult hermitian_eig(const CMatrix &A, HermitianCheck check = HermitianCheck::reject,
                              int max_sweeps = 100, double tol = 1e-12);

    struct DominantEig
    {
        double value = 0.0;
        CVector vector;
        bool degenerate = false; // zero matrix
    };

    DominantEig dominant_eigvec(const CMatrix &A);

    // Cholesky factor L (lower) of a Hermitian positive definite matrix, A = L L^H.
    // Returns false when a non-positive pivot is met.
    bool cholesky(const CMatrix &A, CMatrix &L);

    // Inverse of a lower-triangular matrix
    CMatrix lower_inverse(const CMatrix &L);

} // namespace irsee

#endif
