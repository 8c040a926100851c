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

#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace irsee;

namespace
{
    CMatrix random_hermitian(std::size_t n, std::mt19937_64 &eng)
    {
        std::normal_distribution<double> nd;
        CMatrix A(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                A(i, j) = cx(nd(eng), nd(eng));
        return A + A.adjoint();
    }

    CVector random_vector(std::size_t n, std::mt19937_64 &eng)
    {
        std::normal_distribution<double> nd;
        CVector v(n);
        for (auto &z : v)
            z = cx(nd(eng), nd(eng));
        return v;
    }

    double reconstruction_error(const CMatrix &A, const EigenResult &r)
    {
        const CMatrix V = r.vectors;
        const CMatrix R = V * CMatrix::diag(r.values) * V.adjoint();
        return (R - A).max_abs();
    }
} // namespace

TEST_CASE("identity has unit eigenvalues")
{
    const EigenResult r = hermitian_eig(CMatrix::identity(3));
    REQUIRE(r.converged);
    for (double v : r.values)
        CHECK(v == doctest::Approx(1.0));
    CHECK((r.vectors.adjoint() * r.vectors - CMatrix::identity(3)).max_abs() < 1e-12);
}

TEST_CASE("diagonal input yields ascending values with basis vectors")
{
    const EigenResult r = hermitian_eig(CMatrix::diag(std::vector<double>{3.0, 1.0}));
    CHECK(r.values[0] == doctest::Approx(1.0));
    CHECK(r.values[1] == doctest::Approx(3.0));
    CHECK(std::abs(r.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(r.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("random Hermitian decompositions reconstruct and match a reference solver")
{
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 200; ++trial)
    {
        const std::size_t n = 1 + std::size_t(trial % 12);
        const CMatrix A = random_hermitian(n, eng);
        const EigenResult r = hermitian_eig(A);
        REQUIRE(r.converged);
        CHECK(reconstruction_error(A, r) <= 1e-10 * (1.0 + A.max_abs()));
        CHECK((r.vectors.adjoint() * r.vectors - CMatrix::identity(n)).max_abs() < 1e-10);
        for (std::size_t i = 1; i < n; ++i)
            CHECK(r.values[i - 1] <= r.values[i]);

        Eigen::MatrixXcd E(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                E(Eigen::Index(i), Eigen::Index(j)) = A(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(E);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(r.values[i] - ref.eigenvalues()[Eigen::Index(i)]) < 1e-10 * (1.0 + A.max_abs()));
    }
}

TEST_CASE("repeated eigenvalues give a reproducible orthonormal basis")
{
    std::mt19937_64 eng(11);
    const CVector u = random_vector(4, eng);
    const CMatrix A = CMatrix::identity(4) * 2.0 + CMatrix::outer(u, u);
    const EigenResult r1 = hermitian_eig(A);
    const EigenResult r2 = hermitian_eig(A);
    CHECK(r1.vectors == r2.vectors);
    CHECK(r1.values[0] == doctest::Approx(2.0));
    CHECK(r1.values[2] == doctest::Approx(2.0));
    CHECK((r1.vectors.adjoint() * r1.vectors - CMatrix::identity(4)).max_abs() < 1e-10);
    CHECK(reconstruction_error(A, r1) < 1e-10 * A.max_abs());
}

TEST_CASE("non-Hermitian input is rejected or symmetrized on request")
{
    const CMatrix A{{1.0, 2.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(hermitian_eig(A), std::invalid_argument);
    const EigenResult r = hermitian_eig(A, HermitianCheck::symmetrize);
    CHECK(r.values[0] == doctest::Approx(0.0));
    CHECK(r.values[1] == doctest::Approx(2.0));
}

TEST_CASE("dominant eigenvector")
{
    const DominantEig a = dominant_eigvec(CMatrix::outer(CVector{1.0, 0.0}, CVector{1.0, 0.0}));
    CHECK(a.value == doctest::Approx(1.0));
    CHECK(std::abs(a.vector[0]) == doctest::Approx(1.0));

    const DominantEig b = dominant_eigvec(CMatrix::diag(std::vector<double>{2.0, 5.0, 1.0}));
    CHECK(b.value == doctest::Approx(5.0));
    CHECK(std::abs(b.vector[1]) == doctest::Approx(1.0));

    std::mt19937_64 eng(3);
    const CVector w = random_vector(5, eng);
    const CMatrix W = CMatrix::outer(w, w);
    const DominantEig c = dominant_eigvec(W);
    CHECK(c.value == doctest::Approx(norm2(w)).epsilon(1e-12));
    CHECK(std::abs(dot(c.vector, w)) == doctest::Approx(norm(w)).epsilon(1e-10));
    const CVector Wv = W * c.vector;
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(std::abs(Wv[i] - c.value * c.vector[i]) < 1e-8);

    const DominantEig z = dominant_eigvec(CMatrix(3, 3));
    CHECK(z.degenerate);
    CHECK(z.value == 0.0);
    CHECK(norm(z.vector) == doctest::Approx(1.0));
}

TEST_CASE("trace inner product")
{
    CHECK(trace_inner(CMatrix::identity(3), CMatrix::identity(3)).real() == doctest::Approx(3.0));
    CHECK(trace_inner_real(CMatrix::identity(3), CMatrix(3, 3)) == 0.0);
    CHECK_THROWS_AS(trace_inner(CMatrix::identity(3), CMatrix::identity(2)), std::invalid_argument);

    std::mt19937_64 eng(5);
    for (int trial = 0; trial < 100; ++trial)
    {
        const CVector h = random_vector(4, eng);
        const CVector w = random_vector(4, eng);
        const double direct = std::norm(dot(h, w));
        const double lifted = trace_inner_real(CMatrix::outer(h, h), CMatrix::outer(w, w));
        CHECK(std::abs(direct - lifted) <= 1e-10 * direct);
    }
}

TEST_CASE("congruence and Cholesky helpers")
{
    std::mt19937_64 eng(9);
    const CMatrix B = random_hermitian(4, eng);
    const CMatrix A = B * B + CMatrix::identity(4);
    CMatrix L;
    REQUIRE(cholesky(A, L));
    CHECK((L * L.adjoint() - A).max_abs() < 1e-10 * A.max_abs());
    CHECK((lower_inverse(L) * L - CMatrix::identity(4)).max_abs() < 1e-10);
    const CMatrix P = random_hermitian(4, eng);
    CHECK((congruence(P, A) - P.adjoint() * A * P).max_abs() < 1e-12 * (1.0 + congruence(P, A).max_abs()));
    CMatrix Lbad;
    CHECK_FALSE(cholesky(CMatrix::diag(std::vector<double>{1.0, -1.0}), Lbad));
}
