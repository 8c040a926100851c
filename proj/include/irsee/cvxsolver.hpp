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

#ifndef IRSEE_CVXSOLVER_HPP
#define IRSEE_CVXSOLVER_HPP

#include "irsee/linalg.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace irsee
{
    // Real-linear functional of the decision variables:
    //   sum_j Re Tr(W_j X_j) + sum_s a_s t_s
    struct Functional
    {
        std::vector<std::pair<std::size_t, CMatrix>> matrix_terms; // (variable index, Hermitian weight)
        std::vector<std::pair<std::size_t, double>> scalar_terms;  // (scalar index, weight)
    };

    enum class Relation
    {
        less_equal,
        equal,
        greater_equal
    };

    struct LinearConstraint
    {
        Functional f;
        Relation rel = Relation::less_equal;
        double bound = 0.0;
        std::string label;
    };

    // coef * P^H X_var P
    struct LmiTerm
    {
        std::size_t var = 0;
        CMatrix P;
        double coef = 1.0;
    };

    // t_scalar * F
    struct LmiScalarTerm
    {
        std::size_t scalar = 0;
        CMatrix F;
    };

    // constant + sum of terms must be positive semidefinite
    struct Lmi
    {
        std::size_t dim = 0;
        CMatrix constant;
        std::vector<LmiTerm> terms;
        std::vector<LmiScalarTerm> scalar_terms;
        std::string label;
    };

    // maximize  sum_j Re Tr(C_j X_j) + sum_s c_s t_s + constant
    //           - sum_j prox_weight_j / 2 * ||X_j - prox_center_j||_F^2
    // over Hermitian X_j >= 0 (PSD) and scalars t_s >= 0, subject to linear constraints and LMIs.
    struct ConicProblem
    {
        std::vector<std::size_t> matrix_dims;
        std::size_t num_scalars = 0;

        std::vector<CMatrix> obj_matrix;  // one per matrix variable (may be empty = zero)
        std::vector<double> obj_scalar;   // one per scalar (may be empty = zero)
        double obj_constant = 0.0;

        std::vector<double> prox_weight;  // empty or one per matrix variable
        std::vector<CMatrix> prox_center; // empty or one per matrix variable

        std::vector<LinearConstraint> constraints;
        std::vector<Lmi> lmis;

        std::size_t add_matrix(std::size_t dim);
        std::size_t add_scalar();

        // Throws std::invalid_argument when indices or dimensions are inconsistent
        void validate() const;

        // Evaluates the affine part of the objective (no damping term)
        double affine_objective(const std::vector<CMatrix> &X, const std::vector<double> &t) const;

        // Evaluates a functional at a point
        static double evaluate(const Functional &f, const std::vector<CMatrix> &X, const std::vector<double> &t);
    };

    enum class SolveStatus
    {
        optimal,
        infeasible,
        iteration_cap
    };

    const char *to_string(SolveStatus s);

    struct SolverOptions
    {
        double tol = 1e-6;   // relative primal/dual residual and gap tolerance
        int max_iter = 200;  // interior-point iterations
    };

    struct ConicSolution
    {
        SolveStatus status = SolveStatus::iteration_cap;
        std::vector<CMatrix> X;
        std::vector<double> t;
        double objective = 0.0;        // full objective including the damping term
        double affine_objective = 0.0; // objective without the damping term
        double primal_residual = 0.0;
        double dual_residual = 0.0;
        double gap = 0.0;
        double infeasibility = 0.0;    // optimal value of the phase-one problem when run
        int iterations = 0;
        // iteration_cap reached after stalling within 100 * tol of optimality; the iterate is usable
        bool near_optimal = false;

        bool usable() const { return status == SolveStatus::optimal || near_optimal; }
    };

    ConicSolution solve(const ConicProblem &p, const SolverOptions &opt = {});

    // Plain-text dump: variable dimensions, objective, then one record per constraint with dense data
    void write_problem(std::ostream &os, const ConicProblem &p);

    // Coordinates of a Hermitian matrix in the orthonormal real basis used by the solver
    std::vector<double> hermitian_coords(const CMatrix &X);
    CMatrix hermitian_from_coords(const double *x, std::size_t n);

} // namespace irsee

#endif
