// SPDX-License-Identifier: Apache-2.0
//
// thzris - RIS and receive-beamformer optimization for THz links with molecular re-radiation
// Copyright (C) 2026 The thzris authors
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


#ifndef thzris_sdp_H
#define thzris_sdp_H

#include "core.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace thzris
{
    // Find Hermitian Psi >= 0 with diag(Psi) <= 1 and
    //   Tr(Psi L0) >= t Tr(Psi M) + t alpha.
    struct FeasibilityProblem
    {
        CMat L0;
        CMat M;
        double alpha = 1.0;
        double t = 0.0;
    };

    struct SolverSettings
    {
        double tolerance = 1e-7;     // constraint tolerance, relative to the problem scale
        double barrier_factor = 10.0;
        int max_outer_iterations = 50;
        int max_newton_steps = 100;  // per centering
        bool stop_on_feasible = false; // return the first certificate instead of the slack maximizer
        std::ostream *trace = nullptr;
    };

    struct FeasibilityResiduals
    {
        double min_eigenvalue = 0.0;   // of Psi
        double psi_norm = 0.0;         // Frobenius norm of Psi
        double max_diag_excess = 0.0;  // max(diag(Psi) - 1), may be negative
        double trace_slack = 0.0;      // Tr(Psi L0) - t Tr(Psi M) - t alpha
        double scale = 0.0;            // max(|L0 - t M|_F, t alpha), original units
    };

    struct FeasibilityResult
    {
        bool feasible = false;
        CMat Psi;                   // certificate when feasible, best primal iterate otherwise
        FeasibilityResiduals residuals;
        double max_slack_lower = 0.0; // bounds on max Tr(Psi (L0 - t M)), original units
        double max_slack_upper = 0.0;
        int outer_iterations = 0;
        int newton_steps = 0;
    };

    struct SolverError : Error
    {
        SolverError(const std::string &msg, FeasibilityResult best) : Error(msg), best_iterate(std::move(best)) {}
        const char *kind() const noexcept override { return "solver"; }
        FeasibilityResult best_iterate;
    };

    inline FeasibilityResiduals feasibility_residuals(const FeasibilityProblem &p, const CMat &Psi)
    {
        FeasibilityResiduals r;
        if (Psi.size() == 0)
            return r;
        Eigen::SelfAdjointEigenSolver<CMat> es(Psi, Eigen::EigenvaluesOnly);
        r.min_eigenvalue = es.eigenvalues().minCoeff();
        r.psi_norm = Psi.norm();
        r.max_diag_excess = Psi.diagonal().real().maxCoeff() - 1.0;
        const double tl0 = (Psi * p.L0).trace().real();
        const double tm = (Psi * p.M).trace().real();
        r.trace_slack = tl0 - p.t * tm - p.t * p.alpha;
        r.scale = std::max((p.L0 - p.t * p.M).norm(), p.t * p.alpha);
        return r;
    }

    // Check a certificate against the three constraint families.
    inline bool certificate_holds(const FeasibilityResiduals &r, double tol = 1e-7)
    {
        return r.min_eigenvalue >= -tol * std::max(r.psi_norm, 1e-300) && r.max_diag_excess <= tol &&
               r.trace_slack >= -tol * r.scale;
    }

    namespace detail
    {
        // Barrier-method solver for
        //   max Re Tr(C Psi)  s.t. Psi >= 0, diag(Psi) <= 1
        // working on the dual
        //   min 1^T y  s.t. S = Diag(y) - C >= 0, y >= 0
        // with barrier tau 1^T y - log det S - sum log y. On the central path
        // Psi = S^-1 / tau is primal feasible with duality gap 2n/tau.
        // The iterate is z = y - diag(C), so S = Diag(z) - offdiag(C) is formed
        // without cancellation when a diagonal entry of C dominates.
        class SlackMaximizer
        {
        public:
            SlackMaximizer(const CMat &C, const SolverSettings &settings)
                : C_(C), off_(C), diag_(C.diagonal().real()), s_(settings), n_(C.rows())
            {
                off_.diagonal().setZero();
            }

            struct Outcome
            {
                int verdict = 0; // +1 feasible, -1 infeasible, 0 undecided
                CMat Psi;
                double primal = 0.0;
                double dual = 0.0;
                int outer = 0;
                int newton = 0;
                bool converged = false;
            };

            // Decide max slack >= b - tol (all in normalized units).
            Outcome run(double b)
            {
                Outcome out;
                RVec z(n_);
                for (Eigen::Index l = 0; l < n_; ++l)
                    z[l] = off_.row(l).cwiseAbs().sum() + std::max(0.0, -diag_[l]) + 1.0;
                double tau = 1.0;
                const double tol = s_.tolerance;
                out.primal = -std::numeric_limits<double>::infinity();
                out.dual = (z + diag_).sum();
                int stalled = 0;

                for (int outer = 0; outer < s_.max_outer_iterations; ++outer)
                {
                    out.outer = outer + 1;
                    out.newton += center(z, tau);

                    Eigen::LLT<CMat> llt(slack_matrix(z));
                    if (llt.info() != Eigen::Success)
                        break; // lost positive definiteness; keep the last good bounds
                    CMat Psi = llt.solve(CMat::Identity(n_, n_)) / tau;
                    Psi = 0.5 * (Psi + Psi.adjoint()).eval();
                    const double dmax = Psi.diagonal().real().maxCoeff();
                    if (dmax > 1.0)
                        Psi /= dmax;
                    const double primal = (C_.cwiseProduct(Psi.conjugate())).sum().real();
                    const double dual = (z + diag_).sum();
                    const double progress = std::max(0.0, primal - out.primal) + std::max(0.0, out.dual - dual);
                    if (primal > out.primal)
                    {
                        out.primal = primal;
                        out.Psi = Psi;
                    }
                    out.dual = std::min(out.dual, dual);
                    stalled = progress <= 0.01 * tol ? stalled + 1 : 0;

                    if (s_.trace != nullptr)
                        *s_.trace << "sdp outer=" << outer << " tau=" << tau << " primal=" << out.primal
                                  << " dual=" << out.dual << " target=" << b << '\n';

                    if (out.dual < b - tol)
                    {
                        out.verdict = -1;
                        out.converged = true;
                        return out;
                    }
                    if (s_.stop_on_feasible && out.primal >= b)
                    {
                        out.verdict = 1;
                        out.converged = true;
                        return out;
                    }
                    if (out.dual - out.primal <= 0.5 * tol)
                    {
                        out.verdict = out.primal >= b - tol ? 1 : -1;
                        out.converged = true;
                        return out;
                    }
                    if (stalled >= 3)
                        break;
                    tau *= s_.barrier_factor;
                }
                // Cap reached or numerical stall: accept if the gap is still
                // within the decision tolerance, or if the best iterate already
                // certifies feasibility.
                if (out.dual - out.primal <= 10.0 * tol || out.primal >= b - tol)
                {
                    out.verdict = out.primal >= b - tol ? 1 : -1;
                    out.converged = true;
                }
                return out;
            }

        private:
            CMat slack_matrix(const RVec &z) const
            {
                CMat S = -off_;
                S.diagonal() = z.cast<cplx>();
                return S;
            }

            // -log det S - sum log y, +inf outside the domain. The linear term
            // tau 1^T z is kept out so that line searches can add it as an exact
            // difference; at large tau it would swamp the decrease.
            double log_terms(const RVec &z) const
            {
                const RVec y = z + diag_;
                if ((y.array() <= 0.0).any())
                    return std::numeric_limits<double>::infinity();
                Eigen::LLT<CMat> llt(slack_matrix(z));
                if (llt.info() != Eigen::Success)
                    return std::numeric_limits<double>::infinity();
                const double logdet = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
                if (!std::isfinite(logdet))
                    return std::numeric_limits<double>::infinity();
                return -logdet - y.array().log().sum();
            }

            // Newton's method with backtracking; returns the step count.
            int center(RVec &z, double tau) const
            {
                int steps = 0;
                double phi = log_terms(z);
                for (; steps < s_.max_newton_steps; ++steps)
                {
                    Eigen::LLT<CMat> llt(slack_matrix(z));
                    if (llt.info() != Eigen::Success)
                        break;
                    const CMat Sinv = llt.solve(CMat::Identity(n_, n_));
                    const RVec inv_y = (z + diag_).cwiseInverse();
                    const RVec grad = RVec::Constant(n_, tau) - Sinv.diagonal().real() - inv_y;
                    RMat hess = Sinv.cwiseAbs2();
                    hess.diagonal() += inv_y.cwiseAbs2();

                    Eigen::LLT<RMat> hllt(hess);
                    RVec step;
                    if (hllt.info() == Eigen::Success)
                        step = -hllt.solve(grad);
                    else
                        step = -hess.ldlt().solve(grad);
                    const double decrement = -grad.dot(step);
                    if (!std::isfinite(decrement) || decrement <= 0.0 || 0.5 * decrement < 1e-10)
                        break;

                    const double linear = tau * step.sum();
                    double alpha = 1.0;
                    bool moved = false;
                    while (alpha > 1e-14)
                    {
                        const RVec trial = z + alpha * step;
                        const double phi_trial = log_terms(trial);
                        if (phi_trial - phi + alpha * linear <= -0.25 * alpha * decrement)
                        {
                            z = trial;
                            phi = phi_trial;
                            moved = true;
                            break;
                        }
                        alpha *= 0.5;
                    }
                    if (!moved)
                        break;
                }
                return steps;
            }

            const CMat &C_;
            CMat off_;
            RVec diag_;
            const SolverSettings &s_;
            Eigen::Index n_;
        };
    }

    // Decide feasibility by maximizing the slack Tr(Psi L0) - t Tr(Psi M)
    // over {Psi >= 0, diag(Psi) <= 1} and comparing against t alpha.
    inline FeasibilityResult solve_feasibility(const FeasibilityProblem &p, const SolverSettings &settings = {})
    {
        const Eigen::Index n = p.L0.rows();
        if (n < 1 || p.L0.cols() != n || p.M.rows() != n || p.M.cols() != n)
            throw ValidationError("solve_feasibility: L0 and M must be square and of equal size");
        if (!is_hermitian(p.L0, 1e-10) || !is_hermitian(p.M, 1e-10))
            throw ValidationError("solve_feasibility: L0 and M must be Hermitian");
        if (!(p.alpha >= 1.0) || !std::isfinite(p.alpha))
            throw ValidationError("solve_feasibility: alpha must be >= 1");
        if (!(p.t >= 0.0) || !std::isfinite(p.t))
            throw ValidationError("solve_feasibility: t must be finite and >= 0");

        FeasibilityResult res;
        auto finish = [&](bool feasible, CMat Psi) {
            res.feasible = feasible;
            res.Psi = std::move(Psi);
            res.residuals = feasibility_residuals(p, res.Psi);
#ifdef THZRIS_CHECK_CERTIFICATES
            if (res.feasible && !certificate_holds(res.residuals, settings.tolerance))
                throw std::logic_error("solve_feasibility: returned certificate violates a constraint");
#endif
            return res;
        };

        // Pre-scale so the largest of L0, M has unit norm; alpha follows.
        const double s0 = std::max(p.L0.norm(), p.M.norm());
        if (!(s0 > 0.0))
        {
            // Slack is identically zero.
            res.max_slack_lower = res.max_slack_upper = 0.0;
            return finish(p.t == 0.0, CMat::Zero(n, n));
        }
        CMat C = (p.L0 - p.t * p.M) / s0;
        C = 0.5 * (C + C.adjoint()).eval();
        const double b = p.t * p.alpha / s0;
        const double scale = std::max(C.norm(), b);

        if (p.t == 0.0 && settings.stop_on_feasible)
            return finish(true, CMat::Zero(n, n));

        if (!(C.norm() > 0.0))
        {
            res.max_slack_lower = res.max_slack_upper = 0.0;
            return finish(b <= settings.tolerance * scale, CMat::Zero(n, n));
        }

        const CMat Cn = C / scale;
        detail::SlackMaximizer solver(Cn, settings);
        auto out = solver.run(b / scale);

        res.outer_iterations = out.outer;
        res.newton_steps = out.newton;
        res.max_slack_lower = out.primal * scale * s0;
        res.max_slack_upper = out.dual * scale * s0;
        if (!out.converged)
        {
            res.Psi = out.Psi.size() ? out.Psi : CMat::Zero(n, n);
            res.residuals = feasibility_residuals(p, res.Psi);
            throw SolverError("solve_feasibility: no verdict within the iteration cap", res);
        }
        return finish(out.verdict > 0, out.Psi.size() ? out.Psi : CMat::Zero(n, n));
    }
}

#endif
