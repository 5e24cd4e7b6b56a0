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


#ifndef thzris_optimizer_H
#define thzris_optimizer_H

#include "channel.hpp"
#include "core.hpp"
#include "sdp.hpp"
#include "signal_model.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace thzris
{
    struct OptimizerConfig
    {
        double epsilon = 1e-5;           // relative SINR change that stops the BCD loop
        double bisection_upper = 1e10;   // initial upper end of the t bracket
        double bisection_tol = 1e-5;     // relative bracket width
        int n_randomizations = 5000;     // Gaussian randomization draws per RIS step
        int max_bcd_iterations = 50;
        int min_bcd_iterations = 2;      // the relative-change test needs a nonzero previous SINR
        int max_bisection_steps = 200;
        std::uint64_t rng_seed = 1;
        SolverSettings solver;

        void validate() const
        {
            if (!(epsilon > 0.0) || !(bisection_tol > 0.0) || !(bisection_upper > 0.0))
                throw ValidationError("OptimizerConfig: epsilon, bisection_tol and bisection_upper must be > 0");
            if (n_randomizations < 1)
                throw ValidationError("OptimizerConfig: n_randomizations must be >= 1");
            if (max_bcd_iterations < 1 || min_bcd_iterations < 1 || max_bisection_steps < 1)
                throw ValidationError("OptimizerConfig: iteration limits must be >= 1");
        }
    };

    // Closed-form receive beamformer for a fixed RIS configuration:
    //   u = A^-1 G0 / |A^-1 G0|,  A = sum_{i>=1} (Pi / sigma^2) Gi Gi^H + I,  Gi = Hi theta0
    inline Beamformer optimal_beamformer(const RisConfig &theta0, const ChannelSet &ch, const NoiseModel &noise,
                                         const SystemParams &params, Diagnostics *diag = nullptr)
    {
        if (ch.n_tx() == 0 || params.tx_powers.size() != ch.n_tx())
            throw ValidationError("optimal_beamformer: tx_powers size does not match channel set");
        if (ch.H.front().cols() != theta0.theta0().size())
            throw ValidationError("optimal_beamformer: RIS configuration length does not match N + 1");
        const double sigma2 = noise.effective(theta0);
        if (!(sigma2 > 0.0))
            throw ValidationError("optimal_beamformer: effective noise power must be > 0");

        const Eigen::Index nr = ch.n_rx();
        const CVec g0 = ch.H[0] * theta0.theta0();
        if (!(g0.squaredNorm() > 0.0))
        {
            warn(diag, "optimal_beamformer: zero desired-signal vector; returning first basis vector");
            return Beamformer::basis(nr);
        }
        CMat A = CMat::Identity(nr, nr);
        for (std::size_t i = 1; i < ch.n_tx(); ++i)
        {
            const CVec gi = ch.H[i] * theta0.theta0();
            A.noalias() += (params.tx_powers[i] / sigma2) * gi * gi.adjoint();
        }
        const CVec v = A.llt().solve(g0);
        return Beamformer::normalized(v);
    }

    // Data of the rank-relaxed RIS subproblem at a fixed beamformer:
    //   Li = (Pi / sigma_w^2) Fi Fi^H,  Fi = Hi^H u
    //   M  = sum_{i>=1} Li + zeta (sigma_m2^2 / sigma_w^2) I,  alpha = 1 + zeta sigma_m1^2 / sigma_w^2
    struct RisSubproblem
    {
        std::vector<CVec> F;
        CMat L0;
        CMat M;
        double alpha = 1.0;

        double ratio(const CMat &Psi) const
        {
            const double num = (Psi.cwiseProduct(L0.conjugate())).sum().real();
            const double den = (Psi.cwiseProduct(M.conjugate())).sum().real() + alpha;
            return num / den;
        }

        FeasibilityProblem at(double t) const { return {L0, M, alpha, t}; }
    };

    inline RisSubproblem ris_subproblem(const Beamformer &u, const ChannelSet &ch, const NoiseModel &noise,
                                        const SystemParams &params)
    {
        if (ch.n_tx() == 0 || params.tx_powers.size() != ch.n_tx())
            throw ValidationError("ris_subproblem: tx_powers size does not match channel set");
        if (ch.n_rx() != u.size())
            throw ValidationError("ris_subproblem: beamformer length does not match N_R");
        const double sw = noise.sigma_w_sq;
        if (!(sw > 0.0))
            throw ValidationError("ris_subproblem: thermal noise power must be > 0");

        const Eigen::Index n1 = ch.H.front().cols();
        RisSubproblem sp;
        sp.M = CMat::Zero(n1, n1);
        for (std::size_t i = 0; i < ch.n_tx(); ++i)
        {
            CVec f = ch.H[i].adjoint() * u.u();
            CMat L = (params.tx_powers[i] / sw) * f * f.adjoint();
            if (i == 0)
                sp.L0 = std::move(L);
            else
                sp.M += L;
            sp.F.push_back(std::move(f));
        }
        sp.M.diagonal().array() += noise.zeta * noise.sigma_m2_sq / sw;
        sp.alpha = 1.0 + noise.zeta * noise.sigma_m1_sq / sw;
        return sp;
    }

    // Draws candidates v = Psi^{1/2} g, g ~ CN(0, I), projected to unit
    // modulus and rotated so the appended element is exactly 1.
    class GaussianRandomizer
    {
    public:
        explicit GaussianRandomizer(const CMat &Psi)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (Psi + Psi.adjoint()));
            // Eigenvalues at roundoff level would enter the square root as ~1e-8 noise.
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 0.0);
            const RVec root = es.eigenvalues().unaryExpr([floor](double l) { return l > floor ? std::sqrt(l) : 0.0; });
            sqrt_ = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
        }

        RisConfig draw(RandomStream &rng) const
        {
            const Eigen::Index n = sqrt_.rows();
            CVec g(n);
            for (Eigen::Index l = 0; l < n; ++l)
                g[l] = rng.complex_normal();
            return project(sqrt_ * g);
        }

        static RisConfig project(const CVec &v)
        {
            const Eigen::Index n = v.size();
            CVec th(n);
            for (Eigen::Index l = 0; l < n; ++l)
            {
                const double a = std::abs(v[l]);
                th[l] = a > 0.0 ? v[l] / a : cplx(1.0, 0.0);
            }
            const cplx rot = std::conj(th[n - 1]);
            th *= rot;
            th[n - 1] = 1.0;
            return RisConfig(std::move(th));
        }

    private:
        CMat sqrt_;
    };

    inline RisConfig gaussian_randomize(const CMat &Psi, RandomStream &rng)
    {
        return GaussianRandomizer(Psi).draw(rng);
    }

    struct BisectionProbe
    {
        double t = 0.0;
        bool feasible = false;
        bool decided = true; // false: the solver stalled between its bounds
        FeasibilityResiduals residuals;
        double lower = 0.0; // bracket after this probe
        double upper = 0.0;
    };

    struct RisStep
    {
        RisConfig theta0;
        double gamma = 0.0;   // SINR of theta0 at the given beamformer
        double t_star = 0.0;  // upper end of the final bracket; bounds every achievable SINR at this u
        double t_lower = 0.0; // relaxation value certified by Psi
        CMat Psi;
        std::vector<BisectionProbe> probes;
    };

    // RIS step: bisection on t over the feasibility SDP, then Gaussian
    // randomization around the certificate at the final lower bound.
    // A feasible certificate Psi lifts the lower end to its own ratio, which
    // is at least the probed t. When warm_start is given its rank-one lift
    // seeds the lower end.
    inline RisStep optimize_ris(const Beamformer &u, const ChannelSet &ch, const NoiseModel &noise,
                                const SystemParams &params, const OptimizerConfig &cfg, RandomStream &rng,
                                const std::optional<RisConfig> &warm_start = std::nullopt)
    {
        cfg.validate();
        if (std::abs(u.u().norm() - 1.0) > 1e-9)
            throw ValidationError("optimize_ris: beamformer must have unit norm");
        const RisSubproblem sp = ris_subproblem(u, ch, noise, params);
        const Eigen::Index n1 = sp.L0.rows();

        RisStep step;
        double lo = 0.0;
        double hi = std::min(cfg.bisection_upper, sp.L0.trace().real() * static_cast<double>(n1) / sp.alpha);
        CMat psi_lo = CMat::Zero(n1, n1);

        if (warm_start)
        {
            const CMat lift = warm_start->theta0() * warm_start->theta0().adjoint();
            const double r = sp.ratio(lift);
            if (r > lo && r <= hi)
            {
                lo = r;
                psi_lo = lift;
            }
        }

        for (int k = 0; k < cfg.max_bisection_steps && hi > 0.0; ++k)
        {
            const double mid = 0.5 * (lo + hi);
            if (lo > 0.0 && (hi - lo) <= cfg.bisection_tol * mid)
                break;
            const double t = lo > 0.0 ? std::min(mid, lo * (1.0 + 0.5 * cfg.bisection_tol)) : mid;

            FeasibilityResult fr;
            try
            {
                fr = solve_feasibility(sp.at(t), cfg.solver);
            }
            catch (const SolverError &e)
            {
                // No verdict at t. The dual bound U still caps every ratio:
                // Tr(Psi L0) - t Tr(Psi M) <= U and M >= 0 give r <= t + (U - t alpha)+ / alpha.
                // The best iterate lifts lo if it beats it. The bracket cannot
                // shrink further, so stop here.
                fr = e.best_iterate;
                const FeasibilityResiduals &r = fr.residuals;
                const double tol = cfg.solver.tolerance;
                if (fr.Psi.size() && r.min_eigenvalue >= -tol * r.psi_norm && r.max_diag_excess <= tol)
                {
                    const double rho = sp.ratio(fr.Psi);
                    if (rho > lo && rho <= hi)
                    {
                        lo = rho;
                        psi_lo = fr.Psi;
                    }
                }
                hi = std::max(lo, std::min(hi, t + std::max(0.0, fr.max_slack_upper - t * sp.alpha) / sp.alpha));
                step.probes.push_back({t, false, false, fr.residuals, lo, hi});
                break;
            }
            if (fr.feasible)
            {
                lo = std::max(t, std::min(sp.ratio(fr.Psi), hi));
                psi_lo = fr.Psi;
            }
            else
            {
                hi = t;
            }
            step.probes.push_back({t, fr.feasible, true, fr.residuals, lo, hi});
        }
        step.t_lower = lo;
        step.t_star = hi;
        step.Psi = psi_lo;

        // Candidate scoring at fixed u: u^H Hi theta = Fi^H theta.
        auto score = [&](const RisConfig &c) {
            const CVec &th = c.theta0();
            const double sig = params.tx_powers[0] * std::norm(sp.F[0].dot(th));
            double den = u.u().squaredNorm() * noise.effective(c);
            for (std::size_t i = 1; i < sp.F.size(); ++i)
                den += params.tx_powers[i] * std::norm(sp.F[i].dot(th));
            return den > 0.0 ? sig / den : 0.0;
        };

        const GaussianRandomizer sampler(psi_lo);
        double best = -1.0;
        for (int g = 0; g < cfg.n_randomizations; ++g)
        {
            RisConfig cand = sampler.draw(rng);
            const double s = score(cand);
            if (s > best)
            {
                best = s;
                step.theta0 = std::move(cand);
            }
        }
        step.gamma = sinr(u, step.theta0, ch, noise, params);
        return step;
    }

    struct BcdIteration
    {
        int iteration = 0;
        double gamma = 0.0;           // SINR of the kept (u, theta0) pair
        double candidate_gamma = 0.0; // best randomized candidate of this RIS step
        double t_star = 0.0;
        double delta = 0.0;
        bool accepted = false;        // RIS candidate replaced the previous configuration
        RisConfig theta0;
        Beamformer u;
        std::vector<BisectionProbe> probes;
    };

    struct BcdTrace
    {
        std::vector<BcdIteration> iterations;
        bool converged = false;
    };

    struct BcdResult
    {
        RisConfig theta0;
        Beamformer u;        // optimal for theta0
        double gamma = 0.0;  // sinr(u, theta0)
        BcdTrace trace;
    };

    // Alternating optimization of the receive beamformer and the RIS
    // configuration. Starts from the all-ones configuration, or from the best
    // of it and `initial_candidates` (each paired with its optimal
    // beamformer). A RIS step is kept only if it strictly improves the SINR.
    inline BcdResult bcd_optimize(const ChannelSet &ch, const NoiseModel &noise, const SystemParams &params,
                                  const OptimizerConfig &cfg, RandomStream &rng,
                                  const std::vector<RisConfig> &initial_candidates = {},
                                  Diagnostics *diag = nullptr)
    {
        cfg.validate();
        const Eigen::Index n = ch.n_ris();

        RisConfig theta = RisConfig::all_ones(n);
        if (!initial_candidates.empty())
        {
            double best = sinr(optimal_beamformer(theta, ch, noise, params), theta, ch, noise, params);
            for (const RisConfig &c : initial_candidates)
            {
                const double g = sinr(optimal_beamformer(c, ch, noise, params), c, ch, noise, params);
                if (g > best)
                {
                    best = g;
                    theta = c;
                }
            }
        }

        BcdResult res;
        double gamma_prev = 0.0;
        std::optional<Beamformer> u_prev;
        for (int it = 1; it <= cfg.max_bcd_iterations; ++it)
        {
            BcdIteration rec;
            rec.iteration = it;
            Beamformer u = optimal_beamformer(theta, ch, noise, params, diag);
            double gamma_keep = sinr(u, theta, ch, noise, params, diag);
            // Recomputing u for an unchanged theta can lose an ulp.
            if (u_prev && gamma_keep < gamma_prev)
            {
                u = *u_prev;
                gamma_keep = gamma_prev;
            }

            RisStep step = optimize_ris(u, ch, noise, params, cfg, rng, theta);
            rec.candidate_gamma = step.gamma;
            rec.t_star = step.t_star;
            rec.probes = std::move(step.probes);
            if (step.gamma > gamma_keep)
            {
                theta = step.theta0;
                rec.gamma = step.gamma;
                rec.accepted = true;
            }
            else
            {
                rec.gamma = gamma_keep;
            }
            rec.theta0 = theta;
            rec.u = u;
            if (gamma_prev > 0.0)
                rec.delta = std::abs(rec.gamma - gamma_prev) / gamma_prev;
            else
                rec.delta = rec.gamma == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
            res.trace.iterations.push_back(rec);
            gamma_prev = rec.gamma;
            u_prev = u;

            if (it >= cfg.min_bcd_iterations && rec.delta <= cfg.epsilon)
            {
                res.trace.converged = true;
                break;
            }
        }
        if (!res.trace.converged)
            warn(diag, "bcd_optimize: iteration cap reached before convergence");

        res.theta0 = theta;
        res.u = optimal_beamformer(theta, ch, noise, params, diag);
        res.gamma = sinr(res.u, theta, ch, noise, params, diag);
        if (u_prev && res.gamma < gamma_prev)
        {
            res.u = *u_prev;
            res.gamma = gamma_prev;
        }
        return res;
    }
}

#endif
