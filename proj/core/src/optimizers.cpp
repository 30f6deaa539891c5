// Copyright 2026 The lgtsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "lgtsim/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "lgtsim/error.hpp"

namespace lgtsim {

QuadraticObjective::QuadraticObjective(Eigen::MatrixXd a, Eigen::VectorXd b)
    : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != a_.cols() || a_.rows() != b_.size())
        throw ValidationError("QuadraticObjective: dimension mismatch");
}

double QuadraticObjective::value(const Eigen::VectorXd &x) const {
    return 0.5 * x.dot(a_ * x) - b_.dot(x);
}

Eigen::VectorXd QuadraticObjective::gradient(const Eigen::VectorXd &x) const {
    return a_ * x - b_;
}

IpgState ipg_init(const Eigen::VectorXd &x0) {
    IpgState s;
    s.x = x0;
    s.K = Eigen::MatrixXd::Identity(x0.size(), x0.size());
    return s;
}

IpgState ipg_step(const IpgState &state, const DifferentiableObjective &f,
                  const IpgSchedule &schedule) {
    const Eigen::VectorXd g = f.gradient(state.x);
    const Eigen::MatrixXd h = f.hessian(state.x);
    if (!g.allFinite() || !h.allFinite())
        throw DivergenceError("ipg_step: non-finite gradient or Hessian", state.x);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();

    IpgState next;
    next.t = state.t + 1;
    next.beta = std::max(0.0, -lmin) + schedule.beta_margin;
    next.alpha = schedule.alpha_safety / (lmax + next.beta);
    next.x = state.x - schedule.delta * (state.K * g);
    const Eigen::Index d = state.x.size();
    const Eigen::MatrixXd shifted = h + next.beta * Eigen::MatrixXd::Identity(d, d);
    next.K = state.K - next.alpha * (shifted * state.K - Eigen::MatrixXd::Identity(d, d));
    if (!next.x.allFinite() || !next.K.allFinite())
        throw DivergenceError("ipg_step: iterate became non-finite", state.x);
    return next;
}

double preconditioner_residual(const IpgState &state, const Eigen::MatrixXd &hessian) {
    const Eigen::Index d = state.K.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    return ((hessian + state.beta * id) * state.K - id).norm();
}

Eigen::MatrixXd export_preconditioner(const IpgState &state) { return state.K; }

AdamState adam_init(const Eigen::VectorXd &x0) {
    AdamState s;
    s.x = x0;
    s.m = Eigen::VectorXd::Zero(x0.size());
    s.v = Eigen::VectorXd::Zero(x0.size());
    return s;
}

AdamState adam_step(const AdamState &state, const DifferentiableObjective &f,
                    const AdamParams &p) {
    const Eigen::VectorXd g = f.gradient(state.x);
    if (!g.allFinite())
        throw DivergenceError("adam_step: non-finite gradient", state.x);
    AdamState s = state;
    s.t += 1;
    s.m = p.beta1 * s.m + (1.0 - p.beta1) * g;
    s.v = p.beta2 * s.v + (1.0 - p.beta2) * g.cwiseProduct(g);
    const double c1 = 1.0 - std::pow(p.beta1, s.t);
    const double c2 = 1.0 - std::pow(p.beta2, s.t);
    const Eigen::VectorXd mhat = s.m / c1;
    const Eigen::VectorXd vhat = s.v / c2;
    s.x = s.x - p.lr * (mhat.array() / (vhat.array().sqrt() + p.eps)).matrix();
    return s;
}

Eigen::VectorXd gd_step(const Eigen::VectorXd &x, const DifferentiableObjective &f,
                        double lr) {
    const Eigen::VectorXd g = f.gradient(x);
    if (!g.allFinite())
        throw DivergenceError("gd_step: non-finite gradient", x);
    return x - lr * g;
}

TrialRecord lbfgs_minimize(const DifferentiableObjective &f, const Eigen::VectorXd &x0,
                           int max_iters, const LbfgsOptions &opts) {
    if (max_iters < 1)
        throw ValidationError("lbfgs_minimize: max_iters must be >= 1");
    TrialRecord rec;
    rec.optimizer = "lbfgs";
    Eigen::VectorXd x = x0;
    double fx = f.value(x);
    Eigen::VectorXd g = f.gradient(x);
    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;
    bool done = g.norm() <= opts.gtol;

    for (int it = 0; it < max_iters && !done; ++it) {
        if (!g.allFinite())
            throw DivergenceError("lbfgs: non-finite gradient", x);
        // Two-loop recursion.
        Eigen::VectorXd q = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(q);
            q -= alpha[i] * y_hist[i];
        }
        double gamma = 1.0;
        if (!s_hist.empty())
            gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        Eigen::VectorXd r = gamma * q;
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(r);
            r += s_hist[i] * (alpha[i] - beta);
        }
        Eigen::VectorXd dir = -r;
        double slope = g.dot(dir);
        if (slope >= 0.0) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            dir = -g;
            slope = -g.squaredNorm();
        }

        double step = s_hist.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;
        bool accepted = false;
        Eigen::VectorXd xn;
        double fn = fx;
        for (int b = 0; b < opts.max_backtracks; ++b) {
            xn = x + step * dir;
            fn = f.value(xn);
            if (std::isfinite(fn) && fn <= fx + opts.armijo_c * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            rec.stalled = true;
            rec.cost_history.push_back(fx);
            break;
        }
        const Eigen::VectorXd gn = f.gradient(xn);
        const Eigen::VectorXd sv = xn - x;
        const Eigen::VectorXd yv = gn - g;
        const double sy = sv.dot(yv);
        if (sy > 1e-12) {
            s_hist.push_back(sv);
            y_hist.push_back(yv);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        const double decrease = (fx - fn) / std::max({std::abs(fx), std::abs(fn), 1.0});
        x = xn;
        fx = fn;
        g = gn;
        rec.cost_history.push_back(fx);
        if (g.norm() <= opts.gtol || decrease <= opts.ftol)
            done = true;
    }
    if (rec.cost_history.empty())
        rec.cost_history.push_back(fx);
    while (static_cast<int>(rec.cost_history.size()) < max_iters)
        rec.cost_history.push_back(rec.cost_history.back());
    rec.x_final = x;
    return rec;
}

std::string OptimizerSpec::name() const {
    switch (kind) {
    case Kind::Ipg:
        return "ipg";
    case Kind::Adam:
        return "adam";
    case Kind::Gd:
        return "gd";
    case Kind::Lbfgs:
        return "lbfgs";
    }
    return "?";
}

OptimizerSpec OptimizerSpec::from_name(const std::string &name) {
    OptimizerSpec s;
    if (name == "ipg")
        s.kind = Kind::Ipg;
    else if (name == "adam")
        s.kind = Kind::Adam;
    else if (name == "gd")
        s.kind = Kind::Gd;
    else if (name == "lbfgs")
        s.kind = Kind::Lbfgs;
    else
        throw ValidationError("unknown optimizer '" + name + "'");
    return s;
}

TrialRecord run_optimizer(const OptimizerSpec &spec, const DifferentiableObjective &f,
                          const Eigen::VectorXd &x0, int n_iters) {
    if (n_iters < 1)
        throw ValidationError("run_optimizer: n_iters must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    TrialRecord rec;
    switch (spec.kind) {
    case OptimizerSpec::Kind::Ipg: {
        IpgState s = ipg_init(x0);
        for (int i = 0; i < n_iters; ++i) {
            s = ipg_step(s, f, spec.ipg);
            rec.cost_history.push_back(f.value(s.x));
        }
        rec.x_final = s.x;
        rec.preconditioner = export_preconditioner(s);
        break;
    }
    case OptimizerSpec::Kind::Adam: {
        AdamState s = adam_init(x0);
        for (int i = 0; i < n_iters; ++i) {
            s = adam_step(s, f, spec.adam);
            rec.cost_history.push_back(f.value(s.x));
        }
        rec.x_final = s.x;
        break;
    }
    case OptimizerSpec::Kind::Gd: {
        Eigen::VectorXd x = x0;
        for (int i = 0; i < n_iters; ++i) {
            x = gd_step(x, f, spec.gd_lr);
            rec.cost_history.push_back(f.value(x));
        }
        rec.x_final = x;
        break;
    }
    case OptimizerSpec::Kind::Lbfgs:
        rec = lbfgs_minimize(f, x0, n_iters, spec.lbfgs);
        break;
    }
    rec.optimizer = spec.name();
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(trial), 0x1a2b3c4dU};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Eigen::VectorXd random_initial_point(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i)
        x(i) = u(rng);
    return x;
}

TrialSet run_trials(const OptimizerSpec &spec, const DifferentiableObjective &f,
                    int n_trials, int n_iters, std::uint64_t master_seed) {
    if (n_trials < 1)
        throw ValidationError("run_trials: n_trials must be >= 1");
    TrialSet set;
    for (int k = 0; k < n_trials; ++k) {
        const std::uint64_t seed = trial_seed(master_seed, k);
        TrialRecord r = run_optimizer(spec, f, random_initial_point(f.dim(), seed), n_iters);
        r.seed = seed;
        set.all.push_back(std::move(r));
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < set.all.size(); ++k)
        if (set.all[k].final_cost() < set.all[best].final_cost())
            best = k;
    set.best = set.all[best];
    return set;
}

} // namespace lgtsim
