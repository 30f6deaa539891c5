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
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lgtsim/objective.hpp"

namespace lgtsim {

/// Smooth objective seen by the optimizers.
class DifferentiableObjective {
  public:
    virtual ~DifferentiableObjective() = default;
    virtual int dim() const = 0;
    virtual double value(const Eigen::VectorXd &x) const = 0;
    virtual Eigen::VectorXd gradient(const Eigen::VectorXd &x) const = 0;
    virtual Eigen::MatrixXd hessian(const Eigen::VectorXd &x) const = 0;
};

/// 1 - F for a unitary-matching problem.
class UnitaryCost final : public DifferentiableObjective {
  public:
    explicit UnitaryCost(ObjectiveHandle handle) : h_(std::move(handle)) {}
    int dim() const override { return h_.dim(); }
    double value(const Eigen::VectorXd &x) const override { return h_.cost(x); }
    Eigen::VectorXd gradient(const Eigen::VectorXd &x) const override { return h_.gradient(x); }
    Eigen::MatrixXd hessian(const Eigen::VectorXd &x) const override { return h_.hessian(x); }
    const ObjectiveHandle &handle() const { return h_; }

  private:
    ObjectiveHandle h_;
};

/// f(x) = 1/2 x^T A x - b^T x.
class QuadraticObjective final : public DifferentiableObjective {
  public:
    QuadraticObjective(Eigen::MatrixXd a, Eigen::VectorXd b);
    int dim() const override { return static_cast<int>(b_.size()); }
    double value(const Eigen::VectorXd &x) const override;
    Eigen::VectorXd gradient(const Eigen::VectorXd &x) const override;
    Eigen::MatrixXd hessian(const Eigen::VectorXd &) const override { return a_; }

  private:
    Eigen::MatrixXd a_;
    Eigen::VectorXd b_;
};

struct IpgSchedule {
    double beta_margin = 1e-3;  // beta_t = max(0, -lambda_min) + margin
    double alpha_safety = 0.9;  // alpha_t = safety / (lambda_max + beta_t)
    double delta = 1.0;         // x step
};

struct IpgState {
    Eigen::VectorXd x;
    Eigen::MatrixXd K;
    int t = 0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// K_0 = I.
IpgState ipg_init(const Eigen::VectorXd &x0);

/// x <- x - delta K g, then K <- K - alpha ((H + beta I) K - I).
/// Throws DivergenceError on a non-finite gradient or Hessian.
IpgState ipg_step(const IpgState &state, const DifferentiableObjective &f,
                  const IpgSchedule &schedule = {});

/// Frobenius norm of (H + beta I) K - I, used as a convergence diagnostic.
double preconditioner_residual(const IpgState &state, const Eigen::MatrixXd &hessian);

/// Copy of K_t for CSV output.
Eigen::MatrixXd export_preconditioner(const IpgState &state);

struct AdamParams {
    double lr = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    Eigen::VectorXd x, m, v;
    int t = 0;
};

AdamState adam_init(const Eigen::VectorXd &x0);
AdamState adam_step(const AdamState &state, const DifferentiableObjective &f,
                    const AdamParams &p = {});

/// Plain gradient descent.
Eigen::VectorXd gd_step(const Eigen::VectorXd &x, const DifferentiableObjective &f,
                        double lr);

struct TrialRecord {
    std::string optimizer;
    std::uint64_t seed = 0;
    std::vector<double> cost_history; // one entry per iteration of the budget
    double wall_seconds = 0.0;
    bool stalled = false;
    Eigen::VectorXd x_final;
    std::optional<Eigen::MatrixXd> preconditioner;

    double final_cost() const { return cost_history.back(); }
};

struct LbfgsOptions {
    int memory = 10;
    double gtol = 1e-5;
    /// Stop when the absolute decrease over one iteration is below this.
    double ftol = 2.2e-9;
    double armijo_c = 1e-4;
    int max_backtracks = 40;
};

/// Two-loop recursion with Armijo backtracking. The history is padded
/// with the final cost up to max_iters entries.
TrialRecord lbfgs_minimize(const DifferentiableObjective &f, const Eigen::VectorXd &x0,
                           int max_iters, const LbfgsOptions &opts = {});

struct OptimizerSpec {
    enum class Kind { Ipg, Adam, Gd, Lbfgs };
    Kind kind = Kind::Ipg;
    IpgSchedule ipg;
    AdamParams adam;
    double gd_lr = 0.1;
    LbfgsOptions lbfgs;

    std::string name() const;
    static OptimizerSpec from_name(const std::string &name);
};

TrialRecord run_optimizer(const OptimizerSpec &spec, const DifferentiableObjective &f,
                          const Eigen::VectorXd &x0, int n_iters);

struct TrialSet {
    TrialRecord best;
    std::vector<TrialRecord> all;
};

/// Seed of trial k under a master seed. Identical across optimizers.
std::uint64_t trial_seed(std::uint64_t master_seed, int trial);
/// x0 uniform in [0, 2 pi)^d.
Eigen::VectorXd random_initial_point(int d, std::uint64_t seed);

TrialSet run_trials(const OptimizerSpec &spec, const DifferentiableObjective &f,
                    int n_trials, int n_iters, std::uint64_t master_seed);

} // namespace lgtsim
