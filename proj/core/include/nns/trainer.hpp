#pragma once

#include "nns/mlp.hpp"
#include "nns/pipeline.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nns {

struct LmConfig {
    double mu0 = 1e-3;
    /// Multiplies mu after a rejected step.
    double mu_inc = 10.0;
    /// Divides mu after an accepted step.
    double mu_dec = 10.0;
    double mu_max = 1e10;
    std::size_t max_epochs = 1000;
    double mse_goal = 1e-8;
    double min_grad = 1e-10;
    /// Consecutive validation failures tolerated before stopping. Only used
    /// when a validation set is passed to train_lm.
    std::size_t patience = 6;

    void validate() const;
};

struct SgdConfig {
    double learning_rate = 0.01;
    std::size_t max_epochs = 1000;
    double mse_goal = 0.0;
    /// Seeds the per-epoch visiting order.
    std::uint64_t seed = 0;

    void validate() const;
};

enum class StopReason {
    goal_met,
    max_epochs,
    damping_overflow,
    gradient_vanished,
    validation_early_stop,
    diverged,
};

std::string_view to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view text);

struct EpochRecord {
    std::size_t epoch = 0;
    double train_mse = 0.0;
    std::optional<double> val_mse;
    /// Damping after the epoch (LM only).
    std::optional<double> mu;
    /// LM: whether the epoch ended with an accepted step. Epoch 0 is the
    /// initial state and counts as accepted.
    bool accepted = true;
    /// LM: number of rejected trial steps inside the epoch.
    std::size_t rejected_steps = 0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    StopReason stop_reason = StopReason::max_epochs;
    double wall_clock_seconds = 0.0;
};

struct TrainResult {
    Network network;
    TrainHistory history;
};

/// Mean over samples and output components of (target - prediction)^2.
double mse(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

/// Gauss-Newton quantities for the stacked residual r = prediction - target.
struct NormalEquations {
    Eigen::MatrixXd jtj;
    Eigen::VectorXd jtr;
    double cost = 0.0;  ///< mse at the linearization point
};

NormalEquations normal_equations(const Network& net, const Eigen::MatrixXd& inputs,
                                 const Eigen::MatrixXd& targets);

/// Solves (JtJ + mu I) step = -Jtr by Cholesky. Empty when the damped
/// matrix is not numerically positive definite.
std::optional<Eigen::VectorXd> damped_step(const NormalEquations& eq, double mu);

struct LmStepResult {
    Network candidate;
    double cost = 0.0;
    bool accepted = false;
    double mu = 0.0;
    Eigen::VectorXd step;  ///< empty when the solve failed
};

/// One Levenberg-Marquardt trial. Accepted when the candidate cost is
/// strictly lower, or when the step is exactly zero (residuals or gradient
/// already vanish). On acceptance mu is divided by mu_dec; otherwise the
/// network is returned unchanged with mu multiplied by mu_inc. A failed
/// solve or non-finite candidate cost counts as a rejection.
LmStepResult lm_step(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                     double mu, const LmConfig& cfg = {});

/// Batch Levenberg-Marquardt. Each epoch retries with growing mu until a
/// step is accepted or mu exceeds mu_max. Returns the best network seen on
/// the selection metric (validation mse when a validation set is given,
/// training mse otherwise).
TrainResult train_lm(const Network& net, const Dataset& train, const std::optional<Dataset>& validation,
                     const LmConfig& cfg);

/// Online training: one gradient step on 0.5 * |r|^2 per sample, samples
/// visited in a fresh shuffled order every epoch.
TrainResult train_sgd_online(const Network& net, const Dataset& train, const SgdConfig& cfg);

/// CSV with header `epoch,train_mse,val_mse,mu` and a trailing
/// `# stop_reason=<reason> seconds=<s>` comment line.
void write_history_csv(std::ostream& os, const TrainHistory& history);
TrainHistory read_history_csv(std::istream& is);

}  // namespace nns
