#include "nns/trainer.hpp"

#include "nns/rng.hpp"

#include "batch_eval.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nns {

void LmConfig::validate() const {
    if (!(mu0 > 0.0)) throw std::invalid_argument("lm: mu0 must be > 0");
    if (!(mu_inc > 1.0)) throw std::invalid_argument("lm: mu_inc must be > 1");
    if (!(mu_dec > 1.0)) throw std::invalid_argument("lm: mu_dec must be > 1");
    if (!(mu_max > 0.0)) throw std::invalid_argument("lm: mu_max must be > 0");
    if (max_epochs < 1) throw std::invalid_argument("lm: max_epochs must be >= 1");
}

void SgdConfig::validate() const {
    // Zero is allowed: it leaves the network untouched.
    if (!(learning_rate >= 0.0)) throw std::invalid_argument("sgd: learning_rate must be >= 0");
    if (max_epochs < 1) throw std::invalid_argument("sgd: max_epochs must be >= 1");
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
    case StopReason::goal_met:
        return "goal-met";
    case StopReason::max_epochs:
        return "max-epochs";
    case StopReason::damping_overflow:
        return "damping-overflow";
    case StopReason::gradient_vanished:
        return "gradient-vanished";
    case StopReason::validation_early_stop:
        return "validation-early-stop";
    case StopReason::diverged:
        return "diverged";
    }
    return "max-epochs";
}

StopReason parse_stop_reason(std::string_view text) {
    for (auto r : {StopReason::goal_met, StopReason::max_epochs, StopReason::damping_overflow,
                   StopReason::gradient_vanished, StopReason::validation_early_stop, StopReason::diverged}) {
        if (to_string(r) == text) {
            return r;
        }
    }
    throw std::invalid_argument("unknown stop reason '" + std::string(text) + "'");
}

namespace {

void check_shapes(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
    if (inputs.rows() == 0) {
        throw std::invalid_argument("empty dataset");
    }
    if (inputs.rows() != targets.rows()) {
        throw std::invalid_argument("inputs and targets have different row counts");
    }
    if (static_cast<std::size_t>(inputs.cols()) != net.input_size() ||
        static_cast<std::size_t>(targets.cols()) != net.output_size()) {
        throw std::invalid_argument("dataset shape does not match the network");
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    return static_cast<double>(ms) / 1000.0;
}

}  // namespace

double mse(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
    check_shapes(net, inputs, targets);
    const Eigen::MatrixXd residual = targets - detail::evaluate_batch(net, inputs);
    return residual.squaredNorm() / static_cast<double>(residual.size());
}

NormalEquations normal_equations(const Network& net, const Eigen::MatrixXd& inputs,
                                 const Eigen::MatrixXd& targets) {
    check_shapes(net, inputs, targets);
    const auto params = static_cast<Eigen::Index>(net.parameter_count());
    Eigen::VectorXd residual;
    const Eigen::MatrixXd jac = detail::jacobian_batch(net, inputs, &targets, &residual);
    const Eigen::Index rows = jac.rows();

    NormalEquations eq;
    eq.jtj = Eigen::MatrixXd::Zero(params, params);
    eq.jtj.selfadjointView<Eigen::Lower>().rankUpdate(jac.transpose());
    eq.jtj.triangularView<Eigen::StrictlyUpper>() = eq.jtj.transpose();
    eq.jtr = jac.transpose() * residual;
    eq.cost = residual.squaredNorm() / static_cast<double>(rows);
    return eq;
}

std::optional<Eigen::VectorXd> damped_step(const NormalEquations& eq, double mu) {
    Eigen::MatrixXd damped = eq.jtj;
    damped.diagonal().array() += mu;
    Eigen::LLT<Eigen::MatrixXd> llt(damped);
    if (llt.info() != Eigen::Success) {
        return std::nullopt;
    }
    Eigen::VectorXd step = llt.solve(-eq.jtr);
    if (!step.allFinite()) {
        return std::nullopt;
    }
    return step;
}

namespace {

struct Trial {
    std::optional<Network> candidate;
    double cost = std::numeric_limits<double>::infinity();
    bool accepted = false;
    Eigen::VectorXd step;
};

Trial try_step(const Network& net, const Eigen::VectorXd& params, const NormalEquations& eq,
               const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets, double mu) {
    Trial t;
    auto step = damped_step(eq, mu);
    if (!step) {
        return t;
    }
    t.step = std::move(*step);
    if (t.step.isZero(0.0)) {
        t.candidate = net;
        t.cost = eq.cost;
        t.accepted = true;
        return t;
    }
    Network cand = net;
    cand.assign(params + t.step);
    t.cost = mse(cand, inputs, targets);
    t.accepted = std::isfinite(t.cost) && t.cost < eq.cost;
    t.candidate = std::move(cand);
    return t;
}

}  // namespace

LmStepResult lm_step(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                     double mu, const LmConfig& cfg) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("lm_step: mu must be > 0");
    }
    const NormalEquations eq = normal_equations(net, inputs, targets);
    if (!std::isfinite(eq.cost)) {
        throw std::domain_error("lm_step: current cost is not finite");
    }
    Trial t = try_step(net, net.flatten(), eq, inputs, targets, mu);
    if (t.accepted) {
        return {std::move(*t.candidate), t.cost, true, mu / cfg.mu_dec, std::move(t.step)};
    }
    return {net, eq.cost, false, mu * cfg.mu_inc, std::move(t.step)};
}

TrainResult train_lm(const Network& initial, const Dataset& train, const std::optional<Dataset>& validation,
                     const LmConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Eigen::MatrixXd& x = train.inputs();
    const Eigen::MatrixXd& y = train.targets();
    check_shapes(initial, x, y);
    if (validation) {
        check_shapes(initial, validation->inputs(), validation->targets());
    }

    Network net = initial;
    NormalEquations eq = normal_equations(net, x, y);
    double mu = cfg.mu0;

    TrainHistory history;
    const auto val_mse = [&](const Network& n) -> std::optional<double> {
        if (!validation) return std::nullopt;
        return mse(n, validation->inputs(), validation->targets());
    };

    EpochRecord first;
    first.epoch = 0;
    first.train_mse = eq.cost;
    first.val_mse = val_mse(net);
    first.mu = mu;
    history.epochs.push_back(first);

    Network best = net;
    double best_val = first.val_mse.value_or(0.0);
    std::size_t val_fails = 0;

    const auto finish = [&](StopReason reason) {
        history.stop_reason = reason;
        history.wall_clock_seconds = seconds_since(start);
        return TrainResult{best, std::move(history)};
    };

    if (!std::isfinite(eq.cost)) {
        return finish(StopReason::diverged);
    }
    if (eq.cost <= cfg.mse_goal) {
        return finish(StopReason::goal_met);
    }

    const double grad_scale = 2.0 / static_cast<double>(x.rows() * y.cols());
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        if (grad_scale * eq.jtr.norm() < cfg.min_grad) {
            return finish(StopReason::gradient_vanished);
        }

        const Eigen::VectorXd params = net.flatten();
        EpochRecord rec;
        rec.epoch = epoch;
        rec.accepted = false;
        while (true) {
            Trial t = try_step(net, params, eq, x, y, mu);
            if (t.accepted) {
                net = std::move(*t.candidate);
                mu /= cfg.mu_dec;
                rec.accepted = true;
                break;
            }
            mu *= cfg.mu_inc;
            ++rec.rejected_steps;
            if (mu > cfg.mu_max) {
                break;
            }
        }

        if (!rec.accepted) {
            rec.train_mse = eq.cost;
            rec.val_mse = history.epochs.back().val_mse;
            rec.mu = mu;
            history.epochs.push_back(rec);
            return finish(StopReason::damping_overflow);
        }

        eq = normal_equations(net, x, y);
        rec.train_mse = eq.cost;
        rec.val_mse = val_mse(net);
        rec.mu = mu;
        history.epochs.push_back(rec);

        if (validation) {
            if (*rec.val_mse < best_val) {
                best_val = *rec.val_mse;
                best = net;
                val_fails = 0;
            } else if (++val_fails >= cfg.patience) {
                return finish(StopReason::validation_early_stop);
            }
        } else {
            best = net;
        }

        if (eq.cost <= cfg.mse_goal) {
            return finish(StopReason::goal_met);
        }
    }
    return finish(StopReason::max_epochs);
}

TrainResult train_sgd_online(const Network& initial, const Dataset& train, const SgdConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Eigen::MatrixXd& x = train.inputs();
    const Eigen::MatrixXd& y = train.targets();
    check_shapes(initial, x, y);

    Network net = initial;
    TrainHistory history;
    history.epochs.push_back({0, mse(net, x, y), std::nullopt, std::nullopt, true, 0});

    const auto finish = [&](StopReason reason) {
        history.stop_reason = reason;
        history.wall_clock_seconds = seconds_since(start);
        return TrainResult{net, std::move(history)};
    };
    if (!std::isfinite(history.epochs.back().train_mse)) {
        return finish(StopReason::diverged);
    }
    if (history.epochs.back().train_mse <= cfg.mse_goal) {
        return finish(StopReason::goal_met);
    }

    Eigen::VectorXd params = net.flatten();
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto order = random_permutation(train.size(), derive_seed(cfg.seed, epoch));
        for (std::size_t idx : order) {
            const auto i = static_cast<Eigen::Index>(idx);
            const Eigen::VectorXd xi = x.row(i).transpose();
            const Eigen::VectorXd r = forward(net, xi) - y.row(i).transpose();
            params -= cfg.learning_rate * (jacobian(net, xi).transpose() * r);
            net.assign(params);
        }
        const double cost = mse(net, x, y);
        history.epochs.push_back({epoch, cost, std::nullopt, std::nullopt, true, 0});
        if (!std::isfinite(cost)) {
            return finish(StopReason::diverged);
        }
        if (cost <= cfg.mse_goal) {
            return finish(StopReason::goal_met);
        }
    }
    return finish(StopReason::max_epochs);
}

void write_history_csv(std::ostream& os, const TrainHistory& history) {
    os << "epoch,train_mse,val_mse,mu\n";
    for (const auto& e : history.epochs) {
        os << e.epoch << ',' << fmt::format("{:.17g}", e.train_mse) << ',';
        if (e.val_mse) os << fmt::format("{:.17g}", *e.val_mse);
        os << ',';
        if (e.mu) os << fmt::format("{:.17g}", *e.mu);
        os << '\n';
    }
    os << "# stop_reason=" << to_string(history.stop_reason)
       << fmt::format(" seconds={:.3f}", history.wall_clock_seconds) << '\n';
}

namespace {

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
        throw std::runtime_error("history csv: bad number '" + s + "'");
    }
    return v;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

TrainHistory read_history_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "epoch,train_mse,val_mse,mu") {
        throw std::runtime_error("history csv: missing header");
    }
    TrainHistory h;
    bool footer = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            std::istringstream ss(line.substr(2));
            std::string kv;
            while (ss >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = kv.substr(0, eq);
                const std::string value = kv.substr(eq + 1);
                if (key == "stop_reason") h.stop_reason = parse_stop_reason(value);
                if (key == "seconds") h.wall_clock_seconds = parse_double(value);
            }
            footer = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 4) {
            throw std::runtime_error("history csv: expected 4 fields in '" + line + "'");
        }
        EpochRecord e;
        e.epoch = static_cast<std::size_t>(std::stoull(f[0]));
        e.train_mse = parse_double(f[1]);
        if (!f[2].empty()) e.val_mse = parse_double(f[2]);
        if (!f[3].empty()) e.mu = parse_double(f[3]);
        h.epochs.push_back(e);
    }
    if (!footer) {
        throw std::runtime_error("history csv: missing footer");
    }
    return h;
}

}  // namespace nns
