#include "nns/mlp.hpp"

#include "nns/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nns {

double activate(Activation kind, double z) {
    switch (kind) {
    case Activation::tanh:
        return std::tanh(z);
    case Activation::logistic:
        return 1.0 / (1.0 + std::exp(-z));
    case Activation::linear:
        return z;
    }
    return z;
}

double activate_derivative(Activation kind, double a) {
    switch (kind) {
    case Activation::tanh:
        return 1.0 - a * a;
    case Activation::logistic:
        return a * (1.0 - a);
    case Activation::linear:
        return 1.0;
    }
    return 1.0;
}

std::string_view to_string(Activation kind) {
    switch (kind) {
    case Activation::tanh:
        return "tanh";
    case Activation::logistic:
        return "logistic";
    case Activation::linear:
        return "linear";
    }
    return "linear";
}

Activation parse_activation(std::string_view name) {
    if (name == "tanh") return Activation::tanh;
    if (name == "logistic" || name == "sigmoid") return Activation::logistic;
    if (name == "linear" || name == "purelin") return Activation::linear;
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

std::vector<LayerSpec> make_topology(const std::vector<std::size_t>& sizes, Activation hidden,
                                     Activation output) {
    if (sizes.size() < 2) {
        throw std::invalid_argument("topology needs at least an input and an output size");
    }
    std::vector<LayerSpec> specs;
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
        const bool last = k + 2 == sizes.size();
        specs.push_back({sizes[k], sizes[k + 1], last ? output : hidden});
    }
    return specs;
}

Network::Network(std::vector<LayerSpec> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) {
        throw std::invalid_argument("network needs at least one layer");
    }
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const auto& spec = layers_[k];
        if (spec.fan_in == 0 || spec.fan_out == 0) {
            throw std::invalid_argument("layer " + std::to_string(k) + " has a zero dimension");
        }
        if (k > 0 && layers_[k - 1].fan_out != spec.fan_in) {
            throw std::invalid_argument("layer " + std::to_string(k) + " fan_in " +
                                        std::to_string(spec.fan_in) + " does not match previous fan_out " +
                                        std::to_string(layers_[k - 1].fan_out));
        }
        weights_.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.fan_out),
                                                 static_cast<Eigen::Index>(spec.fan_in)));
        biases_.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.fan_out)));
    }
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto& spec : layers_) {
        n += spec.fan_out * (spec.fan_in + 1);
    }
    return n;
}

Eigen::VectorXd Network::flatten() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(parameter_count()));
    Eigen::Index p = 0;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const auto& w = weights_[k];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                out[p++] = w(r, c);
            }
        }
        out.segment(p, biases_[k].size()) = biases_[k];
        p += biases_[k].size();
    }
    return out;
}

void Network::assign(const Eigen::VectorXd& params) {
    if (static_cast<std::size_t>(params.size()) != parameter_count()) {
        throw std::invalid_argument("parameter vector has " + std::to_string(params.size()) +
                                    " entries, network has " + std::to_string(parameter_count()));
    }
    Eigen::Index p = 0;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        auto& w = weights_[k];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = params[p++];
            }
        }
        biases_[k] = params.segment(p, biases_[k].size());
        p += biases_[k].size();
    }
}

Network Network::unflatten(std::vector<LayerSpec> layers, const Eigen::VectorXd& params) {
    Network net(std::move(layers));
    net.assign(params);
    return net;
}

bool Network::operator==(const Network& other) const {
    if (layers_ != other.layers_) {
        return false;
    }
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        if (weights_[k] != other.weights_[k] || biases_[k] != other.biases_[k]) {
            return false;
        }
    }
    return true;
}

Network init_network(const std::vector<LayerSpec>& specs, const InitStrategy& strategy) {
    Network net(specs);
    Rng rng(strategy.seed);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        double lo = 0.0;
        double hi = 0.0;
        if (const auto* u = std::get_if<UniformRange>(&strategy.kind)) {
            if (!(u->lo <= u->hi)) {
                throw std::invalid_argument("uniform init range requires lo <= hi");
            }
            lo = u->lo;
            hi = u->hi;
        } else {
            const auto& f = std::get<FanInScaled>(strategy.kind);
            if (!(f.c > 0.0)) {
                throw std::invalid_argument("fan-in scaled init requires c > 0");
            }
            hi = f.c / std::sqrt(static_cast<double>(specs[k].fan_in));
            lo = -hi;
        }
        auto& w = net.weights(k);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = rng.uniform(lo, hi);
            }
        }
        auto& b = net.biases(k);
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            b[r] = rng.uniform(lo, hi);
        }
    }
    return net;
}

namespace {

void check_input(const Network& net, Eigen::Index n) {
    if (static_cast<std::size_t>(n) != net.input_size()) {
        throw std::invalid_argument("input has " + std::to_string(n) + " features, network expects " +
                                    std::to_string(net.input_size()));
    }
}

// Post-activation values for every layer; acts[0] is the input itself.
std::vector<Eigen::VectorXd> forward_all(const Network& net, const Eigen::Ref<const Eigen::VectorXd>& input) {
    std::vector<Eigen::VectorXd> acts;
    acts.reserve(net.layer_count() + 1);
    acts.emplace_back(input);
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        Eigen::VectorXd z = net.weights(k) * acts.back() + net.biases(k);
        const Activation f = net.layers()[k].activation;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            z[i] = activate(f, z[i]);
        }
        acts.push_back(std::move(z));
    }
    return acts;
}

}  // namespace

Eigen::VectorXd forward(const Network& net, const Eigen::Ref<const Eigen::VectorXd>& input) {
    check_input(net, input.size());
    return forward_all(net, input).back();
}

Eigen::MatrixXd forward_batch(const Network& net, const Eigen::MatrixXd& inputs) {
    Eigen::MatrixXd out(inputs.rows(), static_cast<Eigen::Index>(net.output_size()));
    if (inputs.rows() == 0) {
        return out;
    }
    check_input(net, inputs.cols());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        const Eigen::VectorXd x = inputs.row(i).transpose();
        out.row(i) = forward(net, x).transpose();
    }
    return out;
}

Eigen::MatrixXd jacobian(const Network& net, const Eigen::Ref<const Eigen::VectorXd>& input) {
    check_input(net, input.size());
    const auto acts = forward_all(net, input);
    const std::size_t layers = net.layer_count();
    const auto outputs = static_cast<Eigen::Index>(net.output_size());

    Eigen::MatrixXd jac(outputs, static_cast<Eigen::Index>(net.parameter_count()));

    // Column offset of each layer's block in the flattened parameter vector.
    std::vector<Eigen::Index> offset(layers);
    Eigen::Index p = 0;
    for (std::size_t k = 0; k < layers; ++k) {
        offset[k] = p;
        p += static_cast<Eigen::Index>(net.layers()[k].fan_out * (net.layers()[k].fan_in + 1));
    }

    // sens = d output / d z_k, shape outputs x fan_out_k, walked backwards.
    Eigen::MatrixXd sens;
    for (std::size_t k = layers; k-- > 0;) {
        const auto& spec = net.layers()[k];
        const Eigen::VectorXd& a = acts[k + 1];
        Eigen::VectorXd deriv(a.size());
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            deriv[i] = activate_derivative(spec.activation, a[i]);
        }
        if (k + 1 == layers) {
            sens = deriv.asDiagonal();
        } else {
            sens = (sens * net.weights(k + 1)) * deriv.asDiagonal();
        }

        const Eigen::VectorXd& prev = acts[k];
        const auto fan_in = static_cast<Eigen::Index>(spec.fan_in);
        const auto fan_out = static_cast<Eigen::Index>(spec.fan_out);
        for (Eigen::Index r = 0; r < fan_out; ++r) {
            jac.block(0, offset[k] + r * fan_in, outputs, fan_in) = sens.col(r) * prev.transpose();
        }
        jac.block(0, offset[k] + fan_out * fan_in, outputs, fan_out) = sens;
    }
    return jac;
}

}  // namespace nns
