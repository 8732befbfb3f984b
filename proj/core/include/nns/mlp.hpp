#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nns {

enum class Activation { tanh, logistic, linear };

double activate(Activation kind, double z);
/// Derivative expressed in terms of the activation output a = f(z).
double activate_derivative(Activation kind, double a);

std::string_view to_string(Activation kind);
Activation parse_activation(std::string_view name);

struct LayerSpec {
    std::size_t fan_in = 1;
    std::size_t fan_out = 1;
    Activation activation = Activation::tanh;

    bool operator==(const LayerSpec&) const = default;
};

/// Builds specs for a topology like {2, 10, 10, 1}: hidden layers get
/// `hidden`, the last layer gets `output`.
std::vector<LayerSpec> make_topology(const std::vector<std::size_t>& sizes,
                                     Activation hidden = Activation::tanh,
                                     Activation output = Activation::linear);

/// Dense feed-forward network. Layer k computes a = f(W_k x + b_k) with
/// W_k of shape fan_out x fan_in.
///
/// Flattened parameter order is layer-major; within a layer all weights come
/// first (row-major over W_k), then the biases.
class Network {
public:
    /// Zero weights and biases. Throws std::invalid_argument on an empty or
    /// dimension-incompatible layer list.
    explicit Network(std::vector<LayerSpec> layers);

    const std::vector<LayerSpec>& layers() const { return layers_; }
    std::size_t layer_count() const { return layers_.size(); }
    std::size_t input_size() const { return layers_.front().fan_in; }
    std::size_t output_size() const { return layers_.back().fan_out; }
    std::size_t parameter_count() const;

    const Eigen::MatrixXd& weights(std::size_t k) const { return weights_.at(k); }
    const Eigen::VectorXd& biases(std::size_t k) const { return biases_.at(k); }
    Eigen::MatrixXd& weights(std::size_t k) { return weights_.at(k); }
    Eigen::VectorXd& biases(std::size_t k) { return biases_.at(k); }

    Eigen::VectorXd flatten() const;
    void assign(const Eigen::VectorXd& params);
    static Network unflatten(std::vector<LayerSpec> layers, const Eigen::VectorXd& params);

    bool operator==(const Network& other) const;

private:
    std::vector<LayerSpec> layers_;
    std::vector<Eigen::MatrixXd> weights_;
    std::vector<Eigen::VectorXd> biases_;
};

struct UniformRange {
    double lo = -0.5;
    double hi = 0.5;
};

/// Weights in [-c/sqrt(fan_in), +c/sqrt(fan_in)].
struct FanInScaled {
    double c = 1.0;
};

struct InitStrategy {
    std::variant<UniformRange, FanInScaled> kind = UniformRange{};
    std::uint64_t seed = 0;
};

Network init_network(const std::vector<LayerSpec>& specs, const InitStrategy& strategy);

Eigen::VectorXd forward(const Network& net, const Eigen::Ref<const Eigen::VectorXd>& input);

/// Row i of the result is forward(net, inputs.row(i)).
Eigen::MatrixXd forward_batch(const Network& net, const Eigen::MatrixXd& inputs);

/// d output_i / d parameter_j, shape output_size x parameter_count, in the
/// flattening order of Network::flatten().
Eigen::MatrixXd jacobian(const Network& net, const Eigen::Ref<const Eigen::VectorXd>& input);

/// Writes the versioned text model format. Reals use 17 significant digits so
/// that read_network(write_network(n)) == n bit for bit.
void write_network(std::ostream& os, const Network& net);
Network read_network(std::istream& is);
void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path);

}  // namespace nns
