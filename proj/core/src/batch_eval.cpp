#include "batch_eval.hpp"

namespace nns::detail {

namespace {

void apply_activation(Activation f, RowMatrix& z) {
    switch (f) {
    case Activation::tanh:
        z = z.array().tanh();
        break;
    case Activation::logistic:
        z = (1.0 + (-z.array()).exp()).inverse();
        break;
    case Activation::linear:
        break;
    }
}

RowMatrix activation_derivative(Activation f, const RowMatrix& a) {
    switch (f) {
    case Activation::tanh:
        return (1.0 - a.array().square()).matrix();
    case Activation::logistic:
        return (a.array() * (1.0 - a.array())).matrix();
    case Activation::linear:
        break;
    }
    return RowMatrix::Ones(a.rows(), a.cols());
}

}  // namespace

BatchActivations forward_all_batch(const Network& net, const Eigen::MatrixXd& inputs) {
    BatchActivations out;
    out.acts.reserve(net.layer_count() + 1);
    out.acts.emplace_back(inputs);
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        RowMatrix z = out.acts.back() * net.weights(k).transpose();
        z.rowwise() += net.biases(k).transpose();
        apply_activation(net.layers()[k].activation, z);
        out.acts.push_back(std::move(z));
    }
    return out;
}

Eigen::MatrixXd evaluate_batch(const Network& net, const Eigen::MatrixXd& inputs) {
    return forward_all_batch(net, inputs).acts.back();
}

Eigen::MatrixXd jacobian_batch(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd* targets,
                               Eigen::VectorXd* residual) {
    const auto batch = forward_all_batch(net, inputs);
    const Eigen::Index n = inputs.rows();
    const auto m = static_cast<Eigen::Index>(net.output_size());
    const auto layers = net.layer_count();

    std::vector<RowMatrix> deriv(layers);
    for (std::size_t k = 0; k < layers; ++k) {
        deriv[k] = activation_derivative(net.layers()[k].activation, batch.acts[k + 1]);
    }

    std::vector<Eigen::Index> offset(layers);
    Eigen::Index p = 0;
    for (std::size_t k = 0; k < layers; ++k) {
        offset[k] = p;
        p += static_cast<Eigen::Index>(net.layers()[k].fan_out * (net.layers()[k].fan_in + 1));
    }

    Eigen::MatrixXd jac(n * m, p);
    for (Eigen::Index o = 0; o < m; ++o) {
        // sens(i, r) = d output_o(x_i) / d z_k(r)
        RowMatrix sens = RowMatrix::Zero(n, m);
        sens.col(o) = deriv[layers - 1].col(o);
        for (std::size_t k = layers; k-- > 0;) {
            if (k + 1 < layers) {
                sens = (sens * net.weights(k + 1)).cwiseProduct(deriv[k]);
            }
            const RowMatrix& prev = batch.acts[k];
            const auto fan_in = static_cast<Eigen::Index>(net.layers()[k].fan_in);
            const auto fan_out = static_cast<Eigen::Index>(net.layers()[k].fan_out);
            for (Eigen::Index r = 0; r < fan_out; ++r) {
                for (Eigen::Index c = 0; c < fan_in; ++c) {
                    const Eigen::Index col = offset[k] + r * fan_in + c;
                    for (Eigen::Index i = 0; i < n; ++i) {
                        jac(i * m + o, col) = sens(i, r) * prev(i, c);
                    }
                }
                const Eigen::Index bcol = offset[k] + fan_out * fan_in + r;
                for (Eigen::Index i = 0; i < n; ++i) {
                    jac(i * m + o, bcol) = sens(i, r);
                }
            }
        }
    }

    if (residual && targets) {
        const auto& out = batch.acts.back();
        residual->resize(n * m);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index o = 0; o < m; ++o) {
                (*residual)[i * m + o] = out(i, o) - (*targets)(i, o);
            }
        }
    }
    return jac;
}

}  // namespace nns::detail
