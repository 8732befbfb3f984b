#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: plain loops, central differences, closed-form fits.

#include "nns/mlp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double act(nns::Activation f, double z) {
    switch (f) {
    case nns::Activation::tanh:
        return std::tanh(z);
    case nns::Activation::logistic:
        return 1.0 / (1.0 + std::exp(-z));
    case nns::Activation::linear:
        return z;
    }
    return z;
}

// Forward pass driven by an explicit parameter vector laid out layer by
// layer: row-major weights, then biases.
inline std::vector<double> forward(const std::vector<nns::LayerSpec>& layers, const std::vector<double>& theta,
                                   std::vector<double> x) {
    std::size_t p = 0;
    for (const auto& l : layers) {
        std::vector<double> z(l.fan_out, 0.0);
        for (std::size_t r = 0; r < l.fan_out; ++r) {
            for (std::size_t c = 0; c < l.fan_in; ++c) z[r] += theta[p + r * l.fan_in + c] * x[c];
        }
        p += l.fan_out * l.fan_in;
        for (std::size_t r = 0; r < l.fan_out; ++r) z[r] = act(l.activation, z[r] + theta[p + r]);
        p += l.fan_out;
        x = std::move(z);
    }
    return x;
}

// Central differences, step scaled to the magnitude of each parameter.
inline std::vector<std::vector<double>> fd_jacobian(const std::vector<nns::LayerSpec>& layers,
                                                    const std::vector<double>& theta, const std::vector<double>& x) {
    const std::size_t m = layers.back().fan_out;
    std::vector<std::vector<double>> jac(m, std::vector<double>(theta.size()));
    for (std::size_t j = 0; j < theta.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(theta[j]));
        auto tp = theta;
        auto tm = theta;
        tp[j] += h;
        tm[j] -= h;
        const auto fp = forward(layers, tp, x);
        const auto fm = forward(layers, tm, x);
        for (std::size_t o = 0; o < m; ++o) jac[o][j] = (fp[o] - fm[o]) / (2.0 * h);
    }
    return jac;
}

// Ordinary least squares y ~ s x + c.
struct LineFit {
    double slope;
    double intercept;
};

inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double s = sxy / sxx;
    return {s, my - s * mx};
}

inline double mean_abs_relative_percent(const std::vector<double>& a, const std::vector<double>& s) {
    long double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs((a[i] - s[i]) / a[i]);
    return static_cast<double>(acc / a.size() * 100.0L);
}

}  // namespace oracle
