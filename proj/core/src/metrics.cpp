#include "nns/metrics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nns {

double relative_percent_error(std::span<const double> actual, std::span<const double> simulated) {
    if (actual.size() != simulated.size()) {
        throw std::invalid_argument("relative_percent_error: length mismatch (" + std::to_string(actual.size()) +
                                    " vs " + std::to_string(simulated.size()) + ")");
    }
    if (actual.empty()) {
        throw std::invalid_argument("relative_percent_error: empty input");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) {
            throw std::domain_error("relative_percent_error: actual value at index " + std::to_string(i) +
                                    " is zero");
        }
        sum += std::abs((actual[i] - simulated[i]) / actual[i]);
    }
    return sum / static_cast<double>(actual.size()) * 100.0;
}

Eigen::MatrixXd predict(const Network& net, const ScaleParams& sp, const Eigen::MatrixXd& raw_inputs) {
    return invert_scale(sp.targets, forward_batch(net, apply_scale(sp.inputs, raw_inputs)));
}

ErrorReport evaluate_surrogate(const Network& net, const ScaleParams& sp, const Dataset& test,
                               std::string function_name, double seconds) {
    const Eigen::MatrixXd predicted = predict(net, sp, test.inputs());
    // Column-major storage: both matrices flatten in the same order.
    const Eigen::MatrixXd& actual = test.targets();
    const std::span<const double> a(actual.data(), static_cast<std::size_t>(actual.size()));
    const std::span<const double> s(predicted.data(), static_cast<std::size_t>(predicted.size()));

    ErrorReport r;
    r.function_name = std::move(function_name);
    r.e_percent = relative_percent_error(a, s);
    r.mse = (actual - predicted).squaredNorm() / static_cast<double>(actual.size());
    r.n = test.size();
    r.seconds = seconds;
    return r;
}

void write_report_header(std::ostream& os) {
    os << "function,error_percent,seconds\n";
}

void write_report_row(std::ostream& os, const ErrorReport& report) {
    os << report.function_name << ',' << fmt::format("{:.10g}", report.e_percent) << ','
       << fmt::format("{:.3f}", report.seconds) << '\n';
}

}  // namespace nns
