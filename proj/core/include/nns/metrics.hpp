#pragma once

#include "nns/mlp.hpp"
#include "nns/pipeline.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace nns {

/// Mean absolute relative deviation in percent:
///   E = (1/n) * sum |(actual_i - simulated_i) / actual_i| * 100
/// Throws std::domain_error naming the first index whose actual value is 0.
double relative_percent_error(std::span<const double> actual, std::span<const double> simulated);

struct ErrorReport {
    std::string function_name;
    double e_percent = 0.0;
    double mse = 0.0;
    std::size_t n = 0;
    double seconds = 0.0;
};

/// Scales the test inputs, runs the network, descales its predictions and
/// compares them against the raw test targets.
ErrorReport evaluate_surrogate(const Network& net, const ScaleParams& sp, const Dataset& test,
                               std::string function_name = {}, double seconds = 0.0);

/// Descaled network predictions for raw inputs.
Eigen::MatrixXd predict(const Network& net, const ScaleParams& sp, const Eigen::MatrixXd& raw_inputs);

/// `function,error_percent,seconds`
void write_report_header(std::ostream& os);
void write_report_row(std::ostream& os, const ErrorReport& report);

}  // namespace nns
