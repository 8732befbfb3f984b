#pragma once

#include "nns/pipeline.hpp"

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace nns {

/// Coefficients of S = a x^2 + 2 b x y + c y^2.
struct GeneralFunctionParams {
    double a = 1.0;
    double b = 0.5;
    double c = 2.0;
};

double eval_general(const GeneralFunctionParams& p, double x, double y);
double eval_bohachevsky1(double x1, double x2);
/// The two cosine terms multiply.
double eval_bohachevsky2(double x1, double x2);
double eval_beale(double x1, double x2);
double eval_booth(double x1, double x2);
/// X1^2 + X2^2 - cos(18 X1) - cos(18 X2); registered as "easom".
double eval_easom_variant(double x1, double x2);
/// Six-hump style polynomial with the sextic coefficient 0.33.
double eval_hump(double x1, double x2);

struct BenchFunction {
    std::string name;
    std::array<Interval, 2> domain;
    std::function<double(double, double)> evaluate;

    Domain domain_vector() const { return {domain[0], domain[1]}; }
};

/// Names accepted by find_function, in registry order.
const std::vector<std::string>& function_names();

/// Throws std::invalid_argument for unknown names. `general` is the only
/// entry that reads `general_params` and `general_domain`.
BenchFunction find_function(std::string_view name, const GeneralFunctionParams& general_params = {},
                            Interval general_domain = {-5.0, 5.0});

/// Samples `plan` over the function's domain and evaluates every point.
Dataset domain_samples(const BenchFunction& f, const SamplingPlan& plan);

}  // namespace nns
