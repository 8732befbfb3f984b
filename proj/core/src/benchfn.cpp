#include "nns/benchfn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nns {

using std::numbers::pi;

double eval_general(const GeneralFunctionParams& p, double x, double y) {
    return p.a * x * x + 2.0 * p.b * x * y + p.c * y * y;
}

double eval_bohachevsky1(double x1, double x2) {
    return x1 * x1 + 2.0 * x2 * x2 - 0.3 * std::cos(3.0 * pi * x1) - 0.4 * std::cos(4.0 * pi * x2) + 0.7;
}

double eval_bohachevsky2(double x1, double x2) {
    return x1 * x1 + 2.0 * x2 * x2 - 0.3 * std::cos(3.0 * pi * x1) * std::cos(4.0 * pi * x2) + 0.3;
}

double eval_beale(double x1, double x2) {
    const double t1 = 1.5 - x1 + x1 * x2;
    const double t2 = 2.25 - x1 + x1 * x2 * x2;
    const double t3 = 2.625 - x1 + x1 * x2 * x2 * x2;
    return t1 * t1 + t2 * t2 + t3 * t3;
}

double eval_booth(double x1, double x2) {
    const double t1 = x1 + 2.0 * x2 - 7.0;
    const double t2 = 2.0 * x1 + x2 - 5.0;
    return t1 * t1 + t2 * t2;
}

double eval_easom_variant(double x1, double x2) {
    return x1 * x1 + x2 * x2 - std::cos(18.0 * x1) - std::cos(18.0 * x2);
}

double eval_hump(double x1, double x2) {
    const double s1 = x1 * x1;
    const double s2 = x2 * x2;
    return 4.0 * s1 - 2.1 * s1 * s1 + 0.33 * s1 * s1 * s1 + x1 * x2 - 4.0 * s2 + 4.0 * s2 * s2;
}

const std::vector<std::string>& function_names() {
    static const std::vector<std::string> names{"general", "bohachevsky1", "bohachevsky2", "beale",
                                                "booth",   "easom",        "hump"};
    return names;
}

BenchFunction find_function(std::string_view name, const GeneralFunctionParams& general_params,
                            Interval general_domain) {
    const auto square = [](double lo, double hi) { return std::array<Interval, 2>{{{lo, hi}, {lo, hi}}}; };
    if (name == "general") {
        return {"general", {general_domain, general_domain},
                [general_params](double x, double y) { return eval_general(general_params, x, y); }};
    }
    if (name == "bohachevsky1") return {"bohachevsky1", square(-50.0, 100.0), eval_bohachevsky1};
    if (name == "bohachevsky2") return {"bohachevsky2", square(-50.0, 100.0), eval_bohachevsky2};
    if (name == "beale") return {"beale", square(-4.5, 4.5), eval_beale};
    if (name == "booth") return {"booth", square(-4.5, 4.5), eval_booth};
    if (name == "easom") return {"easom", square(-1.0, 1.0), eval_easom_variant};
    if (name == "hump") return {"hump", square(-5.0, 5.0), eval_hump};
    throw std::invalid_argument("unknown function '" + std::string(name) + "'");
}

Dataset domain_samples(const BenchFunction& f, const SamplingPlan& plan) {
    const Eigen::MatrixXd points = generate(plan, f.domain_vector());
    if (points.cols() != 2) {
        throw std::invalid_argument("sampling plan does not produce 2-D points");
    }
    Eigen::MatrixXd values(points.rows(), 1);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        values(i, 0) = f.evaluate(points(i, 0), points(i, 1));
    }
    return Dataset(points, std::move(values), f.name);
}

}  // namespace nns
