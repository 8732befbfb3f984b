#include "nns/pipeline.hpp"

#include "nns/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nns {

namespace {

// k evenly spaced points over [lo, hi]; a single point sits at the midpoint.
std::vector<double> linspace(const Interval& iv, std::size_t k) {
    if (k == 1) {
        return {iv.lo + 0.5 * (iv.hi - iv.lo)};
    }
    std::vector<double> pts(k);
    for (std::size_t j = 0; j < k; ++j) {
        pts[j] = iv.lo + (iv.hi - iv.lo) * (static_cast<double>(j) / static_cast<double>(k - 1));
    }
    pts.back() = iv.hi;
    return pts;
}

Eigen::MatrixXd cartesian(const std::vector<std::vector<double>>& axes) {
    std::size_t total = 1;
    for (const auto& a : axes) {
        total *= a.size();
    }
    const auto dims = static_cast<Eigen::Index>(axes.size());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(total), dims);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t row = 0; row < total; ++row) {
        for (Eigen::Index d = 0; d < dims; ++d) {
            out(static_cast<Eigen::Index>(row), d) = axes[static_cast<std::size_t>(d)][idx[static_cast<std::size_t>(d)]];
        }
        for (std::size_t d = axes.size(); d-- > 0;) {
            if (++idx[d] < axes[d].size()) {
                break;
            }
            idx[d] = 0;
        }
    }
    return out;
}

void require_count(std::size_t n, const char* what) {
    if (n == 0) {
        throw std::invalid_argument(std::string(what) + " must be at least 1");
    }
}

}  // namespace

Domain sampled_domain(const SamplingPlan& plan, const Domain& domain) {
    if (!(plan.margin >= 0.0)) {
        throw std::invalid_argument("sampling margin must be non-negative");
    }
    Domain out = domain;
    for (auto& iv : out) {
        const double pad = plan.margin * (iv.hi - iv.lo);
        iv.lo -= pad;
        iv.hi += pad;
    }
    return out;
}

Eigen::MatrixXd generate(const SamplingPlan& plan, const Domain& domain_in) {
    if (domain_in.empty()) {
        throw std::invalid_argument("sampling domain has no axes");
    }
    for (const auto& iv : domain_in) {
        if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            throw std::invalid_argument("sampling domain interval is empty or non-finite");
        }
    }
    const Domain domain = sampled_domain(plan, domain_in);
    const std::size_t dims = domain.size();

    if (const auto* g = std::get_if<UniformGrid>(&plan.kind)) {
        require_count(g->points_per_axis, "grid points per axis");
        std::vector<std::vector<double>> axes;
        for (const auto& iv : domain) {
            axes.push_back(linspace(iv, g->points_per_axis));
        }
        return cartesian(axes);
    }
    if (const auto* g = std::get_if<NonuniformGrid>(&plan.kind)) {
        if (g->knots.size() != dims) {
            throw std::invalid_argument("non-uniform grid has " + std::to_string(g->knots.size()) +
                                        " axes, domain has " + std::to_string(dims));
        }
        for (const auto& axis : g->knots) {
            require_count(axis.size(), "knots per axis");
            for (std::size_t j = 1; j < axis.size(); ++j) {
                if (!(axis[j - 1] < axis[j])) {
                    throw std::invalid_argument("grid knots must be strictly increasing");
                }
            }
        }
        return cartesian(g->knots);
    }
    if (const auto* r = std::get_if<RandomUniform>(&plan.kind)) {
        require_count(r->count, "random sample count");
        Rng rng(plan.seed);
        Eigen::MatrixXd out(static_cast<Eigen::Index>(r->count), static_cast<Eigen::Index>(dims));
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (std::size_t d = 0; d < dims; ++d) {
                out(i, static_cast<Eigen::Index>(d)) = rng.uniform(domain[d].lo, domain[d].hi);
            }
        }
        return out;
    }
    const auto& s = std::get<Star>(plan.kind);
    require_count(s.points_per_axis, "star points per axis");
    if (s.center.size() != dims) {
        throw std::invalid_argument("star center has " + std::to_string(s.center.size()) +
                                    " coordinates, domain has " + std::to_string(dims));
    }
    for (std::size_t d = 0; d < dims; ++d) {
        if (!domain[d].contains(s.center[d])) {
            throw std::invalid_argument("star center lies outside the domain");
        }
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(dims * s.points_per_axis + 1);
    Eigen::MatrixXd out(rows, static_cast<Eigen::Index>(dims));
    for (std::size_t d = 0; d < dims; ++d) {
        out(0, static_cast<Eigen::Index>(d)) = s.center[d];
    }
    Eigen::Index row = 1;
    for (std::size_t axis = 0; axis < dims; ++axis) {
        for (double v : linspace(domain[axis], s.points_per_axis)) {
            for (std::size_t d = 0; d < dims; ++d) {
                out(row, static_cast<Eigen::Index>(d)) = d == axis ? v : s.center[d];
            }
            ++row;
        }
    }
    return out;
}

Dataset::Dataset(Eigen::MatrixXd inputs, Eigen::MatrixXd targets, std::string provenance)
    : inputs_(std::move(inputs)), targets_(std::move(targets)), provenance_(std::move(provenance)) {
    if (inputs_.rows() != targets_.rows()) {
        throw std::invalid_argument("dataset has " + std::to_string(inputs_.rows()) + " input rows but " +
                                    std::to_string(targets_.rows()) + " target rows");
    }
    if (inputs_.rows() == 0) {
        throw std::invalid_argument("dataset is empty");
    }
    if (inputs_.cols() == 0 || targets_.cols() == 0) {
        throw std::invalid_argument("dataset needs at least one input and one target column");
    }
}

Dataset Dataset::select(std::span<const std::size_t> rows, std::string provenance) const {
    Eigen::MatrixXd in(static_cast<Eigen::Index>(rows.size()), inputs_.cols());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), targets_.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= size()) {
            throw std::out_of_range("dataset row " + std::to_string(rows[i]) + " out of range");
        }
        in.row(static_cast<Eigen::Index>(i)) = inputs_.row(static_cast<Eigen::Index>(rows[i]));
        out.row(static_cast<Eigen::Index>(i)) = targets_.row(static_cast<Eigen::Index>(rows[i]));
    }
    return Dataset(std::move(in), std::move(out), std::move(provenance));
}

Shuffled shuffle_paired(const Dataset& ds, std::uint64_t seed) {
    auto perm = random_permutation(ds.size(), seed);
    Dataset shuffled = ds.select(perm, ds.provenance());
    return {std::move(shuffled), std::move(perm)};
}

SplitDataset split(const Dataset& ds, double train_fraction, double validation_fraction,
                   std::vector<std::size_t> permutation) {
    if (!(train_fraction >= 0.0) || !(validation_fraction >= 0.0) ||
        train_fraction + validation_fraction > 1.0 + 1e-12) {
        throw std::invalid_argument("split fractions must be non-negative and sum to at most 1");
    }
    const std::size_t n = ds.size();
    if (permutation.empty()) {
        permutation.resize(n);
        std::iota(permutation.begin(), permutation.end(), std::size_t{0});
    } else if (permutation.size() != n) {
        throw std::invalid_argument("split permutation length does not match dataset size");
    }
    // The small slack keeps products like 0.7 * 10 = 7.000000000000001 or
    // 0.29 * 100 = 28.999999999999996 on the intended integer.
    const auto count = [n](double f) {
        return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
    };
    const std::size_t n_train = std::min(count(train_fraction), n);
    const std::size_t n_val = std::min(count(validation_fraction), n - n_train);
    const std::size_t n_test = n - n_train - n_val;
    if (n_train == 0) {
        throw std::invalid_argument("split leaves the training part empty (n = " + std::to_string(n) + ")");
    }
    if (n_test == 0) {
        throw std::invalid_argument("split leaves the test part empty (n = " + std::to_string(n) + ")");
    }
    if (validation_fraction > 0.0 && n_val == 0) {
        throw std::invalid_argument("split leaves the requested validation part empty");
    }

    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const std::span<const std::size_t> all(rows);
    const std::string& prov = ds.provenance();

    std::optional<Dataset> validation;
    if (n_val > 0) {
        validation = ds.select(all.subspan(n_train, n_val), prov + " [validation]");
    }
    return SplitDataset{ds.select(all.subspan(0, n_train), prov + " [train]"), std::move(validation),
                        ds.select(all.subspan(n_train + n_val, n_test), prov + " [test]"),
                        std::move(permutation)};
}

FeatureScale fit_feature_scale(const Eigen::MatrixXd& rows, const ScaleOptions& options) {
    if (!(options.lo < options.hi)) {
        throw std::invalid_argument("scale interval requires lo < hi");
    }
    if (rows.rows() == 0) {
        throw std::invalid_argument("cannot fit scaling on zero rows");
    }
    FeatureScale sp;
    sp.lo = options.lo;
    sp.hi = options.hi;
    sp.min = rows.colwise().minCoeff().transpose();
    sp.max = rows.colwise().maxCoeff().transpose();
    sp.constant.assign(static_cast<std::size_t>(rows.cols()), false);
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
        if (sp.min[j] == sp.max[j]) {
            if (!options.allow_constant) {
                throw std::domain_error("feature " + std::to_string(j) + " is constant (" +
                                        std::to_string(sp.min[j]) + ") in the training data");
            }
            sp.constant[static_cast<std::size_t>(j)] = true;
        }
    }
    return sp;
}

ScaleParams fit_scale(const Dataset& train, const ScaleOptions& options) {
    return {fit_feature_scale(train.inputs(), options), fit_feature_scale(train.targets(), options)};
}

namespace {

void check_features(const FeatureScale& sp, const Eigen::MatrixXd& rows) {
    if (static_cast<std::size_t>(rows.cols()) != sp.features()) {
        throw std::invalid_argument("scaling expects " + std::to_string(sp.features()) + " features, got " +
                                    std::to_string(rows.cols()));
    }
}

}  // namespace

Eigen::MatrixXd apply_scale(const FeatureScale& sp, const Eigen::MatrixXd& rows) {
    check_features(sp, rows);
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    const double mid = sp.lo + 0.5 * (sp.hi - sp.lo);
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
        const double lo = sp.min[j];
        const double range = sp.max[j] - lo;
        const bool constant = sp.constant.empty() ? range == 0.0 : sp.constant[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
            out(i, j) = constant ? mid : sp.lo + (sp.hi - sp.lo) * ((rows(i, j) - lo) / range);
        }
    }
    return out;
}

Eigen::MatrixXd invert_scale(const FeatureScale& sp, const Eigen::MatrixXd& rows) {
    check_features(sp, rows);
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
        const double lo = sp.min[j];
        const double range = sp.max[j] - lo;
        const bool constant = sp.constant.empty() ? range == 0.0 : sp.constant[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
            out(i, j) = constant ? lo : lo + ((rows(i, j) - sp.lo) / (sp.hi - sp.lo)) * range;
        }
    }
    return out;
}

Dataset apply_scale(const ScaleParams& sp, const Dataset& ds) {
    return Dataset(apply_scale(sp.inputs, ds.inputs()), apply_scale(sp.targets, ds.targets()),
                   ds.provenance() + " [scaled]");
}

}  // namespace nns
