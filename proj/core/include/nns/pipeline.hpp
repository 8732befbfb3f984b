#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nns {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool operator==(const Interval&) const = default;
};

using Domain = std::vector<Interval>;

struct UniformGrid {
    std::size_t points_per_axis = 0;
};

/// Explicit per-axis knots, each strictly increasing.
struct NonuniformGrid {
    std::vector<std::vector<double>> knots;
};

struct RandomUniform {
    std::size_t count = 0;
};

/// The center point, then for each axis `points_per_axis` evenly spaced
/// points along that axis with every other coordinate held at the center.
/// Always yields axes * points_per_axis + 1 rows.
struct Star {
    std::vector<double> center;
    std::size_t points_per_axis = 0;
};

struct SamplingPlan {
    std::variant<UniformGrid, NonuniformGrid, RandomUniform, Star> kind;
    std::uint64_t seed = 0;
    /// Fraction of each axis width added beyond both ends of the domain.
    double margin = 0.0;
};

/// The domain actually sampled by `plan`: each interval widened by margin * width.
Domain sampled_domain(const SamplingPlan& plan, const Domain& domain);

/// Rows are sample points, columns are axes. Grids are emitted with the last
/// axis varying fastest.
Eigen::MatrixXd generate(const SamplingPlan& plan, const Domain& domain);

/// Paired samples. Immutable once built; always holds at least one row.
class Dataset {
public:
    Dataset(Eigen::MatrixXd inputs, Eigen::MatrixXd targets, std::string provenance = {});

    const Eigen::MatrixXd& inputs() const { return inputs_; }
    const Eigen::MatrixXd& targets() const { return targets_; }
    const std::string& provenance() const { return provenance_; }

    std::size_t size() const { return static_cast<std::size_t>(inputs_.rows()); }
    std::size_t input_dim() const { return static_cast<std::size_t>(inputs_.cols()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(targets_.cols()); }

    /// New dataset made of the given rows, in the given order.
    Dataset select(std::span<const std::size_t> rows, std::string provenance) const;

private:
    Eigen::MatrixXd inputs_;
    Eigen::MatrixXd targets_;
    std::string provenance_;
};

struct Shuffled {
    Dataset data;
    /// permutation[i] is the index in the source dataset of row i.
    std::vector<std::size_t> permutation;
};

Shuffled shuffle_paired(const Dataset& ds, std::uint64_t seed);

struct SplitDataset {
    Dataset train;
    std::optional<Dataset> validation;
    Dataset test;
    /// Source index of every row of the split input, in order: the first
    /// train.size() entries belong to train, then validation, then test.
    std::vector<std::size_t> permutation;
};

/// Contiguous split: floor(n * train_fraction) rows to train,
/// floor(n * validation_fraction) to validation, the remainder to test.
/// `permutation` records how `ds` was obtained from its source (identity
/// when omitted). Throws std::invalid_argument when train or test would be
/// empty, or when a requested validation part would be empty.
SplitDataset split(const Dataset& ds, double train_fraction, double validation_fraction,
                   std::vector<std::size_t> permutation = {});

/// Per-feature min/max affine map onto [lo, hi].
struct FeatureScale {
    Eigen::VectorXd min;
    Eigen::VectorXd max;
    double lo = -1.0;
    double hi = 1.0;
    /// Features with min == max that were allowed through; they map to the
    /// interval midpoint and invert back to `min`.
    std::vector<bool> constant;

    std::size_t features() const { return static_cast<std::size_t>(min.size()); }
};

struct ScaleParams {
    FeatureScale inputs;
    FeatureScale targets;
};

struct ScaleOptions {
    double lo = -1.0;
    double hi = 1.0;
    bool allow_constant = false;
};

FeatureScale fit_feature_scale(const Eigen::MatrixXd& rows, const ScaleOptions& options = {});

/// Fitted on the training part only. A constant feature throws
/// std::domain_error unless options.allow_constant is set.
ScaleParams fit_scale(const Dataset& train, const ScaleOptions& options = {});

Eigen::MatrixXd apply_scale(const FeatureScale& sp, const Eigen::MatrixXd& rows);
Eigen::MatrixXd invert_scale(const FeatureScale& sp, const Eigen::MatrixXd& rows);

/// Scales both inputs and targets.
Dataset apply_scale(const ScaleParams& sp, const Dataset& ds);

}  // namespace nns
