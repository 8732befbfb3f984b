#pragma once

#include "nns/benchfn.hpp"
#include "nns/device.hpp"
#include "nns/metrics.hpp"
#include "nns/mlp.hpp"
#include "nns/pipeline.hpp"
#include "nns/trainer.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nns {

enum class TrainerKind { lm, sgd };

/// One surrogate-modeling run. `function` is a benchmark registry name or
/// "mosfet" for the device sweep.
struct ExperimentConfig {
    std::string name;
    std::string function = "booth";
    std::uint64_t seed = 0;
    bool seed_set = false;

    GeneralFunctionParams general;
    Interval general_domain{-5.0, 5.0};
    SweepSpec sweep;

    /// random | grid | nonuniform | star (benchmark functions only).
    std::string sampling = "random";
    /// Random point count, or rows drawn from the device sweep.
    std::size_t samples = 500;
    std::size_t grid_points = 0;
    std::vector<std::vector<double>> knots;
    std::vector<double> star_center;
    std::size_t star_points = 0;
    double margin = 0.0;

    double train_fraction = 0.8;
    double validation_fraction = 0.0;

    std::vector<std::size_t> arch{2, 10, 10, 1};
    Activation hidden_activation = Activation::tanh;
    Activation output_activation = Activation::linear;
    InitStrategy init;

    TrainerKind trainer = TrainerKind::lm;
    LmConfig lm;
    SgdConfig sgd;

    std::string out_dir;
    /// Free text carried into the suite table (e.g. a reference error).
    std::string reference;

    void validate() const;
    /// The sampling plan for benchmark functions, seeded from `seed`.
    SamplingPlan sampling_plan() const;
};

/// Applies one `key = value` setting; throws std::invalid_argument for
/// unknown keys or malformed values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat key-value text: `key = value` per line, '#' starts a comment.
ExperimentConfig parse_config(std::istream& is, std::string default_name = {});
ExperimentConfig load_config(const std::string& path);

/// Canonical key-value dump of every setting; parse_config reads it back.
void write_config(std::ostream& os, const ExperimentConfig& cfg);

/// Thrown by run_experiment; `stage()` names the step that failed.
class ExperimentError : public std::runtime_error {
public:
    ExperimentError(std::string stage, const std::string& cause)
        : std::runtime_error("[" + stage + "] " + cause), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

/// Seeds for each random stage, derived from the config's master seed.
struct StageSeeds {
    std::uint64_t sampling;
    std::uint64_t shuffle;
    std::uint64_t init;
    std::uint64_t sgd;
};
StageSeeds stage_seeds(std::uint64_t seed);

Dataset generate_dataset(const ExperimentConfig& cfg);

struct PreparedData {
    SplitDataset raw;
    ScaleParams scale;
    Dataset train;  ///< scaled
    std::optional<Dataset> validation;  ///< scaled
};

PreparedData prepare_data(const ExperimentConfig& cfg, const Dataset& ds);

TrainResult train_model(const ExperimentConfig& cfg, const PreparedData& data);

struct RunResult {
    ErrorReport report;
    TrainHistory history;
    std::vector<std::string> files;
};

/// generate -> shuffle -> split -> scale -> init -> train -> evaluate, then
/// writes dataset.csv, dataset.meta, model.txt, scale.txt, history.csv,
/// report.csv and curve.csv into cfg.out_dir (skipped when out_dir is
/// empty). On failure every file this call created is removed and an
/// ExperimentError is thrown.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Test rows sorted by the first input: `x1,...,xd,actual,predicted`.
void write_curve_csv(std::ostream& os, const Dataset& test, const Eigen::MatrixXd& predicted);

struct SuiteRow {
    std::string name;
    std::string reference;
    std::optional<ErrorReport> report;
    std::string error;  ///< set when the run failed
};

/// Runs every config (up to `jobs` at a time) and keeps rows in config
/// order. A failing config yields a row with `error` set; the others are
/// unaffected. Each config writes into out_dir/<name> when out_dir is set.
std::vector<SuiteRow> run_suite(const std::vector<ExperimentConfig>& configs, const std::string& out_dir,
                                std::size_t jobs = 1);

/// `function,error_percent,seconds`; failed rows carry ERROR and an empty
/// seconds field.
void write_suite_table(std::ostream& os, const std::vector<SuiteRow>& rows);

/// *.cfg files of a directory in lexical order, or the single file given.
std::vector<ExperimentConfig> load_config_bundle(const std::string& path);

}  // namespace nns
