// nns: train and evaluate neural surrogates of benchmark functions and a
// square-law MOSFET model.

#include "nns/csv.hpp"
#include "nns/device.hpp"
#include "nns/experiment.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string function;
    std::string out;
    std::optional<std::size_t> samples;
    std::string arch;
    std::string trainer;
    std::vector<std::string> settings;
};

void add_common(CLI::App* app, CommonOptions& o, bool with_config = true) {
    if (with_config) app->add_option("--config", o.config, "Key-value config file");
    app->add_option("--seed", o.seed, "Master seed");
    app->add_option("--function", o.function, "general|bohachevsky1|bohachevsky2|beale|booth|easom|hump|mosfet");
    app->add_option("--out", o.out, "Output directory");
    app->add_option("--samples", o.samples, "Number of samples");
    app->add_option("--arch", o.arch, "Layer sizes, e.g. 2-10-10-1");
    app->add_option("--trainer", o.trainer, "lm|sgd")->check(CLI::IsMember({"lm", "sgd"}));
    app->add_option("--set", o.settings, "Extra config setting key=value (repeatable)");
}

void apply_overrides(nns::ExperimentConfig& cfg, const CommonOptions& o) {
    if (o.seed) {
        cfg.seed = *o.seed;
        cfg.seed_set = true;
    }
    if (!o.function.empty()) {
        cfg.function = o.function;
        if (o.config.empty()) cfg.name = o.function;
    }
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.samples) cfg.samples = *o.samples;
    if (!o.arch.empty()) nns::apply_setting(cfg, "arch", o.arch);
    if (!o.trainer.empty()) nns::apply_setting(cfg, "trainer", o.trainer);
    for (const auto& kv : o.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        nns::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (cfg.name.empty()) cfg.name = cfg.function;
}

nns::ExperimentConfig build_config(const CommonOptions& o) {
    nns::ExperimentConfig cfg = o.config.empty() ? nns::ExperimentConfig{} : nns::load_config(o.config);
    apply_overrides(cfg, o);
    return cfg;
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

std::string in_dir(const std::string& dir, const std::string& file) {
    return (fs::path(dir.empty() ? "." : dir) / file).string();
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    writer(os);
}

void print_report(const nns::ErrorReport& r) {
    nns::write_report_header(std::cout);
    nns::write_report_row(std::cout, r);
    std::cout << fmt::format("# mse={:.6g} n={}\n", r.mse, r.n);
}

int cmd_gen_data(const CommonOptions& o) {
    auto cfg = build_config(o);
    cfg.validate();
    const auto ds = nns::generate_dataset(cfg);
    ensure_dir(cfg.out_dir);
    nns::save_dataset_csv(in_dir(cfg.out_dir, "dataset.csv"), ds);
    write_file(in_dir(cfg.out_dir, "dataset.meta"), [&](std::ostream& os) {
        os << "provenance = " << ds.provenance() << '\n';
        nns::write_config(os, cfg);
    });
    std::cout << fmt::format("wrote {} samples to {}\n", ds.size(), in_dir(cfg.out_dir, "dataset.csv"));
    return 0;
}

int cmd_train(const CommonOptions& o, const std::string& data_path) {
    auto cfg = build_config(o);
    cfg.validate();
    const nns::Dataset ds = data_path.empty() ? nns::generate_dataset(cfg) : nns::load_dataset_csv(data_path);
    const auto data = nns::prepare_data(cfg, ds);
    const auto trained = nns::train_model(cfg, data);
    ensure_dir(cfg.out_dir);
    nns::save_network(in_dir(cfg.out_dir, "model.txt"), trained.network);
    nns::save_scale(in_dir(cfg.out_dir, "scale.txt"), data.scale);
    nns::save_dataset_csv(in_dir(cfg.out_dir, "train.csv"), data.raw.train);
    nns::save_dataset_csv(in_dir(cfg.out_dir, "test.csv"), data.raw.test);
    write_file(in_dir(cfg.out_dir, "history.csv"),
               [&](std::ostream& os) { nns::write_history_csv(os, trained.history); });
    const auto& last = trained.history.epochs.back();
    std::cout << fmt::format("epochs={} train_mse={:.6g} stop={} seconds={:.3f}\n", last.epoch, last.train_mse,
                             nns::to_string(trained.history.stop_reason), trained.history.wall_clock_seconds);
    return 0;
}

int cmd_eval(const std::string& model, const std::string& scale, const std::string& data, const std::string& name,
             const std::string& out) {
    const auto net = nns::load_network(model);
    const auto sp = nns::load_scale(scale);
    const auto test = nns::load_dataset_csv(data);
    const auto report = nns::evaluate_surrogate(net, sp, test, name);
    print_report(report);
    if (!out.empty()) {
        ensure_dir(out);
        write_file(in_dir(out, "report.csv"), [&](std::ostream& os) {
            nns::write_report_header(os);
            nns::write_report_row(os, report);
        });
        write_file(in_dir(out, "curve.csv"), [&](std::ostream& os) {
            nns::write_curve_csv(os, test, nns::predict(net, sp, test.inputs()));
        });
    }
    return 0;
}

int cmd_run(const CommonOptions& o) {
    const auto cfg = build_config(o);
    const auto result = nns::run_experiment(cfg);
    print_report(result.report);
    std::cout << fmt::format("# stop={} epochs={}\n", nns::to_string(result.history.stop_reason),
                             result.history.epochs.back().epoch);
    return 0;
}

int cmd_suite(const CommonOptions& o, std::size_t jobs) {
    const std::string bundle = o.config.empty() ? std::string("configs") : o.config;
    auto configs = nns::load_config_bundle(bundle);
    for (auto& cfg : configs) {
        CommonOptions per = o;
        per.out.clear();
        per.function.clear();
        apply_overrides(cfg, per);
    }
    const auto rows = nns::run_suite(configs, o.out, jobs);

    std::cout << fmt::format("{:<28} {:>14} {:>12} {:>14}\n", "function", "error_percent", "seconds", "reference");
    for (const auto& row : rows) {
        if (row.report) {
            std::cout << fmt::format("{:<28} {:>13.5g}% {:>12.3f} {:>14}\n", row.name, row.report->e_percent,
                                     row.report->seconds, row.reference);
        } else {
            std::cout << fmt::format("{:<28} {:>14} {:>12} {:>14}\n", row.name, "ERROR", "", row.reference);
            std::cerr << row.name << ": " << row.error << '\n';
        }
    }
    if (!o.out.empty()) {
        ensure_dir(o.out);
        write_file(in_dir(o.out, "table.csv"), [&](std::ostream& os) { nns::write_suite_table(os, rows); });
    }
    for (const auto& row : rows) {
        if (!row.report) return 1;
    }
    return 0;
}

int cmd_sweep(const CommonOptions& o) {
    auto cfg = build_config(o);
    const auto rows = nns::iv_sweep(cfg.sweep);
    if (cfg.out_dir.empty()) {
        nns::write_sweep_csv(std::cout, rows);
    } else {
        ensure_dir(cfg.out_dir);
        const auto path = in_dir(cfg.out_dir, "iv_sweep.csv");
        write_file(path, [&](std::ostream& os) { nns::write_sweep_csv(os, rows); });
        std::cout << fmt::format("wrote {} rows to {}\n", rows.size(), path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural surrogate modeling with Levenberg-Marquardt training"};
    app.require_subcommand(1);

    CommonOptions gen_opts;
    auto* gen = app.add_subcommand("gen-data", "Generate a dataset");
    add_common(gen, gen_opts);

    CommonOptions train_opts;
    std::string train_data;
    auto* train = app.add_subcommand("train", "Shuffle, split, scale and train; write model and history");
    add_common(train, train_opts);
    train->add_option("--data", train_data, "Dataset CSV to train on instead of generating one");

    std::string eval_model;
    std::string eval_scale;
    std::string eval_data;
    std::string eval_name = "surrogate";
    std::string eval_out;
    auto* eval = app.add_subcommand("eval", "Evaluate a trained model on a dataset CSV");
    eval->add_option("--model", eval_model, "Model file")->required();
    eval->add_option("--scale", eval_scale, "Scale file")->required();
    eval->add_option("--data", eval_data, "Test dataset CSV")->required();
    eval->add_option("--name", eval_name, "Function label for the report row");
    eval->add_option("--out", eval_out, "Output directory for report.csv and curve.csv");

    CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "Full pipeline for one config");
    add_common(run, run_opts);

    CommonOptions suite_opts;
    std::size_t jobs = 1;
    auto* suite = app.add_subcommand("suite", "Run a config bundle and print the error/time table");
    add_common(suite, suite_opts);
    suite->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

    CommonOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep-iv", "Write the MOSFET I-V sweep table");
    add_common(sweep, sweep_opts);

    CLI11_PARSE(app, argc, argv);

    std::string stage = "cli";
    try {
        if (*gen) {
            stage = "gen-data";
            return cmd_gen_data(gen_opts);
        }
        if (*train) {
            stage = "train";
            return cmd_train(train_opts, train_data);
        }
        if (*eval) {
            stage = "eval";
            return cmd_eval(eval_model, eval_scale, eval_data, eval_name, eval_out);
        }
        if (*run) {
            stage = "run";
            return cmd_run(run_opts);
        }
        if (*suite) {
            stage = "suite";
            return cmd_suite(suite_opts, jobs);
        }
        if (*sweep) {
            stage = "sweep-iv";
            return cmd_sweep(sweep_opts);
        }
    } catch (const nns::ExperimentError& e) {
        std::cerr << "nns " << stage << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "nns " << stage << ": [" << stage << "] " << e.what() << '\n';
        return 1;
    }
    return 0;
}
