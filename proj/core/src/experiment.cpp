#include "nns/experiment.hpp"

#include "nns/csv.hpp"
#include "nns/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace nns {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
        throw std::invalid_argument(fmt::format("{}: '{}' is not a number", key, s));
    }
    return v;
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument(fmt::format("{}: '{}' is not a non-negative integer", key, s));
    }
    return v;
}

std::vector<std::string> split_on(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    for (const auto& tok : split_on(text, ',')) {
        out.push_back(parse_real(key, tok));
    }
    return out;
}

std::vector<std::size_t> parse_arch(std::string_view text) {
    std::vector<std::size_t> sizes;
    for (const auto& tok : split_on(text, '-')) {
        sizes.push_back(static_cast<std::size_t>(parse_uint("arch", tok)));
    }
    if (sizes.size() < 2) {
        throw std::invalid_argument("arch: expected sizes like 2-10-1");
    }
    return sizes;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + format_real(v[i]);
    }
    return out;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key_in, std::string_view value_in) {
    const std::string key = trim(key_in);
    const std::string value = trim(value_in);
    const auto real = [&] { return parse_real(key, value); };
    const auto count = [&] { return static_cast<std::size_t>(parse_uint(key, value)); };

    if (key == "name") cfg.name = value;
    else if (key == "function") cfg.function = value;
    else if (key == "seed") { cfg.seed = parse_uint(key, value); cfg.seed_set = true; }
    else if (key == "reference") cfg.reference = value;
    else if (key == "out") cfg.out_dir = value;
    else if (key == "sampling") cfg.sampling = value;
    else if (key == "samples") cfg.samples = count();
    else if (key == "grid_points") cfg.grid_points = count();
    else if (key == "star_points") cfg.star_points = count();
    else if (key == "star_center") cfg.star_center = parse_list(key, value);
    else if (key == "knots") {
        cfg.knots.clear();
        for (const auto& axis : split_on(value, ';')) cfg.knots.push_back(parse_list(key, axis));
    }
    else if (key == "margin") cfg.margin = real();
    else if (key == "train_fraction") cfg.train_fraction = real();
    else if (key == "validation_fraction") cfg.validation_fraction = real();
    else if (key == "arch") cfg.arch = parse_arch(value);
    else if (key == "hidden_activation") cfg.hidden_activation = parse_activation(value);
    else if (key == "output_activation") cfg.output_activation = parse_activation(value);
    else if (key == "init") {
        if (value == "uniform") cfg.init.kind = UniformRange{};
        else if (value == "fan-in") cfg.init.kind = FanInScaled{};
        else throw std::invalid_argument("init: expected uniform or fan-in, got '" + value + "'");
    }
    else if (key == "init_lo" || key == "init_hi") {
        auto* u = std::get_if<UniformRange>(&cfg.init.kind);
        if (!u) throw std::invalid_argument(key + " requires init = uniform");
        (key == "init_lo" ? u->lo : u->hi) = real();
    }
    else if (key == "init_c") {
        auto* f = std::get_if<FanInScaled>(&cfg.init.kind);
        if (!f) throw std::invalid_argument("init_c requires init = fan-in");
        f->c = real();
    }
    else if (key == "trainer") {
        if (value == "lm") cfg.trainer = TrainerKind::lm;
        else if (value == "sgd") cfg.trainer = TrainerKind::sgd;
        else throw std::invalid_argument("trainer: expected lm or sgd, got '" + value + "'");
    }
    else if (key == "lm.mu0") cfg.lm.mu0 = real();
    else if (key == "lm.mu_inc") cfg.lm.mu_inc = real();
    else if (key == "lm.mu_dec") cfg.lm.mu_dec = real();
    else if (key == "lm.mu_max") cfg.lm.mu_max = real();
    else if (key == "lm.max_epochs") cfg.lm.max_epochs = count();
    else if (key == "lm.mse_goal") cfg.lm.mse_goal = real();
    else if (key == "lm.min_grad") cfg.lm.min_grad = real();
    else if (key == "lm.patience") cfg.lm.patience = count();
    else if (key == "sgd.learning_rate") cfg.sgd.learning_rate = real();
    else if (key == "sgd.max_epochs") cfg.sgd.max_epochs = count();
    else if (key == "sgd.mse_goal") cfg.sgd.mse_goal = real();
    else if (key == "general.a") cfg.general.a = real();
    else if (key == "general.b") cfg.general.b = real();
    else if (key == "general.c") cfg.general.c = real();
    else if (key == "general.lo") cfg.general_domain.lo = real();
    else if (key == "general.hi") cfg.general_domain.hi = real();
    else if (key == "device.k_prime") cfg.sweep.params.k_prime = real();
    else if (key == "device.width") cfg.sweep.params.width = real();
    else if (key == "device.length") cfg.sweep.params.length = real();
    else if (key == "device.v_th") cfg.sweep.params.v_th = real();
    else if (key == "device.lambda") cfg.sweep.params.lambda = real();
    else if (key == "device.v_gs") cfg.sweep.v_gs_values = parse_list(key, value);
    else if (key == "device.v_ds_lo") cfg.sweep.v_ds_lo = real();
    else if (key == "device.v_ds_hi") cfg.sweep.v_ds_hi = real();
    else if (key == "device.v_ds_steps") cfg.sweep.v_ds_steps = count();
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& is, std::string default_name) {
    ExperimentConfig cfg;
    cfg.name = std::move(default_name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(fmt::format("config line {}: expected key = value", line_no));
        }
        try {
            apply_setting(cfg, std::string_view(body).substr(0, eq), std::string_view(body).substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(fmt::format("config line {}: {}", line_no, e.what()));
        }
    }
    if (cfg.name.empty()) cfg.name = cfg.function;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_config(is, fs::path(path).stem().string());
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
    os << "name = " << cfg.name << '\n';
    os << "function = " << cfg.function << '\n';
    os << "seed = " << cfg.seed << '\n';
    if (!cfg.reference.empty()) os << "reference = " << cfg.reference << '\n';
    if (cfg.function == "mosfet") {
        const auto& p = cfg.sweep.params;
        os << "samples = " << cfg.samples << '\n';
        os << "device.k_prime = " << format_real(p.k_prime) << '\n';
        os << "device.width = " << format_real(p.width) << '\n';
        os << "device.length = " << format_real(p.length) << '\n';
        os << "device.v_th = " << format_real(p.v_th) << '\n';
        os << "device.lambda = " << format_real(p.lambda) << '\n';
        os << "device.v_gs = " << join(cfg.sweep.v_gs_values) << '\n';
        os << "device.v_ds_lo = " << format_real(cfg.sweep.v_ds_lo) << '\n';
        os << "device.v_ds_hi = " << format_real(cfg.sweep.v_ds_hi) << '\n';
        os << "device.v_ds_steps = " << cfg.sweep.v_ds_steps << '\n';
    } else {
        os << "sampling = " << cfg.sampling << '\n';
        os << "samples = " << cfg.samples << '\n';
        if (cfg.grid_points) os << "grid_points = " << cfg.grid_points << '\n';
        if (!cfg.knots.empty()) {
            os << "knots = ";
            for (std::size_t i = 0; i < cfg.knots.size(); ++i) os << (i ? ";" : "") << join(cfg.knots[i]);
            os << '\n';
        }
        if (!cfg.star_center.empty()) os << "star_center = " << join(cfg.star_center) << '\n';
        if (cfg.star_points) os << "star_points = " << cfg.star_points << '\n';
        os << "margin = " << format_real(cfg.margin) << '\n';
        if (cfg.function == "general") {
            os << "general.a = " << format_real(cfg.general.a) << '\n';
            os << "general.b = " << format_real(cfg.general.b) << '\n';
            os << "general.c = " << format_real(cfg.general.c) << '\n';
            os << "general.lo = " << format_real(cfg.general_domain.lo) << '\n';
            os << "general.hi = " << format_real(cfg.general_domain.hi) << '\n';
        }
    }
    os << "train_fraction = " << format_real(cfg.train_fraction) << '\n';
    os << "validation_fraction = " << format_real(cfg.validation_fraction) << '\n';
    os << "arch = ";
    for (std::size_t i = 0; i < cfg.arch.size(); ++i) os << (i ? "-" : "") << cfg.arch[i];
    os << '\n';
    os << "hidden_activation = " << to_string(cfg.hidden_activation) << '\n';
    os << "output_activation = " << to_string(cfg.output_activation) << '\n';
    if (const auto* u = std::get_if<UniformRange>(&cfg.init.kind)) {
        os << "init = uniform\ninit_lo = " << format_real(u->lo) << "\ninit_hi = " << format_real(u->hi) << '\n';
    } else {
        os << "init = fan-in\ninit_c = " << format_real(std::get<FanInScaled>(cfg.init.kind).c) << '\n';
    }
    if (cfg.trainer == TrainerKind::lm) {
        os << "trainer = lm\n";
        os << "lm.mu0 = " << format_real(cfg.lm.mu0) << '\n';
        os << "lm.mu_inc = " << format_real(cfg.lm.mu_inc) << '\n';
        os << "lm.mu_dec = " << format_real(cfg.lm.mu_dec) << '\n';
        os << "lm.mu_max = " << format_real(cfg.lm.mu_max) << '\n';
        os << "lm.max_epochs = " << cfg.lm.max_epochs << '\n';
        os << "lm.mse_goal = " << format_real(cfg.lm.mse_goal) << '\n';
        os << "lm.min_grad = " << format_real(cfg.lm.min_grad) << '\n';
        os << "lm.patience = " << cfg.lm.patience << '\n';
    } else {
        os << "trainer = sgd\n";
        os << "sgd.learning_rate = " << format_real(cfg.sgd.learning_rate) << '\n';
        os << "sgd.max_epochs = " << cfg.sgd.max_epochs << '\n';
        os << "sgd.mse_goal = " << format_real(cfg.sgd.mse_goal) << '\n';
    }
}

void ExperimentConfig::validate() const {
    if (!seed_set) {
        throw std::invalid_argument("config '" + name + "' has no seed");
    }
    if (function == "mosfet") {
        sweep.validate();
    } else {
        find_function(function, general, general_domain);
        (void)sampling_plan();
    }
    if (arch.size() < 2) throw std::invalid_argument("arch needs input and output sizes");
    if (arch.front() != 2) throw std::invalid_argument("arch must start with 2 inputs");
    if (arch.back() != 1) throw std::invalid_argument("arch must end with 1 output");
    if (trainer == TrainerKind::lm) lm.validate();
    else sgd.validate();
}

SamplingPlan ExperimentConfig::sampling_plan() const {
    SamplingPlan plan;
    plan.seed = stage_seeds(seed).sampling;
    plan.margin = margin;
    if (sampling == "random") plan.kind = RandomUniform{samples};
    else if (sampling == "grid") plan.kind = UniformGrid{grid_points};
    else if (sampling == "nonuniform") plan.kind = NonuniformGrid{knots};
    else if (sampling == "star") plan.kind = Star{star_center, star_points};
    else throw std::invalid_argument("sampling: expected random, grid, nonuniform or star, got '" + sampling + "'");
    return plan;
}

StageSeeds stage_seeds(std::uint64_t seed) {
    return {derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3), derive_seed(seed, 4)};
}

Dataset generate_dataset(const ExperimentConfig& cfg) {
    if (cfg.function == "mosfet") {
        return circuit_dataset(cfg.sweep, cfg.samples, stage_seeds(cfg.seed).sampling);
    }
    return domain_samples(find_function(cfg.function, cfg.general, cfg.general_domain), cfg.sampling_plan());
}

PreparedData prepare_data(const ExperimentConfig& cfg, const Dataset& ds) {
    auto shuffled = shuffle_paired(ds, stage_seeds(cfg.seed).shuffle);
    SplitDataset parts = split(shuffled.data, cfg.train_fraction, cfg.validation_fraction,
                               std::move(shuffled.permutation));
    ScaleParams scale = fit_scale(parts.train);
    Dataset train = apply_scale(scale, parts.train);
    std::optional<Dataset> validation;
    if (parts.validation) validation = apply_scale(scale, *parts.validation);
    return {std::move(parts), std::move(scale), std::move(train), std::move(validation)};
}

TrainResult train_model(const ExperimentConfig& cfg, const PreparedData& data) {
    InitStrategy init = cfg.init;
    init.seed = stage_seeds(cfg.seed).init;
    const Network net = init_network(make_topology(cfg.arch, cfg.hidden_activation, cfg.output_activation), init);
    if (cfg.trainer == TrainerKind::lm) {
        return train_lm(net, data.train, data.validation, cfg.lm);
    }
    SgdConfig sgd = cfg.sgd;
    sgd.seed = stage_seeds(cfg.seed).sgd;
    return train_sgd_online(net, data.train, sgd);
}

void write_curve_csv(std::ostream& os, const Dataset& test, const Eigen::MatrixXd& predicted) {
    const auto& x = test.inputs();
    const auto& y = test.targets();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a, 0) < x(b, 0); });

    for (Eigen::Index j = 0; j < x.cols(); ++j) os << 'x' << j + 1 << ',';
    if (y.cols() == 1) {
        os << "actual,predicted\n";
    } else {
        for (Eigen::Index j = 0; j < y.cols(); ++j) os << (j ? "," : "") << "actual" << j + 1 << ",predicted" << j + 1;
        os << '\n';
    }
    for (Eigen::Index i : order) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) os << format_real(x(i, j)) << ',';
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            os << (j ? "," : "") << format_real(y(i, j)) << ',' << format_real(predicted(i, j));
        }
        os << '\n';
    }
}

namespace {

// Tracks files written by a run so a failed run can be rolled back.
class OutputSet {
public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }

    void open_dir() {
        if (!fs::exists(dir_)) {
            fs::create_directories(dir_);
            created_dir_ = true;
        }
    }

    template <typename Writer>
    void write(const std::string& file, Writer&& writer) {
        const std::string path = (fs::path(dir_) / file).string();
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
        paths_.push_back(path);
        writer(os);
        if (!os) throw std::runtime_error("failed writing '" + path + "'");
    }

    void rollback() noexcept {
        std::error_code ec;
        for (const auto& p : paths_) fs::remove(p, ec);
        if (created_dir_) fs::remove(dir_, ec);
        paths_.clear();
    }

    const std::vector<std::string>& paths() const { return paths_; }

private:
    std::string dir_;
    bool created_dir_ = false;
    std::vector<std::string> paths_;
};

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ExperimentError&) {
        throw;
    } catch (const std::exception& e) {
        throw ExperimentError(name, e.what());
    }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    OutputSet out(cfg.out_dir);
    try {
        stage("config", [&] { cfg.validate(); });
        const Dataset ds = stage("generate", [&] { return generate_dataset(cfg); });
        const PreparedData data = stage("prepare", [&] { return prepare_data(cfg, ds); });
        TrainResult trained = stage("train", [&] { return train_model(cfg, data); });
        const double seconds = trained.history.wall_clock_seconds;
        ErrorReport report = stage("evaluate", [&] {
            return evaluate_surrogate(trained.network, data.scale, data.raw.test, cfg.name, seconds);
        });

        if (out.enabled()) {
            stage("write", [&] {
                out.open_dir();
                out.write("dataset.csv", [&](std::ostream& os) { write_dataset_csv(os, ds); });
                out.write("dataset.meta", [&](std::ostream& os) {
                    os << "provenance = " << ds.provenance() << '\n';
                    if (cfg.function != "mosfet") {
                        const auto f = find_function(cfg.function, cfg.general, cfg.general_domain);
                        const auto dom = sampled_domain(cfg.sampling_plan(), f.domain_vector());
                        os << "domain = ";
                        for (std::size_t i = 0; i < dom.size(); ++i) {
                            os << (i ? ";" : "") << format_real(dom[i].lo) << ',' << format_real(dom[i].hi);
                        }
                        os << '\n';
                        os << "sampling_seed = " << cfg.sampling_plan().seed << '\n';
                    }
                    write_config(os, cfg);
                });
                out.write("model.txt", [&](std::ostream& os) { write_network(os, trained.network); });
                out.write("scale.txt", [&](std::ostream& os) { write_scale(os, data.scale); });
                out.write("history.csv", [&](std::ostream& os) { write_history_csv(os, trained.history); });
                out.write("report.csv", [&](std::ostream& os) {
                    write_report_header(os);
                    write_report_row(os, report);
                });
                out.write("curve.csv", [&](std::ostream& os) {
                    write_curve_csv(os, data.raw.test, predict(trained.network, data.scale, data.raw.test.inputs()));
                });
            });
        }
        return {std::move(report), std::move(trained.history), out.paths()};
    } catch (...) {
        out.rollback();
        throw;
    }
}

std::vector<SuiteRow> run_suite(const std::vector<ExperimentConfig>& configs, const std::string& out_dir,
                                std::size_t jobs) {
    std::vector<SuiteRow> rows(configs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            ExperimentConfig cfg = configs[i];
            if (!out_dir.empty()) cfg.out_dir = (fs::path(out_dir) / cfg.name).string();
            rows[i].name = cfg.name;
            rows[i].reference = cfg.reference;
            try {
                rows[i].report = run_experiment(cfg).report;
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
        }
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, configs.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

void write_suite_table(std::ostream& os, const std::vector<SuiteRow>& rows) {
    write_report_header(os);
    for (const auto& row : rows) {
        if (row.report) {
            write_report_row(os, *row.report);
        } else {
            os << row.name << ",ERROR,\n";
        }
    }
}

std::vector<ExperimentConfig> load_config_bundle(const std::string& path) {
    std::vector<ExperimentConfig> out;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".cfg") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) out.push_back(load_config(f.string()));
    } else {
        out.push_back(load_config(path));
    }
    return out;
}

}  // namespace nns
