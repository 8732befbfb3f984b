#include "nns/device.hpp"

#include "nns/csv.hpp"
#include "nns/rng.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nns {

void MosfetParams::validate() const {
    if (!(k_prime > 0.0)) throw std::invalid_argument("mosfet: k_prime must be > 0");
    if (!(width > 0.0)) throw std::invalid_argument("mosfet: width must be > 0");
    if (!(length > 0.0)) throw std::invalid_argument("mosfet: length must be > 0");
    if (!std::isfinite(v_th)) throw std::invalid_argument("mosfet: v_th must be finite");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("mosfet: lambda must be >= 0");
}

double drain_current(const MosfetParams& p, BiasPoint b) {
    p.validate();
    if (!std::isfinite(b.v_gs) || !std::isfinite(b.v_ds)) {
        throw std::invalid_argument("drain_current: bias voltages must be finite");
    }
    if (b.v_gs <= p.v_th) {
        return 0.0;
    }
    const double overdrive = b.v_gs - p.v_th;
    return p.k_prime * (p.width / (2.0 * p.length)) * (overdrive * overdrive) * (1.0 + p.lambda * b.v_ds);
}

void SweepSpec::validate() const {
    params.validate();
    if (v_gs_values.empty()) throw std::invalid_argument("sweep: no V_GS values");
    if (v_ds_steps < 2) throw std::invalid_argument("sweep: V_DS needs at least 2 points");
    if (!(v_ds_lo < v_ds_hi)) throw std::invalid_argument("sweep: V_DS range requires lo < hi");
}

std::vector<IvRow> iv_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<IvRow> rows;
    rows.reserve(spec.v_gs_values.size() * spec.v_ds_steps);
    const double span = spec.v_ds_hi - spec.v_ds_lo;
    for (double v_gs : spec.v_gs_values) {
        for (std::size_t j = 0; j < spec.v_ds_steps; ++j) {
            const double v_ds = j + 1 == spec.v_ds_steps
                                    ? spec.v_ds_hi
                                    : spec.v_ds_lo + span * (static_cast<double>(j) /
                                                             static_cast<double>(spec.v_ds_steps - 1));
            rows.push_back({v_gs, v_ds, drain_current(spec.params, {v_gs, v_ds})});
        }
    }
    return rows;
}

Dataset circuit_dataset(const SweepSpec& spec, std::size_t n, std::uint64_t seed) {
    const auto table = iv_sweep(spec);
    if (n == 0) {
        throw std::invalid_argument("circuit_dataset: n must be at least 1");
    }
    if (n > table.size()) {
        throw std::invalid_argument("circuit_dataset: requested " + std::to_string(n) + " rows from a sweep of " +
                                    std::to_string(table.size()));
    }
    const auto perm = random_permutation(table.size(), seed);
    Eigen::MatrixXd inputs(static_cast<Eigen::Index>(n), 2);
    Eigen::MatrixXd targets(static_cast<Eigen::Index>(n), 1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = table[perm[i]];
        const auto r = static_cast<Eigen::Index>(i);
        inputs(r, 0) = row.v_gs;
        inputs(r, 1) = row.v_ds;
        targets(r, 0) = row.i_d;
    }
    return Dataset(std::move(inputs), std::move(targets), "mosfet-sweep");
}

void write_sweep_csv(std::ostream& os, const std::vector<IvRow>& rows) {
    os << "v_gs,v_ds,i_d\n";
    for (const auto& r : rows) {
        os << fmt::format("{:.12g},{:.12g},{:.12g}\n", r.v_gs, r.v_ds, r.i_d);
    }
}

std::vector<IvRow> read_sweep_csv(std::istream& is) {
    const CsvTable table = read_csv(is);
    if (table.header != std::vector<std::string>{"v_gs", "v_ds", "i_d"}) {
        throw std::runtime_error("sweep csv: expected header v_gs,v_ds,i_d");
    }
    std::vector<IvRow> rows;
    rows.reserve(table.rows.size());
    for (const auto& r : table.rows) {
        rows.push_back({r[0], r[1], r[2]});
    }
    return rows;
}

}  // namespace nns
