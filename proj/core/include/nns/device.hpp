#pragma once

#include "nns/pipeline.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace nns {

/// Square-law MOSFET with channel-length modulation. SI units throughout.
struct MosfetParams {
    double k_prime = 2e-4;  ///< A/V^2
    double width = 10e-6;   ///< m
    double length = 1e-6;   ///< m
    double v_th = 0.7;      ///< V
    double lambda = 0.04;   ///< 1/V

    void validate() const;
};

struct BiasPoint {
    double v_gs = 0.0;
    double v_ds = 0.0;
};

/// I_D = K' (W / 2L) (V_GS - V_TH)^2 (1 + lambda V_DS), and 0 at or below
/// threshold.
double drain_current(const MosfetParams& p, BiasPoint b);

struct SweepSpec {
    std::vector<double> v_gs_values{0.0, 1.0, 2.0, 3.0};
    double v_ds_lo = 0.0;
    double v_ds_hi = 5.0;
    /// Number of V_DS points, endpoints included.
    std::size_t v_ds_steps = 51;
    MosfetParams params;

    void validate() const;
};

struct IvRow {
    double v_gs = 0.0;
    double v_ds = 0.0;
    double i_d = 0.0;
};

/// V_GS-major, V_DS ascending within each V_GS group.
std::vector<IvRow> iv_sweep(const SweepSpec& spec);

/// n distinct sweep rows in seeded random order; inputs (v_gs, v_ds),
/// target i_d.
Dataset circuit_dataset(const SweepSpec& spec, std::size_t n, std::uint64_t seed);

/// `v_gs,v_ds,i_d` with 12 significant digits.
void write_sweep_csv(std::ostream& os, const std::vector<IvRow>& rows);
std::vector<IvRow> read_sweep_csv(std::istream& is);

}  // namespace nns
