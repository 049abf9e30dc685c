#pragma once
#include <limits>
#include <string>
#include <vector>

#include "llf/geometry.hpp"

namespace llf::cfg {

// Structured run configuration: INI-style sections with key = value lines,
// '#' comments, unknown keys rejected. parse(serialize(c)) is bit-identical.
struct RunConfig {
    // [metric]
    std::string metric_kind = "round-sphere"; // euclidean-plane | round-sphere |
                                              // hyperbolic-plane | s2-normalized | table
    std::string metric_table;                 // CSV path (columns r,h,h_prime) for kind=table
    // [grid]
    double grid_r_lo = 0.35;
    double grid_r_hi = 1.65;
    std::size_t grid_n = 4096;
    // [profile]
    std::string profile_b_list = "0.05,0.1,0.2";
    double profile_eta = 0.01;
    // [radiation]
    std::string radiation_b_list = "0.18,0.22,0.27,0.33";
    double radiation_eta = 0.01;
    // [evolution]
    double lambda0 = 2e-2;
    double r0 = 1.0;
    double gamma0 = 0.0;
    double b0 = 0.25;
    double alpha_star = 1e-2;
    bool strict_loglog = false;
    std::string eps0_kind = "gaussian"; // none | gaussian
    double eps0_width = 1.0;
    double eps0_amplitude = std::numeric_limits<double>::quiet_NaN(); // NaN = tune
    double c_dt = 0.01;
    double dt_max = 5e-4;
    double max_time = 1.0;
    std::size_t record_every = 5;
    std::size_t snapshot_every = 10;
    bool track_modulation = true;
    double lambda_floor_cells = 4.0;
    double grad_ceiling = 1e12;
    double sign = -1.0;
    double family_b_min = 0.1;
    double family_b_max = 0.42;
    double family_db = 0.005;
    // [diagnostics]
    double a_param = 0.3;
    double delta = 0.01;
    double slack_lo = 0.5;
    double slack_hi = 2.0;
    // [output]
    std::string out_dir = "out";
    unsigned seed = 1;
    bool binary_snapshots = false;
};

RunConfig parse(const std::string& text);
std::string serialize(const RunConfig& c);
RunConfig load_file(const std::string& path);

geom::SurfaceMetric metric_from(const RunConfig& c);
std::vector<double> parse_list(const std::string& csv);

// documented flat snapshot format: magic "RNLS", version u32, N u64, then
// little-endian doubles r[N], Re[N], Im[N]
void write_snapshot_bin(const std::string& path, const geom::RadialField& u);
geom::RadialField read_snapshot_bin(const std::string& path, const geom::SurfaceMetric& m);
void write_snapshot_csv(const std::string& path, double t, const geom::RadialField& u);

} // namespace llf::cfg
