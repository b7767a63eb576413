#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srb/surface_map.hpp"

namespace srb {

/// Experiment settings. Read from a `key = value` document; `#` starts a comment, lists are
/// comma separated and unknown keys are rejected.
struct ExperimentConfig {
    // model
    std::string model = "cat";
    std::vector<double> matrix{2.0, 1.0, 1.0, 1.0};
    double delta = 0.02;
    double kick = 1.2;

    // free constants
    int r = 8;
    double eta = 0.2;
    double gamma = 0.01;
    std::vector<double> alpha_grid{0.02, 0.05, 0.1};
    std::vector<int> L_grid{50, 100, 200};
    int N = 4;
    double eps_hat = 0.5;

    // schedules
    std::vector<int> schedule_k{1, 2, 3, 4};
    int n_min = 8;
    int n_max = 14;

    // curve selection; `curve = auto` picks the best of the transverse family, otherwise
    // `curve = u, v, theta, length` fixes a straight segment
    std::string curve = "auto";
    double curve_length = 0.25;
    int transverse_samples = 256;
    int transverse_horizon = 20;

    // sampling
    int param_grid = 1024;
    int pilot_horizon = 20;
    double pilot_quantile = 0.95;
    int dilation_n = 8;
    std::vector<int> dilation_grid{64, 64, 32};
    int phi_grid = 128;

    // decomposition
    int decompose_n = 20000;
    double stabilization_tol = 0.2;
    double cluster_delta = 0.05;
    int item_d_samples = 200;
    int item_d_horizon = 1000;
    int periodic_max_period = 2;
    int periodic_grid = 16;
    std::vector<int> cell_grid{16, 16, 8};

    // classification and counting
    int color_length = 0;       // 0: smallest integer above 1/gamma
    int classify_L = 0;         // 0: smallest integer above 2 color_length / gamma
    double filler_constant = -1.0;  // negative: log sup |Df-hat| from the dilation estimate
    int piece_grid = 33;
    int depth_cap = 60;

    // run
    double chain_tol = 0.05;
    std::uint64_t seed = 7;
    std::string out = "out";
    bool verify = false;

    double eps() const { return eps_hat * eps_hat / 10.0; }
    int resolved_color_length() const;
    int resolved_classify_L() const;

    /// Throws ConfigError on violated invariants (r >= 2, 0 < gamma < eta < 1, sorted grids, ...).
    void validate() const;
    SurfaceMap make_map() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Canonical `key = value` rendering; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& c);

}  // namespace srb
