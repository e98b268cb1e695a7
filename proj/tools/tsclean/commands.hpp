#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tscli {

/// Effective configuration of one CLI invocation. Flags override config-file
/// entries override these defaults; the resolved values are echoed to
/// <out-dir>/config.txt for reproducibility.
struct RunConfig {
    std::string command;
    std::string input;
    std::string out_dir = "out";
    std::optional<int> node;
    std::optional<std::string> channel;
    double level = 0.95;
    int p_max = 15;
    int q_max = 35;
    int d_max = 2;
    std::size_t min_train = 200;
    double interval = 2.0;
    double tolerance = 0.25;
    std::uint64_t seed = 42;
    int horizon = 5;
    std::size_t max_lag = 40;
    std::vector<std::string> segments;  // LABEL:START:END, END inclusive, 0-based
    std::string model_path;             // forecast: reuse a serialized model
    bool css_refine = false;
    bool refit_drop_window = false;

    // simulate
    std::vector<double> sim_phi;
    std::vector<double> sim_theta;
    double sim_mean = 0.0;
    double sim_sigma2 = 1.0;
    std::size_t sim_n = 1200;
    int sim_nodes = 1;
    std::size_t burn_in = 500;
    std::size_t spike_count = 0;
    double spike_sigma = 6.0;
    std::size_t spike_after = 210;
    std::size_t spike_gap = 6;
    int spike_node = 1;
    std::vector<std::size_t> spike_at;
    std::vector<std::size_t> missing_at;
};

void cmd_fit(const RunConfig& config);
void cmd_forecast(const RunConfig& config);
void cmd_acf(const RunConfig& config);
void cmd_clean(const RunConfig& config, bool substitute);  // substitute=false: detect
void cmd_simulate(const RunConfig& config);

}  // namespace tscli
