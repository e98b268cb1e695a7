#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "tsclean/errors.hpp"

namespace {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kNumericalError = 3;

void add_shared_options(CLI::App* cmd, tscli::RunConfig& config, bool needs_input) {
    CLI::Option* input = cmd->add_option("-i,--input", config.input, "Input readings CSV");
    if (needs_input) input->required();
    cmd->add_option("-o,--out-dir", config.out_dir, "Output directory")
        ->capture_default_str();
    cmd->add_option("--node", config.node, "Node id to operate on");
    cmd->add_option("--channel", config.channel, "Channel: temperature or light");
    cmd->add_option("--level", config.level, "Confidence level in (0,1)")
        ->capture_default_str();
    cmd->add_option("--pmax", config.p_max, "Largest AR order searched")->capture_default_str();
    cmd->add_option("--qmax", config.q_max, "Largest MA order searched")->capture_default_str();
    cmd->add_option("--dmax", config.d_max, "Largest differencing order")
        ->capture_default_str();
    cmd->add_option("--min-train", config.min_train, "Training samples required per node")
        ->capture_default_str();
    cmd->add_option("--interval", config.interval, "Sampling interval in seconds")
        ->capture_default_str();
    cmd->add_option("--tolerance", config.tolerance,
                    "Grid snap tolerance as a fraction of the interval")
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "Random seed (simulate)")->capture_default_str();
    cmd->add_option("--horizon", config.horizon, "Forecast steps, at most 25")
        ->capture_default_str();
    cmd->set_config("--config", "", "Read defaults from a config file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "tsclean - ARIMA-based cleaning of per-node sensor streams.\n"
        "Fits per-node models, forecasts, and repairs readings that fall\n"
        "outside the forecast confidence interval."};
    app.require_subcommand(1);

    tscli::RunConfig config;

    CLI::App* fit = app.add_subcommand(
        "fit", "Select and fit a model; emit model, ACF/PACF and lag-plot tables");
    add_shared_options(fit, config, true);
    fit->add_option("--max-lag", config.max_lag, "Largest lag in the emitted correlograms")
        ->capture_default_str();
    fit->add_option("--segment", config.segments,
                    "Restrict to LABEL:START:END (inclusive, 0-based); repeatable");
    fit->add_flag("--css-refine", config.css_refine,
                  "Polish coefficients by conditional least squares");

    CLI::App* forecast_cmd =
        app.add_subcommand("forecast", "Forecast h steps with standard errors and bounds");
    add_shared_options(forecast_cmd, config, true);
    forecast_cmd->add_option("--model", config.model_path,
                             "Serialized model document to reuse instead of fitting");
    forecast_cmd->add_flag("--css-refine", config.css_refine,
                           "Polish coefficients by conditional least squares");

    CLI::App* acf_cmd =
        app.add_subcommand("acf", "Emit ACF/PACF/lag-plot tables and a stationarity report");
    add_shared_options(acf_cmd, config, true);
    acf_cmd->add_option("--max-lag", config.max_lag, "Largest lag in the emitted correlograms")
        ->capture_default_str();

    CLI::App* clean = app.add_subcommand(
        "clean", "Detect anomalies and substitute forecast values into the stream");
    add_shared_options(clean, config, true);
    clean->add_flag("--css-refine", config.css_refine,
                    "Polish coefficients by conditional least squares");
    clean->add_flag("--refit-drop-window", config.refit_drop_window,
                    "Refit on history without the substituted anomaly run");

    CLI::App* detect = app.add_subcommand(
        "detect", "Like clean, but only flag anomalies; observed values pass through");
    add_shared_options(detect, config, true);
    detect->add_flag("--css-refine", config.css_refine,
                     "Polish coefficients by conditional least squares");
    detect->add_flag("--refit-drop-window", config.refit_drop_window,
                     "Refit on history without the anomaly run");

    CLI::App* simulate =
        app.add_subcommand("simulate", "Generate a synthetic reading stream with ground truth");
    add_shared_options(simulate, config, false);
    simulate->add_option("--n", config.sim_n, "Samples per node")->capture_default_str();
    simulate->add_option("--nodes", config.sim_nodes, "Number of nodes")->capture_default_str();
    simulate->add_option("--phi", config.sim_phi, "AR coefficients of the generator")->delimiter(',');
    simulate->add_option("--theta", config.sim_theta, "MA coefficients of the generator")->delimiter(',');
    simulate->add_option("--mean", config.sim_mean, "Process mean")->capture_default_str();
    simulate->add_option("--sigma2", config.sim_sigma2, "Innovation variance")
        ->capture_default_str();
    simulate->add_option("--burn-in", config.burn_in, "Samples discarded before recording")
        ->capture_default_str();
    simulate->add_option("--spike-count", config.spike_count,
                         "Number of spikes drawn at seeded random positions");
    simulate->add_option("--spike-sigma", config.spike_sigma,
                         "Spike magnitude in innovation standard deviations")
        ->capture_default_str();
    simulate->add_option("--spike-after", config.spike_after,
                         "First index eligible for drawn spikes")
        ->capture_default_str();
    simulate->add_option("--spike-gap", config.spike_gap, "Minimum distance between drawn spikes")
        ->capture_default_str();
    simulate->add_option("--spike-node", config.spike_node, "Node that receives the anomalies")
        ->capture_default_str();
    simulate->add_option("--spike-at", config.spike_at, "Explicit spike indices; repeatable")->delimiter(',');
    simulate->add_option("--missing-at", config.missing_at,
                         "Indices emitted as empty readings; repeatable")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (app.got_subcommand(fit)) {
            config.command = "fit";
            tscli::cmd_fit(config);
        } else if (app.got_subcommand(forecast_cmd)) {
            config.command = "forecast";
            tscli::cmd_forecast(config);
        } else if (app.got_subcommand(acf_cmd)) {
            config.command = "acf";
            tscli::cmd_acf(config);
        } else if (app.got_subcommand(clean)) {
            config.command = "clean";
            tscli::cmd_clean(config, true);
        } else if (app.got_subcommand(detect)) {
            config.command = "detect";
            tscli::cmd_clean(config, false);
        } else if (app.got_subcommand(simulate)) {
            config.command = "simulate";
            tscli::cmd_simulate(config);
        }
    } catch (const tsclean::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const tsclean::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kNumericalError;
    }
    return 0;
}
