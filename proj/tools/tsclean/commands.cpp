#include "commands.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "output.hpp"
#include "tsclean/anomaly.hpp"
#include "tsclean/arima.hpp"
#include "tsclean/correlogram.hpp"
#include "tsclean/errors.hpp"
#include "tsclean/model_io.hpp"
#include "tsclean/simulate.hpp"
#include "tsclean/sink.hpp"

namespace tscli {

using namespace tsclean;

namespace {

namespace fs = std::filesystem;

void echo_config(const RunConfig& c) {
    std::ostringstream out;
    out << "command " << c.command << "\n";
    out << "input " << c.input << "\n";
    out << "out_dir " << c.out_dir << "\n";
    if (c.node) out << "node " << *c.node << "\n";
    if (c.channel) out << "channel " << *c.channel << "\n";
    out << "level " << fmt(c.level) << "\n";
    out << "pmax " << c.p_max << "\n";
    out << "qmax " << c.q_max << "\n";
    out << "dmax " << c.d_max << "\n";
    out << "min_train " << c.min_train << "\n";
    out << "interval " << fmt(c.interval) << "\n";
    out << "tolerance " << fmt(c.tolerance) << "\n";
    out << "seed " << c.seed << "\n";
    out << "horizon " << c.horizon << "\n";
    out << "max_lag " << c.max_lag << "\n";
    out << "css_refine " << (c.css_refine ? 1 : 0) << "\n";
    out << "refit_drop_window " << (c.refit_drop_window ? 1 : 0) << "\n";
    for (const std::string& s : c.segments) out << "segment " << s << "\n";
    if (!c.model_path.empty()) out << "model " << c.model_path << "\n";
    if (c.command == "simulate") {
        out << "n " << c.sim_n << "\n";
        out << "nodes " << c.sim_nodes << "\n";
        out << "mean " << fmt(c.sim_mean) << "\n";
        out << "sigma2 " << fmt(c.sim_sigma2) << "\n";
        out << "burn_in " << c.burn_in << "\n";
        for (double v : c.sim_phi) out << "phi " << fmt(v) << "\n";
        for (double v : c.sim_theta) out << "theta " << fmt(v) << "\n";
        out << "spike_count " << c.spike_count << "\n";
        out << "spike_sigma " << fmt(c.spike_sigma) << "\n";
        out << "spike_after " << c.spike_after << "\n";
        out << "spike_gap " << c.spike_gap << "\n";
        out << "spike_node " << c.spike_node << "\n";
        for (std::size_t i : c.spike_at) out << "spike_at " << i << "\n";
        for (std::size_t i : c.missing_at) out << "missing_at " << i << "\n";
    }
    write_file_atomic(fs::path(c.out_dir) / "config.txt", out.str());
}

SelectionBounds bounds_of(const RunConfig& c) {
    SelectionBounds bounds;
    bounds.p_max = c.p_max;
    bounds.q_max = c.q_max;
    bounds.d_max = c.d_max;
    return bounds;
}

SelectionOptions selection_of(const RunConfig& c) {
    SelectionOptions options;
    options.min_train = c.min_train;
    options.css_refine = c.css_refine;
    return options;
}

ProcessOptions process_options_of(const RunConfig& c, bool substitute) {
    ProcessOptions options;
    options.level = c.level;
    options.substitute = substitute;
    options.refit_drop_window = c.refit_drop_window;
    options.bounds = bounds_of(c);
    options.selection = selection_of(c);
    return options;
}

// Picks the one (node, channel) group the single-series commands operate
// on; unambiguous defaults, explicit flags otherwise.
const ReadingGroup& pick_group(const IngestResult& batch, const RunConfig& c) {
    if (batch.groups.empty()) {
        throw DataError("input contains no readings");
    }
    std::vector<const ReadingGroup*> candidates;
    for (const ReadingGroup& g : batch.groups) {
        if (c.node && g.node_id != *c.node) continue;
        if (c.channel && g.channel != channel_from_string(*c.channel)) continue;
        candidates.push_back(&g);
    }
    if (candidates.empty()) {
        throw DataError("no readings match the requested node/channel");
    }
    if (candidates.size() > 1) {
        std::set<int> nodes;
        std::set<std::string> channels;
        for (const ReadingGroup* g : candidates) {
            nodes.insert(g->node_id);
            channels.insert(to_string(g->channel));
        }
        if (nodes.size() > 1) {
            throw DataError("input has " + std::to_string(nodes.size()) +
                            " nodes; disambiguate with --node");
        }
        throw DataError("node has multiple channels; disambiguate with --channel");
    }
    return *candidates.front();
}

struct LoadedSeries {
    TimeSeries series;
    std::size_t filled = 0;  // interior gaps closed by carry-forward
    int node_id = 0;
    Channel channel = Channel::temperature;
};

// Regularized, gap-filled series for fit/forecast/acf.
LoadedSeries load_series(const RunConfig& c) {
    IngestResult batch = ingest_file(c.input);
    const ReadingGroup& group = pick_group(batch, c);
    Regularized reg = regularize(group, c.interval, c.tolerance);

    LoadedSeries out;
    out.node_id = group.node_id;
    out.channel = group.channel;

    std::vector<double> values;
    values.reserve(reg.grid.slots.size());
    std::optional<double> seed;
    for (const auto& slot : reg.grid.slots) {
        if (slot.has_value()) {
            seed = slot;
            break;
        }
    }
    if (!seed.has_value()) {
        throw DataError("series contains no values after regularization");
    }
    double last = *seed;
    for (const auto& slot : reg.grid.slots) {
        if (slot.has_value()) {
            last = *slot;
        } else {
            ++out.filled;
        }
        values.push_back(last);
    }
    out.series = TimeSeries(std::move(values), reg.grid.interval, reg.grid.origin);
    return out;
}

std::vector<Segment> parse_segments(const RunConfig& c, std::size_t series_length) {
    std::vector<Segment> segments;
    std::size_t counter = 0;
    for (const std::string& text : c.segments) {
        Segment s;
        std::vector<std::string> parts;
        std::string current;
        for (char ch : text) {
            if (ch == ':') {
                parts.push_back(current);
                current.clear();
            } else {
                current.push_back(ch);
            }
        }
        parts.push_back(current);
        try {
            if (parts.size() == 2) {
                s.label = "seg" + std::to_string(counter++);
                s.start_index = std::stoul(parts[0]);
                s.end_index = std::stoul(parts[1]);
            } else if (parts.size() == 3) {
                s.label = parts[0];
                s.start_index = std::stoul(parts[1]);
                s.end_index = std::stoul(parts[2]);
            } else {
                throw std::invalid_argument(text);
            }
        } catch (const std::exception&) {
            throw DataError("bad --segment '" + text + "', expected LABEL:START:END");
        }
        segments.push_back(std::move(s));
    }
    if (segments.empty()) {
        segments.push_back({"", 0, series_length - 1});
    }
    return segments;
}

std::string suffixed(const std::string& stem, const std::string& label,
                     const std::string& extension) {
    return label.empty() ? stem + extension : stem + "_" + label + extension;
}

std::string correlogram_csv(const CorrelogramResult& r) {
    std::ostringstream out;
    out << "lag,coefficient,band\n";
    for (std::size_t k = 0; k <= r.max_lag; ++k) {
        out << k << "," << fmt(r.at(k)) << "," << fmt(r.band) << "\n";
    }
    return out.str();
}

std::string lag_plot_csv(const LagPlot& plot) {
    std::ostringstream out;
    out << "x,y\n";
    for (const auto& [x, y] : plot.pairs) {
        out << fmt(x) << "," << fmt(y) << "\n";
    }
    return out.str();
}

std::string decision_name(Decision d) {
    switch (d) {
        case Decision::accepted: return "accepted";
        case Decision::rejected: return "rejected";
        case Decision::substituted_missing: return "substituted_missing";
    }
    return "?";
}

std::size_t effective_max_lag(const RunConfig& c, std::size_t n) {
    return std::min(c.max_lag, n - 1);
}

}  // namespace

void cmd_fit(const RunConfig& config) {
    LoadedSeries loaded = load_series(config);
    std::vector<Segment> segments = parse_segments(config, loaded.series.size());
    std::vector<std::pair<std::string, TimeSeries>> pieces = segment(loaded.series, segments);

    for (const auto& [label, piece] : pieces) {
        ModelSelection sel = select_model(piece, bounds_of(config), selection_of(config));
        const ArimaModel& model = sel.model;

        const fs::path out_dir(config.out_dir);
        write_file_atomic(out_dir / suffixed("model", label, ".txt"), write_model(model));

        const std::size_t lags = effective_max_lag(config, piece.size());
        write_file_atomic(out_dir / suffixed("acf", label, ".csv"),
                          correlogram_csv(acf(piece.values, lags)));
        write_file_atomic(out_dir / suffixed("pacf", label, ".csv"),
                          correlogram_csv(pacf(piece.values, lags)));
        LagPlot plot = lag_plot_pairs(piece.values, 1);
        write_file_atomic(out_dir / suffixed("lagplot", label, ".csv"), lag_plot_csv(plot));

        StationarityReport stat = assess_stationarity(piece.values);
        std::ostringstream diag;
        diag << "node " << loaded.node_id << "\n";
        diag << "channel " << to_string(loaded.channel) << "\n";
        diag << "samples " << piece.size() << "\n";
        diag << "gaps_filled " << loaded.filled << "\n";
        diag << "stationary " << (stat.stationary ? 1 : 0) << "\n";
        if (stat.decay_lag) diag << "acf_decay_lag " << *stat.decay_lag << "\n";
        diag << "lag1_correlation " << fmt(plot.correlation) << "\n";
        diag << "selected_p " << model.p() << "\n";
        diag << "selected_d " << model.d() << "\n";
        diag << "selected_q " << model.q() << "\n";
        diag << "aic " << fmt(model.aic()) << "\n";
        diag << "sigma2 " << fmt(model.sigma2()) << "\n";
        diag << "residual_acf_inside_fraction " << fmt(sel.whiteness.inside_fraction) << "\n";
        diag << "residual_whiteness_pass " << (sel.whiteness.pass ? 1 : 0) << "\n";
        write_file_atomic(out_dir / suffixed("diagnostics", label, ".txt"), diag.str());

        std::cout << (label.empty() ? std::string("series") : label) << ": ARIMA(" << model.p()
                  << "," << model.d() << "," << model.q() << ") aic=" << fmt(model.aic())
                  << " sigma2=" << fmt(model.sigma2())
                  << (sel.whiteness.pass ? "" : " [residuals not white]") << "\n";
    }
    echo_config(config);
}

void cmd_forecast(const RunConfig& config) {
    LoadedSeries loaded = load_series(config);

    std::optional<ArimaModel> model;
    if (!config.model_path.empty()) {
        model = read_model_file(config.model_path);
    } else {
        model = select_model(loaded.series, bounds_of(config), selection_of(config)).model;
    }

    Forecast fc = forecast(*model, loaded.series, config.horizon);

    std::ostringstream out;
    out << "step,point,std_err,lower,upper\n";
    for (int k = 0; k < fc.horizon; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        ConfidenceInterval ci =
            confidence_interval(fc.points[i], fc.std_errors[i], config.level);
        out << (k + 1) << "," << fmt(fc.points[i]) << "," << fmt(fc.std_errors[i]) << ","
            << fmt(ci.lower) << "," << fmt(ci.upper) << "\n";
    }
    write_file_atomic(fs::path(config.out_dir) / "forecast.csv", out.str());
    echo_config(config);

    std::cout << "forecast: " << fc.horizon << " steps from ARIMA(" << model->p() << ","
              << model->d() << "," << model->q() << "), first point " << fmt(fc.points[0])
              << " +- " << fmt(fc.std_errors[0]) << "\n";
}

void cmd_acf(const RunConfig& config) {
    LoadedSeries loaded = load_series(config);
    const std::size_t lags = effective_max_lag(config, loaded.series.size());

    const fs::path out_dir(config.out_dir);
    CorrelogramResult a = acf(loaded.series.values, lags);
    write_file_atomic(out_dir / "acf.csv", correlogram_csv(a));
    write_file_atomic(out_dir / "pacf.csv", correlogram_csv(pacf(loaded.series.values, lags)));
    LagPlot plot = lag_plot_pairs(loaded.series.values, 1);
    write_file_atomic(out_dir / "lagplot.csv", lag_plot_csv(plot));

    StationarityReport stat = assess_stationarity(loaded.series.values);
    std::ostringstream report;
    report << "samples " << loaded.series.size() << "\n";
    report << "gaps_filled " << loaded.filled << "\n";
    report << "stationary " << (stat.stationary ? 1 : 0) << "\n";
    if (stat.decay_lag) report << "acf_decay_lag " << *stat.decay_lag << "\n";
    report << "threshold " << fmt(stat.threshold) << "\n";
    report << "inspected_lags " << stat.inspected_lags << "\n";
    report << "lag1_correlation " << fmt(plot.correlation) << "\n";
    write_file_atomic(out_dir / "stationarity.txt", report.str());
    echo_config(config);

    std::cout << "acf: " << loaded.series.size() << " samples, "
              << (stat.stationary ? "stationary" : "non-stationary") << ", lag-1 acf "
              << fmt(a.at(1)) << "\n";
}

void cmd_clean(const RunConfig& config, bool substitute) {
    IngestResult batch = ingest_file(config.input);
    if (config.node || config.channel) {
        std::vector<ReadingGroup> kept;
        for (ReadingGroup& g : batch.groups) {
            if (config.node && g.node_id != *config.node) continue;
            if (config.channel && g.channel != channel_from_string(*config.channel)) continue;
            kept.push_back(std::move(g));
        }
        batch.groups = std::move(kept);
    }

    NodeRegistry registry;
    registry.nominal_interval = config.interval;
    registry.snap_tolerance = config.tolerance;
    PipelineResult result = run_pipeline(registry, batch, process_options_of(config, substitute));

    std::ostringstream rows;
    rows << "node_id,timestamp,observed,decision,lower,upper,output_value,forecast_step,"
            "fault_flag\n";
    for (const NodeOutcome& outcome : result.outcomes) {
        for (const CleanRow& row : outcome.rows) {
            rows << outcome.node_id << "," << fmt(row.timestamp) << ","
                 << fmt(row.verdict.observed) << "," << decision_name(row.verdict.decision) << ","
                 << fmt(row.verdict.interval.lower) << "," << fmt(row.verdict.interval.upper)
                 << "," << fmt(row.output) << "," << row.verdict.forecast_step << ","
                 << (row.fault_flag ? 1 : 0) << "\n";
        }
    }
    const fs::path out_dir(config.out_dir);
    write_file_atomic(out_dir / "cleaned.csv", rows.str());

    std::ostringstream summary;
    for (const NodeOutcome& outcome : result.outcomes) {
        summary << "node " << outcome.node_id << " channel " << to_string(outcome.channel);
        switch (outcome.status) {
            case NodeStatus::untrained:
                summary << " untrained (" << outcome.message << ")\n";
                continue;
            case NodeStatus::failed:
                summary << " failed (" << outcome.message << ")\n";
                continue;
            case NodeStatus::processed:
                break;
        }
        std::size_t accepted = 0, rejected = 0, substituted = 0;
        for (const CleanRow& row : outcome.rows) {
            switch (row.verdict.decision) {
                case Decision::accepted: ++accepted; break;
                case Decision::rejected: ++rejected; break;
                case Decision::substituted_missing: ++substituted; break;
            }
        }
        const NodeStreamState& state =
            registry.states.at(NodeKey{outcome.node_id, outcome.channel});
        summary << " accepted " << accepted << " rejected " << rejected << " substituted "
                << substituted << " refits " << state.refit_count << " fault "
                << (state.fault_flagged ? 1 : 0) << " training_filled "
                << outcome.training_filled << "\n";

        write_file_atomic(out_dir / "models" /
                              ("node" + std::to_string(outcome.node_id) + "_" +
                               to_string(outcome.channel) + ".txt"),
                          write_model(*state.model));
    }
    if (!batch.report.duplicates.empty()) {
        summary << "duplicates_dropped " << batch.report.duplicates.size() << "\n";
    }
    write_file_atomic(out_dir / "summary.txt", summary.str());
    echo_config(config);
    std::cout << summary.str();
}

void cmd_simulate(const RunConfig& config) {
    ArmaProcessSpec spec;
    spec.phi = config.sim_phi;
    spec.theta = config.sim_theta;
    spec.mean = config.sim_mean;
    spec.sigma2 = config.sim_sigma2;
    spec.burn_in = config.burn_in;
    if (config.sim_nodes < 1) {
        throw InvalidProcessSpec("simulate: need at least one node");
    }
    if (config.sim_n < 2) {
        throw InvalidProcessSpec("simulate: need at least two samples");
    }

    std::ostringstream readings;
    readings << "node_id,timestamp,channel,value\n";
    std::ostringstream truth;
    truth << "node_id,index,timestamp,kind,clean_value,injected_value\n";

    const std::string channel_name = config.channel.value_or("temperature");
    channel_from_string(channel_name);  // validate

    std::size_t total_injected = 0;
    for (int node = 1; node <= config.sim_nodes; ++node) {
        const std::uint64_t node_seed =
            config.seed + static_cast<std::uint64_t>(node - 1) * 0x9e3779b97f4a7c15ULL;
        std::vector<double> values = simulate_arma(spec, config.sim_n, node_seed);

        std::vector<InjectedAnomaly> injected;
        if (node == config.spike_node) {
            std::vector<std::size_t> indices = config.spike_at;
            if (indices.empty() && config.spike_count > 0) {
                indices = pick_spike_indices(config.sim_n, config.spike_count,
                                             config.spike_after, config.spike_gap, config.seed);
            }
            injected = inject_spikes(values, indices, spec.sigma2, config.spike_sigma,
                                     config.seed);
            for (const InjectedAnomaly& a : injected) {
                truth << node << "," << a.index << "," << fmt(static_cast<double>(a.index) *
                                                              config.interval)
                      << ",spike," << fmt(a.clean_value) << "," << fmt(a.injected_value) << "\n";
            }
        }

        std::set<std::size_t> missing;
        if (node == config.spike_node) {
            for (std::size_t idx : config.missing_at) {
                if (idx >= config.sim_n) {
                    throw IndexOutOfBounds("simulate: --missing-at index " +
                                           std::to_string(idx) + " outside the series");
                }
                missing.insert(idx);
                truth << node << "," << idx << "," << fmt(static_cast<double>(idx) *
                                                          config.interval)
                      << ",missing," << fmt(values[idx]) << ",\n";
            }
        }
        total_injected += injected.size() + missing.size();

        for (std::size_t i = 0; i < config.sim_n; ++i) {
            readings << node << "," << fmt(static_cast<double>(i) * config.interval) << ","
                     << channel_name << ",";
            if (!missing.contains(i)) readings << fmt(values[i]);
            readings << "\n";
        }
    }

    const fs::path out_dir(config.out_dir);
    write_file_atomic(out_dir / "readings.csv", readings.str());
    write_file_atomic(out_dir / "truth.csv", truth.str());
    echo_config(config);

    std::cout << "simulate: " << config.sim_nodes << " node(s) x " << config.sim_n
              << " samples, " << total_injected << " injected anomalies -> "
              << (out_dir / "readings.csv").string() << "\n";
}

}  // namespace tscli
