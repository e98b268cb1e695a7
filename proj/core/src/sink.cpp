#include "tsclean/sink.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <utility>

#include "tsclean/errors.hpp"

namespace tsclean {

std::string to_string(Channel c) {
    return c == Channel::temperature ? "temperature" : "light";
}

Channel channel_from_string(const std::string& s) {
    if (s == "temperature") return Channel::temperature;
    if (s == "light") return Channel::light;
    throw DataError("unknown channel: '" + s + "'");
}

namespace {

constexpr const char* kHeader = "node_id,timestamp,channel,value";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

}  // namespace

IngestResult ingest(std::istream& in) {
    IngestResult result;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        return result;  // completely empty input is an empty batch
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) {
        throw ParseError(line_no, "expected header '" + std::string(kHeader) + "'");
    }

    std::map<NodeKey, std::vector<SensorReading>> grouped;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++result.report.lines_read;

        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 4) {
            throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
        }

        SensorReading reading;
        try {
            std::size_t used = 0;
            reading.node_id = std::stoi(fields[0], &used);
            if (used != fields[0].size()) throw std::invalid_argument(fields[0]);
        } catch (const std::exception&) {
            throw ParseError(line_no, "bad node_id: '" + fields[0] + "'");
        }
        try {
            std::size_t used = 0;
            reading.timestamp = std::stod(fields[1], &used);
            if (used != fields[1].size() || !std::isfinite(reading.timestamp)) {
                throw std::invalid_argument(fields[1]);
            }
        } catch (const std::exception&) {
            throw ParseError(line_no, "bad timestamp: '" + fields[1] + "'");
        }
        try {
            reading.channel = channel_from_string(fields[2]);
        } catch (const DataError& e) {
            throw ParseError(line_no, e.what());
        }
        if (!fields[3].empty()) {
            try {
                std::size_t used = 0;
                const double v = std::stod(fields[3], &used);
                if (used != fields[3].size() || !std::isfinite(v)) {
                    throw std::invalid_argument(fields[3]);
                }
                reading.value = v;
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad value: '" + fields[3] + "'");
            }
        }

        grouped[{reading.node_id, reading.channel}].push_back(reading);
    }

    for (auto& [key, readings] : grouped) {
        std::stable_sort(readings.begin(), readings.end(),
                         [](const SensorReading& a, const SensorReading& b) {
                             return a.timestamp < b.timestamp;
                         });
        ReadingGroup group;
        group.node_id = key.first;
        group.channel = key.second;
        group.readings.reserve(readings.size());
        for (const SensorReading& r : readings) {
            // (node, channel, timestamp) must be unique; the first
            // occurrence wins and the rest are reported.
            if (!group.readings.empty() && group.readings.back().timestamp == r.timestamp) {
                result.report.duplicates.push_back(r);
                continue;
            }
            group.readings.push_back(r);
        }
        result.groups.push_back(std::move(group));
    }
    return result;
}

IngestResult ingest_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open input file: " + path.string());
    }
    return ingest(in);
}

std::size_t RegularGrid::missing_count() const {
    std::size_t count = 0;
    for (const auto& slot : slots) {
        if (!slot.has_value()) ++count;
    }
    return count;
}

Regularized regularize(const ReadingGroup& group, double interval, double tolerance) {
    if (group.readings.empty()) {
        throw EmptyGroup("regularize: node " + std::to_string(group.node_id) + "/" +
                         to_string(group.channel) + " has no readings");
    }
    if (!(interval > 0.0)) {
        throw DataError("regularize: interval must be positive");
    }
    if (!(tolerance >= 0.0 && tolerance < 0.5)) {
        throw DataError("regularize: tolerance must lie in [0, 0.5)");
    }

    Regularized out;
    out.grid.interval = interval;
    out.grid.origin = group.readings.front().timestamp;

    struct Snapped {
        std::size_t slot;
        double distance;
        const SensorReading* reading;
    };
    std::vector<Snapped> snapped;
    snapped.reserve(group.readings.size());
    std::size_t max_slot = 0;

    for (const SensorReading& r : group.readings) {
        const double offset = (r.timestamp - out.grid.origin) / interval;
        const double nearest = std::round(offset);
        const double distance = std::abs(offset - nearest) * interval;
        if (nearest < 0.0 || distance > tolerance * interval) {
            out.report.out_of_tolerance.push_back(r);
            continue;
        }
        const std::size_t slot = static_cast<std::size_t>(nearest);
        snapped.push_back({slot, distance, &r});
        max_slot = std::max(max_slot, slot);
    }

    if (snapped.empty()) {
        throw EmptyGroup("regularize: no reading within tolerance of the grid");
    }

    out.grid.slots.assign(max_slot + 1, std::nullopt);
    std::vector<const SensorReading*> holder(max_slot + 1, nullptr);
    std::vector<double> held_distance(max_slot + 1, 0.0);
    for (const Snapped& s : snapped) {
        if (holder[s.slot] == nullptr) {
            holder[s.slot] = s.reading;
            held_distance[s.slot] = s.distance;
            out.grid.slots[s.slot] = s.reading->value;
        } else if (s.distance < held_distance[s.slot]) {
            out.report.displaced.push_back(*holder[s.slot]);
            holder[s.slot] = s.reading;
            held_distance[s.slot] = s.distance;
            out.grid.slots[s.slot] = s.reading->value;
        } else {
            out.report.displaced.push_back(*s.reading);
        }
    }
    return out;
}

std::vector<std::pair<std::string, TimeSeries>> segment(const TimeSeries& series,
                                                        const std::vector<Segment>& segments) {
    for (const Segment& s : segments) {
        if (s.start_index > s.end_index || s.end_index >= series.size()) {
            throw IndexOutOfBounds("segment '" + s.label + "': range " +
                                   std::to_string(s.start_index) + ".." +
                                   std::to_string(s.end_index) + " outside series of length " +
                                   std::to_string(series.size()));
        }
    }
    std::vector<const Segment*> ordered;
    ordered.reserve(segments.size());
    for (const Segment& s : segments) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const Segment* a, const Segment* b) { return a->start_index < b->start_index; });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i]->start_index <= ordered[i - 1]->end_index) {
            throw OverlappingSegments("segments '" + ordered[i - 1]->label + "' and '" +
                                      ordered[i]->label + "' overlap");
        }
    }

    std::vector<std::pair<std::string, TimeSeries>> out;
    out.reserve(segments.size());
    for (const Segment& s : segments) {
        std::vector<double> values(series.values.begin() + static_cast<std::ptrdiff_t>(s.start_index),
                                   series.values.begin() + static_cast<std::ptrdiff_t>(s.end_index) + 1);
        out.emplace_back(s.label, TimeSeries(std::move(values), series.interval,
                                             series.time_at(s.start_index)));
    }
    return out;
}

PipelineResult run_pipeline(NodeRegistry& registry, const IngestResult& batch,
                            const ProcessOptions& options) {
    PipelineResult result;
    for (const ReadingGroup& group : batch.groups) {
        NodeOutcome outcome;
        outcome.node_id = group.node_id;
        outcome.channel = group.channel;
        const NodeKey key{group.node_id, group.channel};

        try {
            Regularized reg = regularize(group, registry.nominal_interval,
                                         registry.snap_tolerance);
            const std::vector<std::optional<double>>& slots = reg.grid.slots;

            auto state_it = registry.states.find(key);
            std::size_t start = 0;
            if (state_it == registry.states.end()) {
                const std::size_t min_train = options.selection.min_train;
                if (slots.size() <= min_train) {
                    outcome.status = NodeStatus::untrained;
                    outcome.message = "only " + std::to_string(slots.size()) +
                                      " regularized samples, need more than " +
                                      std::to_string(min_train);
                    result.outcomes.push_back(std::move(outcome));
                    continue;
                }

                // Training prefix; missing slots are carried forward (the
                // leading edge is back-filled) so the fit sees a complete
                // grid.
                std::optional<double> seed;
                for (std::size_t i = 0; i < min_train && !seed.has_value(); ++i) {
                    seed = slots[i];
                }
                if (!seed.has_value()) {
                    throw EmptyGroup("training prefix contains no values");
                }
                std::vector<double> train;
                train.reserve(min_train);
                double last = *seed;
                for (std::size_t i = 0; i < min_train; ++i) {
                    if (slots[i].has_value()) {
                        last = *slots[i];
                    } else {
                        ++outcome.training_filled;
                    }
                    train.push_back(last);
                }

                ModelSelection sel = select_model(
                    TimeSeries(train, reg.grid.interval, reg.grid.origin), options.bounds,
                    options.selection);

                NodeStreamState state;
                state.node_id = group.node_id;
                state.channel = group.channel;
                state.model = std::move(sel.model);
                state.history = std::move(train);
                state.origin = reg.grid.origin;
                state.interval = reg.grid.interval;
                state_it = registry.states.insert_or_assign(key, std::move(state)).first;
                start = options.selection.min_train;
            }

            NodeStreamState& state = state_it->second;
            outcome.rows.reserve(slots.size() - start);
            for (std::size_t i = start; i < slots.size(); ++i) {
                SensorReading slot_reading;
                slot_reading.node_id = group.node_id;
                slot_reading.channel = group.channel;
                slot_reading.timestamp = reg.grid.time_at(i);
                slot_reading.value = slots[i];

                Verdict verdict = process_reading(state, slot_reading, options);

                CleanRow row;
                row.timestamp = slot_reading.timestamp;
                row.verdict = verdict;
                row.fault_flag = state.fault_flagged;
                if (verdict.decision == Decision::accepted) {
                    row.output = verdict.observed;
                } else if (options.substitute) {
                    row.output = verdict.replacement;
                } else {
                    row.output = verdict.observed;  // empty for missing slots
                }
                outcome.rows.push_back(std::move(row));
            }
            outcome.status = NodeStatus::processed;
        } catch (const Error& e) {
            outcome.status = NodeStatus::failed;
            outcome.message = e.what();
        }
        result.outcomes.push_back(std::move(outcome));
    }
    return result;
}

}  // namespace tsclean
