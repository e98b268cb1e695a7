#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsclean/anomaly.hpp"
#include "tsclean/reading.hpp"
#include "tsclean/timeseries.hpp"

namespace tsclean {

using NodeKey = std::pair<int, Channel>;

struct ReadingGroup {
    int node_id = 0;
    Channel channel = Channel::temperature;
    std::vector<SensorReading> readings;  // time-sorted
};

struct IngestReport {
    /// Readings dropped because an earlier line already occupied the same
    /// (node, channel, timestamp); the first occurrence wins.
    std::vector<SensorReading> duplicates;
    std::size_t lines_read = 0;
};

struct IngestResult {
    std::vector<ReadingGroup> groups;  // sorted by (node_id, channel)
    IngestReport report;
};

/// Parses the reading CSV contract (header `node_id,timestamp,channel,value`,
/// empty value = missing) and groups by (node, channel), time-sorted.
/// Throws ParseError with the offending line number. A fully empty stream
/// yields an empty result.
IngestResult ingest(std::istream& in);
IngestResult ingest_file(const std::filesystem::path& path);

/// Fixed-interval grid with explicit missing slots.
struct RegularGrid {
    double origin = 0.0;
    double interval = 1.0;
    std::vector<std::optional<double>> slots;

    double time_at(std::size_t i) const { return origin + static_cast<double>(i) * interval; }
    std::size_t missing_count() const;
};

struct RegularizeReport {
    std::vector<SensorReading> out_of_tolerance;  // no slot within tolerance
    std::vector<SensorReading> displaced;         // lost a slot to a nearer reading
};

struct Regularized {
    RegularGrid grid;
    RegularizeReport report;
};

/// Snaps time-sorted readings onto a grid anchored at the first timestamp.
/// A reading lands in the nearest slot when within tolerance * interval of
/// it; collisions keep the nearer reading and report the other; unmatched
/// slots stay missing. Every input reading is accounted for exactly once.
/// Throws EmptyGroup on no readings.
Regularized regularize(const ReadingGroup& group, double interval, double tolerance = 0.25);

/// Labeled index range on the regularized grid, inclusive on both ends.
struct Segment {
    std::string label;
    std::size_t start_index = 0;
    std::size_t end_index = 0;
};

/// Copies each labeled range into its own series sharing the parent's
/// interval. Throws IndexOutOfBounds or OverlappingSegments.
std::vector<std::pair<std::string, TimeSeries>> segment(const TimeSeries& series,
                                                        const std::vector<Segment>& segments);

/// Per-node model and stream-state registry.
struct NodeRegistry {
    std::map<NodeKey, NodeStreamState> states;
    double nominal_interval = 2.0;  // seconds
    double snap_tolerance = 0.25;   // fraction of the interval
};

/// One cleaned-output row: the verdict plus grid time, the value that goes
/// downstream and the fault flag at decision time.
struct CleanRow {
    double timestamp = 0.0;
    Verdict verdict;
    std::optional<double> output;
    bool fault_flag = false;
};

enum class NodeStatus { processed, untrained, failed };

struct NodeOutcome {
    int node_id = 0;
    Channel channel = Channel::temperature;
    NodeStatus status = NodeStatus::processed;
    std::string message;          // set for untrained/failed nodes
    std::vector<CleanRow> rows;   // empty for the training prefix
    std::size_t training_filled = 0;  // missing training slots filled by carry-forward
};

struct PipelineResult {
    std::vector<NodeOutcome> outcomes;  // sorted by (node_id, channel)
};

/// Drives the full per-node pipeline over one ingest batch: regularize,
/// fit a model on the first min_train slots when the node has none, then
/// stream the remaining slots through process_reading. Nodes are fully
/// independent; a node that cannot be fitted is reported without aborting
/// the others. Rerunning on identical input yields identical outputs.
PipelineResult run_pipeline(NodeRegistry& registry, const IngestResult& batch,
                            const ProcessOptions& options = {});

}  // namespace tsclean
