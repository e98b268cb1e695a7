#pragma once

#include <optional>
#include <string>

namespace tsclean {

enum class Channel { temperature, light };

std::string to_string(Channel c);
/// Throws DataError on anything but "temperature" or "light".
Channel channel_from_string(const std::string& s);

/// One time-indexed sample from one node. A missing value models a
/// delivered-but-empty reading.
struct SensorReading {
    int node_id = 0;
    double timestamp = 0.0;  // seconds since epoch
    Channel channel = Channel::temperature;
    std::optional<double> value;
};

}  // namespace tsclean
