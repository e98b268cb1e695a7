#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "tsclean/errors.hpp"

namespace tscli {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

std::string fmt(std::optional<double> value) {
    return value.has_value() ? fmt(*value) : std::string{};
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw tsclean::DataError("cannot write file: " + tmp.string());
        }
        out << content;
        if (!out.good()) {
            throw tsclean::DataError("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw tsclean::DataError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

}  // namespace tscli
