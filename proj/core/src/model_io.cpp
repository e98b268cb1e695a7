#include "tsclean/model_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "tsclean/errors.hpp"

namespace tsclean {

namespace {

constexpr int kFormatVersion = 1;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw FormatError("model document: bad numeric value for '" + key + "': " + text);
    }
}

long parse_int(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw FormatError("model document: bad integer value for '" + key + "': " + text);
    }
}

}  // namespace

std::string write_model(const ArimaModel& model) {
    std::ostringstream out;
    write_model(model, out);
    return out.str();
}

void write_model(const ArimaModel& model, std::ostream& out) {
    out << "format tsclean-arima\n";
    out << "version " << kFormatVersion << "\n";
    out << "p " << model.p() << "\n";
    out << "d " << model.d() << "\n";
    out << "q " << model.q() << "\n";
    out << "mean " << format_double(model.mean()) << "\n";
    out << "sigma2 " << format_double(model.sigma2()) << "\n";
    out << "aic " << format_double(model.aic()) << "\n";
    out << "n_train " << model.n_train() << "\n";
    for (int i = 0; i < model.p(); ++i) {
        out << "phi_" << (i + 1) << " " << format_double(model.phi()[static_cast<std::size_t>(i)])
            << "\n";
    }
    for (int j = 0; j < model.q(); ++j) {
        out << "theta_" << (j + 1) << " "
            << format_double(model.theta()[static_cast<std::size_t>(j)]) << "\n";
    }
}

ArimaModel read_model(std::istream& in) {
    std::map<std::string, std::string> fields;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t space = line.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 >= line.size()) {
            throw FormatError("model document line " + std::to_string(line_no) +
                              ": expected 'key value'");
        }
        const std::string key = line.substr(0, space);
        const std::string value = line.substr(space + 1);
        if (!fields.emplace(key, value).second) {
            throw FormatError("model document: duplicate key '" + key + "'");
        }
    }

    auto take = [&](const std::string& key) {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw FormatError("model document: missing key '" + key + "'");
        }
        std::string v = it->second;
        fields.erase(it);
        return v;
    };

    if (take("format") != "tsclean-arima") {
        throw FormatError("model document: not a tsclean-arima document");
    }
    if (parse_int("version", take("version")) != kFormatVersion) {
        throw FormatError("model document: unsupported version");
    }

    const long p = parse_int("p", take("p"));
    const long d = parse_int("d", take("d"));
    const long q = parse_int("q", take("q"));
    if (p < 0 || d < 0 || q < 0 || p > 1000 || q > 1000 || d > 10) {
        throw FormatError("model document: implausible orders");
    }
    const double mu = parse_double("mean", take("mean"));
    const double sigma2 = parse_double("sigma2", take("sigma2"));
    const double aic_value = parse_double("aic", take("aic"));
    const long n_train = parse_int("n_train", take("n_train"));
    if (n_train <= 0) {
        throw FormatError("model document: n_train must be positive");
    }

    std::vector<double> phi(static_cast<std::size_t>(p));
    for (long i = 1; i <= p; ++i) {
        const std::string key = "phi_" + std::to_string(i);
        phi[static_cast<std::size_t>(i - 1)] = parse_double(key, take(key));
    }
    std::vector<double> theta(static_cast<std::size_t>(q));
    for (long j = 1; j <= q; ++j) {
        const std::string key = "theta_" + std::to_string(j);
        theta[static_cast<std::size_t>(j - 1)] = parse_double(key, take(key));
    }

    if (!fields.empty()) {
        throw FormatError("model document: unknown key '" + fields.begin()->first + "'");
    }

    try {
        return ArimaModel(static_cast<int>(p), static_cast<int>(d), static_cast<int>(q),
                          std::move(phi), std::move(theta), mu, sigma2, aic_value,
                          static_cast<std::size_t>(n_train));
    } catch (const DataError& e) {
        throw FormatError(std::string("model document: ") + e.what());
    }
}

ArimaModel read_model_string(const std::string& text) {
    std::istringstream in(text);
    return read_model(in);
}

ArimaModel read_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open model file: " + path.string());
    }
    return read_model(in);
}

}  // namespace tsclean
