// End-to-end checks of the command-line tool: exit codes, file outputs and
// the documented table formats, driven through a real subprocess.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const fs::path kWork = fs::path(TSCLEAN_WORK_DIR) / "cli";

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    fs::create_directories(kWork);
    const fs::path log = kWork / "last_run.log";
    const std::string command =
        std::string(TSCLEAN_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<std::string>> parse_csv(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string current;
        for (char ch : line) {
            if (ch == ',') {
                fields.push_back(current);
                current.clear();
            } else {
                current.push_back(ch);
            }
        }
        fields.push_back(current);
        rows.push_back(std::move(fields));
    }
    return rows;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = kWork / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli help documents the commands and shared flags") {
    CliResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    for (const char* needle : {"fit", "forecast", "detect", "clean", "simulate", "acf"}) {
        CHECK(help.output.find(needle) != std::string::npos);
    }
    CliResult sub_help = run_cli("clean --help");
    CHECK(sub_help.exit_code == 0);
    for (const char* flag : {"--input", "--out-dir", "--node", "--channel", "--level", "--pmax",
                             "--qmax", "--dmax", "--min-train", "--interval", "--seed",
                             "--horizon"}) {
        CHECK(sub_help.output.find(flag) != std::string::npos);
    }
}

TEST_CASE("cli rejects unknown flags and bad usage") {
    CHECK(run_cli("clean --input x.csv --frobnicate").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);          // a subcommand is required
    CHECK(run_cli("fit").exit_code == 1);       // --input is required
    CHECK(run_cli("nonsense").exit_code == 1);
}

TEST_CASE("cli reports unreadable input as a data error naming the path") {
    CliResult result = run_cli("fit --input /no/such/file.csv --out-dir " +
                               (kWork / "nowhere").string());
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("/no/such/file.csv") != std::string::npos);
}

TEST_CASE("cli reports numerical failures with exit code 3") {
    // A random walk cannot be stationarized within --dmax 0.
    const fs::path dir = fresh_dir("walk");
    {
        std::ofstream input(dir / "walk.csv");
        input << "node_id,timestamp,channel,value\n";
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> step(-1.0, 1.0);
        double level = 0.0;
        for (int i = 0; i < 400; ++i) {
            level += step(rng);
            input << "1," << 2 * i << ",temperature," << level << "\n";
        }
    }
    CliResult result = run_cli("fit --input " + (dir / "walk.csv").string() +
                               " --dmax 0 --min-train 200 --out-dir " + dir.string());
    CHECK(result.exit_code == 3);
}

TEST_CASE("simulate is deterministic and writes ground truth") {
    const fs::path a = fresh_dir("sim_a");
    const fs::path b = fresh_dir("sim_b");
    const std::string flags = "simulate --n 400 --seed 7 --phi 0.5 --mean 50 "
                              "--spike-count 4 --spike-after 100 --out-dir ";
    CHECK(run_cli(flags + a.string()).exit_code == 0);
    CHECK(run_cli(flags + b.string()).exit_code == 0);
    CHECK(slurp(a / "readings.csv") == slurp(b / "readings.csv"));
    CHECK(slurp(a / "truth.csv") == slurp(b / "truth.csv"));

    auto truth = parse_csv(a / "truth.csv");
    CHECK(truth.size() == 5);  // header + 4 injected spikes
    CHECK(truth[0][0] == "node_id");

    CHECK(run_cli("simulate --phi 1.0 --out-dir " + fresh_dir("sim_bad").string()).exit_code ==
          2);  // non-stationary generator
}

TEST_CASE("fit writes the model document and the plot tables") {
    const fs::path sim = fresh_dir("fit_sim");
    REQUIRE(run_cli("simulate --n 800 --seed 101 --phi 0.5,0.3 --mean 20 --out-dir " +
                    sim.string())
                .exit_code == 0);

    const fs::path out = fresh_dir("fit_out");
    CliResult fit = run_cli("fit --input " + (sim / "readings.csv").string() +
                            " --pmax 3 --qmax 2 --out-dir " + out.string());
    CHECK(fit.exit_code == 0);

    const std::string model = slurp(out / "model.txt");
    CHECK(model.find("format tsclean-arima") == 0);
    CHECK(model.find("p 2") != std::string::npos);
    CHECK(model.find("d 0") != std::string::npos);

    auto acf_rows = parse_csv(out / "acf.csv");
    REQUIRE(acf_rows.size() >= 2);
    CHECK(acf_rows[0] == std::vector<std::string>{"lag", "coefficient", "band"});
    CHECK(acf_rows[1][0] == "0");
    CHECK(std::stod(acf_rows[1][1]) == doctest::Approx(1.0));

    auto pacf_rows = parse_csv(out / "pacf.csv");
    CHECK(pacf_rows[0] == std::vector<std::string>{"lag", "coefficient", "band"});
    auto lag_rows = parse_csv(out / "lagplot.csv");
    CHECK(lag_rows[0] == std::vector<std::string>{"x", "y"});
    CHECK(lag_rows.size() == 800);  // header + n-1 pairs

    CHECK(slurp(out / "diagnostics.txt").find("selected_p 2") != std::string::npos);
    CHECK(slurp(out / "config.txt").find("command fit") != std::string::npos);
}

TEST_CASE("fit on white noise selects the empty model") {
    const fs::path sim = fresh_dir("wn_sim");
    REQUIRE(run_cli("simulate --n 1000 --seed 5 --out-dir " + sim.string()).exit_code == 0);
    const fs::path out = fresh_dir("wn_out");
    CHECK(run_cli("fit --input " + (sim / "readings.csv").string() +
                  " --pmax 5 --qmax 5 --out-dir " + out.string())
              .exit_code == 0);
    const std::string model = slurp(out / "model.txt");
    CHECK(model.find("p 0\n") != std::string::npos);
    CHECK(model.find("d 0\n") != std::string::npos);
    CHECK(model.find("q 0\n") != std::string::npos);
}

TEST_CASE("forecast from a saved model reproduces the AR(1) closed form") {
    const fs::path dir = fresh_dir("fc");
    {
        std::ofstream model(dir / "model.txt");
        model << "format tsclean-arima\nversion 1\np 1\nd 0\nq 0\nmean 0\nsigma2 1\naic 0\n"
                 "n_train 100\nphi_1 0.5\n";
        std::ofstream input(dir / "history.csv");
        input << "node_id,timestamp,channel,value\n";
        const double history[] = {2.0, 1.0, 4.0, 8.0};
        for (int i = 0; i < 4; ++i) {
            input << "1," << 2 * i << ",temperature," << history[i] << "\n";
        }
    }
    CliResult result = run_cli("forecast --input " + (dir / "history.csv").string() +
                               " --model " + (dir / "model.txt").string() +
                               " --horizon 5 --out-dir " + dir.string());
    CHECK(result.exit_code == 0);

    auto rows = parse_csv(dir / "forecast.csv");
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"step", "point", "std_err", "lower", "upper"});
    const double expected_points[] = {4.0, 2.0, 1.0, 0.5, 0.25};
    double previous_std_err = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const auto& row = rows[static_cast<std::size_t>(k)];
        CHECK(std::stod(row[1]) == doctest::Approx(expected_points[k - 1]).epsilon(1e-9));
        const double std_err = std::stod(row[2]);
        CHECK(std_err >= previous_std_err);
        previous_std_err = std_err;
        // Bounds are point +- z * std_err at the default level 0.95.
        CHECK(std::stod(row[3]) ==
              doctest::Approx(std::stod(row[1]) - 1.959964 * std_err).epsilon(1e-5));
        CHECK(std::stod(row[4]) ==
              doctest::Approx(std::stod(row[1]) + 1.959964 * std_err).epsilon(1e-5));
    }

    CHECK(run_cli("forecast --input " + (dir / "history.csv").string() + " --model " +
                  (dir / "model.txt").string() + " --horizon 26 --out-dir " + dir.string())
              .exit_code == 2);
}

TEST_CASE("clean and detect produce the documented stream outputs") {
    const fs::path sim = fresh_dir("clean_sim");
    REQUIRE(run_cli("simulate --n 500 --seed 33 --phi 0.5 --mean 100 "
                    "--spike-at 300,301,302,303,304 --spike-at 420 --out-dir " + sim.string())
                .exit_code == 0);
    const std::string input = (sim / "readings.csv").string();

    const fs::path cleaned = fresh_dir("clean_out");
    CliResult clean = run_cli("clean --input " + input +
                              " --min-train 200 --pmax 3 --qmax 2 --out-dir " +
                              cleaned.string());
    CHECK(clean.exit_code == 0);

    auto rows = parse_csv(cleaned / "cleaned.csv");
    REQUIRE(rows.size() == 301);  // header + (500 - 200) post-training rows
    CHECK(rows[0] ==
          std::vector<std::string>{"node_id", "timestamp", "observed", "decision", "lower",
                                   "upper", "output_value", "forecast_step", "fault_flag"});

    // The injected run of five is rejected and capped; the fault flag
    // appears on the refit row and stays.
    int rejected = 0;
    bool saw_fault = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row[3] == "rejected") ++rejected;
        if (row[8] == "1") saw_fault = true;
        const int step = std::stoi(row[7]);
        CHECK(step >= 1);
        CHECK(step <= 5);
        if (row[3] == "accepted") CHECK(row[2] == row[6]);
    }
    CHECK(rejected >= 6);
    CHECK(saw_fault);
    CHECK(slurp(cleaned / "summary.txt").find("fault 1") != std::string::npos);

    // The per-node model document is written and loadable.
    CHECK(slurp(cleaned / "models" / "node1_temperature.txt").find("format tsclean-arima") == 0);

    // detect: same verdicts, but observed values flow through unchanged.
    const fs::path detected = fresh_dir("detect_out");
    CHECK(run_cli("detect --input " + input +
                  " --min-train 200 --pmax 3 --qmax 2 --out-dir " + detected.string())
              .exit_code == 0);
    auto detect_rows = parse_csv(detected / "cleaned.csv");
    REQUIRE(detect_rows.size() >= 2);
    for (std::size_t i = 1; i < detect_rows.size(); ++i) {
        if (!detect_rows[i][2].empty()) {
            CHECK(detect_rows[i][2] == detect_rows[i][6]);
        }
    }
}

TEST_CASE("clean skips nodes with too little history but processes the rest") {
    const fs::path sim = fresh_dir("mixed_sim");
    REQUIRE(run_cli("simulate --n 400 --seed 12 --phi 0.4 --mean 60 --out-dir " + sim.string())
                .exit_code == 0);
    // Append a second node with only a handful of readings.
    {
        std::ofstream app((sim / "readings.csv").string(), std::ios::app);
        for (int i = 0; i < 10; ++i) {
            app << "9," << 2 * i << ",temperature,42\n";
        }
    }
    const fs::path out = fresh_dir("mixed_out");
    CliResult result = run_cli("clean --input " + (sim / "readings.csv").string() +
                               " --min-train 200 --pmax 3 --qmax 2 --out-dir " + out.string());
    CHECK(result.exit_code == 0);
    const std::string summary = slurp(out / "summary.txt");
    CHECK(summary.find("node 9 channel temperature untrained") != std::string::npos);
    CHECK(summary.find("node 1 channel temperature accepted") != std::string::npos);
}
