#include "cli.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using riskdp::cli::json;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("riskdp_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Run {
    int status;
    std::string err;
};

/// Runs the binary with `args`, stderr captured into `dir`/stderr.txt.
Run run(const std::string& args, const fs::path& dir) {
    const auto err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + RISKDP_BINARY + "\" " + args + " 2>\"" + err.string() + "\" >/dev/null";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(err)};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

json mdp_doc() {
    return riskdp::cli::read_document(fs::path(RISKDP_DATA_DIR) / "example_mdp.json");
}

} // namespace

TEST_CASE("solve-mdp reproduces the golden files") {
    const auto dir = fresh_dir("mdp");
    const auto r = run("solve-mdp --input \"" RISKDP_DATA_DIR "/example_mdp.json\" --out \"" + dir.string() + "\"", dir);
    REQUIRE(r.status == 0);
    for (const char* name : {"values.csv", "policy.csv"}) {
        CHECK(slurp(dir / name) == slurp(fs::path(RISKDP_GOLDEN_DIR) / "example_mdp" / name));
    }
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("horizon") == 4);
}

TEST_CASE("solve-pomdp reproduces the golden files") {
    const auto dir = fresh_dir("pomdp");
    const auto r =
        run("solve-pomdp --input \"" RISKDP_DATA_DIR "/example_pomdp.json\" --out \"" + dir.string() + "\"", dir);
    REQUIRE(r.status == 0);
    for (const char* name : {"values.csv", "policy.csv"}) {
        CHECK(slurp(dir / name) == slurp(fs::path(RISKDP_GOLDEN_DIR) / "example_pomdp" / name));
    }
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("node_count") == 5);
}

TEST_CASE("zero costs give zero values") {
    const auto dir = fresh_dir("zero");
    auto doc = mdp_doc();
    for (auto& [state, controls] : doc["body"]["transitions"].items()) {
        for (auto& [control, entry] : controls.items()) {
            entry["cost"] = 0;
        }
    }
    write(dir / "model.json", doc.dump());
    REQUIRE(run("solve-mdp --input \"" + (dir / "model.json").string() + "\" --out \"" + dir.string() + "\"", dir)
                .status == 0);
    const auto rows = read_csv(dir / "values.csv");
    REQUIRE(rows.size() == 13);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][2] == "0");
    }
}

TEST_CASE("invalid kernel row is a validation error naming the row") {
    const auto dir = fresh_dir("bad_row");
    auto doc = mdp_doc();
    doc["body"]["transitions"]["busy"]["service"]["next"]["busy"] = 0.4;
    write(dir / "model.json", doc.dump());
    const auto r = run("solve-mdp --input \"" + (dir / "model.json").string() + "\" --out \"" + dir.string() + "\"", dir);
    CHECK(r.status == 2);
    CHECK(r.err.find("state 'busy'") != std::string::npos);
    CHECK(r.err.find("control 'service'") != std::string::npos);
    CHECK(r.err.find("stage") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "values.csv"));
}

TEST_CASE("malformed input and arguments") {
    const auto dir = fresh_dir("malformed");
    write(dir / "broken.json", "{\"schema_version\": \"1\", ");
    CHECK(run("solve-mdp --input \"" + (dir / "broken.json").string() + "\" --out \"" + dir.string() + "\"", dir)
              .status == 2);
    write(dir / "kind.json", R"({"schema_version": "1", "kind": "pomdp", "body": {}})");
    CHECK(run("solve-mdp --input \"" + (dir / "kind.json").string() + "\" --out \"" + dir.string() + "\"", dir)
              .status == 2);
    CHECK(run("solve-mdp --input \"" + (dir / "missing.json").string() + "\"", dir).status == 2);
    CHECK(run("no-such-command", dir).status == 2);
    CHECK(run("machine-demo --params 0,80,100 --out \"" + dir.string() + "\"", dir).status == 2);
    CHECK(run("--help", dir).status == 0);
}

TEST_CASE("node budget exhaustion is a resource error") {
    const auto dir = fresh_dir("budget");
    const auto r = run("solve-pomdp --budget 2 --input \"" RISKDP_DATA_DIR "/example_pomdp.json\" --out \"" +
                           dir.string() + "\"",
                       dir);
    CHECK(r.status == 3);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("single hidden state pomdp document matches solve-mdp") {
    const auto dir = fresh_dir("collapse");
    const auto mdp = mdp_doc();
    json pomdp{{"schema_version", "1"}, {"kind", "pomdp"}};
    auto& body = pomdp["body"];
    body["obs_states"] = mdp["body"]["states"];
    body["hidden_states"] = json::array({"only"});
    body["controls"] = mdp["body"]["controls"];
    body["horizon"] = mdp["body"]["horizon"];
    body["risk"] = mdp["body"]["risk"];
    body["initial_states"] = mdp["body"]["states"];
    for (auto& [state, controls] : mdp["body"]["transitions"].items()) {
        for (auto& [control, entry] : controls.items()) {
            json next;
            for (auto& [target, p] : entry["next"].items()) {
                next["only"][target]["only"] = p;
            }
            body["transitions"][state][control] = {{"cost", entry["cost"]}, {"next", next}};
        }
    }
    write(dir / "mdp.json", mdp.dump());
    write(dir / "pomdp.json", pomdp.dump());
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    REQUIRE(run("solve-mdp --input \"" + (dir / "mdp.json").string() + "\" --out \"" + (dir / "a").string() + "\"",
                dir)
                .status == 0);
    REQUIRE(run("solve-pomdp --input \"" + (dir / "pomdp.json").string() + "\" --out \"" + (dir / "b").string() +
                    "\"",
                dir)
                .status == 0);

    // Reachable rows of the pomdp output must match the mdp table value for value.
    std::map<std::pair<std::string, std::string>, std::string> mdp_values;
    for (const auto& row : read_csv(dir / "a" / "values.csv")) {
        mdp_values[{row[0], row[1]}] = row[2];
    }
    const auto rows = read_csv(dir / "b" / "values.csv");
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == std::vector<std::string>{"t", "state", "belief_only", "value"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][2] == "1");
        CHECK(rows[i][3] == mdp_values.at({rows[i][0], rows[i][1]}));
    }
}

TEST_CASE("machine-demo outputs") {
    const auto dir = fresh_dir("demo");
    const std::string common = " --runs 20000 --seed 7 --grid 11 --bins 20";
    REQUIRE(run("machine-demo --out \"" + dir.string() + "\"" + common, dir).status == 0);

    const auto thresholds = read_csv(dir / "thresholds.csv");
    REQUIRE(thresholds.size() == 7);
    CHECK(thresholds[0] == std::vector<std::string>{"t", "xi_star_neutral", "xi_star_averse"});
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        CHECK(std::stod(thresholds[i][2]) >= std::stod(thresholds[i][1]));
    }
    const auto values = read_csv(dir / "values.csv");
    CHECK(values.size() == 1 + 6 * 11);
    const auto hist = read_csv(dir / "histogram.csv");
    REQUIRE(hist.size() == 21);
    std::size_t neutral = 0;
    std::size_t averse = 0;
    for (std::size_t i = 1; i < hist.size(); ++i) {
        neutral += std::stoul(hist[i][2]);
        averse += std::stoul(hist[i][3]);
    }
    CHECK(neutral == 20000);
    CHECK(averse == 20000);
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("seed") == 7);
    CHECK(summary.at("runs") == 20000);

    SUBCASE("repeat is byte-identical") {
        const auto again = fresh_dir("demo_again");
        REQUIRE(run("machine-demo --out \"" + again.string() + "\"" + common, again).status == 0);
        for (const char* name : {"values.csv", "thresholds.csv", "histogram.csv", "summary.json"}) {
            CHECK(slurp(dir / name) == slurp(again / name));
        }
    }
    SUBCASE("gamma 0 gives equal value columns") {
        const auto neutral_dir = fresh_dir("demo_neutral");
        REQUIRE(run("machine-demo --gamma 0 --out \"" + neutral_dir.string() + "\"" + common, neutral_dir).status ==
                0);
        const auto rows = read_csv(neutral_dir / "values.csv");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i][2] == rows[i][3]);
        }
    }
    SUBCASE("invalid parameters") {
        CHECK(run("machine-demo --params 0,120,100,500,0.2,50,6 --out \"" + dir.string() + "\"", dir).status == 2);
        CHECK(run("machine-demo --gamma 2 --out \"" + dir.string() + "\"", dir).status == 2);
    }
}

TEST_CASE("machine-simulate") {
    const auto dir = fresh_dir("simulate");
    REQUIRE(run("machine-simulate --runs 500 --seed 3 --workers 4 --out \"" + dir.string() + "\"", dir).status == 0);
    const auto rows = read_csv(dir / "samples.csv");
    CHECK(rows.size() == 501);
    CHECK(rows[0] == std::vector<std::string>{"run", "total_cost"});
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, 5e-324}) {
        CHECK(std::strtod(riskdp::cli::format_double(x).c_str(), nullptr) == x);
    }
    CHECK(riskdp::cli::format_double(3.5) == "3.5");
}

TEST_CASE("parameter strings") {
    const auto m = riskdp::cli::parse_params("0,80,100,500,0.2,50,6", 0.9);
    CHECK(m.horizon() == 6);
    CHECK(m.gamma() == 0.9);
    CHECK_THROWS_AS(riskdp::cli::parse_params("0,80,100,500,0.2,50", 0.9), riskdp::ValidationError);
    CHECK_THROWS_AS(riskdp::cli::parse_params("0,80,100,500,0.2,50,x", 0.9), riskdp::ValidationError);
}
