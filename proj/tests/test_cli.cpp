#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mapcons/cli.hpp"

using mapcons::cli::run;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const char* name) {
    auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli usage errors exit 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"eval", "--measure", "hausdorff"}).code == 2);  // missing positionals
    CHECK(cli({"construct", "--algo", "nope", "/tmp", "/tmp"}).code == 1);  // runtime error
}

TEST_CASE("cli help lists subcommand flags with defaults") {
    auto res = cli({"--help"});
    CHECK(res.code == 0);
    CHECK(res.out.find("construct") != std::string::npos);

    std::ostringstream out, err;
    int code = run({"construct", "--help"}, out, err);
    CHECK(code == 0);
    auto help = out.str();
    CHECK(help.find("--turn-angle") != std::string::npos);
    CHECK(help.find("15") != std::string::npos);  // published defaults visible
    CHECK(help.find("--speed-max") != std::string::npos);
    CHECK(help.find("40") != std::string::npos);
    CHECK(help.find("--proximity") != std::string::npos);
}

TEST_CASE("cli synth + stats + construct + eval round trip") {
    auto dir = fresh_dir("mapcons_cli_rt");
    auto synth = cli({"synth", dir.string(), "--rows", "3", "--cols", "3", "--spacing", "500",
                      "--tracks", "60", "--noise", "0", "--seed", "5"});
    REQUIRE(synth.code == 0);

    auto stats = cli({"stats", (dir / "tracks").string()});
    REQUIRE(stats.code == 0);
    CHECK(stats.out.find("tracks 60") != std::string::npos);

    auto con = cli({"construct", "--algo", "tracebundle", (dir / "tracks").string(),
                    (dir / "tb").string()});
    REQUIRE(con.code == 0);
    CHECK(fs::exists(dir / "tb" / "vertices.txt"));
    CHECK(fs::exists(dir / "tb" / "manifest.txt"));

    // identical maps score perfectly
    auto ev = cli({"eval", "--measure", "hausdorff", (dir / "truth").string(),
                   (dir / "truth").string()});
    REQUIRE(ev.code == 0);
    CHECK(ev.out == "0.000\n");

    auto gs = cli({"eval", "--measure", "graphsampling", "--matched-dist", "10", "--runs", "50",
                   (dir / "truth").string(), (dir / "truth").string()});
    REQUIRE(gs.code == 0);
    CHECK(gs.out.find("F-score 1.000") != std::string::npos);

    auto missing = cli({"eval", "--measure", "hausdorff", (dir / "nope").string(),
                        (dir / "truth").string()});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("nope") != std::string::npos);
}

TEST_CASE("cli bench runs a config file") {
    auto dir = fresh_dir("mapcons_cli_bench");
    auto cfg_path = dir / "config.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({
  "output": ")" << (dir / "out").string() << R"(",
  "seed": 9,
  "datasets": [{"name": "c", "synthetic": {"n_tracks": 15, "noise_sigma_m": 0.0}}],
  "algorithms": [{"algo": "identity"}],
  "measures": [{"measure": "hausdorff"}, {"measure": "graphsampling", "runs": 20, "matched_dist": 10}]
})";
    }
    auto res = cli({"bench", cfg_path.string()});
    REQUIRE(res.code == 0);
    CHECK(fs::exists(dir / "out" / "summary.csv"));
    CHECK(fs::exists(dir / "out" / "c" / "identity" / "hausdorff.summary.json"));
    CHECK(res.out.find("c/identity/hausdorff: ok") != std::string::npos);
}

TEST_CASE("cli eval --json emits machine-readable output") {
    auto dir = fresh_dir("mapcons_cli_json");
    REQUIRE(cli({"synth", dir.string(), "--tracks", "10", "--noise", "0"}).code == 0);
    auto res = cli({"eval", "--measure", "shortestpath", "--pairs", "20", "--json",
                    (dir / "truth").string(), (dir / "truth").string()});
    REQUIRE(res.code == 0);
    auto j = nlohmann::json::parse(res.out);
    CHECK(j["found_fraction"].get<double>() == 1.0);
}
