// End-to-end checks of the experiment driver: catalog contents, sample-config
// round trips, determinism of outputs, and the exit-code contract.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "pumrun_cli_test";

int run(const std::string& args) {
    const int rc = std::system((std::string(PUMRUN_PATH) + " " + args).c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};
const Workspace workspace_;  // fresh scratch directory for the whole binary

}  // namespace

TEST_CASE("catalog lists generators and fields with their parameters") {
    const fs::path txt = kWork / "catalog.txt";
    REQUIRE(run("catalog > " + txt.string()) == 0);
    const std::string text = read_file(txt);
    CHECK(text.find("alternating") != std::string::npos);
    CHECK(text.find("h=") != std::string::npos);
    CHECK(text.find("rough") != std::string::npos);
    CHECK(text.find("W^{1,q}") != std::string::npos);
}

TEST_CASE("machine-readable catalog round-trips through the config parser") {
    const fs::path jf = kWork / "catalog.json";
    REQUIRE(run("catalog --json > " + jf.string()) == 0);
    const nlohmann::json cat = nlohmann::json::parse(read_file(jf));
    CHECK(cat.contains("version"));

    bool saw_alternating_h = false, saw_sobolev = false;
    int samples = 0;
    for (const char* group : {"generators", "fields"}) {
        REQUIRE(cat.contains(group));
        for (const auto& entry : cat[group]) {
            REQUIRE(entry.contains("name"));
            REQUIRE(entry.contains("sample_config"));
            if (entry["name"] == "alternating")
                for (const auto& p : entry["parameters"])
                    if (p["name"] == "h") saw_alternating_h = true;
            if (entry["name"] == "rough" && entry.contains("sobolev")) saw_sobolev = true;

            // every sample config must be accepted and runnable as-is
            const fs::path cfgf = kWork / ("sample_" + std::to_string(samples) + ".toml");
            const fs::path outd = kWork / ("sample_out_" + std::to_string(samples));
            write_file(cfgf, entry["sample_config"].get<std::string>());
            CHECK(run("run --quiet --config " + cfgf.string() + " --out " + outd.string()) == 0);
            CHECK(fs::exists(outd / "summary.json"));
            ++samples;
        }
    }
    CHECK(saw_alternating_h);
    CHECK(saw_sobolev);
    CHECK(samples == 8);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    const fs::path cfgf = kWork / "det.toml";
    write_file(cfgf,
               "experiment = \"advect\"\nseed = 3\n"
               "[mesh]\ngenerator = \"cartesian\"\nh = 0.125\nmargin = 2\n"
               "[field]\nkind = \"rough\"\nmax_mode = 2\namplitude = 0.4\n"
               "[initial]\nradius = 0.2\n[time]\nT = 0.1\noutputs = 2\n");
    const fs::path a = kWork / "det_a", b = kWork / "det_b";
    REQUIRE(run("run --quiet --config " + cfgf.string() + " --out " + a.string()) == 0);
    REQUIRE(run("run --quiet --config " + cfgf.string() + " --out " + b.string()) == 0);
    CHECK(read_file(a / "trajectory.csv") == read_file(b / "trajectory.csv"));
    // the summaries differ only in the configured output directory
    auto ja = nlohmann::json::parse(read_file(a / "summary.json"));
    auto jb = nlohmann::json::parse(read_file(b / "summary.json"));
    ja["config"].erase("out");
    jb["config"].erase("out");
    CHECK(ja == jb);
}

TEST_CASE("summary embeds the library version and the full resolved config") {
    const auto j = nlohmann::json::parse(read_file(kWork / "det_a" / "summary.json"));
    CHECK(j.contains("version"));
    CHECK(j.contains("csv_schema_version"));
    for (const char* key : {"mesh", "field", "initial", "time", "stepper", "seminorm", "scan",
                            "seed", "experiment"})
        CHECK(j["config"].contains(key));
    CHECK(j["config"]["seed"] == 3);
    CHECK(j["measured"].contains("structural"));
}

TEST_CASE("exit code 2 on configuration errors") {
    CHECK(run("run --quiet --config " + (kWork / "missing.toml").string() + " 2> /dev/null") == 2);

    const fs::path bad1 = kWork / "bad_experiment.toml";
    write_file(bad1, "experiment = \"frobnicate\"\n");
    CHECK(run("run --quiet --config " + bad1.string() + " 2> /dev/null") == 2);

    const fs::path bad2 = kWork / "bad_key.toml";
    write_file(bad2, "experiment = \"advect\"\n[mesh]\nwavelength = 3\n");
    CHECK(run("run --quiet --config " + bad2.string() + " 2> /dev/null") == 2);

    const fs::path bad3 = kWork / "bad_syntax.toml";
    write_file(bad3, "experiment = \"advect\"\nh 0.1\n");
    CHECK(run("run --quiet --config " + bad3.string() + " 2> /dev/null") == 2);

    // structurally valid but semantically impossible: no periodic structure
    const fs::path bad4 = kWork / "bad_scan.toml";
    write_file(bad4, "experiment = \"vcoords-scan\"\n[mesh]\ngenerator = \"disc\"\n");
    CHECK(run("run --quiet --config " + bad4.string() + " --out " +
              (kWork / "bad_scan_out").string() + " 2> /dev/null") == 2);
}

TEST_CASE("exit code 3 on numerical failure, partial artifacts kept") {
    const fs::path cfgf = kWork / "unstable.toml";
    write_file(cfgf,
               "experiment = \"advect\"\n"
               "[mesh]\ngenerator = \"cartesian\"\nh = 0.125\nmargin = 2\n"
               "[initial]\nradius = 0.2\n[time]\nT = 0.1\noutputs = 1\n"
               "[stepper]\nfixed_dt = 10\n");
    const fs::path outd = kWork / "unstable_out";
    CHECK(run("run --quiet --config " + cfgf.string() + " --out " + outd.string() +
              " 2> /dev/null") == 3);
    CHECK(fs::exists(outd / "trajectory.csv"));  // the t = 0 row was flushed
}

TEST_CASE("command-line overrides take precedence over the config") {
    const fs::path cfgf = kWork / "seeded.toml";
    write_file(cfgf,
               "experiment = \"advect\"\nseed = 1\n"
               "[mesh]\ngenerator = \"cartesian\"\nh = 0.25\nmargin = 2\n"
               "[initial]\nradius = 0.2\n[time]\nT = 0.05\noutputs = 1\n");
    const fs::path outd = kWork / "seeded_out";
    REQUIRE(run("run --quiet --config " + cfgf.string() + " --out " + outd.string() +
                " --seed 42") == 0);
    const auto j = nlohmann::json::parse(read_file(outd / "summary.json"));
    CHECK(j["config"]["seed"] == 42);
    CHECK(j["config"]["quiet"] == true);
}
