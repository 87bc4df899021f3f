#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "excursion/io.hpp"

using namespace excursion;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string output;
};

CliRun run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli_output.txt";
    const std::string call = std::string(EXCURSION_CLI_PATH) + " " + args + " > " +
                             log.string() + " 2>&1";
    const int status = std::system(call.c_str());
    CliRun result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = read_text_file(log);
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("excursion_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_config(const fs::path& where, const std::string& pmf, const std::string& out) {
    write_text_file(where, R"({
  "pmf": )" + pmf + R"(,
  "a_max": 300, "s_max": 64, "xgrid_lo": 50, "xgrid_hi": 300, "xgrid_step": 50,
  "seed": 5, "replicas": 8, "mc_paths": 20000, "mc_x": 80,
  "out_dir": ")" + out + R"("
})");
}

} // namespace

TEST_CASE("analyze: valid pmf exits zero with a profile report") {
    TempDir tmp;
    write_config(tmp.path / "config.json", "[[-1, 0.5], [0, 0.3], [1, 0.2]]",
                 (tmp.path / "out").string());
    const CliRun run = run_cli("analyze --config " + (tmp.path / "config.json").string(), tmp.path);
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("lambda") != std::string::npos);
    CHECK(run.output.find("0.916290731874") != std::string::npos);

    bool found_profile = false;
    for (const auto& entry : fs::recursive_directory_iterator(tmp.path / "out")) {
        if (entry.path().filename() == "profile.json") {
            found_profile = true;
            CHECK(read_text_file(entry.path()).find("\"kappa_validated\": false") !=
                  std::string::npos);
        }
    }
    CHECK(found_profile);
}

TEST_CASE("analyze: invalid pmf exits with the validation code") {
    TempDir tmp;
    write_config(tmp.path / "config.json", "[[-1, 0.3], [0, 0.4], [1, 0.3]]",
                 (tmp.path / "out").string());
    const CliRun run = run_cli("analyze --config " + (tmp.path / "config.json").string(), tmp.path);
    CHECK(run.exit_code == 2);
    CHECK(run.output.find("mean is not negative") != std::string::npos);
}

TEST_CASE("exact: second run reuses the cached table") {
    TempDir tmp;
    write_config(tmp.path / "config.json", "[[-1, 0.5], [0, 0.3], [1, 0.2]]",
                 (tmp.path / "out").string());
    const std::string args = "exact --config " + (tmp.path / "config.json").string();
    const CliRun first = run_cli(args, tmp.path);
    CHECK(first.exit_code == 0);
    CHECK(first.output.find("reusing cached") == std::string::npos);

    std::string table_bytes;
    fs::path table_path;
    for (const auto& entry : fs::recursive_directory_iterator(tmp.path / "out")) {
        if (entry.path().filename() == "table.bin") {
            table_path = entry.path();
            table_bytes = read_text_file(entry.path());
        }
    }
    REQUIRE(!table_path.empty());

    const CliRun second = run_cli(args, tmp.path);
    CHECK(second.exit_code == 0);
    CHECK(second.output.find("reusing cached") != std::string::npos);
    CHECK(read_text_file(table_path) == table_bytes);
}

TEST_CASE("fit: refuses a table built from a different pmf") {
    TempDir tmp;
    write_config(tmp.path / "a.json", "[[-1, 0.5], [0, 0.3], [1, 0.2]]",
                 (tmp.path / "out").string());
    write_config(tmp.path / "b.json", "[[-1, 0.6], [0, 0.2], [1, 0.2]]",
                 (tmp.path / "out").string());
    CHECK(run_cli("exact --config " + (tmp.path / "a.json").string(), tmp.path).exit_code == 0);
    CHECK(run_cli("exact --config " + (tmp.path / "b.json").string(), tmp.path).exit_code == 0);

    // graft the first table into the second run directory
    fs::path dir_a, dir_b;
    for (const auto& entry : fs::directory_iterator(tmp.path / "out")) {
        if (fs::exists(entry.path() / "table_header.json")) {
            const std::string hash = TableCodec::header_pmf_hash(entry.path() /
                                                                 "table_header.json");
            if (hash == pmf_hash(LatticePmf({{-1, 0.5}, {0, 0.3}, {1, 0.2}}))) {
                dir_a = entry.path();
            } else {
                dir_b = entry.path();
            }
        }
    }
    REQUIRE(!dir_a.empty());
    REQUIRE(!dir_b.empty());
    fs::copy_file(dir_a / "table_header.json", dir_b / "table_header.json",
                  fs::copy_options::overwrite_existing);
    fs::copy_file(dir_a / "table.bin", dir_b / "table.bin", fs::copy_options::overwrite_existing);

    const CliRun fit = run_cli("fit --config " + (tmp.path / "b.json").string(), tmp.path);
    CHECK(fit.exit_code == 2);
    CHECK(fit.output.find("hash mismatch") != std::string::npos);
}

TEST_CASE("fit: missing table gives an instructive error") {
    TempDir tmp;
    write_config(tmp.path / "config.json", "[[-1, 0.5], [0, 0.3], [1, 0.2]]",
                 (tmp.path / "out").string());
    const CliRun run = run_cli("fit --config " + (tmp.path / "config.json").string(), tmp.path);
    CHECK(run.exit_code == 2);
    CHECK(run.output.find("run `exact`") != std::string::npos);
}

TEST_CASE("fit: verdict summary enumerates every theorem check") {
    TempDir tmp;
    write_config(tmp.path / "config.json", "[[-1, 0.5], [0, 0.3], [1, 0.2]]",
                 (tmp.path / "out").string());
    REQUIRE(run_cli("exact --config " + (tmp.path / "config.json").string(), tmp.path)
                .exit_code == 0);
    const CliRun fit = run_cli("fit --config " + (tmp.path / "config.json").string(), tmp.path);
    CHECK((fit.exit_code == 0 || fit.exit_code == 4)); // verdicts may fail at tiny caps
    bool found = false;
    for (const auto& entry : fs::recursive_directory_iterator(tmp.path / "out")) {
        if (entry.path().filename() != "summary.json") continue;
        found = true;
        const std::string summary = read_text_file(entry.path());
        for (const char* key : {"\"T1\"", "\"T1.2\"", "\"Cheb\"", "\"T3\"", "\"P.5\"",
                                "\"T6\"", "\"stick\"", "\"delta2_validated\"",
                                "\"kappa_validated\"", "\"config_hash\""}) {
            CHECK(summary.find(key) != std::string::npos);
        }
    }
    CHECK(found);
}

TEST_CASE("mc: runs standalone and reports the missing cross-check") {
    TempDir tmp;
    write_config(tmp.path / "config.json", "[[-1, 0.5], [0, 0.3], [1, 0.2]]",
                 (tmp.path / "out").string());
    const CliRun run = run_cli("mc --config " + (tmp.path / "config.json").string(), tmp.path);
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("skipped: no matching table") != std::string::npos);
}
