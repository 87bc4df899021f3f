#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "excursion/io.hpp"
#include "test_util.hpp"

using namespace excursion;
using excursion::test::example_pmf;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("excursion_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("pmf spec parsing") {
    const LatticePmf a = parse_pmf_json(R"({"pmf": [[-1, 0.5], [0, 0.3], [1, 0.2]]})");
    CHECK(a.mean() == doctest::Approx(-0.3));

    // decimal strings are accepted
    const LatticePmf b = parse_pmf_json(R"({"pmf": [[-1, "0.5"], [0, "0.3"], [1, "0.2"]]})");
    CHECK(b.prob_at(-1) == doctest::Approx(0.5));
    CHECK(pmf_hash(a) == pmf_hash(b));

    CHECK_THROWS_AS(parse_pmf_json("not json"), ValidationError);
    CHECK_THROWS_AS(parse_pmf_json(R"({"wrong": 1})"), ValidationError);
    CHECK_THROWS_AS(parse_pmf_json(R"({"pmf": [[0]]})"), ValidationError);
    CHECK_THROWS_AS(parse_pmf_json(R"({"pmf": [[0, 0.5], [0, 0.5]]})"), ValidationError);

    // round trip through the canonical document
    const LatticePmf c = parse_pmf_json(pmf_to_json(a));
    CHECK(pmf_hash(c) == pmf_hash(a));
}

TEST_CASE("config canonicalization and hashing") {
    RunConfig config;
    config.a_max = 777;
    config.seed = 42;
    config.out_dir = "somewhere";
    const std::string canonical = config_to_canonical_json(config);
    const RunConfig back = parse_config_json(canonical);
    CHECK(config_to_canonical_json(back) == canonical); // identical canonical form

    // the hash ignores where the output goes
    RunConfig moved = config;
    moved.out_dir = "elsewhere";
    CHECK(config_hash(moved) == config_hash(config));
    moved.a_max = 778;
    CHECK(config_hash(moved) != config_hash(config));

    const auto xs = config.xgrid();
    CHECK(xs.front() == config.xgrid_lo);
    CHECK(xs.back() <= 777);
    CHECK(config.precision_mode() == Precision::Double);
    config.precision = "dd";
    CHECK(config.precision_mode() == Precision::DoubleDouble);
    config.precision = "quad";
    CHECK_THROWS_AS(config.precision_mode(), ValidationError);
}

TEST_CASE("estimator report round trip") {
    EstimatorReport r = make_report("is_local", 99, 7, {1e-7, 1.2e-7, 0.9e-7});
    r.truncation_bracket = 3.5e-10;
    const EstimatorReport back = report_from_json(report_to_json(r));
    CHECK(back.estimate == r.estimate);
    CHECK(back.std_error == r.std_error);
    CHECK(back.replica_means == r.replica_means);
    CHECK(back.seed == r.seed);
    CHECK(back.method == r.method);
    CHECK(back.truncation_bracket == r.truncation_bracket);
}

TEST_CASE("table persistence is bit exact") {
    TempDir tmp;
    DpCaps caps;
    caps.a_max = 200;
    caps.s_max = 48;
    const ExcursionTable table = excursion_law(example_pmf(), caps);
    const auto header = tmp.path / "header.json";
    const auto data = tmp.path / "table.bin";
    TableCodec::save(table, header, data);
    CHECK(TableCodec::header_pmf_hash(header) == pmf_hash(example_pmf()));

    const ExcursionTable loaded = TableCodec::load(header, data);
    CHECK(loaded.rows() == table.rows());
    for (std::int64_t n = 0; n < table.rows(); ++n) {
        for (std::int64_t a = table.row_lo(n); a <= caps.a_max; ++a) {
            CHECK(loaded.stopped(n, a) == table.stopped(n, a)); // bit-equal
        }
    }
    CHECK(loaded.total_stopped_mass() == table.total_stopped_mass());
    CHECK(loaded.overflow_area() == table.overflow_area());
    CHECK(loaded.conservation_residual() == table.conservation_residual());

    // saving the loaded table reproduces the files byte for byte
    const auto header2 = tmp.path / "header2.json";
    const auto data2 = tmp.path / "table2.bin";
    TableCodec::save(loaded, header2, data2);
    CHECK(read_text_file(header) == read_text_file(header2));
    CHECK(read_text_file(data) == read_text_file(data2));

    CHECK_THROWS_AS(TableCodec::load(tmp.path / "missing.json", data), Error);
}

TEST_CASE("csv artifacts") {
    TempDir tmp;
    DpCaps caps;
    caps.a_max = 50;
    caps.s_max = 32;
    const ExcursionTable table = excursion_law(example_pmf(), caps);
    write_marginals_csv(table, tmp.path / "marginals.csv");
    const std::string csv = read_text_file(tmp.path / "marginals.csv");
    CHECK(csv.rfind("a,prob\n", 0) == 0);
    CHECK(csv.find("\n0,0.8") != std::string::npos);

    ConvergenceTrace trace;
    trace.name = "demo";
    trace.points.push_back({1.0, 2.0, 3.0, 0.5, true});
    write_trace_csv(trace, tmp.path / "trace.csv");
    CHECK(read_text_file(tmp.path / "trace.csv") ==
          "x,value,target,gap,verdict\n1,2,3,0.5,1\n");
}
