#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "excursion/constants.hpp"
#include "excursion/estimators.hpp"
#include "excursion/exact.hpp"
#include "excursion/fit.hpp"
#include "excursion/pmf.hpp"
#include "excursion/profile.hpp"

namespace excursion {

/// Distribution spec document: {"pmf": [[offset, prob], ...]} with probs given
/// as numbers or decimal strings.
LatticePmf parse_pmf_json(const std::string& text);
LatticePmf load_pmf_file(const std::filesystem::path& path);

std::string pmf_to_json(const LatticePmf& pmf);

/// FNV-1a 64 over the canonical pmf document; identifies tables and reports.
std::string pmf_hash(const LatticePmf& pmf);
std::string fnv1a_hex(const std::string& bytes);

// ---------------------------------------------------------------------------

struct RunConfig {
    std::string pmf_path;
    std::vector<LatticePmf::Entry> pmf_entries; // inline alternative to pmf_path
    std::int64_t a_max = 2000;
    std::int64_t s_max = 96;
    std::int64_t n_max = 0;
    std::int64_t xgrid_lo = 50;
    std::int64_t xgrid_hi = 0; // 0: defaults to a_max
    std::int64_t xgrid_step = 50;
    std::uint64_t seed = 1;
    std::int64_t replicas = 32;
    std::int64_t mc_paths = 200'000;
    std::int64_t mc_x = 0; // 0: saddle-scale default
    double tol_kappa = 0.05;
    double tol_tail = 0.05;
    double tol_tv = 0.05;
    double tol_peak = 0.15;
    double tol_assembly = 0.10;
    std::string precision = "double"; // or "dd"
    std::string out_dir = "out";

    std::vector<std::int64_t> xgrid() const;
    Precision precision_mode() const;
};

RunConfig parse_config_json(const std::string& text);
/// Canonical form: sorted keys, shortest round-trip numbers; the hash input.
std::string config_to_canonical_json(const RunConfig& config);
/// Hash over the canonical document, excluding the output directory.
std::string config_hash(const RunConfig& config);

// ---------------------------------------------------------------------------

std::string report_to_json(const EstimatorReport& report);
EstimatorReport report_from_json(const std::string& text);

/// Profile report with the derived-constant validation flags.
struct ProfileReport {
    CramerProfile profile;
    ConstantAssembly constants{};
    bool has_constants = false;
    std::string pmf_hash;
    std::string config_hash;

    explicit ProfileReport(CramerProfile p) : profile(std::move(p)) {}
};

std::string profile_report_to_json(const ProfileReport& report);

// ---------------------------------------------------------------------------

/// Table persistence: JSON header plus raw little-endian doubles. Reload is
/// bit-exact; the header pins the pmf hash and caps so consumers can refuse
/// mismatched tables.
class TableCodec {
  public:
    static void save(const ExcursionTable& table, const std::filesystem::path& header_path,
                     const std::filesystem::path& data_path);
    static ExcursionTable load(const std::filesystem::path& header_path,
                               const std::filesystem::path& data_path);
    static std::string header_pmf_hash(const std::filesystem::path& header_path);
};

void write_marginals_csv(const ExcursionTable& table, const std::filesystem::path& path);
void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace excursion
