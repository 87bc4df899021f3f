#include "excursion/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace excursion {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

LatticePmf parse_pmf_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("pmf spec is not valid JSON: ") + e.what());
    }
    if (!doc.contains("pmf") || !doc["pmf"].is_array()) {
        throw ValidationError("pmf spec must contain a \"pmf\" array");
    }
    std::vector<LatticePmf::Entry> entries;
    for (const auto& item : doc["pmf"]) {
        if (!item.is_array() || item.size() != 2) {
            throw ValidationError("each pmf entry must be [offset, prob]");
        }
        const std::int64_t k = item[0].get<std::int64_t>();
        double p = 0.0;
        if (item[1].is_string()) {
            p = std::stod(item[1].get<std::string>());
        } else {
            p = item[1].get<double>();
        }
        entries.emplace_back(k, p);
    }
    return LatticePmf(std::move(entries));
}

LatticePmf load_pmf_file(const std::filesystem::path& path) {
    return parse_pmf_json(read_text_file(path));
}

std::string pmf_to_json(const LatticePmf& pmf) {
    ordered_json doc;
    doc["pmf"] = ordered_json::array();
    for (const auto& [k, p] : pmf.entries()) {
        doc["pmf"].push_back(ordered_json::array({k, p}));
    }
    return doc.dump();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string pmf_hash(const LatticePmf& pmf) { return fnv1a_hex(pmf_to_json(pmf)); }

// ---------------------------------------------------------------------------

std::vector<std::int64_t> RunConfig::xgrid() const {
    const std::int64_t hi = xgrid_hi > 0 ? xgrid_hi : a_max;
    std::vector<std::int64_t> xs;
    for (std::int64_t x = xgrid_lo; x <= hi; x += xgrid_step) xs.push_back(x);
    return xs;
}

Precision RunConfig::precision_mode() const {
    if (precision == "double") return Precision::Double;
    if (precision == "dd") return Precision::DoubleDouble;
    throw ValidationError("precision must be \"double\" or \"dd\"");
}

namespace {

json config_to_json(const RunConfig& c) {
    json doc; // std::map keys: already canonically sorted
    doc["a_max"] = c.a_max;
    doc["s_max"] = c.s_max;
    doc["n_max"] = c.n_max;
    doc["xgrid_lo"] = c.xgrid_lo;
    doc["xgrid_hi"] = c.xgrid_hi;
    doc["xgrid_step"] = c.xgrid_step;
    doc["seed"] = c.seed;
    doc["replicas"] = c.replicas;
    doc["mc_paths"] = c.mc_paths;
    doc["mc_x"] = c.mc_x;
    doc["tol_kappa"] = c.tol_kappa;
    doc["tol_tail"] = c.tol_tail;
    doc["tol_tv"] = c.tol_tv;
    doc["tol_peak"] = c.tol_peak;
    doc["tol_assembly"] = c.tol_assembly;
    doc["precision"] = c.precision;
    doc["pmf_path"] = c.pmf_path;
    if (!c.pmf_entries.empty()) {
        doc["pmf"] = json::array();
        for (const auto& [k, p] : c.pmf_entries) doc["pmf"].push_back(json::array({k, p}));
    }
    return doc;
}

} // namespace

RunConfig parse_config_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    auto get = [&](const char* key, auto& field) {
        if (doc.contains(key)) field = doc[key].template get<std::decay_t<decltype(field)>>();
    };
    get("a_max", c.a_max);
    get("s_max", c.s_max);
    get("n_max", c.n_max);
    get("xgrid_lo", c.xgrid_lo);
    get("xgrid_hi", c.xgrid_hi);
    get("xgrid_step", c.xgrid_step);
    get("seed", c.seed);
    get("replicas", c.replicas);
    get("mc_paths", c.mc_paths);
    get("mc_x", c.mc_x);
    get("tol_kappa", c.tol_kappa);
    get("tol_tail", c.tol_tail);
    get("tol_tv", c.tol_tv);
    get("tol_peak", c.tol_peak);
    get("tol_assembly", c.tol_assembly);
    get("precision", c.precision);
    get("pmf_path", c.pmf_path);
    get("out_dir", c.out_dir);
    if (doc.contains("pmf")) {
        for (const auto& item : doc["pmf"]) {
            c.pmf_entries.emplace_back(item[0].get<std::int64_t>(),
                                       item[1].is_string()
                                           ? std::stod(item[1].get<std::string>())
                                           : item[1].get<double>());
        }
    }
    return c;
}

std::string config_to_canonical_json(const RunConfig& config) {
    json doc = config_to_json(config);
    doc["out_dir"] = config.out_dir;
    return doc.dump(2);
}

std::string config_hash(const RunConfig& config) {
    return fnv1a_hex(config_to_json(config).dump()); // out_dir excluded
}

// ---------------------------------------------------------------------------

std::string report_to_json(const EstimatorReport& r) {
    ordered_json doc;
    doc["method"] = r.method;
    doc["estimate"] = r.estimate;
    doc["std_error"] = r.std_error;
    doc["replicas"] = r.replicas;
    doc["seed"] = r.seed;
    doc["stream_count"] = r.stream_count;
    doc["z"] = r.z;
    doc["ci"] = ordered_json::array({r.ci_lo(), r.ci_hi()});
    doc["truncation_bracket"] = r.truncation_bracket;
    doc["replica_means"] = r.replica_means;
    return doc.dump(2);
}

EstimatorReport report_from_json(const std::string& text) {
    const json doc = json::parse(text);
    EstimatorReport base = make_report(doc.at("method").get<std::string>(),
                                       doc.at("seed").get<std::uint64_t>(),
                                       doc.at("stream_count").get<std::int64_t>(),
                                       doc.at("replica_means").get<std::vector<double>>(),
                                       doc.at("z").get<double>());
    base.truncation_bracket = doc.value("truncation_bracket", 0.0);
    return base;
}

std::string profile_report_to_json(const ProfileReport& rep) {
    const CramerProfile& p = rep.profile;
    ordered_json doc;
    doc["pmf_hash"] = rep.pmf_hash;
    doc["config_hash"] = rep.config_hash;
    doc["lambda"] = p.lambda;
    doc["I"] = p.I;
    doc["theta"] = p.theta;
    doc["V"] = p.V;
    doc["v_cond"] = p.v_cond;
    doc["delta2"] = p.delta2;
    doc["quadrature_tol"] = p.quadrature_tol;
    doc["grid_size"] = p.psi_grid.size();
    // derived constants are reconstructions: consumers must see whether the
    // exact-table validation has run
    doc["delta2_validated"] = rep.has_constants
                                  ? ordered_json(rep.constants.validated_against_table)
                                  : ordered_json(nullptr);
    if (rep.has_constants) {
        doc["q0"] = rep.constants.q0;
        doc["qhat"] = rep.constants.qhat_table;
        doc["Q"] = rep.constants.Q;
        doc["kappa_assembled"] = rep.constants.kappa;
        doc["kappa_validated"] = rep.constants.validated_against_table;
    } else {
        doc["kappa_validated"] = nullptr;
    }
    return doc.dump(2);
}

// ---------------------------------------------------------------------------

void TableCodec::save(const ExcursionTable& table, const std::filesystem::path& header_path,
                      const std::filesystem::path& data_path) {
    ordered_json header;
    header["format"] = "excursion-table-v1";
    header["pmf"] = ordered_json::parse(pmf_to_json(table.pmf()))["pmf"];
    header["pmf_hash"] = pmf_hash(table.pmf());
    header["a_max"] = table.caps().a_max;
    header["s_max"] = table.caps().s_max;
    header["n_max"] = table.caps().n_max;
    header["alive_atom"] = table.caps().alive_atom;
    header["alive_budget"] = table.caps().alive_budget;
    header["rows"] = table.rows();
    header["total_stopped_mass"] = table.total_stopped_mass();
    header["overflow_area"] = table.overflow_area();
    header["overflow_height"] = table.overflow_height();
    header["overflow_height_tail_certain"] = table.height_overflow_is_tail_certain();
    header["alive_mass_at_caps"] = table.alive_mass_at_caps();
    write_text_file(header_path, header.dump(2));

    if (data_path.has_parent_path()) std::filesystem::create_directories(data_path.parent_path());
    std::ofstream out(data_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + data_path.string());
    for (std::int64_t n = 0; n < table.rows(); ++n) {
        const auto row = table.row(n);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
}

ExcursionTable TableCodec::load(const std::filesystem::path& header_path,
                                const std::filesystem::path& data_path) {
    const json header = json::parse(read_text_file(header_path));
    if (header.value("format", "") != "excursion-table-v1") {
        throw Error("unknown table format in " + header_path.string());
    }
    std::vector<LatticePmf::Entry> entries;
    for (const auto& item : header.at("pmf")) {
        entries.emplace_back(item[0].get<std::int64_t>(), item[1].get<double>());
    }
    ExcursionTable table{LatticePmf(std::move(entries))};
    table.caps_.a_max = header.at("a_max").get<std::int64_t>();
    table.caps_.s_max = header.at("s_max").get<std::int64_t>();
    table.caps_.n_max = header.at("n_max").get<std::int64_t>();
    table.caps_.alive_atom = header.at("alive_atom").get<double>();
    table.caps_.alive_budget = header.at("alive_budget").get<double>();
    table.total_stopped_ = header.at("total_stopped_mass").get<double>();
    table.overflow_area_ = header.at("overflow_area").get<double>();
    table.overflow_height_ = header.at("overflow_height").get<double>();
    table.height_overflow_certain_ = header.at("overflow_height_tail_certain").get<bool>();
    table.alive_at_caps_ = header.at("alive_mass_at_caps").get<double>();

    const auto n_rows = header.at("rows").get<std::int64_t>();
    std::ifstream in(data_path, std::ios::binary);
    if (!in) throw Error("cannot open " + data_path.string());
    for (std::int64_t n = 0; n < n_rows; ++n) {
        const std::int64_t lo = n == 0 ? 0 : n;
        const std::int64_t count = n == 0 ? 1 : table.caps_.a_max - lo + 1;
        std::vector<double> row(static_cast<std::size_t>(count));
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
        if (!in) throw Error("table data truncated in " + data_path.string());
        table.rows_.push_back(std::move(row));
    }
    return table;
}

std::string TableCodec::header_pmf_hash(const std::filesystem::path& header_path) {
    const json header = json::parse(read_text_file(header_path));
    return header.at("pmf_hash").get<std::string>();
}

void write_marginals_csv(const ExcursionTable& table, const std::filesystem::path& path) {
    const auto marginal = area_marginal(table);
    std::ostringstream os;
    os << "a,prob\n";
    os.precision(17);
    for (std::size_t a = 0; a < marginal.size(); ++a) {
        if (marginal[a] > 0.0 || a == 0) os << a << "," << marginal[a] << "\n";
    }
    write_text_file(path, os.str());
}

void write_trace_csv(const ConvergenceTrace& trace, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "x,value,target,gap,verdict\n";
    os.precision(17);
    for (const auto& p : trace.points) {
        os << p.x << "," << p.value << "," << p.target << "," << p.gap << ","
           << (p.pass ? 1 : 0) << "\n";
    }
    write_text_file(path, os.str());
}

} // namespace excursion
