#include <fstream>

#include <json.hpp>

#include "agora/errors.hpp"
#include "agora/io.hpp"

namespace agora {

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["kind"] = "run_manifest";
    j["model"] = m.model;
    nlohmann::json params;
    params["d"] = m.d;
    params["alpha"] = m.alpha;
    params["rho"] = m.rho;
    params["theta"] = m.theta;
    params["beta"] = m.beta;
    if (!m.profile.empty()) params["profile"] = m.profile;
    params["n"] = m.n;
    if (m.max_time) params["max_time"] = *m.max_time;
    if (m.r_count) params["r_count"] = *m.r_count;
    params["seed"] = m.seed;
    j["params"] = params;
    j["library_version"] = m.library_version;
    j["created_utc"] = m.created_utc;
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& [name, digest] : m.outputs) {
        outputs.push_back({{"path", name}, {"sha256", digest}});
    }
    j["outputs"] = outputs;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoError(path, "write failed");
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": invalid JSON (" + e.what() + ")");
    }
    try {
        if (j.value("kind", "") != "run_manifest")
            throw ValidationError(path + ": not a run manifest");
        if (j.value("format_version", -1) != kFormatVersion)
            throw ValidationError(path + ": unsupported format_version");
        RunManifest m;
        m.model = j.at("model").get<std::string>();
        const nlohmann::json& p = j.at("params");
        m.d = p.at("d").get<int>();
        m.alpha = p.at("alpha").get<double>();
        m.rho = p.at("rho").get<double>();
        m.theta = p.at("theta").get<double>();
        m.beta = p.at("beta").get<double>();
        m.profile = p.value("profile", "");
        m.n = p.at("n").get<std::int64_t>();
        if (p.contains("max_time")) m.max_time = p.at("max_time").get<double>();
        if (p.contains("r_count")) m.r_count = p.at("r_count").get<double>();
        m.seed = p.at("seed").get<std::uint64_t>();
        m.library_version = j.value("library_version", "");
        m.created_utc = j.value("created_utc", "");
        for (const auto& o : j.at("outputs")) {
            m.outputs.emplace_back(o.at("path").get<std::string>(),
                                   o.at("sha256").get<std::string>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": manifest schema error (" + std::string(e.what()) + ")");
    }
}

}  // namespace agora
