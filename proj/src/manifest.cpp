#include "uqline/manifest.hpp"

#include "uqline/errors.hpp"
#include "uqline/hash.hpp"

#include <json.hpp>

#include <ctime>
#include <fstream>
#include <sstream>

namespace uqline {

using json = nlohmann::json;

namespace {

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("manifest: cannot read output " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return to_hex64(fnv1a64(buf.str()));
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

void write_manifest(const run_manifest& m, const std::string& primary_output) {
    json j;
    j["command"] = m.command;
    j["tool_version"] = m.tool_version;
    json inputs = json::array();
    for (const auto& path : m.inputs)
        inputs.push_back({{"path", path}, {"fnv1a64", file_checksum(path)}});
    j["inputs"] = std::move(inputs);
    json flags = json::object();
    for (const auto& [name, value] : m.flags) flags[name] = value;
    j["flags"] = std::move(flags);
    if (m.seed) j["seed"] = *m.seed;
    json outputs = json::array();
    for (const auto& path : m.outputs)
        outputs.push_back({{"path", path}, {"fnv1a64", file_checksum(path)}});
    j["outputs"] = std::move(outputs);
    j["timestamp"] = utc_now();

    const std::string path = primary_output + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace uqline
