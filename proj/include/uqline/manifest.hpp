#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace uqline {

// reproducibility sidecar written next to each command's primary output as
// <output>.manifest.json. input and output files are listed with FNV-1a
// checksums over their bytes; everything except the timestamp is identical
// across reruns.
struct run_manifest {
    std::string command;
    std::string tool_version;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> flags;  // effective values, flag order
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
};

void write_manifest(const run_manifest& m, const std::string& primary_output);

}  // namespace uqline
