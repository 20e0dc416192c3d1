#pragma once

#include "uqline/record.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>

namespace uqline {

// planted generative model, per record:
//   length  ~ uniform{min_tokens .. max_tokens},  z = normalized length
//   s       ~ Normal(0, 1)                        (latent difficulty)
//   quality = clamp01(0.5 + quality_slope * z - signal_strength * s)
//   MSP     = max(0, 8 + uncertainty_slope * z + 0.1 * s + Normal(0, noise_sigma))
// token logprobs are equal shares of -MSP, entropies equal shares of MSP, and
// each record carries 3 sampled outputs whose texts overlap partially so the
// sample-based scores land strictly inside their ranges.
struct synth_config {
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    long min_tokens = 8;
    long max_tokens = 256;
    double uncertainty_slope = 0.0;   // planted spurious length trend, in score units
    double quality_slope = 0.0;       // planted quality-length trend
    double signal_strength = 1.0;     // how much latent difficulty the quality reflects
    double noise_sigma = 0.05;        // iid noise on the planted score
    std::string label = "synth";      // dataset tag, also the record id prefix
};

struct sidecar_entry {
    std::string id;
    double latent_difficulty;
    long planted_length;
};

struct synth_dataset {
    std::vector<generation_record> records;
    std::vector<sidecar_entry> sidecar;
};

synth_dataset generate_synth(const synth_config& cfg);

// JSONL, one entry per line, aligned with the record file by id
void write_sidecar(std::ostream& out, std::span<const sidecar_entry> entries);
std::vector<sidecar_entry> read_sidecar(std::istream& in);
std::vector<sidecar_entry> read_sidecar_file(const std::string& path);

}  // namespace uqline
