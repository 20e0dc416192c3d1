#include "uqline/synth.hpp"

#include "uqline/errors.hpp"
#include "uqline/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace uqline {

using json = nlohmann::json;

namespace {

// fixed parts of the planted model. the base keeps scores positive for any
// realistic slope; the difficulty amplitude is small against the base so the
// planted length trend stays recoverable.
constexpr double base_uncertainty = 8.0;
constexpr double difficulty_scale = 0.1;
constexpr int sample_count = 3;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string make_id(const std::string& label, std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "-%06zu", i + 1);
    return label + buf;
}

}  // namespace

synth_dataset generate_synth(const synth_config& cfg) {
    if (cfg.n == 0) throw std::invalid_argument("synth: n must be positive");
    if (cfg.min_tokens < 1 || cfg.max_tokens <= cfg.min_tokens)
        throw std::invalid_argument("synth: need 1 <= min_tokens < max_tokens");
    if (cfg.noise_sigma < 0.0) throw std::invalid_argument("synth: noise_sigma must be >= 0");
    if (cfg.signal_strength < 0.0) throw std::invalid_argument("synth: signal_strength must be >= 0");
    if (cfg.label.empty() || cfg.label.find_first_of(",\"\r\n") != std::string::npos)
        throw std::invalid_argument("synth: label must be non-empty and CSV-safe");

    rng gen(cfg.seed);
    synth_dataset out;
    out.records.reserve(cfg.n);
    out.sidecar.reserve(cfg.n);
    const double len_span = static_cast<double>(cfg.max_tokens - cfg.min_tokens);

    for (std::size_t i = 0; i < cfg.n; ++i) {
        const long len = gen.next_int(cfg.min_tokens, cfg.max_tokens);
        const double s = gen.next_normal();
        const double z = static_cast<double>(len - cfg.min_tokens) / len_span;
        const double quality = clamp01(0.5 + cfg.quality_slope * z - cfg.signal_strength * s);
        const double target = std::max(0.0, base_uncertainty + cfg.uncertainty_slope * z +
                                                difficulty_scale * s +
                                                cfg.noise_sigma * gen.next_normal());

        generation_record rec;
        rec.id = make_id(cfg.label, i);
        const auto words = static_cast<std::size_t>(std::min<long>(len, 16));
        for (std::size_t w = 0; w < words; ++w) {
            if (w > 0) rec.output_text += ' ';
            rec.output_text += "w" + std::to_string(i) + "_" + std::to_string(w);
        }
        rec.token_logprobs.assign(static_cast<std::size_t>(len), -target / static_cast<double>(len));
        rec.token_entropies.assign(static_cast<std::size_t>(len), target / static_cast<double>(len));

        for (int m = 0; m < sample_count; ++m) {
            const long slen = gen.next_int(cfg.min_tokens, cfg.max_tokens);
            const double sample_target = std::max(0.0, target * (1.0 + 0.1 * gen.next_normal()));
            sampled_output so;
            so.token_logprobs.assign(static_cast<std::size_t>(slen),
                                     -sample_target / static_cast<double>(slen));
            // share a prefix of the base words so pairwise overlap varies
            // strictly between disjoint and identical
            const std::size_t shared = 1 + static_cast<std::size_t>(gen.next_u64() % words);
            for (std::size_t w = 0; w < words; ++w) {
                if (w > 0) so.text += ' ';
                if (w < shared)
                    so.text += "w" + std::to_string(i) + "_" + std::to_string(w);
                else
                    so.text += "s" + std::to_string(i) + "_" + std::to_string(m) + "_" + std::to_string(w);
            }
            rec.samples.push_back(std::move(so));
        }

        rec.quality = quality;
        rec.meta["dataset"] = cfg.label;
        out.sidecar.push_back({rec.id, s, len});
        out.records.push_back(std::move(rec));
    }
    return out;
}

void write_sidecar(std::ostream& out, std::span<const sidecar_entry> entries) {
    for (const auto& e : entries) {
        json j;
        j["id"] = e.id;
        j["latent_difficulty"] = e.latent_difficulty;
        j["planted_length"] = e.planted_length;
        out << j.dump() << '\n';
    }
}

std::vector<sidecar_entry> read_sidecar(std::istream& in) {
    std::vector<sidecar_entry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            entries.push_back({j.at("id").get<std::string>(), j.at("latent_difficulty").get<double>(),
                               j.at("planted_length").get<long>()});
        } catch (const json::exception& e) {
            throw data_error("sidecar line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return entries;
}

std::vector<sidecar_entry> read_sidecar_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw missing_input_error(path);
    std::ifstream in(path);
    if (!in) throw data_error("cannot open " + path);
    return read_sidecar(in);
}

}  // namespace uqline
