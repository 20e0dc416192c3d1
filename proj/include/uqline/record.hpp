#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace uqline {

struct sampled_output {
    std::string text;
    std::vector<double> token_logprobs;

    bool operator==(const sampled_output&) const = default;
};

// one generation event from an LLM log. quality is stored higher-is-better
// regardless of the direction it was logged with.
struct generation_record {
    std::string id;
    std::string output_text;
    std::vector<double> token_logprobs;
    std::vector<double> token_entropies;  // empty when the log did not carry them
    std::vector<sampled_output> samples;
    std::optional<double> quality;
    std::map<std::string, std::string> meta;

    bool has_entropies() const { return !token_entropies.empty(); }
    std::size_t length() const { return token_logprobs.size(); }

    bool operator==(const generation_record&) const = default;
};

enum class quality_direction { higher_better, lower_better };

// parses JSONL, one record per line; blank lines are skipped. every record is
// validated on the way in; the first malformed or invalid line aborts the
// parse with a data error naming the line.
std::vector<generation_record> parse_records(std::istream& in,
                                             quality_direction dir = quality_direction::higher_better);
std::vector<generation_record> parse_records_file(const std::string& path,
                                                  quality_direction dir = quality_direction::higher_better);

// returns human-readable violations, empty when the record is well formed.
// logprob values in (0, 1e-6] are rounding slop from upstream loggers and are
// clamped to zero in place; anything larger is a violation.
std::vector<std::string> validate_record(generation_record& rec);

// one JSONL line, no trailing newline; quality is written as stored
std::string serialize_record(const generation_record& rec);
void write_records(std::ostream& out, const std::vector<generation_record>& records);

struct split_result {
    std::vector<generation_record> train;
    std::vector<generation_record> test;
};

// deterministic shuffle under the seed, first ceil(fraction * n) records to
// train. a split that leaves either half empty is a data error.
split_result split_dataset(const std::vector<generation_record>& records, double train_fraction,
                           std::uint64_t seed);

// FNV-1a over the sorted record ids, newline-delimited; order-independent so a
// split can be re-verified against stored provenance
std::uint64_t ids_hash(const std::vector<generation_record>& records);

}  // namespace uqline
