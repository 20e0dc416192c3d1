#pragma once

#include "uqline/record.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>

namespace uqline {

// msp    negative total log-probability of the output sequence
// ppl    msp divided by sequence length (log-perplexity)
// mte    mean token entropy
// mcse   mean negative sequence log-probability over sampled outputs
// mcnse  like mcse but each sample is normalized by its own length
// lsrl   1 - mean pairwise rouge-l over sampled outputs (sample diversity)
enum class measure { msp, ppl, mte, mcse, mcnse, lsrl };

inline constexpr std::array<measure, 6> all_measures = {
    measure::msp, measure::ppl, measure::mte, measure::mcse, measure::mcnse, measure::lsrl,
};

std::string_view measure_name(measure m);
measure measure_from_name(std::string_view name);  // unknown name -> std::invalid_argument

struct measure_score {
    std::string record_id;
    measure kind = measure::msp;
    std::size_t length = 0;
    double value = 0.0;
};

double msp(const generation_record& rec);
double ppl(const generation_record& rec);
double mte(const generation_record& rec);
double mcse(const generation_record& rec);
double mcnse(const generation_record& rec);
double lsrl(const generation_record& rec);
double score_record(const generation_record& rec, measure m);

// lowercased words split on unicode whitespace, ascii punctuation stripped
// from token edges; pinned here so rouge-l is reproducible byte for byte
std::vector<std::string> tokenize_for_rouge(std::string_view text);

// LCS-based F1 between two token sequences, in [0, 1]
double rouge_l(std::span<const std::string> a, std::span<const std::string> b);

struct scoring_result {
    std::vector<measure_score> scores;  // record order x fixed measure order
    std::size_t skipped = 0;            // (record, measure) pairs skipped in lenient mode
};

// strict mode turns any unscorable (record, measure) pair into a data error;
// lenient mode skips the pair and counts it
scoring_result compute_scores(const std::vector<generation_record>& records,
                              std::span<const measure> measures, bool strict);

// CSV with header record_id,measure,length,value; values use 17 significant
// digits so doubles round-trip exactly
void write_scores_csv(std::ostream& out, std::span<const measure_score> scores);
std::vector<measure_score> read_scores_csv(std::istream& in);
std::vector<measure_score> read_scores_csv_file(const std::string& path);

}  // namespace uqline
