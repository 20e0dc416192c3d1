#include "uqline/measures.hpp"

#include "uqline/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uqline {

std::string_view measure_name(measure m) {
    switch (m) {
        case measure::msp: return "msp";
        case measure::ppl: return "ppl";
        case measure::mte: return "mte";
        case measure::mcse: return "mcse";
        case measure::mcnse: return "mcnse";
        case measure::lsrl: return "lsrl";
    }
    throw std::invalid_argument("measure_name: bad enum value");
}

measure measure_from_name(std::string_view name) {
    for (measure m : all_measures)
        if (measure_name(m) == name) return m;
    throw std::invalid_argument("unknown measure '" + std::string(name) +
                                "' (expected msp, ppl, mte, mcse, mcnse or lsrl)");
}

double msp(const generation_record& rec) {
    if (rec.token_logprobs.empty()) throw data_error("record '" + rec.id + "': token_logprobs is empty");
    double total = 0.0;
    for (double lp : rec.token_logprobs) total += lp;
    return -total;
}

double ppl(const generation_record& rec) {
    return msp(rec) / static_cast<double>(rec.length());
}

double mte(const generation_record& rec) {
    if (!rec.has_entropies())
        throw data_error("record '" + rec.id + "': token_entropies required for mte");
    double total = 0.0;
    for (double e : rec.token_entropies) total += e;
    return total / static_cast<double>(rec.token_entropies.size());
}

namespace {

double sample_neg_logprob(const generation_record& rec, const sampled_output& s) {
    if (s.token_logprobs.empty())
        throw data_error("record '" + rec.id + "': sample with empty token_logprobs");
    double total = 0.0;
    for (double lp : s.token_logprobs) total += lp;
    return -total;
}

}  // namespace

double mcse(const generation_record& rec) {
    if (rec.samples.empty()) throw data_error("record '" + rec.id + "': samples required for mcse");
    double total = 0.0;
    for (const auto& s : rec.samples) total += sample_neg_logprob(rec, s);
    return total / static_cast<double>(rec.samples.size());
}

double mcnse(const generation_record& rec) {
    if (rec.samples.empty()) throw data_error("record '" + rec.id + "': samples required for mcnse");
    double total = 0.0;
    for (const auto& s : rec.samples)
        total += sample_neg_logprob(rec, s) / static_cast<double>(s.token_logprobs.size());
    return total / static_cast<double>(rec.samples.size());
}

double lsrl(const generation_record& rec) {
    if (rec.samples.size() < 2)
        throw data_error("record '" + rec.id + "': at least 2 samples required for lsrl");
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(rec.samples.size());
    for (const auto& s : rec.samples) tokens.push_back(tokenize_for_rouge(s.text));
    double total = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        for (std::size_t j = i + 1; j < tokens.size(); ++j) total += rouge_l(tokens[i], tokens[j]);
    const auto pairs = static_cast<double>(tokens.size() * (tokens.size() - 1) / 2);
    return 1.0 - total / pairs;
}

double score_record(const generation_record& rec, measure m) {
    switch (m) {
        case measure::msp: return msp(rec);
        case measure::ppl: return ppl(rec);
        case measure::mte: return mte(rec);
        case measure::mcse: return mcse(rec);
        case measure::mcnse: return mcnse(rec);
        case measure::lsrl: return lsrl(rec);
    }
    throw std::invalid_argument("score_record: bad enum value");
}

namespace {

// unicode whitespace, pinned explicitly rather than via locale tables
bool is_space_cp(char32_t c) {
    switch (c) {
        case U'\t':
        case U'\n':
        case U'\v':
        case U'\f':
        case U'\r':
        case U' ':
        case 0x85:    // next line
        case 0xA0:    // no-break space
        case 0x1680:  // ogham space mark
        case 0x2028:  // line separator
        case 0x2029:  // paragraph separator
        case 0x202F:  // narrow no-break space
        case 0x205F:  // medium mathematical space
        case 0x3000:  // ideographic space
            return true;
        default: return c >= 0x2000 && c <= 0x200A;  // en quad .. hair space
    }
}

// ascii punctuation by range, independent of locale
bool is_ascii_punct(char c) {
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
           (c >= '{' && c <= '~');
}

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

std::vector<std::string> tokenize_for_rouge(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        std::size_t b = 0;
        std::size_t e = cur.size();
        while (b < e && is_ascii_punct(cur[b])) ++b;
        while (e > b && is_ascii_punct(cur[e - 1])) --e;
        if (e > b) {
            std::string tok = cur.substr(b, e - b);
            for (char& c : tok)
                if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            tokens.push_back(std::move(tok));
        }
        cur.clear();
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const auto c0 = static_cast<unsigned char>(text[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (c0 < 0x80) {
            cp = c0;
        } else if ((c0 >> 5) == 0x6 && i + 1 < text.size() && is_continuation(text[i + 1])) {
            cp = (static_cast<char32_t>(c0 & 0x1F) << 6) | (text[i + 1] & 0x3F);
            len = 2;
        } else if ((c0 >> 4) == 0xE && i + 2 < text.size() && is_continuation(text[i + 1]) &&
                   is_continuation(text[i + 2])) {
            cp = (static_cast<char32_t>(c0 & 0x0F) << 12) |
                 (static_cast<char32_t>(text[i + 1] & 0x3F) << 6) | (text[i + 2] & 0x3F);
            len = 3;
        } else if ((c0 >> 3) == 0x1E && i + 3 < text.size() && is_continuation(text[i + 1]) &&
                   is_continuation(text[i + 2]) && is_continuation(text[i + 3])) {
            cp = (static_cast<char32_t>(c0 & 0x07) << 18) |
                 (static_cast<char32_t>(text[i + 1] & 0x3F) << 12) |
                 (static_cast<char32_t>(text[i + 2] & 0x3F) << 6) | (text[i + 3] & 0x3F);
            len = 4;
        }
        // malformed bytes fall through as opaque non-whitespace
        if (is_space_cp(cp)) {
            flush();
        } else {
            cur.append(text.substr(i, len));
        }
        i += len;
    }
    flush();
    return tokens;
}

double rouge_l(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() || b.empty()) return 0.0;
    // LCS length, two-row dynamic program
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    const auto lcs = static_cast<double>(prev[b.size()]);
    if (lcs == 0.0) return 0.0;
    const double precision = lcs / static_cast<double>(b.size());
    const double recall = lcs / static_cast<double>(a.size());
    return 2.0 * precision * recall / (precision + recall);
}

scoring_result compute_scores(const std::vector<generation_record>& records,
                              std::span<const measure> measures, bool strict) {
    scoring_result out;
    out.scores.reserve(records.size() * measures.size());
    for (const auto& rec : records) {
        for (measure m : measures) {
            try {
                out.scores.push_back({rec.id, m, rec.length(), score_record(rec, m)});
            } catch (const data_error&) {
                if (strict) throw;
                ++out.skipped;
            }
        }
    }
    return out;
}

void write_scores_csv(std::ostream& out, std::span<const measure_score> scores) {
    out << "record_id,measure,length,value\n";
    char buf[40];
    for (const auto& s : scores) {
        if (s.record_id.find_first_of(",\"\r\n") != std::string::npos)
            throw data_error("record id '" + s.record_id + "' is not CSV-safe");
        std::snprintf(buf, sizeof(buf), "%.17g", s.value);
        out << s.record_id << ',' << measure_name(s.kind) << ',' << s.length << ',' << buf << '\n';
    }
}

std::vector<measure_score> read_scores_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw data_error("scores CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "record_id,measure,length,value")
        throw data_error("scores CSV has unexpected header '" + line + "'");

    std::vector<measure_score> scores;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<std::string, 4> fields;
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (field >= fields.size())
                    throw data_error("scores CSV line " + std::to_string(line_no) + ": too many fields");
                fields[field++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (field != fields.size())
            throw data_error("scores CSV line " + std::to_string(line_no) + ": expected 4 fields");
        measure_score s;
        s.record_id = fields[0];
        try {
            s.kind = measure_from_name(fields[1]);
        } catch (const std::invalid_argument& e) {
            throw data_error("scores CSV line " + std::to_string(line_no) + ": " + e.what());
        }
        char* end = nullptr;
        s.length = static_cast<std::size_t>(std::strtoull(fields[2].c_str(), &end, 10));
        if (end == fields[2].c_str() || *end != '\0')
            throw data_error("scores CSV line " + std::to_string(line_no) + ": bad length '" + fields[2] + "'");
        s.value = std::strtod(fields[3].c_str(), &end);
        if (end == fields[3].c_str() || *end != '\0' || !std::isfinite(s.value))
            throw data_error("scores CSV line " + std::to_string(line_no) + ": bad value '" + fields[3] + "'");
        scores.push_back(std::move(s));
    }
    return scores;
}

std::vector<measure_score> read_scores_csv_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw missing_input_error(path);
    std::ifstream in(path);
    if (!in) throw data_error("cannot open " + path);
    try {
        return read_scores_csv(in);
    } catch (const data_error& e) {
        throw data_error(path + ": " + e.what());
    }
}

}  // namespace uqline
