#include "uqline/record.hpp"

#include "uqline/errors.hpp"
#include "uqline/hash.hpp"
#include "uqline/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace uqline {

using json = nlohmann::json;

namespace {

generation_record record_from_json(const json& j, quality_direction dir) {
    generation_record rec;
    rec.id = j.at("id").get<std::string>();
    const json& out = j.at("output");
    rec.output_text = out.at("text").get<std::string>();
    rec.token_logprobs = out.at("token_logprobs").get<std::vector<double>>();
    if (out.contains("token_entropies"))
        rec.token_entropies = out.at("token_entropies").get<std::vector<double>>();
    if (j.contains("samples")) {
        for (const json& s : j.at("samples")) {
            sampled_output so;
            so.text = s.at("text").get<std::string>();
            so.token_logprobs = s.at("token_logprobs").get<std::vector<double>>();
            rec.samples.push_back(std::move(so));
        }
    }
    if (j.contains("quality")) {
        const double q = j.at("quality").get<double>();
        rec.quality = dir == quality_direction::lower_better ? -q : q;
    }
    if (j.contains("meta")) rec.meta = j.at("meta").get<std::map<std::string, std::string>>();
    return rec;
}

}  // namespace

std::vector<std::string> validate_record(generation_record& rec) {
    std::vector<std::string> violations;
    if (rec.id.empty()) violations.push_back("id is empty");

    auto check_logprobs = [&](std::vector<double>& lp, const std::string& where) {
        if (lp.empty()) {
            violations.push_back(where + " is empty");
            return;
        }
        for (double& v : lp) {
            if (!std::isfinite(v)) {
                violations.push_back(where + " has a non-finite value");
                return;
            }
            if (v > 0.0) {
                if (v <= 1e-6) {
                    v = 0.0;  // rounding slop from the logging side
                } else {
                    violations.push_back(where + " has a positive log-probability");
                    return;
                }
            }
        }
    };

    check_logprobs(rec.token_logprobs, "output.token_logprobs");
    if (!rec.token_entropies.empty()) {
        if (rec.token_entropies.size() != rec.token_logprobs.size())
            violations.push_back("token_entropies length differs from token_logprobs");
        for (double e : rec.token_entropies) {
            if (!std::isfinite(e) || e < 0.0) {
                violations.push_back("token_entropies has a negative or non-finite value");
                break;
            }
        }
    }
    for (std::size_t i = 0; i < rec.samples.size(); ++i)
        check_logprobs(rec.samples[i].token_logprobs, "samples[" + std::to_string(i) + "].token_logprobs");
    if (rec.quality && !std::isfinite(*rec.quality)) violations.push_back("quality is non-finite");
    return violations;
}

std::vector<generation_record> parse_records(std::istream& in, quality_direction dir) {
    std::vector<generation_record> records;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw data_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        generation_record rec;
        try {
            rec = record_from_json(j, dir);
        } catch (const json::exception& e) {
            throw data_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(rec.id).second)
            throw data_error("line " + std::to_string(line_no) + ": duplicate record id '" + rec.id + "'");
        const auto violations = validate_record(rec);
        if (!violations.empty()) {
            std::string msg = "line " + std::to_string(line_no) + " (id '" + rec.id + "'): " + violations.front();
            if (violations.size() > 1) msg += " (+" + std::to_string(violations.size() - 1) + " more)";
            throw data_error(msg);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<generation_record> parse_records_file(const std::string& path, quality_direction dir) {
    if (!std::filesystem::exists(path)) throw missing_input_error(path);
    std::ifstream in(path);
    if (!in) throw data_error("cannot open " + path);
    try {
        return parse_records(in, dir);
    } catch (const data_error& e) {
        throw data_error(path + ": " + e.what());
    }
}

std::string serialize_record(const generation_record& rec) {
    json out;  // nlohmann emits keys sorted, so the bytes are stable
    out["id"] = rec.id;
    out["output"]["text"] = rec.output_text;
    out["output"]["token_logprobs"] = rec.token_logprobs;
    if (!rec.token_entropies.empty()) out["output"]["token_entropies"] = rec.token_entropies;
    if (!rec.samples.empty()) {
        json arr = json::array();
        for (const auto& s : rec.samples)
            arr.push_back({{"text", s.text}, {"token_logprobs", s.token_logprobs}});
        out["samples"] = std::move(arr);
    }
    if (rec.quality) out["quality"] = *rec.quality;
    if (!rec.meta.empty()) out["meta"] = rec.meta;
    return out.dump();
}

void write_records(std::ostream& out, const std::vector<generation_record>& records) {
    for (const auto& rec : records) out << serialize_record(rec) << '\n';
}

split_result split_dataset(const std::vector<generation_record>& records, double train_fraction,
                           std::uint64_t seed) {
    if (records.empty()) throw std::invalid_argument("split_dataset: no records");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split_dataset: train_fraction must be in (0, 1)");

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng gen(seed);
    portable_shuffle(order, gen);

    const auto n_train =
        static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(records.size())));
    if (n_train == 0 || n_train >= records.size())
        throw data_error("split_dataset: fraction " + std::to_string(train_fraction) + " of " +
                         std::to_string(records.size()) + " records leaves an empty half");

    split_result out;
    out.train.reserve(n_train);
    out.test.reserve(records.size() - n_train);
    for (std::size_t k = 0; k < order.size(); ++k)
        (k < n_train ? out.train : out.test).push_back(records[order[k]]);
    return out;
}

std::uint64_t ids_hash(const std::vector<generation_record>& records) {
    std::vector<const std::string*> ids;
    ids.reserve(records.size());
    for (const auto& rec : records) ids.push_back(&rec.id);
    std::sort(ids.begin(), ids.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
    std::uint64_t h = fnv1a64_seed;
    for (const std::string* id : ids) {
        h = fnv1a64(*id, h);
        h = fnv1a64("\n", h);
    }
    return h;
}

}  // namespace uqline
