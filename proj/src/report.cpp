#include "uqline/report.hpp"

#include "uqline/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace uqline {

using json = nlohmann::json;

std::string prr_rows_to_json(std::span<const prr_row> rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["dataset"] = r.dataset;
        j["measure"] = r.measure;
        j["mode"] = r.mode;
        j["n"] = r.n;
        j["prr"] = r.prr;
        j["auc_unc"] = r.auc_unc;
        j["auc_oracle"] = r.auc_oracle;
        j["auc_random"] = r.auc_random;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::vector<prr_row> prr_rows_from_json(const std::string& text) {
    json arr;
    try {
        arr = json::parse(text);
    } catch (const json::parse_error& e) {
        throw schema_error(std::string("PRR file is not valid JSON: ") + e.what());
    }
    if (!arr.is_array()) throw schema_error("PRR file is not a JSON array");
    std::vector<prr_row> rows;
    rows.reserve(arr.size());
    try {
        for (const json& j : arr) {
            prr_row r;
            r.dataset = j.at("dataset").get<std::string>();
            r.measure = j.at("measure").get<std::string>();
            r.mode = j.at("mode").get<std::string>();
            r.n = j.at("n").get<std::size_t>();
            r.prr = j.at("prr").get<double>();
            r.auc_unc = j.at("auc_unc").get<double>();
            r.auc_oracle = j.at("auc_oracle").get<double>();
            r.auc_random = j.at("auc_random").get<double>();
            rows.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw schema_error(std::string("PRR file is missing fields: ") + e.what());
    }
    return rows;
}

std::vector<prr_row> load_prr_rows(const std::string& path) {
    if (!std::filesystem::exists(path)) throw missing_input_error(path);
    std::ifstream in(path);
    if (!in) throw data_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return prr_rows_from_json(buf.str());
    } catch (const schema_error& e) {
        throw schema_error(path + ": " + e.what());
    }
}

join_result join_prr(std::span<const prr_row> base, std::span<const prr_row> line) {
    std::map<std::pair<std::string, std::string>, const prr_row*> base_by_key;
    for (const auto& r : base) {
        const auto key = std::make_pair(r.dataset, r.measure);
        if (!base_by_key.emplace(key, &r).second)
            throw schema_error("report: duplicate base row for (" + r.dataset + ", " + r.measure + ")");
    }

    join_result result;
    result.rows.reserve(line.size());
    for (const auto& r : line) {
        const auto it = base_by_key.find({r.dataset, r.measure});
        if (it == base_by_key.end())
            throw schema_error("report: line row (" + r.dataset + ", " + r.measure +
                               ") has no base counterpart");
        const prr_row& b = *it->second;
        if (b.n != r.n)
            throw schema_error("report: (" + r.dataset + ", " + r.measure + ") evaluated on n=" +
                               std::to_string(b.n) + " in base but n=" + std::to_string(r.n) + " in line");
        result.rows.push_back({r.dataset, r.measure, r.mode, b.prr, r.prr, r.prr - b.prr});
        base_by_key.erase(it);
    }
    result.unmatched_base = base_by_key.size();
    return result;
}

std::vector<report_row> measure_averages(std::span<const report_row> rows) {
    // keyed by (measure, mode); insertion order preserved for output stability
    std::vector<report_row> averages;
    std::vector<std::size_t> counts;
    for (const auto& r : rows) {
        std::size_t idx = averages.size();
        for (std::size_t i = 0; i < averages.size(); ++i)
            if (averages[i].measure == r.measure && averages[i].mode == r.mode) {
                idx = i;
                break;
            }
        if (idx == averages.size()) {
            averages.push_back({"(average)", r.measure, r.mode, 0.0, 0.0, 0.0});
            counts.push_back(0);
        }
        averages[idx].prr_base += r.prr_base;
        averages[idx].prr_line += r.prr_line;
        averages[idx].delta += r.delta;
        ++counts[idx];
    }
    for (std::size_t i = 0; i < averages.size(); ++i) {
        const auto c = static_cast<double>(counts[i]);
        averages[i].prr_base /= c;
        averages[i].prr_line /= c;
        averages[i].delta /= c;
    }
    return averages;
}

namespace {

void write_report_row(std::ostream& out, const report_row& r) {
    char num[3][32];
    std::snprintf(num[0], sizeof(num[0]), "%.6f", r.prr_base);
    std::snprintf(num[1], sizeof(num[1]), "%.6f", r.prr_line);
    std::snprintf(num[2], sizeof(num[2]), "%.6f", r.delta);
    char display[48];
    const char* marker = r.delta > 0.0 ? "↑" : (r.delta < 0.0 ? "↓" : "=");
    std::snprintf(display, sizeof(display), "%.2f / %.2f%s", r.prr_base, r.prr_line, marker);
    out << r.dataset << ',' << r.measure << ',' << r.mode << ',' << num[0] << ',' << num[1] << ','
        << num[2] << ',' << display << '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, std::span<const report_row> rows,
                      std::span<const report_row> averages) {
    out << "dataset,measure,mode,prr_base,prr_line,delta,display\n";
    for (const auto& r : rows) write_report_row(out, r);
    for (const auto& r : averages) write_report_row(out, r);
}

std::string report_to_json(std::span<const report_row> rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["dataset"] = r.dataset;
        j["measure"] = r.measure;
        j["mode"] = r.mode;
        j["prr_base"] = r.prr_base;
        j["prr_line"] = r.prr_line;
        j["delta"] = r.delta;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

}  // namespace uqline
