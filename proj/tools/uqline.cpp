#include "uqline/debias.hpp"
#include "uqline/errors.hpp"
#include "uqline/hash.hpp"
#include "uqline/manifest.hpp"
#include "uqline/measures.hpp"
#include "uqline/prr.hpp"
#include "uqline/record.hpp"
#include "uqline/report.hpp"
#include "uqline/svg.hpp"
#include "uqline/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace uqline;

namespace {

constexpr const char* tool_version = "0.1.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

quality_direction direction_from(const std::string& name) {
    return name == "lower-better" ? quality_direction::lower_better
                                  : quality_direction::higher_better;
}

void require_exists(const std::string& path) {
    if (!fs::exists(path)) throw missing_input_error(path);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write " + path);
    return out;
}

// dataset tag: the records' meta wins, otherwise the input file's stem
std::string dataset_label(const std::vector<generation_record>& records,
                          const std::string& fallback_path) {
    for (const auto& rec : records) {
        const auto it = rec.meta.find("dataset");
        if (it != rec.meta.end()) return it->second;
    }
    return fs::path(fallback_path).stem().string();
}

std::string sanitize_filename(std::string name) {
    for (char& c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-'))
            c = '-';
    return name;
}

std::set<std::string> half_ids(const std::vector<generation_record>& records,
                               const std::string& which, double train_frac, std::uint64_t seed) {
    const auto split = split_dataset(records, train_frac, seed);
    std::set<std::string> ids;
    for (const auto& rec : which == "train" ? split.train : split.test) ids.insert(rec.id);
    return ids;
}

// ---------------------------------------------------------------- measures

struct measures_opts {
    std::string input;
    std::string output;
    std::vector<std::string> measures = {"msp", "ppl", "mte", "mcse", "mcnse", "lsrl"};
    std::string quality_dir = "higher-better";
    bool strict = false;
};

void require_set(const std::string& value, const char* what) {
    if (value.empty()) throw std::invalid_argument(std::string(what) + " is required");
}

void run_measures(const measures_opts& o) {
    require_set(o.input, "measures: --input");
    require_set(o.output, "measures: --output");
    require_exists(o.input);
    const auto records = parse_records_file(o.input, direction_from(o.quality_dir));

    std::vector<measure> wanted;
    for (const auto& name : o.measures) wanted.push_back(measure_from_name(name));

    const auto result = compute_scores(records, wanted, o.strict);
    if (result.skipped > 0)
        std::cerr << "warning: skipped " << result.skipped
                  << " unscorable (record, measure) pairs\n";

    auto out = open_output(o.output);
    write_scores_csv(out, result.scores);
    out.close();

    run_manifest m;
    m.command = "measures";
    m.tool_version = tool_version;
    m.inputs = {o.input};
    std::string measure_list;
    for (const auto& name : o.measures) measure_list += (measure_list.empty() ? "" : ",") + name;
    m.flags = {{"measures", measure_list},
               {"quality-direction", o.quality_dir},
               {"strict", o.strict ? "true" : "false"}};
    m.outputs = {o.output};
    write_manifest(m, o.output);
}

// ------------------------------------------------------------------ trends

struct trends_opts {
    std::string scores;
    std::string records;
    std::string output;
    int bins = 20;
    int degree = 1;
    std::string fit_on = "raw";
    std::string svg_dir;
    std::string quality_dir = "higher-better";
};

void run_trends(const trends_opts& o) {
    require_set(o.scores, "trends: --scores");
    require_set(o.output, "trends: --output");
    require_exists(o.scores);
    const auto scores = read_scores_csv_file(o.scores);
    if (scores.empty()) throw data_error(o.scores + ": no score rows");

    std::vector<generation_record> records;
    if (!o.records.empty()) records = parse_records_file(o.records, direction_from(o.quality_dir));
    const auto dataset = dataset_label(records, o.scores);
    const auto basis = o.fit_on == "bins" ? fit_basis::bins : fit_basis::raw;

    if (!o.svg_dir.empty()) fs::create_directories(o.svg_dir);
    std::vector<std::string> svg_paths;

    nlohmann::json rows = nlohmann::json::array();
    auto add_row = [&](const std::string& name, const binned_trend_result& bt) {
        nlohmann::json row;
        row["dataset"] = dataset;
        row["measure"] = name;
        row["slope"] = bt.fit.slope();
        row["p_value"] = bt.fit.p_value;
        row["n"] = bt.fit.n;
        row["r_squared"] = bt.fit.r_squared;
        row["degree"] = bt.fit.degree;
        rows.push_back(std::move(row));
        if (!o.svg_dir.empty()) {
            const auto path = (fs::path(o.svg_dir) /
                               (sanitize_filename(dataset) + "_" + sanitize_filename(name) + ".svg"))
                                  .string();
            auto svg = open_output(path);
            write_trend_svg(svg, bt, dataset + ": " + name + " vs length", name);
            svg_paths.push_back(path);
        }
    };

    for (const measure m : all_measures) {
        std::vector<double> lengths;
        std::vector<double> values;
        for (const auto& s : scores) {
            if (s.kind != m) continue;
            lengths.push_back(static_cast<double>(s.length));
            values.push_back(s.value);
        }
        if (lengths.empty()) continue;
        add_row(std::string(measure_name(m)), binned_trend(lengths, values, o.bins, basis, o.degree));
    }

    if (!records.empty()) {
        std::vector<double> lengths;
        std::vector<double> values;
        for (const auto& rec : records) {
            if (!rec.quality) continue;
            lengths.push_back(static_cast<double>(rec.length()));
            values.push_back(*rec.quality);
        }
        if (lengths.size() >= static_cast<std::size_t>(o.degree) + 2)
            add_row("quality", binned_trend(lengths, values, o.bins, basis, o.degree));
        else if (!lengths.empty())
            std::cerr << "warning: only " << lengths.size()
                      << " records carry quality, skipping the quality trend\n";
    }

    auto out = open_output(o.output);
    out << rows.dump(2) << "\n";
    out.close();

    run_manifest m;
    m.command = "trends";
    m.tool_version = tool_version;
    m.inputs = {o.scores};
    if (!o.records.empty()) m.inputs.push_back(o.records);
    m.flags = {{"bins", std::to_string(o.bins)},
               {"degree", std::to_string(o.degree)},
               {"fit-on", o.fit_on},
               {"quality-direction", o.quality_dir}};
    m.outputs = {o.output};
    for (const auto& p : svg_paths) m.outputs.push_back(p);
    write_manifest(m, o.output);
}

// --------------------------------------------------------------------- fit

struct fit_opts {
    std::string input;
    std::string output;
    std::string measure_name = "msp";
    std::string mode = "unsupervised";
    int degree = 1;
    double train_frac = 0.5;
    std::uint64_t seed = 0;
    std::string quality_dir = "higher-better";
};

void run_fit(const fit_opts& o) {
    require_set(o.input, "fit: --input");
    require_set(o.output, "fit: --output");
    require_exists(o.input);
    const auto records = parse_records_file(o.input, direction_from(o.quality_dir));
    const auto kind = measure_from_name(o.measure_name);
    const auto mode = mode_from_name(o.mode);

    const auto split = split_dataset(records, o.train_frac, o.seed);
    const auto model = fit_line_model(split.train, kind, mode, o.degree, o.seed);
    save_model(o.output, model);

    std::cerr << "fit " << o.measure_name << " " << o.mode << " degree " << o.degree << " on "
              << split.train.size() << " train records: slope " << model.uncertainty_fit.slope()
              << " (se " << model.uncertainty_fit.slope_se << ", p " << model.uncertainty_fit.p_value
              << ", r2 " << model.uncertainty_fit.r_squared << ")\n";

    run_manifest m;
    m.command = "fit";
    m.tool_version = tool_version;
    m.inputs = {o.input};
    m.flags = {{"measure", o.measure_name},
               {"mode", o.mode},
               {"degree", std::to_string(o.degree)},
               {"train-frac", fmt17(o.train_frac)},
               {"quality-direction", o.quality_dir}};
    m.seed = o.seed;
    m.outputs = {o.output};
    write_manifest(m, o.output);
}

// ------------------------------------------------------------------- apply

struct apply_opts {
    std::string scores;
    std::string model;
    std::string input;
    std::string output;
    std::string split = "all";
    double train_frac = 0.5;
    std::uint64_t seed = 0;
    std::string quality_dir = "higher-better";
};

void run_apply(const apply_opts& o) {
    require_set(o.scores, "apply: --scores");
    require_set(o.model, "apply: --model");
    require_set(o.output, "apply: --output");
    require_exists(o.model);
    require_exists(o.scores);
    const auto model = load_model(o.model);
    const auto all_scores = read_scores_csv_file(o.scores);

    std::vector<measure_score> scores;
    for (const auto& s : all_scores)
        if (s.kind == model.kind) scores.push_back(s);
    if (scores.empty())
        throw data_error(o.scores + ": no rows for measure '" +
                         std::string(measure_name(model.kind)) + "'");

    if (o.split != "all") {
        if (o.input.empty())
            throw std::invalid_argument("apply: --input is required with --split " + o.split);
        require_exists(o.input);
        const auto records = parse_records_file(o.input, direction_from(o.quality_dir));
        const auto split = split_dataset(records, o.train_frac, o.seed);
        if (to_hex64(ids_hash(split.train)) != model.train_ids_hash)
            throw schema_error("apply: the recomputed train split does not match the model's "
                               "provenance; pass the --seed and --train-frac used at fit time");
        std::set<std::string> keep;
        for (const auto& rec : o.split == "train" ? split.train : split.test) keep.insert(rec.id);
        std::vector<measure_score> filtered;
        for (auto& s : scores)
            if (keep.count(s.record_id)) filtered.push_back(std::move(s));
        scores = std::move(filtered);
        if (scores.empty()) throw data_error("apply: no scores left in the '" + o.split + "' half");
    }

    const auto result = apply_line_model(model, scores);
    if (result.extrapolated > 0)
        std::cerr << "warning: " << result.extrapolated << " of " << result.scores.size()
                  << " scores have lengths outside the trained range [" << model.norm.min << ", "
                  << model.norm.max << "]\n";

    auto out = open_output(o.output);
    write_scores_csv(out, result.scores);
    out.close();

    run_manifest m;
    m.command = "apply";
    m.tool_version = tool_version;
    m.inputs = {o.scores, o.model};
    if (!o.input.empty()) m.inputs.push_back(o.input);
    m.flags = {{"split", o.split},
               {"train-frac", fmt17(o.train_frac)},
               {"quality-direction", o.quality_dir}};
    m.seed = o.seed;
    m.outputs = {o.output};
    write_manifest(m, o.output);
}

// --------------------------------------------------------------------- prr

struct prr_opts {
    std::string scores;
    std::string input;
    std::string output;
    std::string mode = "raw";
    std::string split = "all";
    double train_frac = 0.5;
    std::uint64_t seed = 0;
    std::string quality_dir = "higher-better";
};

void run_prr(const prr_opts& o) {
    require_set(o.scores, "prr: --scores");
    require_set(o.input, "prr: --input");
    require_set(o.output, "prr: --output");
    require_exists(o.scores);
    require_exists(o.input);
    const auto records = parse_records_file(o.input, direction_from(o.quality_dir));
    const auto all_scores = read_scores_csv_file(o.scores);
    const auto dataset = dataset_label(records, o.scores);

    std::map<std::string, double> quality_by_id;
    for (const auto& rec : records)
        if (rec.quality) quality_by_id[rec.id] = *rec.quality;

    std::set<std::string> keep;
    if (o.split != "all") keep = half_ids(records, o.split, o.train_frac, o.seed);

    std::vector<prr_row> rows;
    for (const measure m : all_measures) {
        std::vector<double> unc;
        std::vector<double> qual;
        for (const auto& s : all_scores) {
            if (s.kind != m) continue;
            if (!keep.empty() && !keep.count(s.record_id)) continue;
            const auto it = quality_by_id.find(s.record_id);
            if (it == quality_by_id.end())
                throw data_error("prr: record '" + s.record_id + "' has no quality in " + o.input);
            unc.push_back(s.value);
            qual.push_back(it->second);
        }
        if (unc.empty()) continue;
        const auto r = prr(unc, qual);
        rows.push_back({dataset, std::string(measure_name(m)), o.mode, r.n, r.prr, r.auc_unc,
                        r.auc_oracle, r.auc_random});
    }
    if (rows.empty()) throw data_error(o.scores + ": no scores to evaluate");

    auto out = open_output(o.output);
    out << prr_rows_to_json(rows);
    out.close();

    run_manifest m;
    m.command = "prr";
    m.tool_version = tool_version;
    m.inputs = {o.scores, o.input};
    m.flags = {{"mode", o.mode},
               {"split", o.split},
               {"train-frac", fmt17(o.train_frac)},
               {"quality-direction", o.quality_dir}};
    m.seed = o.seed;
    m.outputs = {o.output};
    write_manifest(m, o.output);
}

// ------------------------------------------------------------------ report

struct report_opts {
    std::string base;
    std::string line;
    std::string output;
    std::string json_output;
};

void run_report(const report_opts& o) {
    require_set(o.base, "report: --base");
    require_set(o.line, "report: --line");
    require_set(o.output, "report: --output");
    require_exists(o.base);
    require_exists(o.line);
    const auto base_rows = load_prr_rows(o.base);
    const auto line_rows = load_prr_rows(o.line);

    const auto joined = join_prr(base_rows, line_rows);
    if (joined.rows.empty()) throw data_error("report: no (dataset, measure) pairs joined");
    if (joined.unmatched_base > 0)
        std::cerr << "note: " << joined.unmatched_base
                  << " base rows have no debiased counterpart and were left out\n";
    const auto averages = measure_averages(joined.rows);

    auto out = open_output(o.output);
    write_report_csv(out, joined.rows, averages);
    out.close();
    if (!o.json_output.empty()) {
        auto jout = open_output(o.json_output);
        jout << report_to_json(joined.rows);
    }

    run_manifest m;
    m.command = "report";
    m.tool_version = tool_version;
    m.inputs = {o.base, o.line};
    m.flags = {};
    m.outputs = {o.output};
    if (!o.json_output.empty()) m.outputs.push_back(o.json_output);
    write_manifest(m, o.output);
}

// ------------------------------------------------------------------- synth

struct synth_opts {
    std::string output;
    std::string sidecar;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    long min_tokens = 8;
    long max_tokens = 256;
    double uncertainty_slope = 0.0;
    double quality_slope = 0.0;
    double signal_strength = 1.0;
    double noise_sigma = 0.05;
    std::string label = "synth";
};

void run_synth(const synth_opts& o) {
    require_set(o.output, "synth: --output");
    synth_config cfg;
    cfg.n = o.n;
    cfg.seed = o.seed;
    cfg.min_tokens = o.min_tokens;
    cfg.max_tokens = o.max_tokens;
    cfg.uncertainty_slope = o.uncertainty_slope;
    cfg.quality_slope = o.quality_slope;
    cfg.signal_strength = o.signal_strength;
    cfg.noise_sigma = o.noise_sigma;
    cfg.label = o.label;
    const auto data = generate_synth(cfg);

    std::string sidecar_path = o.sidecar;
    if (sidecar_path.empty()) {
        fs::path p(o.output);
        sidecar_path = (p.parent_path() / (p.stem().string() + ".sidecar.jsonl")).string();
    }

    auto out = open_output(o.output);
    write_records(out, data.records);
    out.close();
    auto side = open_output(sidecar_path);
    write_sidecar(side, data.sidecar);
    side.close();

    run_manifest m;
    m.command = "synth";
    m.tool_version = tool_version;
    m.inputs = {};
    m.flags = {{"n", std::to_string(o.n)},
               {"min-tokens", std::to_string(o.min_tokens)},
               {"max-tokens", std::to_string(o.max_tokens)},
               {"uncertainty-slope", fmt17(o.uncertainty_slope)},
               {"quality-slope", fmt17(o.quality_slope)},
               {"signal-strength", fmt17(o.signal_strength)},
               {"noise-sigma", fmt17(o.noise_sigma)},
               {"label", o.label}};
    m.seed = o.seed;
    m.outputs = {o.output, sidecar_path};
    write_manifest(m, o.output);
}

// Applies a TOML config after the command line and environment have been
// parsed: an option already set by either keeps its value, so the layering is
// command line > environment > config file. Sections for subcommands other
// than the invoked one are skipped; unknown sections or keys are errors.
void apply_config(CLI::App& app, const std::string& path) {
    if (!fs::exists(path)) throw missing_input_error(path);
    const auto items = CLI::ConfigTOML{}.from_file(path);
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section open/close markers
        CLI::App* target = &app;
        for (const auto& parent : item.parents) {
            CLI::App* next = target->get_subcommand_no_throw(parent);
            if (next == nullptr)
                throw std::invalid_argument("config: unknown section [" + item.fullname() + "]");
            target = next;
        }
        if (target != &app && !target->parsed()) continue;
        auto* opt = target->get_option_no_throw(
            item.name.size() == 1 ? "-" + item.name : "--" + item.name);
        if (opt == nullptr)
            throw std::invalid_argument("config: unknown option '" + item.fullname() + "'");
        if (opt == target->get_help_ptr() || opt == target->get_version_ptr() ||
            opt->get_name() == "--config")
            throw std::invalid_argument("config: '" + item.fullname() +
                                        "' cannot be set from a file");
        if (opt->count() > 0) continue;
        for (const auto& input : item.inputs) opt->add_result(input);
        opt->run_callback();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"length-bias diagnostics and debiasing for sequence-level uncertainty scores"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);
    std::string config_path;
    app.add_option("--config", config_path, "TOML file with option defaults")
        ->envname("UQLINE_CONFIG");

    const CLI::Validator quality_dir_values =
        CLI::IsMember({"higher-better", "lower-better"});
    const CLI::Validator split_values = CLI::IsMember({"train", "test", "all"});
    const CLI::Validator degree_values = CLI::IsMember({1, 2, 3});

    // subcommands inherit this at creation: app-level options (--config)
    // then also work after the subcommand name
    app.fallthrough(true);

    measures_opts mo;
    auto* measures_cmd = app.add_subcommand("measures", "compute uncertainty scores from a JSONL log");
    measures_cmd->add_option("--input", mo.input, "JSONL generation log (required)");
    measures_cmd->add_option("--output", mo.output, "scores CSV path (required)");
    measures_cmd->add_option("--measures", mo.measures, "comma-separated measure names")
        ->delimiter(',')
        ->envname("UQLINE_MEASURES");
    measures_cmd->add_option("--quality-direction", mo.quality_dir, "how logged quality is oriented")
        ->check(quality_dir_values)
        ->envname("UQLINE_QUALITY_DIRECTION");
    measures_cmd->add_flag("--strict", mo.strict, "fail on any unscorable (record, measure) pair");

    trends_opts to;
    auto* trends_cmd = app.add_subcommand("trends", "length-trend report and figures for scores");
    trends_cmd->add_option("--scores", to.scores, "scores CSV from the measures command (required)");
    trends_cmd->add_option("--records", to.records, "optional JSONL log, adds the quality trend");
    trends_cmd->add_option("--output", to.output, "trend report JSON path (required)");
    trends_cmd->add_option("--bins", to.bins, "number of equal-width length bins")
        ->envname("UQLINE_BINS");
    trends_cmd->add_option("--degree", to.degree, "trend polynomial degree")
        ->check(degree_values)
        ->envname("UQLINE_DEGREE");
    trends_cmd->add_option("--fit-on", to.fit_on, "fit on raw points or bin means")
        ->check(CLI::IsMember({"raw", "bins"}))
        ->envname("UQLINE_FIT_ON");
    trends_cmd->add_option("--svg-dir", to.svg_dir, "directory for trend figures");
    trends_cmd->add_option("--quality-direction", to.quality_dir, "how logged quality is oriented")
        ->check(quality_dir_values)
        ->envname("UQLINE_QUALITY_DIRECTION");

    fit_opts fo;
    auto* fit_cmd = app.add_subcommand("fit", "fit a length-debias model on the train split");
    fit_cmd->add_option("--input", fo.input, "JSONL generation log (required)");
    fit_cmd->add_option("--output", fo.output, "model JSON path (required)");
    fit_cmd->add_option("--measure", fo.measure_name, "measure to debias");
    fit_cmd->add_option("--mode", fo.mode, "debias mode")
        ->check(CLI::IsMember({"unsupervised", "quality-aware"}))
        ->envname("UQLINE_MODE");
    fit_cmd->add_option("--degree", fo.degree, "trend polynomial degree")
        ->check(degree_values)
        ->envname("UQLINE_DEGREE");
    fit_cmd->add_option("--train-frac", fo.train_frac, "fraction of records in the train split")
        ->envname("UQLINE_TRAIN_FRAC");
    fit_cmd->add_option("--seed", fo.seed, "split shuffle seed")->envname("UQLINE_SEED");
    fit_cmd->add_option("--quality-direction", fo.quality_dir, "how logged quality is oriented")
        ->check(quality_dir_values)
        ->envname("UQLINE_QUALITY_DIRECTION");

    apply_opts ao;
    auto* apply_cmd = app.add_subcommand("apply", "debias scores with a fitted model");
    apply_cmd->add_option("--scores", ao.scores, "scores CSV to debias (required)");
    apply_cmd->add_option("--model", ao.model, "model JSON from the fit command (required)");
    apply_cmd->add_option("--output", ao.output, "debiased scores CSV path (required)");
    apply_cmd->add_option("--input", ao.input, "JSONL log, required when --split is train or test");
    apply_cmd->add_option("--split", ao.split, "which half of the split to keep")
        ->check(split_values);
    apply_cmd->add_option("--train-frac", ao.train_frac, "fraction used at fit time")
        ->envname("UQLINE_TRAIN_FRAC");
    apply_cmd->add_option("--seed", ao.seed, "seed used at fit time")->envname("UQLINE_SEED");
    apply_cmd->add_option("--quality-direction", ao.quality_dir, "how logged quality is oriented")
        ->check(quality_dir_values)
        ->envname("UQLINE_QUALITY_DIRECTION");

    prr_opts po;
    auto* prr_cmd = app.add_subcommand("prr", "rejection-ratio evaluation of scores against quality");
    prr_cmd->add_option("--scores", po.scores, "scores CSV, raw or debiased (required)");
    prr_cmd->add_option("--input", po.input, "JSONL log carrying quality (required)");
    prr_cmd->add_option("--output", po.output, "PRR rows JSON path (required)");
    prr_cmd->add_option("--mode", po.mode, "label for these scores in the output")
        ->check(CLI::IsMember({"raw", "unsupervised", "quality-aware"}));
    prr_cmd->add_option("--split", po.split, "evaluate only one half of the split")
        ->check(split_values);
    prr_cmd->add_option("--train-frac", po.train_frac, "fraction used at fit time")
        ->envname("UQLINE_TRAIN_FRAC");
    prr_cmd->add_option("--seed", po.seed, "seed used at fit time")->envname("UQLINE_SEED");
    prr_cmd->add_option("--quality-direction", po.quality_dir, "how logged quality is oriented")
        ->check(quality_dir_values)
        ->envname("UQLINE_QUALITY_DIRECTION");

    report_opts ro;
    auto* report_cmd = app.add_subcommand("report", "join base and debiased PRR rows into a table");
    report_cmd->add_option("--base", ro.base, "PRR JSON for the raw scores (required)");
    report_cmd->add_option("--line", ro.line, "PRR JSON for the debiased scores (required)");
    report_cmd->add_option("--output", ro.output, "report CSV path (required)");
    report_cmd->add_option("--json", ro.json_output, "optional report JSON path");

    synth_opts so;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic log with planted trends");
    synth_cmd->add_option("--output", so.output, "records JSONL path (required)");
    synth_cmd->add_option("--sidecar", so.sidecar, "sidecar JSONL path (default: <output stem>.sidecar.jsonl)");
    synth_cmd->add_option("--n", so.n, "number of records");
    synth_cmd->add_option("--seed", so.seed, "generator seed")->envname("UQLINE_SEED");
    synth_cmd->add_option("--min-tokens", so.min_tokens, "minimum output length");
    synth_cmd->add_option("--max-tokens", so.max_tokens, "maximum output length");
    synth_cmd->add_option("--uncertainty-slope", so.uncertainty_slope, "planted length trend");
    synth_cmd->add_option("--quality-slope", so.quality_slope, "planted quality-length trend");
    synth_cmd->add_option("--signal-strength", so.signal_strength,
                          "how much latent difficulty quality reflects");
    synth_cmd->add_option("--noise-sigma", so.noise_sigma, "iid noise on the planted score");
    synth_cmd->add_option("--label", so.label, "dataset tag and record id prefix");

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) apply_config(app, config_path);
        if (*measures_cmd)
            run_measures(mo);
        else if (*trends_cmd)
            run_trends(to);
        else if (*fit_cmd)
            run_fit(fo);
        else if (*apply_cmd)
            run_apply(ao);
        else if (*prr_cmd)
            run_prr(po);
        else if (*report_cmd)
            run_report(ro);
        else if (*synth_cmd)
            run_synth(so);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    } catch (const missing_input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 66;
    } catch (const schema_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
