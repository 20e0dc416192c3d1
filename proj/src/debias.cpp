#include "uqline/debias.hpp"

#include "uqline/errors.hpp"
#include "uqline/hash.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uqline {

using json = nlohmann::json;

std::string_view mode_name(debias_mode m) {
    switch (m) {
        case debias_mode::unsupervised: return "unsupervised";
        case debias_mode::quality_aware: return "quality-aware";
    }
    throw std::invalid_argument("mode_name: bad enum value");
}

debias_mode mode_from_name(std::string_view name) {
    if (name == "unsupervised") return debias_mode::unsupervised;
    if (name == "quality-aware") return debias_mode::quality_aware;
    throw std::invalid_argument("unknown mode '" + std::string(name) +
                                "' (expected unsupervised or quality-aware)");
}

length_norm norm_from_lengths(std::span<const double> lengths) {
    if (lengths.empty()) throw std::invalid_argument("norm_from_lengths: empty input");
    double lo = lengths[0];
    double hi = lengths[0];
    for (double v : lengths) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi)
        throw data_error("degenerate length range: all training lengths equal " + std::to_string(lo));
    return {lo, hi};
}

trend_fit fit_uncertainty_trend(std::span<const measure_score> scores, int degree,
                                const length_norm& norm) {
    std::vector<double> x(scores.size());
    std::vector<double> y(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        x[i] = norm(static_cast<double>(scores[i].length));
        y[i] = scores[i].value;
    }
    return ols_polyfit(x, y, degree);
}

trend_fit fit_quality_trend(std::span<const std::pair<double, double>> length_quality, int degree,
                            const length_norm& norm) {
    std::vector<double> x(length_quality.size());
    std::vector<double> y(length_quality.size());
    for (std::size_t i = 0; i < length_quality.size(); ++i) {
        x[i] = norm(length_quality[i].first);
        y[i] = length_quality[i].second;
    }
    return ols_polyfit(x, y, degree);
}

double debias_unsupervised(double value, double length, const trend_fit& u_fit,
                           const length_norm& norm) {
    return value - u_fit.predict(norm(length));
}

double debias_quality_aware(double value, double length, const trend_fit& u_fit,
                            const trend_fit& q_fit, const length_norm& norm) {
    if (q_fit.degree != u_fit.degree)
        throw schema_error("debias: quality fit degree " + std::to_string(q_fit.degree) +
                           " differs from uncertainty fit degree " + std::to_string(u_fit.degree));
    const double z = norm(length);
    return value - u_fit.predict(z) - q_fit.predict(z);
}

debias_model fit_line_model(const std::vector<generation_record>& train, measure kind,
                            debias_mode mode, int degree, std::uint64_t seed) {
    if (degree < 1 || degree > 3) throw std::invalid_argument("fit_line_model: degree must be 1, 2 or 3");
    if (train.empty()) throw std::invalid_argument("fit_line_model: no training records");

    const measure wanted[] = {kind};
    const auto scored = compute_scores(train, wanted, /*strict=*/true);

    std::vector<double> lengths(scored.scores.size());
    for (std::size_t i = 0; i < scored.scores.size(); ++i)
        lengths[i] = static_cast<double>(scored.scores[i].length);

    debias_model model;
    model.kind = kind;
    model.mode = mode;
    model.degree = degree;
    model.norm = norm_from_lengths(lengths);
    model.uncertainty_fit = fit_uncertainty_trend(scored.scores, degree, model.norm);

    if (mode == debias_mode::quality_aware) {
        std::vector<std::pair<double, double>> lq;
        lq.reserve(train.size());
        std::size_t missing = 0;
        std::string first_missing;
        for (const auto& rec : train) {
            if (rec.quality) {
                lq.emplace_back(static_cast<double>(rec.length()), *rec.quality);
            } else {
                if (missing == 0) first_missing = rec.id;
                ++missing;
            }
        }
        if (missing > 0)
            throw data_error("quality-aware fit: " + std::to_string(missing) +
                             " training records lack quality (first: '" + first_missing + "')");
        model.quality_fit = fit_quality_trend(lq, degree, model.norm);
    }

    model.train_ids_hash = to_hex64(ids_hash(train));
    model.seed = seed;
    return model;
}

apply_result apply_line_model(const debias_model& model, std::span<const measure_score> scores) {
    if (model.mode == debias_mode::quality_aware && !model.quality_fit)
        throw schema_error("apply: quality-aware model has no quality fit");

    apply_result out;
    out.scores.reserve(scores.size());
    for (const auto& s : scores) {
        if (s.kind != model.kind)
            throw schema_error("apply: score measure '" + std::string(measure_name(s.kind)) +
                               "' does not match model measure '" + std::string(measure_name(model.kind)) + "'");
        const auto len = static_cast<double>(s.length);
        if (!model.norm.in_range(len)) ++out.extrapolated;
        const double v = model.mode == debias_mode::unsupervised
                             ? debias_unsupervised(s.value, len, model.uncertainty_fit, model.norm)
                             : debias_quality_aware(s.value, len, model.uncertainty_fit,
                                                    *model.quality_fit, model.norm);
        out.scores.push_back({s.record_id, s.kind, s.length, v});
    }
    return out;
}

namespace {

json fit_to_json(const trend_fit& f) {
    json j;
    j["coefficients"] = f.coefficients;
    j["slope_se"] = f.slope_se;
    j["t_stat"] = f.t_stat;
    j["p_value"] = f.p_value;
    j["r_squared"] = f.r_squared;
    j["n"] = f.n;
    j["degree"] = f.degree;
    return j;
}

trend_fit fit_from_json(const json& j) {
    trend_fit f;
    f.coefficients = j.at("coefficients").get<std::vector<double>>();
    f.slope_se = j.at("slope_se").get<double>();
    f.t_stat = j.at("t_stat").get<double>();
    f.p_value = j.at("p_value").get<double>();
    f.r_squared = j.at("r_squared").get<double>();
    f.n = j.at("n").get<std::size_t>();
    f.degree = j.at("degree").get<int>();
    if (f.coefficients.size() != static_cast<std::size_t>(f.degree) + 1)
        throw schema_error("model fit has " + std::to_string(f.coefficients.size()) +
                           " coefficients for degree " + std::to_string(f.degree));
    return f;
}

}  // namespace

std::string model_to_json(const debias_model& model) {
    json j;
    j["version"] = 1;
    j["measure"] = std::string(measure_name(model.kind));
    j["mode"] = std::string(mode_name(model.mode));
    j["degree"] = model.degree;
    j["length_norm"] = {{"min", model.norm.min}, {"max", model.norm.max}};
    j["uncertainty_fit"] = fit_to_json(model.uncertainty_fit);
    if (model.quality_fit) j["quality_fit"] = fit_to_json(*model.quality_fit);
    j["provenance"] = {{"train_ids_hash", model.train_ids_hash}, {"seed", model.seed}};
    return j.dump(2) + "\n";
}

debias_model model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw schema_error(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (!j.contains("version") || !j.at("version").is_number_integer())
            throw schema_error("model file has no integer version field");
        const auto version = j.at("version").get<int>();
        if (version != 1)
            throw schema_error("unsupported model version " + std::to_string(version) + ", expected 1");

        debias_model model;
        try {
            model.kind = measure_from_name(j.at("measure").get<std::string>());
            model.mode = mode_from_name(j.at("mode").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw schema_error(e.what());
        }
        model.degree = j.at("degree").get<int>();
        model.norm.min = j.at("length_norm").at("min").get<double>();
        model.norm.max = j.at("length_norm").at("max").get<double>();
        if (!(model.norm.max > model.norm.min))
            throw schema_error("model length_norm is degenerate");
        model.uncertainty_fit = fit_from_json(j.at("uncertainty_fit"));
        if (j.contains("quality_fit")) model.quality_fit = fit_from_json(j.at("quality_fit"));
        if (model.mode == debias_mode::quality_aware && !model.quality_fit)
            throw schema_error("quality-aware model is missing quality_fit");
        model.train_ids_hash = j.at("provenance").at("train_ids_hash").get<std::string>();
        model.seed = j.at("provenance").at("seed").get<std::uint64_t>();
        return model;
    } catch (const json::exception& e) {
        throw schema_error(std::string("model file is missing fields: ") + e.what());
    }
}

debias_model load_model(const std::string& path) {
    if (!std::filesystem::exists(path)) throw missing_input_error(path);
    std::ifstream in(path);
    if (!in) throw data_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return model_from_json(buf.str());
    } catch (const schema_error& e) {
        throw schema_error(path + ": " + e.what());
    }
}

void save_model(const std::string& path, const debias_model& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write " + path);
    out << model_to_json(model);
}

}  // namespace uqline
