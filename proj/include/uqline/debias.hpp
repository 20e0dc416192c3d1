#pragma once

#include "uqline/measures.hpp"
#include "uqline/stats.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace uqline {

enum class debias_mode { unsupervised, quality_aware };

std::string_view mode_name(debias_mode m);
debias_mode mode_from_name(std::string_view name);  // unknown name -> std::invalid_argument

// min-max mapping of raw lengths to [0, 1], frozen from the training split.
// test lengths outside [min, max] extrapolate without clamping.
struct length_norm {
    double min = 0.0;
    double max = 1.0;

    double operator()(double length) const { return (length - min) / (max - min); }
    bool in_range(double length) const { return length >= min && length <= max; }
};

length_norm norm_from_lengths(std::span<const double> lengths);

// length trend of an uncertainty score, fit on normalized lengths
trend_fit fit_uncertainty_trend(std::span<const measure_score> scores, int degree,
                                const length_norm& norm);

// length trend of the quality signal, same basis; points are (length, quality)
trend_fit fit_quality_trend(std::span<const std::pair<double, double>> length_quality, int degree,
                            const length_norm& norm);

// residual after removing the fitted length trend
double debias_unsupervised(double value, double length, const trend_fit& u_fit,
                           const length_norm& norm);

// residual after removing the length trend and the quality-explained trend;
// the two fits must share a degree
double debias_quality_aware(double value, double length, const trend_fit& u_fit,
                            const trend_fit& q_fit, const length_norm& norm);

struct debias_model {
    measure kind = measure::msp;
    debias_mode mode = debias_mode::unsupervised;
    int degree = 1;
    length_norm norm;
    trend_fit uncertainty_fit;
    std::optional<trend_fit> quality_fit;  // present iff mode is quality_aware
    std::string train_ids_hash;
    std::uint64_t seed = 0;
};

// fits the model on a training split: scores the measure, freezes the length
// normalization, fits the uncertainty trend and (quality-aware only) the
// quality trend. records lacking quality make the quality-aware fit a data
// error naming the first offender.
debias_model fit_line_model(const std::vector<generation_record>& train, measure kind,
                            debias_mode mode, int degree, std::uint64_t seed);

struct apply_result {
    std::vector<measure_score> scores;  // same ids and lengths, debiased values
    std::size_t extrapolated = 0;       // scores outside the trained length range
};

apply_result apply_line_model(const debias_model& model, std::span<const measure_score> scores);

// model file round-trip; version field is checked on load
std::string model_to_json(const debias_model& model);
debias_model model_from_json(const std::string& text);
debias_model load_model(const std::string& path);
void save_model(const std::string& path, const debias_model& model);

}  // namespace uqline
