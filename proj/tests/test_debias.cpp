#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uqline/debias.hpp"
#include "uqline/errors.hpp"
#include "uqline/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace uqline;

namespace {

std::vector<measure_score> linear_scores(double intercept, double slope, std::size_t n) {
    // lengths 10 .. 10 + n - 1, values exactly linear in normalized length
    std::vector<measure_score> scores;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = static_cast<double>(i) / static_cast<double>(n - 1);
        scores.push_back({"r" + std::to_string(i), measure::msp, 10 + i, intercept + slope * z});
    }
    return scores;
}

trend_fit refit(std::span<const measure_score> scores, const length_norm& norm, int degree) {
    return fit_uncertainty_trend(scores, degree, norm);
}

}  // namespace

TEST_CASE("norm_from_lengths freezes the training range") {
    const std::vector<double> lengths = {10, 40, 110};
    const auto norm = norm_from_lengths(lengths);
    CHECK(norm.min == 10.0);
    CHECK(norm.max == 110.0);
    CHECK(norm(10.0) == 0.0);
    CHECK(norm(110.0) == 1.0);
    CHECK(norm(60.0) == 0.5);
    CHECK(norm(210.0) == 2.0);  // extrapolates, no clamping
    CHECK_FALSE(norm.in_range(210.0));
    CHECK(norm.in_range(110.0));

    const std::vector<double> flat = {5, 5};
    CHECK_THROWS_AS((void)norm_from_lengths(flat), data_error);
}

TEST_CASE("fit_uncertainty_trend recovers an exact linear trend") {
    const auto scores = linear_scores(1.0, 3.0, 50);
    std::vector<double> lengths;
    for (const auto& s : scores) lengths.push_back(static_cast<double>(s.length));
    const auto norm = norm_from_lengths(lengths);
    const auto fit = fit_uncertainty_trend(scores, 1, norm);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.p_value == 0.0);  // exact fit with a nonzero slope
}

TEST_CASE("debias_unsupervised subtracts the fitted trend value") {
    trend_fit u_fit;
    u_fit.coefficients = {0.5, 0.75};
    u_fit.degree = 1;
    const length_norm norm{0.0, 100.0};
    // at length 100: predicted 0.5 + 0.75 = 1.25
    CHECK(debias_unsupervised(2.0, 100.0, u_fit, norm) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("debias_quality_aware subtracts both trends and checks the basis") {
    trend_fit u_fit;
    u_fit.coefficients = {0.5, 0.75};
    u_fit.degree = 1;
    trend_fit q_fit;
    q_fit.coefficients = {0.25, 0.25};
    q_fit.degree = 1;
    const length_norm norm{0.0, 100.0};
    CHECK(debias_quality_aware(2.0, 100.0, u_fit, q_fit, norm) ==
          doctest::Approx(0.25).epsilon(1e-15));

    trend_fit q2 = q_fit;
    q2.degree = 2;
    q2.coefficients = {0.25, 0.25, 0.0};
    CHECK_THROWS_AS((void)debias_quality_aware(2.0, 100.0, u_fit, q2, norm), schema_error);
}

TEST_CASE("fit_quality_trend on constant quality has an exactly zero slope") {
    std::vector<std::pair<double, double>> lq;
    for (int i = 0; i < 30; ++i) lq.emplace_back(10.0 + i, 0.5);
    const auto norm = norm_from_lengths(std::vector<double>{10.0, 39.0});
    const auto fit = fit_quality_trend(lq, 2, norm);
    CHECK(fit.coefficients[0] == 0.5);
    CHECK(fit.coefficients[1] == 0.0);  // exact, not approximately
    CHECK(fit.coefficients[2] == 0.0);
}

TEST_CASE("fit_quality_trend recovers an exact linear quality trend") {
    std::vector<std::pair<double, double>> lq;
    for (int i = 0; i < 40; ++i) {
        const double z = i / 39.0;
        lq.emplace_back(20.0 + i, 0.8 - 0.2 * z);
    }
    const auto norm = norm_from_lengths(std::vector<double>{20.0, 59.0});
    const auto fit = fit_quality_trend(lq, 1, norm);
    CHECK(fit.coefficients[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(-0.2).epsilon(1e-12));
}

TEST_CASE("fit_line_model recovers a planted spurious trend") {
    synth_config cfg;
    cfg.n = 2000;
    cfg.seed = 7;
    cfg.uncertainty_slope = 0.3;
    cfg.quality_slope = 0.0;
    cfg.signal_strength = 1.0;
    cfg.noise_sigma = 0.05;
    const auto data = generate_synth(cfg);

    const auto model = fit_line_model(data.records, measure::msp, debias_mode::unsupervised, 1, 7);
    CHECK(model.uncertainty_fit.slope() == doctest::Approx(0.3).epsilon(0.07));
    CHECK(std::fabs(model.uncertainty_fit.slope() - 0.3) <= 3.0 * model.uncertainty_fit.slope_se);
    CHECK(model.uncertainty_fit.p_value < 1e-6);
    CHECK_FALSE(model.quality_fit.has_value());
    CHECK(model.train_ids_hash.size() == 16);
    CHECK(model.seed == 7);
}

TEST_CASE("apply_line_model zeroes the training trend") {
    synth_config cfg;
    cfg.n = 1500;
    cfg.seed = 21;
    cfg.uncertainty_slope = 0.4;
    cfg.noise_sigma = 0.05;
    const auto data = generate_synth(cfg);

    const auto model = fit_line_model(data.records, measure::msp, debias_mode::unsupervised, 1, 21);
    const measure wanted[] = {measure::msp};
    const auto scored = compute_scores(data.records, wanted, true);
    const auto result = apply_line_model(model, scored.scores);
    REQUIRE(result.scores.size() == scored.scores.size());
    CHECK(result.extrapolated == 0);

    double max_abs = 0.0;
    for (const auto& s : scored.scores) max_abs = std::max(max_abs, std::fabs(s.value));
    const auto residual_fit = refit(result.scores, model.norm, 1);
    CHECK(std::fabs(residual_fit.slope()) <= 1e-8 * max_abs);
    // debiased residuals are centered as well
    double mean = 0.0;
    for (const auto& s : result.scores) mean += s.value;
    mean /= static_cast<double>(result.scores.size());
    CHECK(std::fabs(mean) <= 1e-8 * max_abs);
}

TEST_CASE("held-out residual trend is statistically flat") {
    synth_config cfg;
    cfg.n = 3000;
    cfg.seed = 7;
    cfg.uncertainty_slope = 0.3;
    cfg.noise_sigma = 0.05;
    const auto data = generate_synth(cfg);
    const auto split = split_dataset(data.records, 0.5, 7);

    const auto model = fit_line_model(split.train, measure::msp, debias_mode::unsupervised, 1, 7);
    const measure wanted[] = {measure::msp};
    const auto test_scores = compute_scores(split.test, wanted, true);
    const auto result = apply_line_model(model, test_scores.scores);

    const auto residual_fit = refit(result.scores, model.norm, 1);
    CHECK(std::fabs(residual_fit.slope()) <= 3.0 * residual_fit.slope_se);
}

TEST_CASE("quality-aware fit recovers a planted quality trend") {
    synth_config cfg;
    cfg.n = 2000;
    cfg.seed = 11;
    cfg.uncertainty_slope = 0.0;
    cfg.quality_slope = -0.25;
    cfg.signal_strength = 0.1;
    cfg.noise_sigma = 0.05;
    const auto data = generate_synth(cfg);

    const auto model = fit_line_model(data.records, measure::msp, debias_mode::quality_aware, 1, 11);
    REQUIRE(model.quality_fit.has_value());
    CHECK(model.quality_fit->slope() == doctest::Approx(-0.25).epsilon(0.08));
    CHECK(std::fabs(model.quality_fit->slope() + 0.25) <= 0.02);
}

TEST_CASE("quality-aware fit requires quality on every training record") {
    synth_config cfg;
    cfg.n = 20;
    cfg.seed = 3;
    auto data = generate_synth(cfg);
    data.records[4].quality.reset();
    data.records[9].quality.reset();
    CHECK_THROWS_WITH_AS(
        (void)fit_line_model(data.records, measure::msp, debias_mode::quality_aware, 1, 3),
        doctest::Contains(data.records[4].id.c_str()), data_error);
}

TEST_CASE("degree-2 fit leaves residuals orthogonal to both basis powers") {
    // records planted with a quadratic trend in normalized length
    std::vector<generation_record> records;
    const std::size_t n = 400;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = static_cast<double>(i) / static_cast<double>(n - 1);
        const double target = 5.0 + 2.0 * z - 3.0 * z * z;
        const std::size_t len = 10 + i;
        generation_record rec;
        rec.id = "q" + std::to_string(i);
        rec.output_text = "x";
        rec.token_logprobs.assign(len, -target / static_cast<double>(len));
        records.push_back(std::move(rec));
    }
    const auto model = fit_line_model(records, measure::msp, debias_mode::unsupervised, 2, 0);
    CHECK(model.uncertainty_fit.coefficients[0] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(model.uncertainty_fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(model.uncertainty_fit.coefficients[2] == doctest::Approx(-3.0).epsilon(1e-9));

    const measure wanted[] = {measure::msp};
    const auto scored = compute_scores(records, wanted, true);
    const auto result = apply_line_model(model, scored.scores);
    const auto residual_fit = refit(result.scores, model.norm, 2);
    CHECK(std::fabs(residual_fit.coefficients[1]) <= 1e-9);
    CHECK(std::fabs(residual_fit.coefficients[2]) <= 1e-9);
}

TEST_CASE("a constant shift in training scores leaves residuals unchanged") {
    auto scores = linear_scores(2.0, 1.5, 80);
    std::vector<double> lengths;
    for (const auto& s : scores) lengths.push_back(static_cast<double>(s.length));
    const auto norm = norm_from_lengths(lengths);

    const auto fit_a = fit_uncertainty_trend(scores, 1, norm);
    auto shifted = scores;
    for (auto& s : shifted) s.value += 42.0;
    const auto fit_b = fit_uncertainty_trend(shifted, 1, norm);

    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double ra = debias_unsupervised(scores[i].value, static_cast<double>(scores[i].length),
                                              fit_a, norm);
        const double rb = debias_unsupervised(shifted[i].value, static_cast<double>(shifted[i].length),
                                              fit_b, norm);
        CHECK(std::fabs(ra - rb) <= 1e-10);
    }
}

TEST_CASE("apply_line_model counts extrapolated lengths and checks the measure") {
    synth_config cfg;
    cfg.n = 200;
    cfg.seed = 17;
    cfg.min_tokens = 50;
    cfg.max_tokens = 150;
    const auto data = generate_synth(cfg);
    const auto model = fit_line_model(data.records, measure::msp, debias_mode::unsupervised, 1, 17);

    std::vector<measure_score> outside = {
        {"x1", measure::msp, 10, 8.0},   // below the trained range
        {"x2", measure::msp, 100, 8.0},  // inside
        {"x3", measure::msp, 500, 8.0},  // above
    };
    const auto result = apply_line_model(model, outside);
    CHECK(result.extrapolated == 2);
    // extrapolation still evaluates the line, no clamping
    const double z = model.norm(10.0);
    CHECK(result.scores[0].value ==
          doctest::Approx(8.0 - model.uncertainty_fit.predict(z)).epsilon(1e-12));

    std::vector<measure_score> wrong = {{"x", measure::ppl, 100, 1.0}};
    CHECK_THROWS_AS((void)apply_line_model(model, wrong), schema_error);

    CHECK(apply_line_model(model, {}).scores.empty());
}

TEST_CASE("model JSON round-trips every field") {
    synth_config cfg;
    cfg.n = 300;
    cfg.seed = 19;
    cfg.uncertainty_slope = 0.2;
    cfg.quality_slope = 0.1;
    cfg.signal_strength = 0.5;
    const auto data = generate_synth(cfg);
    const auto model = fit_line_model(data.records, measure::mte, debias_mode::quality_aware, 2, 19);

    const auto text = model_to_json(model);
    const auto back = model_from_json(text);
    CHECK(back.kind == model.kind);
    CHECK(back.mode == model.mode);
    CHECK(back.degree == model.degree);
    CHECK(back.norm.min == model.norm.min);
    CHECK(back.norm.max == model.norm.max);
    CHECK(back.uncertainty_fit.coefficients == model.uncertainty_fit.coefficients);
    CHECK(back.uncertainty_fit.slope_se == model.uncertainty_fit.slope_se);
    CHECK(back.uncertainty_fit.p_value == model.uncertainty_fit.p_value);
    CHECK(back.uncertainty_fit.r_squared == model.uncertainty_fit.r_squared);
    CHECK(back.uncertainty_fit.n == model.uncertainty_fit.n);
    REQUIRE(back.quality_fit.has_value());
    CHECK(back.quality_fit->coefficients == model.quality_fit->coefficients);
    CHECK(back.train_ids_hash == model.train_ids_hash);
    CHECK(back.seed == model.seed);
}

TEST_CASE("model JSON rejects version and shape mismatches") {
    synth_config cfg;
    cfg.n = 50;
    cfg.seed = 2;
    const auto data = generate_synth(cfg);
    const auto model = fit_line_model(data.records, measure::msp, debias_mode::unsupervised, 1, 2);
    auto text = model_to_json(model);

    auto bumped = text;
    bumped.replace(bumped.find("\"version\": 1"), 12, "\"version\": 2");
    CHECK_THROWS_AS((void)model_from_json(bumped), schema_error);

    CHECK_THROWS_AS((void)model_from_json("{not json"), schema_error);
    CHECK_THROWS_AS((void)model_from_json("{\"version\": 1}"), schema_error);

    CHECK_THROWS_AS((void)load_model("/nonexistent/model.json"), missing_input_error);
}

TEST_CASE("fit_line_model validates its arguments") {
    synth_config cfg;
    cfg.n = 30;
    cfg.seed = 1;
    const auto data = generate_synth(cfg);
    CHECK_THROWS_AS((void)fit_line_model(data.records, measure::msp, debias_mode::unsupervised, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)fit_line_model(data.records, measure::msp, debias_mode::unsupervised, 4, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)fit_line_model({}, measure::msp, debias_mode::unsupervised, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("mode names round-trip") {
    CHECK(mode_from_name(mode_name(debias_mode::unsupervised)) == debias_mode::unsupervised);
    CHECK(mode_from_name(mode_name(debias_mode::quality_aware)) == debias_mode::quality_aware);
    CHECK_THROWS_AS((void)mode_from_name("supervised"), std::invalid_argument);
}
