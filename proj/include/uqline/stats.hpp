#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uqline {

struct trend_fit {
    std::vector<double> coefficients;  // ascending powers; [1] is the slope term
    double slope_se = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    double r_squared = 0.0;
    std::size_t n = 0;
    int degree = 1;

    double slope() const { return coefficients.size() > 1 ? coefficients[1] : 0.0; }
    double predict(double x) const;
};

// least-squares polynomial fit via the normal equations. the response is
// centered internally (fit y - ybar, restore ybar into the intercept) so a
// constant response yields exactly zero slope coefficients. requires
// n >= degree + 2 so the variance estimate has at least one dof.
trend_fit ols_polyfit(std::span<const double> x, std::span<const double> y, int degree);

// two-sided p-value for a t statistic with the given degrees of freedom:
// p = I_{v/(v+t^2)}(v/2, 1/2)
double wald_p_value(double t, double dof);

// regularized incomplete beta I_x(a, b), continued fraction (modified Lentz)
double incomplete_beta(double a, double b, double x);

enum class fit_basis { raw, bins };

struct binned_trend_result {
    std::vector<double> bin_centers;       // on the normalized [0, 1] axis
    std::vector<double> bin_means;         // NaN where a bin is empty
    std::vector<std::size_t> bin_counts;
    trend_fit fit;                         // over normalized lengths
    double length_min = 0.0;
    double length_max = 0.0;
};

// equal-width bins over min-max normalized lengths plus a trend fit, either on
// the raw normalized points or on the non-empty bin means
binned_trend_result binned_trend(std::span<const double> lengths, std::span<const double> values,
                                 int n_bins, fit_basis basis, int degree = 1);

// min-max normalization to [0, 1]; a degenerate range (all equal) is a data error
std::vector<double> normalize_lengths(std::span<const double> lengths);

}  // namespace uqline
