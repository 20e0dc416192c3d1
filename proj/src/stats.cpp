#include "uqline/stats.hpp"

#include "uqline/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uqline {

double trend_fit::predict(double x) const {
    double acc = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 0;) acc = acc * x + coefficients[k];
    return acc;
}

namespace {

// continued fraction for the incomplete beta, modified Lentz
// (Numerical Recipes 6.4)
double betacf(double a, double b, double x) {
    constexpr int max_iter = 500;
    constexpr double eps = 1e-14;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta: x must be in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    // the symmetry relation keeps the fraction in its fast-converging region
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double wald_p_value(double t, double dof) {
    if (!(dof >= 1.0)) throw std::invalid_argument("wald_p_value: dof must be >= 1");
    if (!std::isfinite(t)) throw std::invalid_argument("wald_p_value: t must be finite");
    return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

trend_fit ols_polyfit(std::span<const double> x, std::span<const double> y, int degree) {
    if (degree < 1) throw std::invalid_argument("ols_polyfit: degree must be >= 1");
    if (x.size() != y.size()) throw std::invalid_argument("ols_polyfit: x and y sizes differ");
    const std::size_t n = x.size();
    const std::size_t m = static_cast<std::size_t>(degree) + 1;
    if (n < m + 1)
        throw data_error("ols_polyfit: need at least " + std::to_string(m + 1) + " points for degree " +
                         std::to_string(degree) + ", got " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw data_error("ols_polyfit: non-finite input at index " + std::to_string(i));

    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(n);

    // normal equations on the centered response, X^T X c = X^T (y - ybar)
    std::vector<double> moments(2 * m - 1, 0.0);  // sums of x^k
    std::vector<double> rhs(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double yc = y[i] - y_mean;
        double xp = 1.0;
        for (std::size_t k = 0; k < moments.size(); ++k) {
            moments[k] += xp;
            if (k < m) rhs[k] += xp * yc;
            xp *= x[i];
        }
    }

    // gauss-jordan with partial pivoting on [X^T X | I]; the inverse is needed
    // anyway for the slope standard error
    std::vector<std::vector<double>> aug(m, std::vector<double>(2 * m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) aug[i][j] = moments[i + j];
        aug[i][m + i] = 1.0;
    }
    double max_moment = 1.0;
    for (double v : moments) max_moment = std::max(max_moment, std::fabs(v));
    const double tol = 1e-12 * max_moment;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::fabs(aug[r][col]) > std::fabs(aug[pivot][col])) pivot = r;
        if (std::fabs(aug[pivot][col]) < tol)
            throw data_error("ols_polyfit: singular design, need more distinct x values than degree " +
                             std::to_string(degree));
        std::swap(aug[col], aug[pivot]);
        const double inv_pivot = 1.0 / aug[col][col];
        for (double& v : aug[col]) v *= inv_pivot;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = aug[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < 2 * m; ++j) aug[r][j] -= f * aug[col][j];
        }
    }

    trend_fit fit;
    fit.degree = degree;
    fit.n = n;
    fit.coefficients.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) fit.coefficients[i] += aug[i][m + j] * rhs[j];
    fit.coefficients[0] += y_mean;

    double sse = 0.0;
    double sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.predict(x[i]);
        const double c = y[i] - y_mean;
        sse += r * r;
        sst += c * c;
    }
    fit.r_squared = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 1.0;

    const double slope = fit.coefficients[1];
    if (sst == 0.0 || sse < 1e-12 * sst) {
        // exact fit: the residual variance estimate collapses and the usual t
        // statistic is undefined; report certainty and keep everything finite
        fit.slope_se = 0.0;
        fit.t_stat = 0.0;
        fit.p_value = slope != 0.0 ? 0.0 : 1.0;
    } else {
        const double dof = static_cast<double>(n - m);
        const double sigma2 = sse / dof;
        fit.slope_se = std::sqrt(sigma2 * aug[1][m + 1]);
        fit.t_stat = slope / fit.slope_se;
        fit.p_value = wald_p_value(fit.t_stat, dof);
    }
    return fit;
}

std::vector<double> normalize_lengths(std::span<const double> lengths) {
    if (lengths.empty()) throw std::invalid_argument("normalize_lengths: empty input");
    const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());
    if (*lo == *hi)
        throw data_error("normalize_lengths: degenerate length range, all values equal " +
                         std::to_string(*lo));
    std::vector<double> out(lengths.size());
    const double span = *hi - *lo;
    for (std::size_t i = 0; i < lengths.size(); ++i) out[i] = (lengths[i] - *lo) / span;
    return out;
}

binned_trend_result binned_trend(std::span<const double> lengths, std::span<const double> values,
                                 int n_bins, fit_basis basis, int degree) {
    if (n_bins < 2) throw std::invalid_argument("binned_trend: n_bins must be >= 2");
    if (lengths.size() != values.size()) throw std::invalid_argument("binned_trend: size mismatch");

    const auto norm = normalize_lengths(lengths);
    const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());

    binned_trend_result out;
    out.length_min = *lo;
    out.length_max = *hi;
    const auto nb = static_cast<std::size_t>(n_bins);
    out.bin_centers.resize(nb);
    out.bin_means.assign(nb, std::numeric_limits<double>::quiet_NaN());
    out.bin_counts.assign(nb, 0);
    std::vector<double> sums(nb, 0.0);
    for (std::size_t i = 0; i < norm.size(); ++i) {
        const auto b = std::min(nb - 1, static_cast<std::size_t>(norm[i] * n_bins));
        sums[b] += values[i];
        ++out.bin_counts[b];
    }
    for (std::size_t b = 0; b < nb; ++b) {
        out.bin_centers[b] = (static_cast<double>(b) + 0.5) / n_bins;
        if (out.bin_counts[b] > 0) out.bin_means[b] = sums[b] / static_cast<double>(out.bin_counts[b]);
    }

    if (basis == fit_basis::raw) {
        out.fit = ols_polyfit(norm, values, degree);
    } else {
        std::vector<double> cx;
        std::vector<double> cy;
        for (std::size_t b = 0; b < nb; ++b) {
            if (out.bin_counts[b] == 0) continue;
            cx.push_back(out.bin_centers[b]);
            cy.push_back(out.bin_means[b]);
        }
        if (cx.size() < static_cast<std::size_t>(degree) + 2)
            throw data_error("binned_trend: only " + std::to_string(cx.size()) +
                             " non-empty bins, need degree + 2 to fit on bin means");
        out.fit = ols_polyfit(cx, cy, degree);
    }
    return out;
}

}  // namespace uqline
