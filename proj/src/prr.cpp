#include "uqline/prr.hpp"

#include "uqline/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace uqline {

std::vector<pr_point> pr_curve(std::span<const double> uncertainties,
                               std::span<const double> qualities) {
    if (uncertainties.size() != qualities.size())
        throw std::invalid_argument("pr_curve: uncertainty and quality sizes differ");
    const std::size_t n = uncertainties.size();
    if (n == 0) throw std::invalid_argument("pr_curve: empty input");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(uncertainties[i]) || !std::isfinite(qualities[i]))
            throw data_error("pr_curve: non-finite value at index " + std::to_string(i));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // most uncertain first; ties broken by original position so the curve does
    // not depend on sort internals
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (uncertainties[i] != uncertainties[j]) return uncertainties[i] > uncertainties[j];
        return i < j;
    });

    double total = 0.0;
    for (double q : qualities) total += q;

    std::vector<pr_point> curve(n);
    double rejected = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        curve[k] = {static_cast<double>(k) / static_cast<double>(n),
                    (total - rejected) / static_cast<double>(n - k)};
        rejected += qualities[order[k]];
    }
    return curve;
}

double curve_auc(std::span<const pr_point> curve) {
    if (curve.empty()) throw std::invalid_argument("curve_auc: empty curve");
    double total = 0.0;
    for (const auto& p : curve) total += p.retained_mean;
    return total / static_cast<double>(curve.size());
}

prr_result prr(std::span<const double> uncertainties, std::span<const double> qualities) {
    const auto curve = pr_curve(uncertainties, qualities);

    bool all_equal = true;
    for (std::size_t i = 1; i < qualities.size(); ++i)
        if (qualities[i] != qualities[0]) {
            all_equal = false;
            break;
        }
    if (all_equal)
        throw data_error("prr: all qualities identical, ranking value is undefined");

    prr_result out;
    out.n = qualities.size();
    out.auc_unc = curve_auc(curve);

    double total = 0.0;
    for (double q : qualities) total += q;
    out.auc_random = total / static_cast<double>(qualities.size());

    std::vector<double> oracle(qualities.size());
    for (std::size_t i = 0; i < qualities.size(); ++i) oracle[i] = -qualities[i];
    out.auc_oracle = curve_auc(pr_curve(oracle, qualities));

    out.prr = (out.auc_unc - out.auc_random) / (out.auc_oracle - out.auc_random);
    return out;
}

prr_comparison compare_prr(std::span<const measure_score> base,
                           std::span<const measure_score> line,
                           const std::map<std::string, double>& quality_by_id) {
    if (base.size() != line.size())
        throw schema_error("compare_prr: base has " + std::to_string(base.size()) +
                           " scores, line has " + std::to_string(line.size()));

    std::map<std::string, double> line_by_id;
    for (const auto& s : line)
        if (!line_by_id.emplace(s.record_id, s.value).second)
            throw schema_error("compare_prr: duplicate line score for record '" + s.record_id + "'");

    std::vector<double> u_base;
    std::vector<double> u_line;
    std::vector<double> q;
    u_base.reserve(base.size());
    u_line.reserve(base.size());
    q.reserve(base.size());
    for (const auto& s : base) {
        const auto it = line_by_id.find(s.record_id);
        if (it == line_by_id.end())
            throw schema_error("compare_prr: record '" + s.record_id + "' missing from line scores");
        const auto qt = quality_by_id.find(s.record_id);
        if (qt == quality_by_id.end())
            throw data_error("compare_prr: record '" + s.record_id + "' has no quality");
        u_base.push_back(s.value);
        u_line.push_back(it->second);
        q.push_back(qt->second);
    }

    prr_comparison out;
    out.n = q.size();
    out.prr_base = prr(u_base, q).prr;
    out.prr_line = prr(u_line, q).prr;
    out.delta = out.prr_line - out.prr_base;
    out.improved = out.delta > 0.0;
    return out;
}

}  // namespace uqline
