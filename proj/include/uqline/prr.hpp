#pragma once

#include "uqline/measures.hpp"

#include <map>
#include <span>
#include <vector>

namespace uqline {

struct pr_point {
    double rejection_rate;
    double retained_mean;
};

// prediction-rejection curve: at step k the k most uncertain instances are
// rejected (ties broken by original index, ascending) and the mean quality of
// the rest is recorded. k runs from 0 to n - 1.
std::vector<pr_point> pr_curve(std::span<const double> uncertainties,
                               std::span<const double> qualities);

// rectangle-rule area: the mean of the retained-quality values
double curve_auc(std::span<const pr_point> curve);

struct prr_result {
    double prr = 0.0;
    double auc_unc = 0.0;
    double auc_oracle = 0.0;
    double auc_random = 0.0;
    std::size_t n = 0;
};

// prediction-rejection ratio: (auc_unc - auc_random) / (auc_oracle - auc_random),
// where the oracle rejects by worst quality first and random keeps the mean.
// 1 is oracle-grade ranking, 0 is uninformative, negative is harmful.
// identical qualities leave the ratio undefined and raise a data error.
prr_result prr(std::span<const double> uncertainties, std::span<const double> qualities);

struct prr_comparison {
    double prr_base = 0.0;
    double prr_line = 0.0;
    double delta = 0.0;
    bool improved = false;
    std::size_t n = 0;
};

// PRR of a raw measure against its debiased counterpart on the same instances;
// the two score sets must cover the same record ids
prr_comparison compare_prr(std::span<const measure_score> base,
                           std::span<const measure_score> line,
                           const std::map<std::string, double>& quality_by_id);

}  // namespace uqline
