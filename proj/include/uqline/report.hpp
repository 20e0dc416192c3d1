#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace uqline {

// one rejection-ratio evaluation, as written by the prr command
struct prr_row {
    std::string dataset;
    std::string measure;
    std::string mode;  // "raw" or the debias mode the scores came from
    std::size_t n = 0;
    double prr = 0.0;
    double auc_unc = 0.0;
    double auc_oracle = 0.0;
    double auc_random = 0.0;
};

std::string prr_rows_to_json(std::span<const prr_row> rows);
std::vector<prr_row> prr_rows_from_json(const std::string& text);
std::vector<prr_row> load_prr_rows(const std::string& path);

// base-vs-debiased comparison, joined on (dataset, measure)
struct report_row {
    std::string dataset;
    std::string measure;
    std::string mode;  // the debias mode of the line side
    double prr_base = 0.0;
    double prr_line = 0.0;
    double delta = 0.0;
};

struct join_result {
    std::vector<report_row> rows;
    std::size_t unmatched_base = 0;  // base rows with no debiased counterpart
};

// joins by (dataset, measure); a line row without a base counterpart, a duplicate
// key, or a row pair evaluated on different n is a schema error. Base rows without
// a line counterpart are dropped and counted (only some measures get debiased).
join_result join_prr(std::span<const prr_row> base, std::span<const prr_row> line);

// per-measure means across datasets, dataset tag "(average)"
std::vector<report_row> measure_averages(std::span<const report_row> rows);

// table-style CSV with an arrow-marked display column, e.g. "0.48 / 0.58^";
// average rows are appended after the per-dataset rows
void write_report_csv(std::ostream& out, std::span<const report_row> rows,
                      std::span<const report_row> averages);

std::string report_to_json(std::span<const report_row> rows);

}  // namespace uqline
