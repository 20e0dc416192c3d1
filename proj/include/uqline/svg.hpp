#pragma once

#include "uqline/stats.hpp"

#include <iosfwd>
#include <string>

namespace uqline {

// self-contained trend figure: bin means as points, the fitted polynomial as a
// line, slope / p / r-squared in the corner. all numbers are printed with
// fixed formats so the bytes are reproducible.
void write_trend_svg(std::ostream& out, const binned_trend_result& bt, const std::string& title,
                     const std::string& y_label);

}  // namespace uqline
