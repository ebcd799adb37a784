#pragma once

#include <string>
#include <vector>

namespace wasserlim::svg {

// Value-vs-index line chart: axes, one polyline, tick labels at the
// extremes and a title. Non-finite values are skipped.
std::string line_chart(const std::vector<double>& values, const std::string& title,
                       const std::vector<std::string>& labels = {});

}  // namespace wasserlim::svg
