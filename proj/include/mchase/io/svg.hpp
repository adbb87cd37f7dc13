#pragma once

#include <string>
#include <vector>

namespace mchase::io {

/// Minimal static line chart. Presentation only: nothing downstream reads
/// these files back.
struct SvgSeries {
    std::string label;
    std::string color = "#1f6fb4";
    std::vector<double> x;
    std::vector<double> y;
};

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series,
                     const std::vector<double>& hlines = {});

}  // namespace mchase::io
