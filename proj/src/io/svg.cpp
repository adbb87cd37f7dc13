#include "mchase/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace mchase::io {

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<SvgSeries>& series,
                     const std::vector<double>& hlines) {
    const double W = 900, H = 420, L = 60, R = 20, T = 34, B = 36;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    for (double h : hlines) {
        ymin = std::min(ymin, h);
        ymax = std::max(ymax, h);
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << L << "' y='20' font-family='sans-serif' font-size='14'>" << title
        << "</text>\n"
        << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
        << "' stroke='#333'/>\n"
        << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
        << "' stroke='#333'/>\n";
    for (double h : hlines)
        out << "<line x1='" << L << "' y1='" << py(h) << "' x2='" << W - R << "' y2='" << py(h)
            << "' stroke='#c33' stroke-dasharray='6,4'/>\n";
    int li = 0;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.4' points='";
        for (size_t i = 0; i < s.x.size(); ++i) out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        out << "'/>\n";
        out << "<text x='" << W - R - 180 << "' y='" << (T + 16 + 16 * li++)
            << "' font-family='sans-serif' font-size='12' fill='" << s.color << "'>" << s.label
            << "</text>\n";
    }
    // axis extents
    out << "<text x='" << L << "' y='" << H - 12 << "' font-family='sans-serif' font-size='11'>"
        << xmin << "</text>\n"
        << "<text x='" << W - R - 40 << "' y='" << H - 12
        << "' font-family='sans-serif' font-size='11'>" << xmax << "</text>\n"
        << "<text x='6' y='" << py(ymin) << "' font-family='sans-serif' font-size='11'>" << ymin
        << "</text>\n"
        << "<text x='6' y='" << py(ymax) + 8 << "' font-family='sans-serif' font-size='11'>" << ymax
        << "</text>\n</svg>\n";
}

}  // namespace mchase::io
