#include "mkdv/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace mkdv {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

void write_loglog_svg(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<SvgSeries>& series,
                      std::ostream& os) {
    double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0)) continue;
            lx_min = std::min(lx_min, std::log10(x));
            lx_max = std::max(lx_max, std::log10(x));
            ly_min = std::min(ly_min, std::log10(y));
            ly_max = std::max(ly_max, std::log10(y));
        }
    }
    const bool empty = lx_min > lx_max || ly_min > ly_max;
    if (empty) {
        lx_min = 0.0;
        lx_max = 1.0;
        ly_min = 0.0;
        ly_max = 1.0;
    }
    if (lx_max - lx_min < 1e-9) lx_max = lx_min + 1.0;
    if (ly_max - ly_min < 1e-9) ly_max = ly_min + 1.0;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto px = [&](double lx) { return kLeft + (lx - lx_min) / (lx_max - lx_min) * plot_w; };
    const auto py = [&](double ly) { return kTop + (ly_max - ly) / (ly_max - ly_min) * plot_h; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << title << "</text>\n";

    // decade grid lines
    for (int d = static_cast<int>(std::ceil(lx_min)); d <= static_cast<int>(std::floor(lx_max));
         ++d) {
        const double x = px(d);
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
           << "\" y2=\"" << num(kHeight - kBottom) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(x) << "\" y=\"" << num(kHeight - kBottom + 16)
           << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ly_min)); d <= static_cast<int>(std::floor(ly_max));
         ++d) {
        const double y = py(d);
        os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
           << num(kWidth - kRight) << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
    }
    os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
       << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << kHeight / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << kHeight / 2
       << ")\">" << y_label << "</text>\n";

    double legend_y = kTop + 14.0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << " points=\"";
        bool any = false;
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0)) continue;
            os << num(px(std::log10(x))) << ',' << num(py(std::log10(y))) << ' ';
            any = true;
        }
        os << "\"/>\n";
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0)) continue;
            os << "<circle cx=\"" << num(px(std::log10(x))) << "\" cy=\""
               << num(py(std::log10(y))) << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
        }
        os << "<line x1=\"" << num(kLeft + 10) << "\" y1=\"" << num(legend_y) << "\" x2=\""
           << num(kLeft + 34) << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"1.6\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
           << "/>\n";
        os << "<text x=\"" << num(kLeft + 40) << "\" y=\"" << num(legend_y + 4)
           << "\" font-size=\"11\">" << s.label << (any ? "" : " (no positive data)")
           << "</text>\n";
        legend_y += 16.0;
    }
    os << "</svg>\n";
}

} // namespace mkdv
