#include "spotcast/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace spotcast::svg {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                               "#bcbd22", "#17becf"};

// Fixed two-decimal formatting keeps the files byte-stable across platforms.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded(double lo, double hi) {
    if (!(lo <= hi)) return {0.0, 1.0};
    if (lo == hi) return {lo - 1.0, hi + 1.0};
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

void header(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth) << "\" height=\""
       << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth) << ' ' << fmt(kHeight) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";
}

void axes(std::ostringstream& os, const Range& y, const std::string& x_label,
          const std::string& y_label) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    os << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1) << "\" y2=\""
       << fmt(y0) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x0) << "\" y2=\""
       << fmt(y1) << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = y.lo + (y.hi - y.lo) * k / 4.0;
        const double py = y0 - (y0 - y1) * k / 4.0;
        os << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(x1)
           << "\" y2=\"" << fmt(py) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(py + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << tick_label(v) << "</text>\n";
    }
    if (!x_label.empty()) {
        os << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 12)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           << escape(x_label) << "</text>\n";
    }
    if (!y_label.empty()) {
        os << "<text x=\"16\" y=\"" << fmt((y0 + y1) / 2)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           << "transform=\"rotate(-90 16 " << fmt((y0 + y1) / 2) << ")\">" << escape(y_label)
           << "</text>\n";
    }
}

}  // namespace

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string line_chart(const std::string& title, const std::vector<Line>& lines,
                       const std::string& x_label, const std::string& y_label) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::size_t n = 0;
    for (const auto& l : lines) {
        n = std::max(n, l.values.size());
        for (double v : l.values) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    const Range y = padded(lo, hi);
    std::ostringstream os;
    header(os, title);
    axes(os, y, x_label, y_label);

    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    const auto px = [&](std::size_t i) {
        return n <= 1 ? (x0 + x1) / 2 : x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    const auto py = [&](double v) { return y0 - (y0 - y1) * (v - y.lo) / (y.hi - y.lo); };

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const char* colour = kPalette[li % kPalette.size()];
        std::string path;
        bool pen_down = false;
        for (std::size_t i = 0; i < lines[li].values.size(); ++i) {
            const double v = lines[li].values[i];
            if (!std::isfinite(v)) {
                pen_down = false;
                continue;
            }
            path += (pen_down ? " L" : (path.empty() ? "M" : " M")) + fmt(px(i)) + ' ' + fmt(py(v));
            pen_down = true;
        }
        if (!path.empty()) {
            os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour
               << "\" stroke-width=\"" << (li == 0 ? "2" : "1.3") << "\"/>\n";
        }
        const double ly = kTop + 16.0 * static_cast<double>(li);
        os << "<rect x=\"" << fmt(x1 + 12) << "\" y=\"" << fmt(ly) << "\" width=\"12\" height=\"3\" fill=\""
           << colour << "\"/>\n";
        os << "<text x=\"" << fmt(x1 + 30) << "\" y=\"" << fmt(ly + 5)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(lines[li].label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string bar_chart(const std::string& title,
                      const std::vector<std::pair<std::string, double>>& bars,
                      const std::string& y_label) {
    double hi = 0.0;
    for (const auto& [_, v] : bars) {
        if (std::isfinite(v)) hi = std::max(hi, v);
    }
    const Range y{0.0, hi > 0.0 ? hi * 1.1 : 1.0};
    std::ostringstream os;
    header(os, title);
    axes(os, y, "", y_label);

    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    const double slot = bars.empty() ? 0.0 : (x1 - x0) / static_cast<double>(bars.size());
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& [label, v] = bars[i];
        const double left = x0 + slot * static_cast<double>(i) + slot * 0.15;
        const double width = slot * 0.7;
        const double centre = left + width / 2;
        if (std::isfinite(v)) {
            const double top = y0 - (y0 - y1) * v / y.hi;
            os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(width)
               << "\" height=\"" << fmt(y0 - top) << "\" fill=\"" << kPalette[i % kPalette.size()]
               << "\"/>\n";
            os << "<text x=\"" << fmt(centre) << "\" y=\"" << fmt(top - 4)
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
               << tick_label(v) << "</text>\n";
        } else {
            os << "<text x=\"" << fmt(centre) << "\" y=\"" << fmt(y0 - 6)
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">n/a</text>\n";
        }
        os << "<text x=\"" << fmt(centre) << "\" y=\"" << fmt(y0 + 16)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << escape(label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace spotcast::svg
