#pragma once

#include <string>
#include <utility>
#include <vector>

namespace spotcast::svg {

struct Line {
    std::string label;
    std::vector<double> values;
};

/// Static line chart; every line shares the x positions 0..n-1. Non-finite points break the line.
[[nodiscard]] std::string line_chart(const std::string& title, const std::vector<Line>& lines,
                                     const std::string& x_label = "", const std::string& y_label = "");

/// Static bar chart, one bar per (label, value); non-finite values are drawn as "n/a".
[[nodiscard]] std::string bar_chart(const std::string& title,
                                    const std::vector<std::pair<std::string, double>>& bars,
                                    const std::string& y_label = "");

/// Escapes &, <, >, and quotes for text nodes and attributes.
[[nodiscard]] std::string escape(const std::string& text);

}  // namespace spotcast::svg
