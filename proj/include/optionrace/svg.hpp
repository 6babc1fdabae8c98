// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace optionrace::cli {

/// Minimal SVG 1.1 writer. Coordinates are printed with two decimals so the
/// output is byte-stable.
class SvgWriter {
public:
    SvgWriter(double width, double height);

    void rect(double x, double y, double w, double h, std::string_view fill,
              std::string_view stroke = "none");
    void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
              std::string_view dash = {});
    void polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                  double width = 1.0, std::string_view dash = {});
    void polygon(const std::vector<std::pair<double, double>>& points, std::string_view fill,
                 double opacity = 1.0);
    void circle(double cx, double cy, double r, std::string_view fill, std::string_view stroke = "none");
    /// anchor is start, middle or end.
    void text(double x, double y, std::string_view content, double size = 12.0,
              std::string_view anchor = "start", double rotate = 0.0);

    std::string str() const;

private:
    double width_;
    double height_;
    std::string body_;
};

}  // namespace optionrace::cli
