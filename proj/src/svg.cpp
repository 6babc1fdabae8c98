// SPDX-License-Identifier: Apache-2.0
#include "optionrace/svg.hpp"

#include <cstdio>

namespace optionrace::cli {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string escape(std::string_view text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string points_attr(const std::vector<std::pair<double, double>>& points) {
    std::string out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) out += ' ';
        out += fmt(points[i].first) + "," + fmt(points[i].second);
    }
    return out;
}

}  // namespace

SvgWriter::SvgWriter(double width, double height) : width_(width), height_(height) {}

void SvgWriter::rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke) {
    body_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
             "\" fill=\"" + std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
}

void SvgWriter::line(double x1, double y1, double x2, double y2, std::string_view stroke, double width,
                     std::string_view dash) {
    body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" + fmt(y2) +
             "\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + fmt(width) + "\"";
    if (!dash.empty()) body_ += " stroke-dasharray=\"" + std::string(dash) + "\"";
    body_ += "/>\n";
}

void SvgWriter::polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                         double width, std::string_view dash) {
    if (points.size() < 2) return;
    body_ += "<polyline points=\"" + points_attr(points) + "\" fill=\"none\" stroke=\"" + std::string(stroke) +
             "\" stroke-width=\"" + fmt(width) + "\"";
    if (!dash.empty()) body_ += " stroke-dasharray=\"" + std::string(dash) + "\"";
    body_ += "/>\n";
}

void SvgWriter::polygon(const std::vector<std::pair<double, double>>& points, std::string_view fill,
                        double opacity) {
    if (points.size() < 3) return;
    body_ += "<polygon points=\"" + points_attr(points) + "\" fill=\"" + std::string(fill) +
             "\" fill-opacity=\"" + fmt(opacity) + "\"/>\n";
}

void SvgWriter::circle(double cx, double cy, double r, std::string_view fill, std::string_view stroke) {
    body_ += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) + "\" fill=\"" +
             std::string(fill) + "\" stroke=\"" + std::string(stroke) + "\"/>\n";
}

void SvgWriter::text(double x, double y, std::string_view content, double size, std::string_view anchor,
                     double rotate) {
    body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-family=\"sans-serif\" font-size=\"" +
             fmt(size) + "\" text-anchor=\"" + std::string(anchor) + "\"";
    if (rotate != 0.0) body_ += " transform=\"rotate(" + fmt(rotate) + " " + fmt(x) + " " + fmt(y) + ")\"";
    body_ += ">" + escape(content) + "</text>\n";
}

std::string SvgWriter::str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(width_) +
           "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) + " " + fmt(height_) + "\">\n" +
           body_ + "</svg>\n";
}

}  // namespace optionrace::cli
