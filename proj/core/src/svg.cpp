#include "tileperm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tileperm/errors.hpp"

namespace tileperm {

namespace {

std::string esc(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<SvgSeries>& series,
                          int width, int height) {
    if (width < 200 || height < 120) throw ValidationError("svg canvas too small");
    for (const SvgSeries& s : series)
        if (s.x.size() != s.y.size()) throw ValidationError("series x/y length mismatch");

    const double ml = 70, mr = 20, mt = 42, mb = 52;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool have = false;
    for (const SvgSeries& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!have) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                have = true;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const double ypad = (ymax - ymin) * 0.05;
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(width / 2.0) +
           "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           esc(title) + "</text>\n";

    // frame
    svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) +
           "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";

    // ticks
    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double px = sx(fx);
        svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(px) +
               "\" y2=\"" + num(mt + ph + 5) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + num(px) + "\" y=\"" + num(mt + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               tick(fx) + "</text>\n";
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        const double py = sy(fy);
        svg += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(ml) +
               "\" y2=\"" + num(py) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + tick(fy) +
               "</text>\n";
    }

    svg += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + esc(x_label) +
           "</text>\n";
    svg += "<text x=\"16\" y=\"" + num(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
           num(mt + ph / 2) + ")\">" + esc(y_label) + "</text>\n";

    for (const SvgSeries& s : series) {
        if (s.x.empty()) continue;
        svg += "<polyline fill=\"none\" stroke=\"" + esc(s.color) +
               "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) svg += " ";
            svg += num(sx(s.x[i])) + "," + num(sy(s.y[i]));
        }
        svg += "\"/>\n";
    }

    double ly = mt + 14;
    for (const SvgSeries& s : series) {
        if (s.label.empty()) continue;
        svg += "<line x1=\"" + num(ml + pw - 110) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
               num(ml + pw - 90) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + esc(s.color) +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(ml + pw - 84) + "\" y=\"" + num(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + esc(s.label) + "</text>\n";
        ly += 16;
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace tileperm
