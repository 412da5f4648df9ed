#include "ddecay/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dd {

namespace {

std::string num(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return b;
}

std::string tick(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string svg_line_plot(const std::vector<Series>& series, const PlotSpec& spec) {
    const double W = spec.width, H = spec.height;
    const double ml = 70, mr = 150, mt = 40, mb = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto fx = [&](double x) { return spec.logx ? (x > 0 ? std::log10(x) : std::nan("")) : x; };
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double X = fx(s.x[i]), Y = s.y[i];
            if (!std::isfinite(X) || !std::isfinite(Y)) continue;
            x0 = std::min(x0, X);
            x1 = std::max(x1, X);
            y0 = std::min(y0, Y);
            y1 = std::max(y1, Y);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double X) { return ml + (X - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double Y) { return H - mb - (Y - y0) / (y1 - y0) * (H - mt - mb); };

    std::string o = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
                    "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(spec.title) +
         "</text>\n";
    o += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(W - ml - mr) + "\" height=\"" +
         num(H - mt - mb) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double X = x0 + (x1 - x0) * k / 5.0, Y = y0 + (y1 - y0) * k / 5.0;
        o += "<text x=\"" + num(px(X)) + "\" y=\"" + num(H - mb + 16) + "\" text-anchor=\"middle\">" +
             tick(spec.logx ? std::pow(10.0, X) : X) + "</text>\n";
        o += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(py(Y) + 4) + "\" text-anchor=\"end\">" + tick(Y) + "</text>\n";
    }
    o += "<text x=\"" + num((ml + W - mr) / 2) + "\" y=\"" + num(H - 12) + "\" text-anchor=\"middle\">" +
         escape(spec.xlabel) + "</text>\n";
    o += "<text x=\"16\" y=\"" + num((mt + H - mb) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num((mt + H - mb) / 2) + ")\">" + escape(spec.ylabel) + "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* col = kColors[k % 8];
        std::string pts;
        auto flush = [&]() {
            if (!pts.empty())
                o += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.2\" points=\"" + pts +
                     "\"/>\n";
            pts.clear();
        };
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double X = fx(s.x[i]), Y = s.y[i];
            if (!std::isfinite(X) || !std::isfinite(Y)) {
                flush();
                continue;
            }
            pts += num(px(X)) + "," + num(py(Y)) + " ";
        }
        flush();
        const double ly = mt + 16 + 18 * k;
        o += "<line x1=\"" + num(W - mr + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(W - mr + 30) + "\" y2=\"" +
             num(ly) + "\" stroke=\"" + col + "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + num(W - mr + 36) + "\" y=\"" + num(ly + 4) + "\">" + escape(s.label) + "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

}  // namespace dd
