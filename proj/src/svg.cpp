#include "zadnet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace zadnet {
namespace svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// "nice" tick spacing covering [lo, hi] with ~target intervals
std::vector<double> ticks(double lo, double hi, int target) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> out;
    const double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + step * 1e-9; t += step) {
        double v = t;
        if (std::abs(v) < step * 1e-9) v = 0.0;
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series,
                             const std::vector<Marker>& markers) {
    if (series.empty()) throw std::invalid_argument("no series to plot");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series length mismatch");
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!(xmax >= xmin)) { xmin = 0.0; xmax = 1.0; }
    if (!(ymax >= ymin)) { ymin = 0.0; ymax = 1.0; }
    if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
    if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }
    const double ypad = 0.06 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const int ml = 72, mr = 24, mt = 40, mb = 52;  // margins
    const double pw = spec.width - ml - mr;
    const double ph = spec.height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    if (!spec.description.empty())
        out << "  <desc>" << xml_escape(spec.description) << "</desc>\n";
    out << "  <rect width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        out << "  <text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"15\">"
            << xml_escape(spec.title) << "</text>\n";

    // grid + ticks
    out << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double t : ticks(xmin, xmax, 8)) {
        const double x = px(t);
        out << "    <line x1=\"" << fmt(x) << "\" y1=\"" << mt << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << mt + ph << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
        out << "    <text x=\"" << fmt(x) << "\" y=\"" << mt + ph + 16
            << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : ticks(ymin, ymax, 7)) {
        const double y = py(t);
        out << "    <line x1=\"" << ml << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml + pw
            << "\" y2=\"" << fmt(y) << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
        out << "    <text x=\"" << ml - 6 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    out << "  </g>\n";
    out << "  <rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << fmt(pw) << "\" height=\""
        << fmt(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // axis labels
    out << "  <text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(spec.x_label) << "</text>\n";
    out << "  <text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << mt + ph / 2 << ")\">" << xml_escape(spec.y_label) << "</text>\n";

    // series
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        out << "  <polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (i) out << ' ';
            out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
        }
        out << "\"/>\n";
        if (s.mark_points) {
            for (size_t i = 0; i < s.x.size(); ++i)
                out << "  <circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
                    << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
        }
    }

    for (const auto& m : markers) {
        const char* color = kPalette[m.series % kPaletteSize];
        out << "  <circle cx=\"" << fmt(px(m.x)) << "\" cy=\"" << fmt(py(m.y))
            << "\" r=\"5\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    }

    // legend
    out << "  <g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (size_t si = 0; si < series.size(); ++si) {
        const double y = mt + 14 + 16.0 * si;
        const double x = ml + pw - 150;
        out << "    <line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y - 4) << "\" x2=\""
            << fmt(x + 22) << "\" y2=\"" << fmt(y - 4) << "\" stroke=\""
            << kPalette[si % kPaletteSize] << "\" stroke-width=\"2\"/>\n";
        out << "    <text x=\"" << fmt(x + 28) << "\" y=\"" << fmt(y) << "\">"
            << xml_escape(series[si].label) << "</text>\n";
    }
    out << "  </g>\n</svg>\n";
    return out.str();
}

}  // namespace svg
}  // namespace zadnet
