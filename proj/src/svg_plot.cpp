#include "shearflow/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace shearflow {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

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

std::string num(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

std::string tick_label(double v, bool log_axis) {
    std::ostringstream o;
    if (log_axis) {
        int e = static_cast<int>(std::lround(std::log10(v)));
        if (std::fabs(v - std::pow(10.0, e)) < 1e-9 * v) {
            o << "1e" << e;
            return o.str();
        }
    }
    o.precision(4);
    o << v;
    return o.str();
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double map(double v, double p0, double p1) const {
        double a = log ? std::log10(v) : v;
        double l = log ? std::log10(lo) : lo;
        double h = log ? std::log10(hi) : hi;
        if (h <= l) h = l + 1.0;
        return p0 + (a - l) / (h - l) * (p1 - p0);
    }
    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            int e0 = static_cast<int>(std::floor(std::log10(lo) - 1e-9));
            int e1 = static_cast<int>(std::ceil(std::log10(hi) + 1e-9));
            int step = std::max(1, (e1 - e0) / 8);
            for (int e = e0; e <= e1; e += step) {
                double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
            }
            return out;
        }
        double span = hi - lo;
        if (span <= 0) span = 1.0;
        double raw = span / 6.0;
        double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double c : {1.0, 2.0, 5.0, 10.0})
            if (mag * c >= raw) {
                step = mag * c;
                break;
            }
        double first = std::ceil(lo / step) * step;
        for (double v = first; v <= hi + 1e-9 * span; v += step) out.push_back(v);
        return out;
    }
};

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt) {
    const double W = opt.width, H = opt.height;
    const double ml = 70, mr = 20, mt = 36, mb = 48;
    const double px0 = ml, px1 = W - mr, py0 = H - mb, py1 = mt;

    Axis ax{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            opt.logx};
    Axis ay{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            opt.logy};
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (opt.logx && x <= 0) continue;
            if (opt.logy && y <= 0) continue;
            ax.lo = std::min(ax.lo, x);
            ax.hi = std::max(ax.hi, x);
            ay.lo = std::min(ay.lo, y);
            ay.hi = std::max(ay.hi, y);
            any = true;
        }
    if (!any) {
        ax.lo = opt.logx ? 1.0 : 0.0;
        ax.hi = opt.logx ? 10.0 : 1.0;
        ay.lo = opt.logy ? 1.0 : 0.0;
        ay.hi = opt.logy ? 10.0 : 1.0;
    }
    if (ax.hi <= ax.lo) ax.hi = ax.lo + (opt.logx ? 9.0 * ax.lo : 1.0);
    if (ay.hi <= ay.lo) ay.hi = ay.lo + (opt.logy ? 9.0 * ay.lo : 1.0);
    if (!opt.logy) {
        double pad = 0.05 * (ay.hi - ay.lo);
        ay.lo -= pad;
        ay.hi += pad;
    }

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
      << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
    o << "<rect width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"15\">" << xml_escape(opt.title) << "</text>\n";

    for (double v : ax.ticks()) {
        double px = ax.map(v, px0, px1);
        o << "<line x1=\"" << num(px) << "\" y1=\"" << num(py0) << "\" x2=\"" << num(px)
          << "\" y2=\"" << num(py1) << "\" stroke=\"#dddddd\"/>\n";
        o << "<text x=\"" << num(px) << "\" y=\"" << num(py0 + 16)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
          << tick_label(v, opt.logx) << "</text>\n";
    }
    for (double v : ay.ticks()) {
        double py = ay.map(v, py0, py1);
        o << "<line x1=\"" << num(px0) << "\" y1=\"" << num(py) << "\" x2=\"" << num(px1)
          << "\" y2=\"" << num(py) << "\" stroke=\"#dddddd\"/>\n";
        o << "<text x=\"" << num(px0 - 6) << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
          << tick_label(v, opt.logy) << "</text>\n";
    }
    o << "<rect x=\"" << num(px0) << "\" y=\"" << num(py1) << "\" width=\"" << num(px1 - px0)
      << "\" height=\"" << num(py0 - py1) << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num((px0 + px1) / 2) << "\" y=\"" << num(H - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(opt.xlabel) << "</text>\n";
    o << "<text x=\"16\" y=\"" << num((py0 + py1) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
      << num((py0 + py1) / 2) << ")\">" << xml_escape(opt.ylabel) << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* color = kColors[ci % 8];
        std::ostringstream pts;
        bool open = false;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            double x = s.x[i], y = s.y[i];
            bool ok = std::isfinite(x) && std::isfinite(y) && (!opt.logx || x > 0) &&
                      (!opt.logy || y > 0);
            if (!ok) {
                if (open) {
                    o << "<polyline points=\"" << pts.str()
                      << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
                    pts.str("");
                    open = false;
                }
                continue;
            }
            pts << num(ax.map(x, px0, px1)) << ',' << num(ay.map(y, py0, py1)) << ' ';
            open = true;
        }
        if (open)
            o << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
              << "\" stroke-width=\"1.5\"/>\n";
        double ly = py1 + 14 + 16 * ci;
        o << "<line x1=\"" << num(px1 - 130) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
          << num(px1 - 108) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << num(px1 - 102) << "\" y=\"" << num(ly)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label)
          << "</text>\n";
        ++ci;
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
               const PlotOptions& opt) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_svg: cannot open " + path.string());
    f << render_svg(series, opt);
    if (!f) throw std::runtime_error("write_svg: write failed for " + path.string());
}

}  // namespace shearflow
