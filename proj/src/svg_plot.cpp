#include "curvemom/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "curvemom/constants.hpp"
#include "curvemom/errors.hpp"
#include "curvemom/fmt_util.hpp"

namespace curvemom {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& s, std::size_t lineno) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad numeric field '" + s + "'");
    }
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
    void pad() {
        if (!valid()) {
            lo = 0;
            hi = 1;
        } else if (lo == hi) {
            lo -= 1;
            hi += 1;
        }
    }
};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

}  // namespace

CsvTable read_csv_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2) throw ParseError(path + ": need at least two columns");

    CsvTable table;
    table.x_label = header[0];
    table.series.resize(header.size() - 1);
    for (std::size_t i = 1; i < header.size(); ++i) table.series[i - 1].label = header[i];
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size())
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(f.size()));
        double x = parse_field(f[0], lineno);
        for (std::size_t i = 1; i < f.size(); ++i) {
            table.series[i - 1].x.push_back(x);
            table.series[i - 1].y.push_back(parse_field(f[i], lineno));
        }
    }
    return table;
}

std::string line_plot_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                          const std::string& y_label) {
    const double w = 640, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
    Range rx, ry;
    for (const PlotSeries& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            rx.add(s.x[i]);
            if (std::isfinite(s.x[i])) ry.add(s.y[i]);
        }
    rx.pad();
    ry.pad();
    auto px = [&](double x) { return ml + (x - rx.lo) / (rx.hi - rx.lo) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ry.lo) / (ry.hi - ry.lo) * (h - mt - mb); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    out << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    out << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (int i = 0; i <= 5; ++i) {
        double gx = ml + i * (w - ml - mr) / 5.0;
        double gy = mt + i * (h - mt - mb) / 5.0;
        out << "<line x1=\"" << g6(gx) << "\" y1=\"" << g6(mt) << "\" x2=\"" << g6(gx)
            << "\" y2=\"" << g6(h - mb) << "\"/>\n";
        out << "<line x1=\"" << g6(ml) << "\" y1=\"" << g6(gy) << "\" x2=\"" << g6(w - mr)
            << "\" y2=\"" << g6(gy) << "\"/>\n";
    }
    out << "</g>\n";
    out << "<g font-family=\"monospace\" font-size=\"12\" fill=\"black\">\n";
    for (int i = 0; i <= 5; ++i) {
        double xv = rx.lo + i * (rx.hi - rx.lo) / 5.0;
        double yv = ry.lo + (5 - i) * (ry.hi - ry.lo) / 5.0;
        out << "<text x=\"" << g6(ml + i * (w - ml - mr) / 5.0) << "\" y=\"" << g6(h - mb + 16)
            << "\" text-anchor=\"middle\">" << g6(xv) << "</text>\n";
        out << "<text x=\"" << g6(ml - 6) << "\" y=\"" << g6(mt + i * (h - mt - mb) / 5.0 + 4)
            << "\" text-anchor=\"end\">" << g6(yv) << "</text>\n";
    }
    out << "<text x=\"" << g6((ml + w - mr) / 2) << "\" y=\"" << g6(h - 12)
        << "\" text-anchor=\"middle\">" << esc(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << g6((mt + h - mb) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << g6((mt + h - mb) / 2)
        << ")\">" << esc(y_label) << "</text>\n";
    out << "</g>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        std::string d;
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen_down = false;
                continue;
            }
            d += pen_down ? " L " : (d.empty() ? "M " : " M ");
            d += g6(px(s.x[i])) + " " + g6(py(s.y[i]));
            pen_down = true;
        }
        if (!d.empty())
            out << "<path d=\"" << d << "\" fill=\"none\" stroke=\""
                << kPalette[si % 6] << "\" stroke-width=\"1.5\"/>\n";
        out << "<g font-family=\"monospace\" font-size=\"12\">"
            << "<rect x=\"" << g6(w - mr - 150) << "\" y=\"" << g6(mt + 8 + 16.0 * si)
            << "\" width=\"12\" height=\"4\" fill=\"" << kPalette[si % 6] << "\"/>"
            << "<text x=\"" << g6(w - mr - 132) << "\" y=\"" << g6(mt + 14 + 16.0 * si)
            << "\">" << esc(s.label) << "</text></g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string polar_plot_svg(const std::vector<PlotSeries>& series, const std::string& label) {
    const double w = 480, h = 480, cx = 240, cy = 400, rad = 330;
    Range ry;
    for (const PlotSeries& s : series)
        for (double v : s.y) ry.add(v);
    ry.pad();
    double top = std::ceil(ry.hi / 10.0) * 10.0;
    const double span = 40;
    auto rof = [&](double db) { return rad * std::max(0.0, 1.0 - (top - db) / span); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
           "viewBox=\"0 0 480 480\">\n";
    out << "<rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
    out << "<g stroke=\"#cccccc\" fill=\"none\" font-family=\"monospace\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        double r = rad * i / 4.0;
        out << "<path d=\"M " << g6(cx - r) << " " << g6(cy) << " A " << g6(r) << " " << g6(r)
            << " 0 0 1 " << g6(cx + r) << " " << g6(cy) << "\"/>\n";
        out << "<text x=\"" << g6(cx + r + 2) << "\" y=\"" << g6(cy + 12)
            << "\" fill=\"black\" stroke=\"none\">" << g6(top - span + span * i / 4.0)
            << "</text>\n";
    }
    for (int deg = -90; deg <= 90; deg += 30) {
        double a = deg * kPi / 180.0;
        out << "<line x1=\"" << g6(cx) << "\" y1=\"" << g6(cy) << "\" x2=\""
            << g6(cx + rad * std::sin(a)) << "\" y2=\"" << g6(cy - rad * std::cos(a))
            << "\"/>\n";
        out << "<text x=\"" << g6(cx + (rad + 14) * std::sin(a)) << "\" y=\""
            << g6(cy - (rad + 14) * std::cos(a) + 4)
            << "\" fill=\"black\" stroke=\"none\" text-anchor=\"middle\">" << deg
            << "</text>\n";
    }
    out << "</g>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        std::string d;
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen_down = false;
                continue;
            }
            double a = s.x[i] * kPi / 180.0;
            double r = rof(s.y[i]);
            d += pen_down ? " L " : (d.empty() ? "M " : " M ");
            d += g6(cx + r * std::sin(a)) + " " + g6(cy - r * std::cos(a));
            pen_down = true;
        }
        if (!d.empty())
            out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << kPalette[si % 6]
                << "\" stroke-width=\"1.5\"/>\n";
        out << "<g font-family=\"monospace\" font-size=\"12\">"
            << "<rect x=\"16\" y=\"" << g6(20 + 16.0 * si)
            << "\" width=\"12\" height=\"4\" fill=\"" << kPalette[si % 6] << "\"/>"
            << "<text x=\"34\" y=\"" << g6(26 + 16.0 * si) << "\">" << esc(s.label)
            << "</text></g>\n";
    }
    out << "<text x=\"240\" y=\"470\" font-family=\"monospace\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << esc(label) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

void write_svg(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw Error("failed while writing " + path);
}

}  // namespace curvemom
