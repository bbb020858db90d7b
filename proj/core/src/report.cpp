#include "sblfem/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sblfem/errors.hpp"

namespace sblfem {

namespace {

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string short_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s, int line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
        throw ConfigError("CSV line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

int parse_int(const std::string& s, int line) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') {
        throw ConfigError("CSV line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return static_cast<int>(v);
}

MeshBranch branch_from_dof(int p, int dof) {
    if (dof == 3 * p - 1) return MeshBranch::TwoLayers;
    if (dof == 2 * p - 1) return MeshBranch::RightLayerOnly;
    if (dof == p - 1) return MeshBranch::Asymptotic;
    return MeshBranch::Uniform;
}

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(std::span<const ConvergenceRecord> records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += format_g17(r.eps1) + ',' + format_g17(r.eps2) + ',' + std::to_string(r.p) + ',' +
               std::to_string(r.dof) + ',' + format_g17(r.rel_err_pct) + ',' + format_g17(r.wall_time_s) + ',' +
               std::string(to_string(r.regime)) + '\n';
    }
    return out;
}

void emit_csv(std::span<const ConvergenceRecord> records, const std::filesystem::path& path) {
    write_text(path, to_csv(records));
}

std::vector<ConvergenceRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("CSV header mismatch");
    std::vector<ConvergenceRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 7) throw ConfigError("CSV line " + std::to_string(line_no) + ": expected 7 fields");
        ConvergenceRecord r;
        r.eps1 = parse_double(f[0], line_no);
        r.eps2 = parse_double(f[1], line_no);
        r.p = parse_int(f[2], line_no);
        r.dof = parse_int(f[3], line_no);
        r.rel_err_pct = parse_double(f[4], line_no);
        r.wall_time_s = parse_double(f[5], line_no);
        const auto regime = regime_from_string(f[6]);
        if (!regime) throw ConfigError("CSV line " + std::to_string(line_no) + ": unknown regime '" + f[6] + "'");
        r.regime = *regime;
        r.branch = branch_from_dof(r.p, r.dof);
        if (std::isnan(r.rel_err_pct)) {
            r.failed = true;
            r.failure = "failed";
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ConvergenceRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

std::vector<SeriesGroup> group_by_pair(std::span<const ConvergenceRecord> records) {
    std::vector<SeriesGroup> groups;
    for (const auto& r : records) {
        const EpsPair pair{r.eps1, r.eps2};
        auto it = std::find_if(groups.begin(), groups.end(), [&](const SeriesGroup& g) { return g.pair == pair; });
        if (it == groups.end()) {
            groups.push_back({pair, {}});
            it = groups.end() - 1;
        }
        it->rows.push_back(r);
    }
    return groups;
}

SvgResult render_svg_semilog(std::span<const SeriesGroup> groups, const std::string& title) {
    SvgResult result;
    if (groups.empty()) throw ConfigError("SVG plot needs at least one group");

    struct Series {
        const SeriesGroup* group;
        std::vector<std::pair<double, double>> points;  // (dof, log10 err)
    };
    std::vector<Series> series;
    for (const auto& g : groups) {
        Series s{&g, {}};
        for (const auto& r : g.rows) {
            if (r.failed || !std::isfinite(r.rel_err_pct) || !(r.rel_err_pct > 0.0)) continue;
            s.points.emplace_back(static_cast<double>(r.dof), std::log10(r.rel_err_pct));
        }
        if (s.points.empty()) {
            result.warnings.push_back("group eps1=" + short_g(g.pair.eps1) + ", eps2=" + short_g(g.pair.eps2) +
                                      " has no positive errors; skipped");
            continue;
        }
        series.push_back(std::move(s));
    }

    double xmin = 0.0, xmax = 1.0, ymin = -1.0, ymax = 0.0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    xmin = std::floor(xmin);
    xmax = std::max(std::ceil(xmax), xmin + 1.0);
    ymin = std::floor(ymin);
    ymax = std::max(std::ceil(ymax), ymin + 1.0);

    const double width = 720.0, height = 480.0;
    const double left = 80.0, right = 200.0, top = 40.0, bottom = 60.0;
    const double pw = width - left - right, ph = height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" viewBox=\"0 0 720 480\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fixed3(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << xml_escape(title) << "</text>\n";
    svg << "<rect x=\"" << fixed3(left) << "\" y=\"" << fixed3(top) << "\" width=\"" << fixed3(pw) << "\" height=\""
        << fixed3(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // decade ticks on y, integer ticks on x (at most ~12)
    for (double y = ymin; y <= ymax + 0.5; y += 1.0) {
        svg << "<line x1=\"" << fixed3(left) << "\" y1=\"" << fixed3(sy(y)) << "\" x2=\"" << fixed3(left + pw)
            << "\" y2=\"" << fixed3(sy(y)) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << fixed3(left - 6) << "\" y=\"" << fixed3(sy(y) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << static_cast<int>(y)
            << "</text>\n";
    }
    const double span = xmax - xmin;
    const double step = std::max(1.0, std::ceil(span / 12.0));
    for (double x = xmin; x <= xmax + 0.5; x += step) {
        svg << "<line x1=\"" << fixed3(sx(x)) << "\" y1=\"" << fixed3(top + ph) << "\" x2=\"" << fixed3(sx(x))
            << "\" y2=\"" << fixed3(top + ph + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fixed3(sx(x)) << "\" y=\"" << fixed3(top + ph + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << static_cast<int>(x)
            << "</text>\n";
    }
    svg << "<text x=\"" << fixed3(left + pw / 2) << "\" y=\"" << fixed3(height - 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">DOF</text>\n";
    svg << "<text x=\"18\" y=\"" << fixed3(top + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\" transform=\"rotate(-90 18 " << fixed3(top + ph / 2)
        << ")\">relative energy error (%)</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % kPalette.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < series[i].points.size(); ++k) {
            if (k) svg << ' ';
            svg << fixed3(sx(series[i].points[k].first)) << ',' << fixed3(sy(series[i].points[k].second));
        }
        svg << "\"/>\n";
        for (const auto& [x, y] : series[i].points) {
            svg << "<circle cx=\"" << fixed3(sx(x)) << "\" cy=\"" << fixed3(sy(y)) << "\" r=\"2.5\" fill=\"" << color
                << "\"/>\n";
        }
        const double ly = top + 16.0 + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << fixed3(left + pw + 12) << "\" y1=\"" << fixed3(ly) << "\" x2=\""
            << fixed3(left + pw + 36) << "\" y2=\"" << fixed3(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << fixed3(left + pw + 42) << "\" y=\"" << fixed3(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">eps1=" << short_g(series[i].group->pair.eps1)
            << ", eps2=" << short_g(series[i].group->pair.eps2) << "</text>\n";
    }
    svg << "</svg>\n";

    result.svg = svg.str();
    result.polylines = series.size();
    return result;
}

SvgResult emit_svg_semilog(std::span<const SeriesGroup> groups, const std::filesystem::path& path,
                           const std::string& title) {
    SvgResult result = render_svg_semilog(groups, title);
    write_text(path, result.svg);
    return result;
}

}  // namespace sblfem
