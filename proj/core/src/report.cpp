#include "rsl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rsl/errors.hpp"

namespace rsl {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw ValidationError("csv table needs columns");
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw ValidationError("csv row width mismatch");
    rows_.push_back(std::move(cells));
}

void CsvTable::add_comment(const std::string& line) { comments_.push_back(line); }

std::string CsvTable::to_string() const {
    std::ostringstream os;
    for (const auto& c : comments_) os << "# " << c << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i)
        os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
    write_text_file(path, to_string());
}

CsvTable CsvTable::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> comments;
    std::vector<std::vector<std::string>> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        records.push_back(std::move(cells));
    }
    if (records.empty()) throw ValidationError("csv without a header row");
    CsvTable table(records.front());
    for (const auto& c : comments) table.add_comment(c);
    for (std::size_t i = 1; i < records.size(); ++i) table.add_row(records[i]);
    return table;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    auto trim = [](std::string s) {
        const auto from = s.find_first_not_of(" \t\r");
        const auto to = s.find_last_not_of(" \t\r");
        return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
    };
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  " is not key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ValidationError("empty config key");
        if (!out.emplace(key, value).second)
            throw ValidationError("duplicate config key '" + key + "'");
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    return parse_key_values(read_text_file(path));
}

namespace {

struct Mapper {
    double lo, hi;
    double pix_lo, pix_hi;
    bool log_scale;

    double operator()(double v) const {
        double t;
        if (log_scale) {
            t = (std::log(v) - std::log(lo)) / (std::log(hi) - std::log(lo));
        } else {
            t = (v - lo) / (hi - lo);
        }
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

}  // namespace

std::string emit_plot(const std::vector<PlotSeries>& series, const PlotSpec& spec) {
    if (series.empty()) throw ValidationError("plot needs at least one series");
    for (const auto& s : series) {
        if (s.x.empty() || s.x.size() != s.y.size())
            throw ValidationError("plot series must be nonempty with matching x/y");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (spec.log_x && !(s.x[i] > 0.0))
                throw ValidationError("log-x plot needs positive x values");
            if (spec.log_y && !(s.y[i] > 0.0))
                throw ValidationError("log-y plot needs positive y values");
        }
    }

    double x_lo = series[0].x[0], x_hi = x_lo;
    double y_lo = series[0].y[0], y_hi = y_lo;
    for (const auto& s : series) {
        for (double v : s.x) { x_lo = std::min(x_lo, v); x_hi = std::max(x_hi, v); }
        for (double v : s.y) { y_lo = std::min(y_lo, v); y_hi = std::max(y_hi, v); }
    }
    if (x_lo == x_hi) { x_lo -= 1.0; x_hi += 1.0; }
    if (y_lo == y_hi) { y_lo = spec.log_y ? y_lo * 0.5 : y_lo - 1.0; y_hi = spec.log_y ? y_hi * 2.0 : y_hi + 1.0; }

    const double width = 640, height = 420;
    const double ml = 70, mr = 20, mt = 36, mb = 48;
    const Mapper mx{x_lo, x_hi, ml, width - mr, spec.log_x};
    const Mapper my{y_lo, y_hi, height - mb, mt, spec.log_y};
    const char* palette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"monospace\" font-size=\"14\">" << spec.title << "</text>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">"
        << spec.x_label << (spec.log_x ? " (log)" : "") << "</text>\n";
    svg << "<text x=\"16\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << height / 2 << ")\">" << spec.y_label
        << (spec.log_y ? " (log)" : "") << "</text>\n";

    // reference slope lines through the first point of the first series
    for (std::size_t r = 0; r < spec.reference_slopes.size(); ++r) {
        const double slope = spec.reference_slopes[r];
        const double x0 = series[0].x.front(), y0 = series[0].y.front();
        std::ostringstream pts;
        const int steps = 32;
        for (int i = 0; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            const double x = spec.log_x ? x_lo * std::pow(x_hi / x_lo, t)
                                        : x_lo + t * (x_hi - x_lo);
            const double y = y0 * std::pow(x / x0, slope);
            if (spec.log_y && !(y > 0.0)) continue;
            if (y < y_lo || y > y_hi) continue;
            pts << mx(x) << ',' << my(y) << ' ';
        }
        svg << "<polyline fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"6,4\" "
            << "points=\"" << pts.str() << "\"/>\n";
        svg << "<text x=\"" << width - mr - 4 << "\" y=\"" << mt + 14 * (r + 1)
            << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\" "
            << "fill=\"#888888\">slope " << format_number(slope) << "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % 5];
        std::ostringstream pts;
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            pts << mx(series[s].x[i]) << ',' << my(series[s].y[i]) << ' ';
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
            << "points=\"" << pts.str() << "\"/>\n";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            svg << "<circle cx=\"" << mx(series[s].x[i]) << "\" cy=\""
                << my(series[s].y[i]) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << ml + 6 << "\" y=\"" << mt + 14 * (s + 1)
            << "\" font-family=\"monospace\" font-size=\"11\" fill=\"" << color << "\">"
            << series[s].label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_plot(const std::filesystem::path& path,
                const std::vector<PlotSeries>& series, const PlotSpec& spec) {
    write_text_file(path, emit_plot(series, spec));
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace rsl
