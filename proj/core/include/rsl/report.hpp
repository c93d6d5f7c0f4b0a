#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace rsl {

// 17-significant-digit formatting shared by every emitter (round-trip safe).
std::string format_number(double v);

// Rectangular table with a fixed column order; cells are preformatted.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(std::vector<std::string> cells);
    void add_comment(const std::string& line);  // "# ..." lines above the header
    std::string to_string() const;
    void write(const std::filesystem::path& path) const;

    static CsvTable parse(const std::string& text);
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

private:
    std::vector<std::string> comments_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// key=value experiment configuration, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    // reference line y = c * x^slope anchored to the first point of the
    // first series
    std::vector<double> reference_slopes;
    bool timestamp = false;  // suppressed by default (deterministic output)
};

// Static SVG decay plot with optional reference slope lines.
std::string emit_plot(const std::vector<PlotSeries>& series, const PlotSpec& spec);
void write_plot(const std::filesystem::path& path,
                const std::vector<PlotSeries>& series, const PlotSpec& spec);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace rsl
