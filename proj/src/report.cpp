#include "landerval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "landerval/errors.hpp"

namespace landerval {
namespace {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot open " + path.string() + " for writing");
    out << content;
}

// Rows of a comma-separated file, header included. The files are our own
// artifacts, so no quoting rules apply.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

double to_number(const std::string& cell) {
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{}) throw NumericalError("report: malformed numeric cell '" + cell + "'");
    return v;
}

struct Series {
    std::vector<double> x, y;
};

// Minimal static line chart; everything is emitted with shortest round-trip
// numerals so reruns stay byte-identical.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const Series& series,
                           const std::vector<std::pair<std::string, double>>& hlines) {
    const double width = 720, height = 440;
    const double left = 70, right = 20, top = 42, bottom = 52;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = series.x.front(), x_max = series.x.front();
    for (double v : series.x) {
        x_min = std::min(x_min, v);
        x_max = std::max(x_max, v);
    }
    double y_min = 0.0, y_max = 1.0;  // q-scale charts
    if (x_max == x_min) x_max = x_min + 1.0;

    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
           "\" height=\"" + format_double(height) + "\" viewBox=\"0 0 " + format_double(width) +
           " " + format_double(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_double(width / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           title + "</text>\n";
    svg += "<rect x=\"" + format_double(left) + "\" y=\"" + format_double(top) + "\" width=\"" +
           format_double(plot_w) + "\" height=\"" + format_double(plot_h) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (const auto& [label, y] : hlines) {
        svg += "<line x1=\"" + format_double(left) + "\" y1=\"" + format_double(py(y)) +
               "\" x2=\"" + format_double(left + plot_w) + "\" y2=\"" + format_double(py(y)) +
               "\" stroke=\"#b33\" stroke-dasharray=\"6,4\"/>\n";
        svg += "<text x=\"" + format_double(left + plot_w - 4) + "\" y=\"" +
               format_double(py(y) - 5) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#b33\">" +
               label + "</text>\n";
    }

    svg += "<polyline fill=\"none\" stroke=\"#2458c5\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series.x.size(); ++i) {
        if (i) svg += " ";
        svg += format_double(px(series.x[i])) + "," + format_double(py(series.y[i]));
    }
    svg += "\"/>\n";

    svg += "<text x=\"" + format_double(left - 8) + "\" y=\"" + format_double(py(y_min) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(y_min) + "</text>\n";
    svg += "<text x=\"" + format_double(left - 8) + "\" y=\"" + format_double(py(y_max) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(y_max) + "</text>\n";
    svg += "<text x=\"" + format_double(px(x_min)) + "\" y=\"" + format_double(top + plot_h + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(x_min) + "</text>\n";
    svg += "<text x=\"" + format_double(px(x_max)) + "\" y=\"" + format_double(top + plot_h + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(x_max) + "</text>\n";
    svg += "<text x=\"" + format_double(left + plot_w / 2) + "\" y=\"" +
           format_double(height - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + format_double(top + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           format_double(top + plot_h / 2) + ")\">" + y_label + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

std::string markdown_table(const std::vector<std::vector<std::string>>& rows) {
    std::string md;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        md += "|";
        for (const std::string& cell : rows[r]) md += " " + cell + " |";
        md += "\n";
        if (r == 0) {
            md += "|";
            for (std::size_t c = 0; c < rows[r].size(); ++c) md += "---|";
            md += "\n";
        }
    }
    return md;
}

}  // namespace

void write_report(const AppConfig& cfg, const std::filesystem::path& dir) {
    const auto summary_text = read_file(dir / "summary.json");
    const auto trace_text = read_file(dir / "q_trace.csv");
    const auto boundary_text = read_file(dir / "boundary.csv");
    const auto boundary_summary_text = read_file(dir / "boundary_summary.json");
    const auto calibration_text = read_file(dir / "calibration.csv");
    const auto sweep_summary_text = read_file(dir / "sweep_summary.csv");
    const auto sweep_sequential_text = read_file(dir / "sweep_sequential.csv");
    const auto sweep_doc_text = read_file(dir / "sweep.json");

    if (!summary_text && !trace_text && !boundary_text && !calibration_text &&
        !sweep_summary_text) {
        throw ConfigError(
            "report: nothing to report in " + dir.string() +
            "; expected any of summary.json, q_trace.csv, boundary.csv, calibration.csv, "
            "sweep_summary.csv");
    }

    std::string md = "# Deployment validation report\n";

    if (summary_text) {
        const nlohmann::json summary = nlohmann::json::parse(*summary_text);
        md += "\n## Sequential session\n\n";
        md += "- final decision: **" + summary.at("final_decision").get<std::string>() + "**\n";
        md += "- status: " + summary.at("status").get<std::string>() + "\n";
        md += "- stopping rollout: " + std::to_string(summary.at("stopping_time").get<int>()) +
              " of " + std::to_string(cfg.decision.n_max) + "\n";
        md += "- evidence: " + std::to_string(summary.at("successes").get<long long>()) +
              " safe / " + std::to_string(summary.at("failures").get<long long>()) +
              " unsafe outcomes\n";
        md += "- posterior approval probability q = " +
              format_double(summary.at("q").get<double>()) + " (false-approval risk " +
              format_double(summary.at("false_approval_risk").get<double>()) + ")\n";
        md += "- empirical rule on the same evidence: " +
              summary.at("empirical_decision").get<std::string>() + "\n";
    }

    if (trace_text) {
        const auto rows = parse_csv(*trace_text);
        Series series;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            series.x.push_back(to_number(rows[r][0]));
            series.y.push_back(to_number(rows[r][1]));
        }
        if (!series.x.empty()) {
            write_file(dir / "q_trace.svg",
                       line_chart_svg("Posterior approval probability", "rollout n", "q",
                                      series,
                                      {{"tau_approve", cfg.decision.tau_approve},
                                       {"tau_reject", cfg.decision.tau_reject}}));
            md += "\n![posterior approval trace](q_trace.svg)\n";
        }
    }

    if (boundary_text) {
        const auto rows = parse_csv(*boundary_text);
        md += "\n## Approval boundary at the horizon\n\n";
        if (boundary_summary_text) {
            const nlohmann::json bs = nlohmann::json::parse(*boundary_summary_text);
            for (const auto& entry : bs.at("entries")) {
                md += "- p0 = " + format_double(entry.at("p0").get<double>()) +
                      ": minimal approving success count ";
                if (entry.at("min_approving_successes").is_null())
                    md += "not reachable";
                else
                    md += std::to_string(entry.at("min_approving_successes").get<int>()) + " of " +
                          std::to_string(bs.at("n_max").get<int>());
                md += "\n";
            }
        }
        // Chart the first p0 group over the full 0..n_max span.
        Series series;
        std::string first_p0;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (first_p0.empty()) first_p0 = rows[r][0];
            if (rows[r][0] != first_p0) break;
            series.x.push_back(to_number(rows[r][1]));
            series.y.push_back(to_number(rows[r][2]));
        }
        if (!series.x.empty()) {
            write_file(dir / "boundary.svg",
                       line_chart_svg("Approval probability vs success count (p0 = " + first_p0 +
                                          ")",
                                      "successes at horizon", "q", series,
                                      {{"tau_approve", cfg.decision.tau_approve}}));
            md += "\n![approval boundary](boundary.svg)\n";
        }
    }

    if (calibration_text) {
        md += "\n## Calibration over synthetic policies\n\n";
        md += markdown_table(parse_csv(*calibration_text));
    }

    if (sweep_summary_text) {
        md += "\n## Checkpoint ladder sweep\n\n";
        const auto rows = parse_csv(*sweep_summary_text);
        md += markdown_table(rows);
        int mismatches = 0;
        for (std::size_t r = 1; r < rows.size(); ++r)
            if (rows[r][5] == "approve" && rows[r][7] == "continue") ++mismatches;
        md += "\nRows where the empirical rule approves but the posterior still says continue: " +
              std::to_string(mismatches) + "\n";
        if (sweep_sequential_text) {
            md += "\n### Sequential stopping\n\n";
            md += markdown_table(parse_csv(*sweep_sequential_text));
        }
        if (sweep_doc_text) {
            const nlohmann::json doc = nlohmann::json::parse(*sweep_doc_text);
            md += "\nValidation saving across the ladder: " +
                  format_double(doc.at("validation_saving").get<double>()) + "\n";
        }
    }

    write_file(dir / "report.md", md);
}

}  // namespace landerval
