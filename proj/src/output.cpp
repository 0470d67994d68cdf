#include "projifs/output.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace projifs {

std::string csv_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::logic_error("CSV row width does not match the header");
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

std::string svg_circle_ticks(const std::vector<ProjPoint>& points, const std::string& title) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.3 -1.3 2.6 2.6\" width=\"520\" height=\"520\">\n"
      << "<title>" << title << "</title>\n"
      << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999\" stroke-width=\"0.004\"/>\n"
      << "<g stroke=\"#000\" stroke-width=\"0.003\">\n";
    char buf[160];
    for (auto p : points) {
        const double a = 2 * p.theta();
        const double c = std::cos(a), sn = -std::sin(a);  // svg y points down
        std::snprintf(buf, sizeof buf, "<line x1=\"%.5f\" y1=\"%.5f\" x2=\"%.5f\" y2=\"%.5f\"/>\n", 0.95 * c, 0.95 * sn,
                      1.05 * c, 1.05 * sn);
        s << buf;
    }
    s << "</g>\n</svg>\n";
    return s.str();
}

std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& x_label,
                          const std::string& y_label) {
    const double w = 600, h = 400, pad = 50;
    double x0 = xs.empty() ? 0 : xs.front(), x1 = xs.empty() ? 1 : xs.back();
    if (x1 == x0) x1 = x0 + 1;
    double y0 = 0, y1 = 1;
    for (double y : ys)
        if (std::isfinite(y)) y1 = std::max(y1, y);
    auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (w - 2 * pad); };
    auto py = [&](double y) { return h - pad - (y - y0) / (y1 - y0) * (h - 2 * pad); };
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
      << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << w - 2 * pad << "\" height=\"" << h - 2 * pad
      << "\" fill=\"none\" stroke=\"#999\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << x_label << "</text>\n"
      << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2 << ")\" text-anchor=\"middle\">"
      << y_label << "</text>\n<polyline fill=\"none\" stroke=\"#000\" points=\"";
    char buf[64];
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if (!std::isfinite(ys[i])) continue;
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(xs[i]), py(ys[i]));
        s << buf;
    }
    s << "\"/>\n</svg>\n";
    return s.str();
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["config"] = m.config_path;
    j["command"] = m.command;
    j["argv"] = m.argv;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    j["parameters"] = params;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["wall_seconds"] = m.wall_seconds;
    j["outputs"] = m.outputs;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace projifs
