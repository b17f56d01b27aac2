#include "spikepca/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "spikepca/errors.hpp"

namespace spikepca {

const char* const kSweepCsvHeader =
    "grid_value,trial,lambda1,lambda2,overlap,sin_theta,crossover,"
    "lambda_limit,r2_limit,above_threshold,lambda_lower,lambda_upper,sintheta_upper,bounds_valid";

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require_nonempty(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw IoFailure("export: no records to write");
}

}  // namespace

void export_records_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    require_nonempty(records);
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    out << kSweepCsvHeader << "\n";
    for (const SweepRecord& rec : records) {
        for (std::size_t t = 0; t < rec.trials.size(); ++t) {
            const TrialPoint& pt = rec.trials[t];
            const Overlay& ov = rec.overlay;
            out << fmt(rec.grid_value) << ',' << t << ',' << fmt(pt.lambda1) << ','
                << fmt(pt.lambda2) << ',' << fmt(pt.overlap) << ',' << fmt(pt.sin_theta) << ','
                << (pt.crossover ? 1 : 0) << ',' << fmt(ov.lambda_limit) << ','
                << fmt(ov.r2_limit) << ',' << (ov.above_threshold ? 1 : 0) << ','
                << (ov.bounds_valid ? fmt(ov.lambda_lower) : "") << ','
                << (ov.bounds_valid ? fmt(ov.lambda_upper) : "") << ','
                << (ov.bounds_valid ? fmt(ov.sintheta_upper) : "") << ','
                << (ov.bounds_valid ? 1 : 0) << "\n";
        }
    }
    if (!out) throw IoFailure("write failed: " + path);
}

void export_records_json(const std::vector<SweepRecord>& records, const std::string& path) {
    require_nonempty(records);
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const SweepRecord& rec : records) {
        nlohmann::ordered_json trials = nlohmann::ordered_json::array();
        for (const TrialPoint& pt : rec.trials)
            trials.push_back({{"lambda1", pt.lambda1},
                              {"lambda2", pt.lambda2},
                              {"overlap", pt.overlap},
                              {"sin_theta", pt.sin_theta},
                              {"crossover", pt.crossover}});
        nlohmann::ordered_json overlay = {{"lambda_limit", rec.overlay.lambda_limit},
                                          {"r2_limit", rec.overlay.r2_limit},
                                          {"above_threshold", rec.overlay.above_threshold},
                                          {"bounds_valid", rec.overlay.bounds_valid}};
        if (rec.overlay.bounds_valid) {
            overlay["lambda_lower"] = rec.overlay.lambda_lower;
            overlay["lambda_upper"] = rec.overlay.lambda_upper;
            overlay["sintheta_upper"] = rec.overlay.sintheta_upper;
        }
        recs.push_back({{"grid_value", rec.grid_value},
                        {"mean_overlap", rec.mean_overlap},
                        {"mean_lambda1", rec.mean_lambda1},
                        {"overlay", overlay},
                        {"trials", trials}});
    }
    nlohmann::ordered_json j;
    j["records"] = recs;
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoFailure("write failed: " + path);
}

namespace {

struct Series {
    std::string color;
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// minimal chart: axes, min/max tick labels, polylines
void svg_panel(std::ostream& out, double x0, double y0, double w, double h,
               const std::vector<Series>& series, const std::string& title) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Series& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymin > ymax) {
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double ml = 54, mb = 34, mt = 24, mr = 12;
    const double pw = w - ml - mr, ph = h - mt - mb;
    auto sx = [&](double x) { return x0 + ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return y0 + mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    out << "<rect x='" << x0 << "' y='" << y0 << "' width='" << w << "' height='" << h
        << "' fill='white' stroke='none'/>\n";
    out << "<line x1='" << x0 + ml << "' y1='" << y0 + mt + ph << "' x2='" << x0 + ml + pw
        << "' y2='" << y0 + mt + ph << "' stroke='black'/>\n";
    out << "<line x1='" << x0 + ml << "' y1='" << y0 + mt << "' x2='" << x0 + ml << "' y2='"
        << y0 + mt + ph << "' stroke='black'/>\n";
    char buf[64];
    auto label = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.4g", v);
        return std::string(buf);
    };
    out << "<text x='" << x0 + ml << "' y='" << y0 + mt + ph + 16
        << "' font-size='11'>" << label(xmin) << "</text>\n";
    out << "<text x='" << x0 + ml + pw - 28 << "' y='" << y0 + mt + ph + 16
        << "' font-size='11'>" << label(xmax) << "</text>\n";
    out << "<text x='" << x0 + 4 << "' y='" << y0 + mt + ph << "' font-size='11'>" << label(ymin)
        << "</text>\n";
    out << "<text x='" << x0 + 4 << "' y='" << y0 + mt + 10 << "' font-size='11'>" << label(ymax)
        << "</text>\n";
    out << "<text x='" << x0 + ml << "' y='" << y0 + 14 << "' font-size='12'>" << title
        << "</text>\n";

    double ly = y0 + mt + 12;
    for (const Series& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.4' points='";
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            out << sx(x) << ',' << sy(y) << ' ';
        }
        out << "'/>\n";
        out << "<text x='" << x0 + ml + pw - 150 << "' y='" << ly << "' font-size='11' fill='"
            << s.color << "'>" << s.label << "</text>\n";
        ly += 13;
    }
}

}  // namespace

void export_records_svg(const std::vector<SweepRecord>& records, const std::string& path) {
    require_nonempty(records);
    Series mean_r{"#1f77b4", "mean R", {}};
    Series r_limit{"#d62728", "asymptotic R", {}};
    Series l1{"#1f77b4", "mean lambda1", {}};
    Series l2{"#2ca02c", "mean lambda2", {}};
    Series l_limit{"#d62728", "asymptotic lambda", {}};
    for (const SweepRecord& rec : records) {
        mean_r.points.push_back({rec.grid_value, rec.mean_overlap});
        r_limit.points.push_back({rec.grid_value, std::sqrt(std::max(0.0, rec.overlay.r2_limit))});
        l1.points.push_back({rec.grid_value, rec.mean_lambda1});
        double ml2 = 0.0;
        for (const TrialPoint& pt : rec.trials) ml2 += pt.lambda2;
        l2.points.push_back({rec.grid_value, ml2 / static_cast<double>(rec.trials.size())});
        l_limit.points.push_back({rec.grid_value, rec.overlay.lambda_limit});
    }

    std::ofstream out(path);
    if (!out) throw IoFailure("cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='960' height='380' "
           "viewBox='0 0 960 380'>\n";
    svg_panel(out, 0, 0, 470, 370, {mean_r, r_limit}, "overlap vs grid");
    svg_panel(out, 480, 0, 470, 370, {l1, l2, l_limit}, "eigenvalues vs grid");
    out << "</svg>\n";
    if (!out) throw IoFailure("write failed: " + path);
}

std::vector<std::string> export_records(const std::vector<SweepRecord>& records,
                                        const std::string& format, const std::string& base) {
    require_nonempty(records);
    std::vector<std::string> written;
    std::stringstream ss(format);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "csv") {
            export_records_csv(records, base + ".csv");
            written.push_back(base + ".csv");
        } else if (item == "json") {
            export_records_json(records, base + ".json");
            written.push_back(base + ".json");
        } else if (item == "svg") {
            export_records_svg(records, base + ".svg");
            written.push_back(base + ".svg");
        } else if (!item.empty()) {
            throw IoFailure("export: unknown format '" + item + "'");
        }
    }
    if (written.empty()) throw IoFailure("export: no output format selected");
    return written;
}

std::vector<std::vector<double>> parse_csv_numeric(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {  // header
            first = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (cell.empty())
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            else
                row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace spikepca
