#include "lanesafe/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace lanesafe {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5g", v);
    return buf;
}

const char* kPalette[] = {"#c0392b", "#2471a3", "#1e8449", "#b7950b", "#7d3c98", "#117a65"};

std::string vehicle_color(int vehicle) {
    return kPalette[static_cast<std::size_t>(vehicle) % 6];
}

struct Mapper {
    double x0, x1, y0, y1;  // world window
    double px, py;          // pixel size
    double margin = 40.0;

    double X(double x) const { return margin + (x - x0) / (x1 - x0) * (px - 2 * margin); }
    double Y(double y) const { return py - margin - (y - y0) / (y1 - y0) * (py - 2 * margin); }
};

void polyline(std::ostringstream& svg, const std::vector<std::pair<double, double>>& pts,
              const std::string& color, double width, const std::string& dash = "") {
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width)
        << "\"";
    if (!dash.empty()) svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"";
    for (const auto& [x, y] : pts) {
        svg << fmt(x) << "," << fmt(y) << " ";
    }
    svg << "\"/>\n";
}

void text(std::ostringstream& svg, double x, double y, const std::string& s, int size = 12,
          const std::string& color = "#333") {
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" fill=\"" << color << "\">" << s << "</text>\n";
}

void save(const std::ostringstream& svg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write SVG to " + path.string());
    }
    out << svg.str();
}

}  // namespace

void write_trajectory_svg(const TrajectoryLog& log, const std::filesystem::path& path) {
    const LaneGeometry& geo = log.geometry;
    double x_min = 1e300, x_max = -1e300;
    for (const StepRecord& r : log.records) {
        x_min = std::min(x_min, r.state.x);
        x_max = std::max(x_max, r.state.x);
    }
    for (const VehicleState& s : log.final_states) {
        x_min = std::min(x_min, s.x);
        x_max = std::max(x_max, s.x);
    }
    if (x_min > x_max) {
        x_min = 0.0;
        x_max = 1.0;
    }
    x_min -= 10.0;
    x_max += 10.0;

    const double road_bottom = geo.lane_width * 0.5;
    const double road_top = geo.lane_width * (geo.lane_count + 0.5);

    Mapper m;
    m.x0 = x_min;
    m.x1 = x_max;
    m.y0 = road_bottom - 2.0;
    m.y1 = road_top + 2.0;
    m.px = 1100.0;
    m.py = 120.0 + 45.0 * geo.lane_count;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(m.px) << "\" height=\""
        << fmt(m.py) << "\" viewBox=\"0 0 " << fmt(m.px) << " " << fmt(m.py) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Road surface and lane boundaries.
    svg << "<rect x=\"" << fmt(m.X(x_min)) << "\" y=\"" << fmt(m.Y(road_top)) << "\" width=\""
        << fmt(m.X(x_max) - m.X(x_min)) << "\" height=\"" << fmt(m.Y(road_bottom) - m.Y(road_top))
        << "\" fill=\"#f2f3f4\"/>\n";
    polyline(svg, {{m.X(x_min), m.Y(road_bottom)}, {m.X(x_max), m.Y(road_bottom)}}, "#555", 2.0);
    polyline(svg, {{m.X(x_min), m.Y(road_top)}, {m.X(x_max), m.Y(road_top)}}, "#555", 2.0);
    for (int l = 1; l < geo.lane_count; ++l) {
        const double y = geo.lane_width * (l + 0.5);
        polyline(svg, {{m.X(x_min), m.Y(y)}, {m.X(x_max), m.Y(y)}}, "#999", 1.2, "10,8");
    }
    for (int l = 1; l <= geo.lane_count; ++l) {
        text(svg, m.X(x_min) + 4, m.Y(geo.lane_center(l)) + 4, "lane " + std::to_string(l), 11,
             "#888");
    }

    // Paths.
    std::vector<std::vector<std::pair<double, double>>> paths(
        static_cast<std::size_t>(log.vehicle_count));
    for (const StepRecord& r : log.records) {
        paths[static_cast<std::size_t>(r.vehicle)].emplace_back(m.X(r.state.x), m.Y(r.state.y));
    }
    for (std::size_t i = 0; i < log.final_states.size() && i < paths.size(); ++i) {
        paths[i].emplace_back(m.X(log.final_states[i].x), m.Y(log.final_states[i].y));
    }
    for (int v = 0; v < log.vehicle_count; ++v) {
        polyline(svg, paths[static_cast<std::size_t>(v)], vehicle_color(v), 1.5);
    }

    // Vehicle shadows at whole seconds, fading in toward the end.
    const double body_len = 4.4, body_wid = 1.8;
    const double t_end = log.final_time;
    for (const StepRecord& r : log.records) {
        const double phase = r.t / std::max(1.0, t_end);
        if (std::abs(r.t - std::round(r.t)) > 1e-9) continue;
        const double opacity = 0.2 + 0.75 * phase;
        const double cx = m.X(r.state.x);
        const double cy = m.Y(r.state.y);
        const double sx = (m.X(r.state.x + 1.0) - cx);  // pixels per meter in x
        const double sy = (cy - m.Y(r.state.y + 1.0));
        svg << "<g transform=\"translate(" << fmt(cx) << "," << fmt(cy) << ") rotate("
            << fmt(-r.state.psi * 180.0 / M_PI) << ")\">"
            << "<rect x=\"" << fmt(-body_len / 2 * sx) << "\" y=\"" << fmt(-body_wid / 2 * sy)
            << "\" width=\"" << fmt(body_len * sx) << "\" height=\"" << fmt(body_wid * sy)
            << "\" rx=\"2\" fill=\"" << vehicle_color(r.vehicle) << "\" fill-opacity=\""
            << fmt(opacity) << "\"/></g>\n";
        if (r.vehicle == 0) {
            text(svg, cx - 8, m.Y(road_top) - 6, "t=" + fmt(r.t), 10, "#666");
        }
    }

    text(svg, m.margin, 20, log.scenario_name + "  (top-down trajectory)", 14);
    text(svg, m.px - 160, m.py - 10, "x [m] -->", 11, "#888");
    svg << "</svg>\n";
    save(svg, path);
}

void write_barrier_svg(const TrajectoryLog& log, const std::filesystem::path& path) {
    const double panel_w = 1100.0, panel_h = 170.0, gap = 26.0;
    const double height = 40.0 + (panel_h + gap) * log.vehicle_count;

    const double b_low = -1.0, b_high = 12.0;  // display clamp

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(panel_w) << "\" height=\""
        << fmt(height) << "\" viewBox=\"0 0 " << fmt(panel_w) << " " << fmt(height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(svg, 20, 20, log.scenario_name + "  (barrier values, clamped to [-1, 12])", 14);

    const char* series_color[7] = {"#c0392b", "#2471a3", "#1e8449", "#b7950b",
                                   "#7d3c98", "#117a65", "#d35400"};

    for (int v = 0; v < log.vehicle_count; ++v) {
        const double top = 36.0 + (panel_h + gap) * v;
        const double left = 60.0, right = panel_w - 120.0;
        auto X = [&](double t) {
            return left + t / std::max(1e-9, log.final_time) * (right - left);
        };
        auto Y = [&](double b) {
            const double c = std::clamp(b, b_low, b_high);
            return top + panel_h - (c - b_low) / (b_high - b_low) * panel_h;
        };

        svg << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\""
            << fmt(right - left) << "\" height=\"" << fmt(panel_h)
            << "\" fill=\"#fbfbfb\" stroke=\"#ccc\"/>\n";
        polyline(svg, {{left, Y(0.0)}, {right, Y(0.0)}}, "#444", 1.0, "4,4");
        text(svg, left - 38, Y(0.0) + 4, "b=0", 10, "#444");
        text(svg, left, top - 5, "vehicle " + std::to_string(v), 12);

        for (int k = 0; k < 7; ++k) {
            std::vector<std::pair<double, double>> pts;
            for (const StepRecord& r : log.records) {
                if (r.vehicle != v) continue;
                pts.emplace_back(X(r.t), Y(r.barriers[static_cast<std::size_t>(k)]));
            }
            polyline(svg, pts, series_color[k], 1.2);
            text(svg, right + 8, top + 14 + 14 * k, "b" + std::to_string(k + 1), 10,
                 series_color[k]);
        }
    }
    svg << "</svg>\n";
    save(svg, path);
}

}  // namespace lanesafe
