#include "mmc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmc/io.hpp"

namespace mmc::svg {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

struct Mapper {
    double x_min, x_max, y_min, y_max;

    double px(double x) const {
        return kMarginLeft + (x - x_min) / (x_max - x_min) * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        return kHeight - kMarginBottom -
               (y - y_min) / (y_max - y_min) * (kHeight - kMarginTop - kMarginBottom);
    }
};

std::string num(double v) { return io::fmt(v, 2); }

void header(std::ostringstream& s, const std::string& title) {
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\">\n"
      << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" << title << "</text>\n";
}

void axes(std::ostringstream& s, const Mapper& m, const std::string& x_label,
          const std::string& y_label) {
    s << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kHeight - kMarginBottom)
      << "\" x2=\"" << num(kWidth - kMarginRight) << "\" y2=\"" << num(kHeight - kMarginBottom)
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kMarginTop) << "\" x2=\""
      << num(kMarginLeft) << "\" y2=\"" << num(kHeight - kMarginBottom)
      << "\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k) {
        const double xv = m.x_min + (m.x_max - m.x_min) * k / 5.0;
        const double yv = m.y_min + (m.y_max - m.y_min) * k / 5.0;
        s << "<line x1=\"" << num(m.px(xv)) << "\" y1=\"" << num(kHeight - kMarginBottom)
          << "\" x2=\"" << num(m.px(xv)) << "\" y2=\"" << num(kHeight - kMarginBottom + 5)
          << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << num(m.px(xv)) << "\" y=\"" << num(kHeight - kMarginBottom + 20)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
          << io::fmt(xv, 2) << "</text>\n";
        s << "<line x1=\"" << num(kMarginLeft - 5) << "\" y1=\"" << num(m.py(yv)) << "\" x2=\""
          << num(kMarginLeft) << "\" y2=\"" << num(m.py(yv)) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << num(kMarginLeft - 8) << "\" y=\"" << num(m.py(yv) + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
          << io::fmt(yv, 3) << "</text>\n";
    }
    s << "<text x=\"" << num((kMarginLeft + kWidth - kMarginRight) / 2.0) << "\" y=\""
      << num(kHeight - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n";
    s << "<text x=\"18\" y=\"" << num((kMarginTop + kHeight - kMarginBottom) / 2.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << num((kMarginTop + kHeight - kMarginBottom) / 2.0) << ")\">" << y_label << "</text>\n";
}

}  // namespace

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
    Mapper m{0.0, 1.0, 0.0, 1.0};
    bool first = true;
    for (const auto& sr : series) {
        for (std::size_t i = 0; i < sr.x.size(); ++i) {
            const double band = i < sr.band.size() ? sr.band[i] : 0.0;
            const double lo = sr.y[i] - band, hi = sr.y[i] + band;
            if (first) {
                m = {sr.x[i], sr.x[i], lo, hi};
                first = false;
            } else {
                m.x_min = std::min(m.x_min, sr.x[i]);
                m.x_max = std::max(m.x_max, sr.x[i]);
                m.y_min = std::min(m.y_min, lo);
                m.y_max = std::max(m.y_max, hi);
            }
        }
    }
    if (first) m = {0.0, 1.0, 0.0, 1.0};
    if (m.x_max == m.x_min) m.x_max = m.x_min + 1.0;
    if (m.y_max == m.y_min) m.y_max = m.y_min + 1.0;

    std::ostringstream s;
    header(s, title);
    axes(s, m, x_label, y_label);

    for (const auto& sr : series) {
        if (!sr.band.empty()) {
            s << "<polygon fill=\"" << sr.color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < sr.x.size(); ++i)
                s << num(m.px(sr.x[i])) << "," << num(m.py(sr.y[i] + sr.band[i])) << " ";
            for (std::size_t i = sr.x.size(); i-- > 0;)
                s << num(m.px(sr.x[i])) << "," << num(m.py(sr.y[i] - sr.band[i])) << " ";
            s << "\"/>\n";
        }
        s << "<polyline fill=\"none\" stroke=\"" << sr.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < sr.x.size(); ++i)
            s << num(m.px(sr.x[i])) << "," << num(m.py(sr.y[i])) << " ";
        s << "\"/>\n";
    }

    double ly = kMarginTop + 14.0;
    for (const auto& sr : series) {
        s << "<line x1=\"" << num(kWidth - 190) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
          << num(kWidth - 165) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << sr.color
          << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << num(kWidth - 160) << "\" y=\"" << num(ly)
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << sr.label << "</text>\n";
        ly += 16.0;
    }
    s << "</svg>\n";
    io::write_text_file(path, s.str());
}

void write_quiver_plot(const std::filesystem::path& path, const std::string& title,
                       const std::vector<Arrow>& arrows, double extent) {
    Mapper m{-extent, extent, -extent * kHeight / kWidth, extent * kHeight / kWidth};
    std::ostringstream s;
    header(s, title);
    axes(s, m, "x [segment lengths]", "y [segment lengths]");
    for (const auto& a : arrows) {
        const double x1 = m.px(a.base.x), y1 = m.py(a.base.y);
        const double x2 = m.px(a.base.x + a.delta.x), y2 = m.py(a.base.y + a.delta.y);
        s << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
          << "\" y2=\"" << num(y2) << "\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n";
        // arrow head
        const double dx = x2 - x1, dy = y2 - y1;
        const double len = std::hypot(dx, dy);
        if (len > 1e-9) {
            const double ux = dx / len, uy = dy / len;
            const double hx = x2 - 5 * ux, hy = y2 - 5 * uy;
            s << "<line x1=\"" << num(x2) << "\" y1=\"" << num(y2) << "\" x2=\""
              << num(hx - 2.5 * uy) << "\" y2=\"" << num(hy + 2.5 * ux)
              << "\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n";
            s << "<line x1=\"" << num(x2) << "\" y1=\"" << num(y2) << "\" x2=\""
              << num(hx + 2.5 * uy) << "\" y2=\"" << num(hy - 2.5 * ux)
              << "\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n";
        }
    }
    s << "</svg>\n";
    io::write_text_file(path, s.str());
}

void write_arm_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<ArmPose>& poses, Vec2 target) {
    const double extent = 3.3;
    Mapper m{-extent, extent, -extent * kHeight / kWidth, extent * kHeight / kWidth};
    std::ostringstream s;
    header(s, title);
    axes(s, m, "x [segment lengths]", "y [segment lengths]");
    for (const auto& pose : poses) {
        s << "<polyline fill=\"none\" stroke=\"" << (pose.emphasized ? "#d62728" : "#7f7f7f")
          << "\" stroke-width=\"" << (pose.emphasized ? "2.5" : "1") << "\""
          << (pose.emphasized ? "" : " stroke-dasharray=\"4 3\"") << " points=\"";
        for (const Vec2& j : pose.joints) s << num(m.px(j.x)) << "," << num(m.py(j.y)) << " ";
        s << "\"/>\n";
        for (const Vec2& j : pose.joints)
            s << "<circle cx=\"" << num(m.px(j.x)) << "\" cy=\"" << num(m.py(j.y))
              << "\" r=\"2.5\" fill=\"" << (pose.emphasized ? "#d62728" : "#7f7f7f") << "\"/>\n";
    }
    s << "<circle cx=\"" << num(m.px(target.x)) << "\" cy=\"" << num(m.py(target.y))
      << "\" r=\"5\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\"/>\n";
    s << "</svg>\n";
    io::write_text_file(path, s.str());
}

}  // namespace mmc::svg
