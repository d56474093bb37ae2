#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace fragile_bandits {

/// Minimal multi-series line chart.  Presentation only; nothing consumes
/// these files programmatically.
class SvgChart {
public:
    SvgChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(const std::string& name, const std::vector<double>& xs,
                    const std::vector<double>& ys) {
        series_.push_back({name, xs, ys});
    }

    std::string render() const {
        const double w = 640, h = 420, ml = 60, mr = 20, mt = 40, mb = 50;
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& s : series_) {
            for (double x : s.xs) {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
            }
            for (double y : s.ys) {
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
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
        auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
        auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };
        static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                       "#ff7f0e", "#8c564b"};
        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
          << "\">\n";
        o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        o << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
          << title_ << "</text>\n";
        o << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
          << h - mb << "\" stroke=\"black\"/>\n";
        o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
          << h - mb << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << w / 2 << "\" y=\"" << h - 12
          << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label_ << "</text>\n";
        o << "<text x=\"16\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
          << "transform=\"rotate(-90 16 " << h / 2 << ")\">" << y_label_ << "</text>\n";
        for (size_t s = 0; s < series_.size(); ++s) {
            const auto& sr = series_[s];
            o << "<polyline fill=\"none\" stroke=\"" << colors[s % 6]
              << "\" stroke-width=\"1.5\" points=\"";
            for (size_t i = 0; i < sr.xs.size() && i < sr.ys.size(); ++i)
                o << px(sr.xs[i]) << "," << py(sr.ys[i]) << " ";
            o << "\"/>\n";
            o << "<text x=\"" << w - mr - 4 << "\" y=\"" << mt + 16 * (s + 1)
              << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colors[s % 6] << "\">"
              << sr.name << "</text>\n";
        }
        o << "</svg>\n";
        return o.str();
    }

private:
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

}  // namespace fragile_bandits
