#pragma once

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "scan.hpp"

namespace spinent {

// Static plot of the sweep estimators against h, with the factorizing field
// marked when known.  No external renderer: plain polylines.
inline std::string sweep_svg(const std::vector<SweepRow>& rows,
                             std::optional<double> h_f) {
    const int W = 860, H = 520, ml = 70, mr = 180, mt = 30, mb = 55;
    const double pw = W - ml - mr, ph = H - mt - mb;

    double hmin = 1e300, hmax = -1e300, ymax = 1.0;
    for (const auto& r : rows) {
        if (!r.converged) continue;
        hmin = std::min(hmin, r.h);
        hmax = std::max(hmax, r.h);
        if (r.ratio) ymax = std::max(ymax, *r.ratio);
    }
    if (!(hmax > hmin)) { hmin = 0.0; hmax = 1.0; }
    ymax = std::min(ymax, 2.0);

    auto X = [&](double h) { return ml + pw * (h - hmin) / (hmax - hmin); };
    auto Y = [&](double y) { return mt + ph * (1.0 - std::clamp(y, 0.0, ymax) / ymax); };

    struct Curve {
        const char* name;
        const char* color;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Curve> curves = {{"tau1_broken", "#1f77b4", {}},
                                 {"tau2", "#d62728", {}},
                                 {"R = tau2/tau1", "#2ca02c", {}},
                                 {"M^z", "#9467bd", {}},
                                 {"M^x_lr", "#ff7f0e", {}}};
    for (const auto& r : rows) {
        if (!r.converged) continue;
        curves[0].pts.emplace_back(r.h, r.tau1_broken);
        curves[1].pts.emplace_back(r.h, r.tau2);
        if (r.ratio) curves[2].pts.emplace_back(r.h, *r.ratio);
        curves[3].pts.emplace_back(r.h, r.mz);
        curves[4].pts.emplace_back(r.h, r.mx_lr);
    }

    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "' font-family='sans-serif' font-size='13'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<rect x='" << ml << "' y='" << mt << "' width='" << pw << "' height='" << ph
      << "' fill='none' stroke='#333'/>\n";

    for (int t = 0; t <= 5; ++t) {
        double h = hmin + t * (hmax - hmin) / 5.0;
        double y = t * ymax / 5.0;
        s << "<line x1='" << X(h) << "' y1='" << mt + ph << "' x2='" << X(h) << "' y2='"
          << mt + ph + 5 << "' stroke='#333'/>\n"
          << "<text x='" << X(h) << "' y='" << mt + ph + 20
          << "' text-anchor='middle'>" << std::setprecision(3) << h << "</text>\n"
          << "<line x1='" << ml - 5 << "' y1='" << Y(y) << "' x2='" << ml << "' y2='"
          << Y(y) << "' stroke='#333'/>\n"
          << "<text x='" << ml - 10 << "' y='" << Y(y) + 4
          << "' text-anchor='end'>" << std::setprecision(3) << y << "</text>\n";
    }
    s << "<text x='" << ml + pw / 2 << "' y='" << H - 12
      << "' text-anchor='middle'>reduced field h</text>\n";

    if (h_f && *h_f >= hmin && *h_f <= hmax)
        s << "<line x1='" << X(*h_f) << "' y1='" << mt << "' x2='" << X(*h_f) << "' y2='"
          << mt + ph << "' stroke='#888' stroke-dasharray='6,4'/>\n"
          << "<text x='" << X(*h_f) + 4 << "' y='" << mt + 16
          << "' fill='#555'>h_f</text>\n";

    int legend_y = mt + 10;
    for (const auto& c : curves) {
        if (c.pts.empty()) continue;
        s << "<polyline fill='none' stroke='" << c.color << "' stroke-width='1.6' points='";
        for (const auto& [h, y] : c.pts) s << X(h) << ',' << Y(y) << ' ';
        s << "'/>\n";
        s << "<line x1='" << W - mr + 12 << "' y1='" << legend_y << "' x2='"
          << W - mr + 40 << "' y2='" << legend_y << "' stroke='" << c.color
          << "' stroke-width='2'/>\n"
          << "<text x='" << W - mr + 46 << "' y='" << legend_y + 4 << "'>" << c.name
          << "</text>\n";
        legend_y += 22;
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace spinent
