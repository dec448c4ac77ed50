#include <algorithm>
#include <cmath>
#include <fstream>

#include "agora/errors.hpp"
#include "agora/io.hpp"

namespace agora {
namespace {

struct ViewBox {
    double x0, y0, scale;
};

ViewBox fit_view(const std::vector<double>& pts, int size_px) {
    double xmin = pts[0], xmax = pts[0], ymin = pts[1], ymax = pts[1];
    for (std::size_t i = 0; i < pts.size(); i += 2) {
        xmin = std::min(xmin, pts[i]);
        xmax = std::max(xmax, pts[i]);
        ymin = std::min(ymin, pts[i + 1]);
        ymax = std::max(ymax, pts[i + 1]);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double margin = 0.05 * span;
    ViewBox v;
    v.scale = (size_px * 1.0) / (span + 2 * margin);
    v.x0 = xmin - margin;
    v.y0 = ymin - margin;
    return v;
}

}  // namespace

void emit_scatter_svg(const std::vector<double>& points, int d,
                      const std::vector<int>* parents, const std::string& path,
                      const ScatterOptions& opt) {
    if (d != 2) throw ValidationError("emit_scatter_svg: only d = 2 is plottable");
    if (points.empty() || points.size() % 2 != 0)
        throw ValidationError("emit_scatter_svg: empty or malformed point list");
    const std::size_t n = points.size() / 2;
    if (parents && parents->size() != n)
        throw ValidationError("emit_scatter_svg: parent list size mismatch");

    const ViewBox v = fit_view(points, opt.size_px);
    const auto sx = [&](double x) { return (x - v.x0) * v.scale; };
    const auto sy = [&](double y) { return opt.size_px - (y - v.y0) * v.scale; };
    double r = opt.point_radius_px;
    if (r <= 0.0) {
        r = std::clamp(120.0 / std::sqrt(static_cast<double>(n)), 0.4, 4.0);
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.size_px
        << "\" height=\"" << opt.size_px << "\" viewBox=\"0 0 " << opt.size_px << " "
        << opt.size_px << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    char buf[192];
    if (opt.edges && parents) {
        out << "<g stroke=\"#88aaff\" stroke-width=\"0.4\" stroke-opacity=\"0.6\">\n";
        for (std::size_t i = 0; i < n; ++i) {
            const int p = (*parents)[i];
            if (p < 0) continue;
            std::snprintf(buf, sizeof(buf),
                          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\"/>\n",
                          sx(points[2 * i]), sy(points[2 * i + 1]),
                          sx(points[2 * static_cast<std::size_t>(p)]),
                          sy(points[2 * static_cast<std::size_t>(p) + 1]));
            out << buf;
        }
        out << "</g>\n";
    }
    out << "<g fill=\"#13335b\" fill-opacity=\"0.75\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\"/>\n",
                      sx(points[2 * i]), sy(points[2 * i + 1]), r);
        out << buf;
    }
    out << "</g>\n</svg>\n";
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

void emit_loglog_svg(const DimFit& fit, const std::string& path) {
    if (fit.eps.empty()) throw ValidationError("emit_loglog_svg: empty fit");
    const int w = 720, h = 540, pad = 60;

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < fit.eps.size(); ++i) {
        if (!(fit.stat[i] > 0.0)) continue;
        const double x = fit.method == DimMethod::BoxCount ? std::log(1.0 / fit.eps[i])
                                                           : std::log(fit.eps[i]);
        xs.push_back(x);
        ys.push_back(std::log(fit.stat[i]));
    }
    if (xs.size() < 2) throw ValidationError("emit_loglog_svg: fewer than 2 usable scales");
    const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
    const double xmin = *xmin_it, xmax = *xmax_it;
    const double ymin = *ymin_it, ymax = *ymax_it;
    const double xspan = std::max(xmax - xmin, 1e-12);
    const double yspan = std::max(ymax - ymin, 1e-12);
    const auto px = [&](double x) { return pad + (x - xmin) / xspan * (w - 2 * pad); };
    const auto py = [&](double y) { return h - pad - (y - ymin) / yspan * (h - 2 * pad); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad
        << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
        << h - pad << "\" stroke=\"black\"/>\n";
    char buf[256];
    // fitted line across the x-range
    const double yl = fit.intercept + fit.slope * xmin;
    const double yr = fit.intercept + fit.slope * xmax;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"#cc3333\" stroke-width=\"1.5\"/>\n",
                  px(xmin), py(yl), px(xmax), py(yr));
    out << buf;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3.5\" fill=\"#13335b\"/>\n",
                      px(xs[i]), py(ys[i]));
        out << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"14\">"
                  "%s: slope = %.4f (stderr %.4f)</text>\n",
                  pad, pad - 20, dim_method_name(fit.method), fit.slope, fit.slope_stderr);
    out << buf;
    const char* xlabel = fit.method == DimMethod::BoxCount ? "log(1/eps)" : "log(eps)";
    const char* ylabel = fit.method == DimMethod::BoxCount ? "log N(eps)" : "log C(eps)";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" font-size=\"12\">%s "
                  "vs %s</text>\n",
                  w / 2 - 60, h - pad / 3, ylabel, xlabel);
    out << buf;
    out << "</svg>\n";
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace agora
