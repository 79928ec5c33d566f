#include "stretchlab/svg.hpp"

#include <cstdio>
#include <fstream>

#include "stretchlab/errors.hpp"

namespace stretchlab {

namespace {

std::string coord(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5f", x);
    return buf;
}

}  // namespace

std::string svg_document(const std::vector<Polyline>& polylines, const SvgStyle& style) {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.5 -1.5 3 3\">\n";
    s += "<rect x=\"-1.5\" y=\"-1.5\" width=\"3\" height=\"3\" fill=\"white\"/>\n";
    s += "<g transform=\"scale(1,-1)\">\n";
    if (style.draw_axes) {
        s += "<line x1=\"-1.5\" y1=\"0\" x2=\"1.5\" y2=\"0\" stroke=\"#dddddd\" "
             "stroke-width=\"0.004\"/>\n";
        s += "<line x1=\"0\" y1=\"-1.5\" x2=\"0\" y2=\"1.5\" stroke=\"#dddddd\" "
             "stroke-width=\"0.004\"/>\n";
    }
    if (style.draw_unit_circle) {
        s += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#eeeeee\" "
             "stroke-width=\"0.004\"/>\n";
    }
    for (std::size_t i = 0; i < polylines.size(); ++i) {
        const std::string& color =
            style.palette.empty() ? std::string("#000000")
                                  : style.palette[i % style.palette.size()];
        s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             coord(style.stroke_width) + "\" points=\"";
        const auto& vs = polylines[i].vertices;
        for (std::size_t j = 0; j < vs.size(); ++j) {
            if (j) s += ' ';
            s += coord(vs[j].x) + "," + coord(vs[j].y);
        }
        s += "\"/>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

void emit_svg(const std::string& path, const std::vector<Polyline>& polylines,
              const SvgStyle& style) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file: " + path);
    out << svg_document(polylines, style);
}

}  // namespace stretchlab
