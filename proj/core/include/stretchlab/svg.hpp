#ifndef STRETCHLAB_SVG_HPP
#define STRETCHLAB_SVG_HPP

#include <string>
#include <vector>

#include "stretchlab/diagnostics.hpp"

namespace stretchlab {

struct SvgStyle {
    double stroke_width = 0.008;
    bool draw_axes = true;
    bool draw_unit_circle = true;
    /// Stroke colors cycled per polyline.
    std::vector<std::string> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                     "#bcbd22", "#e377c2", "#393b79", "#637939"};
};

/// Standalone SVG of the (x, y) projection of the polylines on the fixed
/// viewBox [-1.5, 1.5]^2, y up. Identical input yields byte-identical output.
std::string svg_document(const std::vector<Polyline>& polylines,
                         const SvgStyle& style = {});

/// svg_document written to a file.
void emit_svg(const std::string& path, const std::vector<Polyline>& polylines,
              const SvgStyle& style = {});

}  // namespace stretchlab

#endif
