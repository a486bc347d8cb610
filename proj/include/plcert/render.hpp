#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "plcert/degree.hpp"
#include "plcert/errors.hpp"
#include "plcert/pl_function.hpp"
#include "plcert/polyhedron.hpp"
#include "plcert/polyhedron_queries.hpp"
#include "plcert/rational.hpp"

// Deterministic SVG picture of a planar subdivision: cells clipped to a
// square box, filled by determinant sign (+1 blue, -1 red, 0 gray), with
// unbounded cells hatched. Elements are emitted in cell-index order so the
// output is stable and snapshot-testable.

namespace plcert {

namespace detail {

inline std::string svg_num(double v) {
    if (v == 0) v = 0;  // avoid "-0.0000"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace detail

inline std::string render_svg(const PLFunction& f, const Rational& box_lo, const Rational& box_hi) {
    detail::require_validated_fn(f, "render_svg");
    if (f.n() != 2) throw DimensionError("render_svg: only 2-dimensional functions can be rendered");
    if (!(box_lo < box_hi)) throw PreconditionError("render_svg: box must have positive side length");

    constexpr double kSide = 640.0;
    const double lo = to_double(box_lo);
    const double span = to_double(box_hi - box_lo);
    const auto px = [&](const Rational& x) { return (to_double(x) - lo) / span * kSide; };
    const auto py = [&](const Rational& y) { return kSide - (to_double(y) - lo) / span * kSide; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n";
    out += "  <defs>\n"
           "    <pattern id=\"hatch\" width=\"8\" height=\"8\" patternUnits=\"userSpaceOnUse\" "
           "patternTransform=\"rotate(45)\">\n"
           "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#000000\" "
           "stroke-opacity=\"0.25\" stroke-width=\"2\"/>\n"
           "    </pattern>\n"
           "  </defs>\n";
    out += "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";

    const HPolyhedron box = box_polyhedron(2, box_lo, box_hi);
    for (std::size_t k = 0; k < f.cells().size(); ++k) {
        const HPolyhedron clipped = f.cells()[k].polyhedron.intersect(box.constraints());
        if (!interior_point(clipped)) continue;  // nothing visible in the box
        const std::vector<RVector> verts = vertices_2d(clipped);
        if (verts.size() < 3) continue;
        std::string points;
        for (const RVector& v : verts) {
            if (!points.empty()) points += " ";
            points += detail::svg_num(px(v[0])) + "," + detail::svg_num(py(v[1]));
        }
        const int sign = f.cell_det_sign(k);
        const char* fill = sign > 0 ? "#6699dd" : (sign < 0 ? "#dd6655" : "#aaaaaa");
        out += "  <polygon points=\"" + points + "\" fill=\"" + fill +
               "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
        if (!f.cell_bounded(k))
            out += "  <polygon points=\"" + points + "\" fill=\"url(#hatch)\" stroke=\"none\"/>\n";
    }

    out += "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"none\" "
           "stroke=\"#000000\" stroke-width=\"2\"/>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace plcert
