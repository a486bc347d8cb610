#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plcert/degree.hpp"
#include "plcert/detail/parallel.hpp"
#include "plcert/detail/rng.hpp"
#include "plcert/errors.hpp"
#include "plcert/linalg.hpp"
#include "plcert/pl_function.hpp"
#include "plcert/polyhedron.hpp"
#include "plcert/polyhedron_queries.hpp"
#include "plcert/rational.hpp"

// Instance generators and an independent brute-force surjectivity oracle.
// Generators build functions from small combinatorial specs and validate
// them before returning; a spec that cannot produce a valid subdivision is
// rejected up front, so a validation finding afterwards is a bug here.

namespace plcert {

/// One-dimensional piecewise affine function described by its breakpoints,
/// the slope of each piece (leftmost ray first), and the value at the first
/// breakpoint. Without breakpoints there is a single affine piece and the
/// intercept is the value at 0.
struct GenSpec1D {
    std::vector<Rational> breakpoints;
    std::vector<Rational> slopes;
    Rational intercept;
};

/// Conewise linear function on the plane: rays in counterclockwise order,
/// one matrix per sector spanned by consecutive rays (wrapping around).
/// Every piece fixes the origin, so continuity is checked on shared rays.
struct FanSpec2D {
    std::vector<RVector> rays;
    std::vector<RMatrix> matrices;
};

namespace detail {

inline void require_generated_valid(PLFunction& f, const char* generator) {
    const ValidationReport report = f.validate();
    if (report.ok) return;
    std::string msg = std::string(generator) + ": generated instance failed validation";
    if (!report.findings.empty()) {
        msg += " (";
        msg += finding_kind_name(report.findings.front().kind);
        msg += ")";
    }
    throw InternalError(msg);
}

}  // namespace detail

inline PLFunction gen_1d(const GenSpec1D& spec) {
    const std::size_t p = spec.breakpoints.size();
    if (spec.slopes.size() != p + 1)
        throw PreconditionError("gen_1d: need exactly one slope per piece (breakpoint count plus one)");
    for (std::size_t i = 1; i < p; ++i)
        if (!(spec.breakpoints[i - 1] < spec.breakpoints[i]))
            throw PreconditionError("gen_1d: breakpoints must be strictly increasing");

    const auto piece = [](const Rational& slope, const Rational& value_at,
                          const Rational& anchor) {
        RMatrix a(1, 1);
        a(0, 0) = slope;
        return Selection{std::move(a), RVector{value_at - slope * anchor}};
    };

    std::vector<Selection> selections;
    std::vector<Cell> cells;
    if (p == 0) {
        selections.push_back(piece(spec.slopes[0], spec.intercept, Rational(0)));
        cells.push_back(Cell{HPolyhedron(1, {}), 0});
    } else {
        // Values at the breakpoints follow from the anchor and the slopes.
        std::vector<Rational> values(p);
        values[0] = spec.intercept;
        for (std::size_t i = 1; i < p; ++i)
            values[i] = values[i - 1] + spec.slopes[i] * (spec.breakpoints[i] - spec.breakpoints[i - 1]);

        selections.push_back(piece(spec.slopes[0], values[0], spec.breakpoints[0]));
        cells.push_back(Cell{
            HPolyhedron(1, {Halfspace(RVector{Rational(1)}, spec.breakpoints[0])}), 0});
        for (std::size_t i = 1; i < p; ++i) {
            selections.push_back(piece(spec.slopes[i], values[i - 1], spec.breakpoints[i - 1]));
            cells.push_back(Cell{
                HPolyhedron(1, {Halfspace(RVector{Rational(-1)}, -spec.breakpoints[i - 1]),
                                Halfspace(RVector{Rational(1)}, spec.breakpoints[i])}),
                i});
        }
        selections.push_back(piece(spec.slopes[p], values[p - 1], spec.breakpoints[p - 1]));
        cells.push_back(Cell{
            HPolyhedron(1, {Halfspace(RVector{Rational(-1)}, -spec.breakpoints[p - 1])}), p});
    }

    PLFunction f(1, std::move(selections), std::move(cells));
    detail::require_generated_valid(f, "gen_1d");
    return f;
}

namespace detail {

inline Rational cross_2d(const RVector& u, const RVector& v) {
    return u[0] * v[1] - u[1] * v[0];
}

}  // namespace detail

inline PLFunction gen_fan_2d(const FanSpec2D& spec) {
    const std::size_t k = spec.rays.size();
    if (k < 3) throw PreconditionError("gen_fan_2d: need at least three rays");
    if (spec.matrices.size() != k)
        throw PreconditionError("gen_fan_2d: need exactly one matrix per sector");
    for (const RVector& r : spec.rays) {
        if (r.dim() != 2) throw PreconditionError("gen_fan_2d: rays must be 2-dimensional");
        if (is_zero(r)) throw PreconditionError("gen_fan_2d: rays must be nonzero");
        if (denominator(r[0]) != 1 || denominator(r[1]) != 1)
            throw PreconditionError("gen_fan_2d: rays must have integer coordinates");
    }
    for (const RMatrix& m : spec.matrices)
        if (m.rows() != 2 || m.cols() != 2)
            throw PreconditionError("gen_fan_2d: sector matrices must be 2x2");

    for (std::size_t i = 0; i < k; ++i) {
        const RVector& u = spec.rays[i];
        const RVector& v = spec.rays[(i + 1) % k];
        if (!(detail::cross_2d(u, v) > 0))
            throw PreconditionError("gen_fan_2d: degenerate sector (consecutive rays must turn left by less than a half turn)");
    }
    // Consecutive positive crossings make the winding around the origin a
    // positive integer; the sectors tile the plane exactly when one fixed
    // direction lies in exactly one half-open sector [ray_i, ray_{i+1}).
    {
        const RVector probe{Rational(1), Rational(0)};
        std::size_t hits = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const RVector& u = spec.rays[i];
            const RVector& v = spec.rays[(i + 1) % k];
            if (detail::cross_2d(u, probe) >= 0 && detail::cross_2d(probe, v) > 0) ++hits;
        }
        if (hits != 1)
            throw PreconditionError("gen_fan_2d: rays wind around the origin more than once");
    }
    for (std::size_t i = 0; i < k; ++i) {
        const RVector& shared = spec.rays[(i + 1) % k];
        if (spec.matrices[i].apply(shared) != spec.matrices[(i + 1) % k].apply(shared))
            throw PreconditionError("gen_fan_2d: sector matrices disagree on a shared ray");
    }

    std::vector<Selection> selections;
    std::vector<Cell> cells;
    selections.reserve(k);
    cells.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const RVector& u = spec.rays[i];
        const RVector& v = spec.rays[(i + 1) % k];
        selections.push_back(Selection{spec.matrices[i], RVector{Rational(0), Rational(0)}});
        cells.push_back(Cell{
            HPolyhedron(2, {Halfspace(RVector{u[1], -u[0]}, Rational(0)),
                            Halfspace(RVector{-v[1], v[0]}, Rational(0))}),
            i});
    }

    PLFunction f(2, std::move(selections), std::move(cells));
    detail::require_generated_valid(f, "gen_fan_2d");
    return f;
}

/// Eight sectors at 45 degrees; sector i maps its rays to the rays at twice
/// the angle, so the whole map doubles angles and covers the plane twice.
inline FanSpec2D angle_doubling_fan_spec() {
    const std::vector<RVector> rays = {
        RVector{Rational(1), Rational(0)},   RVector{Rational(1), Rational(1)},
        RVector{Rational(0), Rational(1)},   RVector{Rational(-1), Rational(1)},
        RVector{Rational(-1), Rational(0)},  RVector{Rational(-1), Rational(-1)},
        RVector{Rational(0), Rational(-1)},  RVector{Rational(1), Rational(-1)}};
    std::vector<RMatrix> matrices;
    matrices.reserve(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
        const RVector& u = rays[i];
        const RVector& v = rays[(i + 1) % rays.size()];
        const RVector pu = rays[(2 * i) % rays.size()];
        const RVector pv = rays[(2 * i + 2) % rays.size()];
        RMatrix basis(2, 2), image(2, 2);
        for (std::size_t r = 0; r < 2; ++r) {
            basis(r, 0) = u[r];
            basis(r, 1) = v[r];
            image(r, 0) = pu[r];
            image(r, 1) = pv[r];
        }
        const auto inv = inverse(basis);
        if (!inv) throw InternalError("angle_doubling_fan_spec: ray basis not invertible");
        matrices.push_back(image * *inv);
    }
    return FanSpec2D{rays, std::move(matrices)};
}

/// Result of perturb_bounded. `note` is nonempty exactly when the function
/// came back unchanged because there was nothing to perturb.
struct PerturbResult {
    PLFunction function;
    std::string note;
};

namespace detail {

struct IntervalPiece {
    std::optional<Rational> lo, hi;  // nullopt marks an unbounded end
    std::size_t cell = 0;
};

inline std::vector<IntervalPiece> interval_decomposition(const PLFunction& f) {
    std::vector<IntervalPiece> pieces(f.cells().size());
    const RVector axis{Rational(1)};
    for (std::size_t c = 0; c < f.cells().size(); ++c) {
        pieces[c].cell = c;
        const LPResult lo = lp_solve(axis, f.cells()[c].polyhedron, LPSense::Min);
        const LPResult hi = lp_solve(axis, f.cells()[c].polyhedron, LPSense::Max);
        if (lo.status == LPStatus::Optimal) pieces[c].lo = lo.optimum;
        if (hi.status == LPStatus::Optimal) pieces[c].hi = hi.optimum;
        if (lo.status == LPStatus::Infeasible || hi.status == LPStatus::Infeasible)
            throw InternalError("interval_decomposition: validated cell is empty");
    }
    std::sort(pieces.begin(), pieces.end(), [](const IntervalPiece& a, const IntervalPiece& b) {
        if (a.lo.has_value() != b.lo.has_value()) return !a.lo.has_value();
        if (!a.lo.has_value()) return false;
        return *a.lo < *b.lo;
    });
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const bool first = i == 0;
        const bool last = i + 1 == pieces.size();
        if (pieces[i].lo.has_value() == first || pieces[i].hi.has_value() == last)
            throw InternalError("interval_decomposition: cells do not chain into a line subdivision");
        if (!first && *pieces[i].lo != *pieces[i - 1].hi)
            throw InternalError("interval_decomposition: cells do not chain into a line subdivision");
    }
    return pieces;
}

inline PerturbResult perturb_bounded_1d(const PLFunction& f, std::uint64_t seed) {
    const auto pieces = interval_decomposition(f);
    // Breakpoints are the shared endpoints of consecutive pieces.
    std::vector<Rational> breakpoints;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) breakpoints.push_back(*pieces[i].hi);
    const std::size_t p = breakpoints.size();
    if (p < 3)
        return PerturbResult{f, "bounded values are pinned by the unbounded pieces; nothing to perturb"};

    std::vector<Rational> values(p);
    for (std::size_t i = 0; i < p; ++i) values[i] = f.evaluate(RVector{breakpoints[i]})[0];

    Rng rng(seed);
    for (std::size_t i = 1; i + 1 < p; ++i) {
        Rational delta;
        int guard = 0;
        do {
            delta = rng.uniform_rational_ball(Rational(2), Integer(4));
            if (++guard > 64) throw InternalError("perturb_bounded: displacement draw stuck at zero");
        } while (delta == 0);
        values[i] += delta;
    }

    // Unbounded pieces keep their selections verbatim; the bounded pieces
    // are rebuilt from the displaced value chain.
    std::vector<Selection> selections;
    std::vector<Cell> cells;
    selections.push_back(f.selections()[f.cells()[pieces.front().cell].selection]);
    cells.push_back(Cell{HPolyhedron(1, {Halfspace(RVector{Rational(1)}, breakpoints[0])}), 0});
    for (std::size_t i = 1; i < p; ++i) {
        const Rational slope = (values[i] - values[i - 1]) / (breakpoints[i] - breakpoints[i - 1]);
        RMatrix a(1, 1);
        a(0, 0) = slope;
        selections.push_back(Selection{std::move(a), RVector{values[i - 1] - slope * breakpoints[i - 1]}});
        cells.push_back(Cell{
            HPolyhedron(1, {Halfspace(RVector{Rational(-1)}, -breakpoints[i - 1]),
                            Halfspace(RVector{Rational(1)}, breakpoints[i])}),
            i});
    }
    selections.push_back(f.selections()[f.cells()[pieces.back().cell].selection]);
    cells.push_back(Cell{HPolyhedron(1, {Halfspace(RVector{Rational(-1)}, -breakpoints[p - 1])}), p});

    PLFunction result(1, std::move(selections), std::move(cells));
    require_generated_valid(result, "perturb_bounded");
    return PerturbResult{std::move(result), ""};
}

inline PerturbResult perturb_bounded_2d(const PLFunction& f, std::uint64_t seed) {
    std::vector<std::size_t> bounded;
    for (std::size_t c = 0; c < f.cells().size(); ++c)
        if (f.cell_bounded(c)) bounded.push_back(c);
    if (bounded.empty()) return PerturbResult{f, "no bounded cell to perturb"};

    Rng rng(seed);
    const std::size_t target = bounded[static_cast<std::size_t>(rng.below(bounded.size()))];
    const std::vector<RVector> verts = vertices_2d(f.cells()[target].polyhedron);
    const std::size_t m = verts.size();
    if (m < 3) throw InternalError("perturb_bounded: bounded cell has fewer than three vertices");

    RVector center{Rational(0), Rational(0)};
    for (const RVector& v : verts) center = center + v;
    center = make_rational(Integer(1), Integer(m)) * center;

    std::vector<RVector> images;
    images.reserve(m);
    for (const RVector& v : verts) images.push_back(f.evaluate(v));
    RVector center_image = f.evaluate(center);
    {
        RVector shift{Rational(0), Rational(0)};
        int guard = 0;
        do {
            shift = RVector{rng.uniform_rational_ball(Rational(1), Integer(4)),
                            rng.uniform_rational_ball(Rational(1), Integer(4))};
            if (++guard > 64) throw InternalError("perturb_bounded: displacement draw stuck at zero");
        } while (is_zero(shift));
        center_image = center_image + shift;
    }

    // Star the polygon from its centroid and send the centroid to the
    // shifted image; boundary vertices keep their images, so the new map
    // agrees with the old one on the cell boundary.
    std::vector<Selection> selections = f.selections();
    std::vector<Cell> cells;
    for (std::size_t c = 0; c < f.cells().size(); ++c)
        if (c != target) cells.push_back(f.cells()[c]);

    const auto edge = [](const RVector& from, const RVector& to) {
        const RVector dir = to - from;
        const RVector normal{dir[1], -dir[0]};
        return Halfspace(normal, dot(normal, from));
    };
    for (std::size_t i = 0; i < m; ++i) {
        const RVector& a = verts[i];
        const RVector& b = verts[(i + 1) % m];
        RMatrix basis(2, 2), image(2, 2);
        for (std::size_t r = 0; r < 2; ++r) {
            basis(r, 0) = a[r] - center[r];
            basis(r, 1) = b[r] - center[r];
            image(r, 0) = images[i][r] - center_image[r];
            image(r, 1) = images[(i + 1) % m][r] - center_image[r];
        }
        const auto inv = inverse(basis);
        if (!inv) throw InternalError("perturb_bounded: degenerate star triangle");
        const RMatrix linear = image * *inv;
        const RVector offset = center_image - linear.apply(center);
        selections.push_back(Selection{linear, offset});
        cells.push_back(Cell{HPolyhedron(2, {edge(center, a), edge(a, b), edge(b, center)}),
                             selections.size() - 1});
    }

    PLFunction result(2, std::move(selections), std::move(cells));
    require_generated_valid(result, "perturb_bounded");
    return PerturbResult{std::move(result), ""};
}

}  // namespace detail

/// Returns a function identical to `f` on every unbounded cell but altered
/// on the bounded region: in 1D the interior breakpoint values move, in 2D
/// one bounded cell is starred from its centroid and the centroid image is
/// displaced. Instances without perturbable bounded structure come back
/// unchanged with an explanatory note.
inline PerturbResult perturb_bounded(const PLFunction& f, std::uint64_t seed) {
    detail::require_validated_fn(f, "perturb_bounded");
    if (f.n() == 1) return detail::perturb_bounded_1d(f, seed);
    if (f.n() == 2) return detail::perturb_bounded_2d(f, seed);
    throw PreconditionError("perturb_bounded: only dimensions 1 and 2 are supported");
}

/// Exhaustive check of a lattice of targets. A target counts as covered when
/// its exact preimage is nonempty (through a regular or a singular cell);
/// preimage-count statistics are taken over the regular targets only.
struct OracleReport {
    Rational box_lo, box_hi;
    Rational resolution;
    std::vector<RVector> uncovered_targets;
    std::vector<RVector> irregular_targets;
    std::optional<std::size_t> min_preimage_count;
    std::optional<std::size_t> max_preimage_count;
    std::size_t target_count = 0;
    std::size_t regular_target_count = 0;
    bool surjective_on_grid = false;
};

inline OracleReport grid_surjectivity_oracle(const PLFunction& f, const Rational& box_lo,
                                             const Rational& box_hi, const Rational& resolution) {
    detail::require_validated_fn(f, "grid_surjectivity_oracle");
    if (resolution <= 0) throw PreconditionError("grid_surjectivity_oracle: resolution must be positive");
    if (box_hi < box_lo) throw PreconditionError("grid_surjectivity_oracle: box is empty");

    const Integer steps_per_axis = floor_rational((box_hi - box_lo) / resolution) + 1;
    std::size_t per_axis = static_cast<std::size_t>(steps_per_axis);
    std::size_t total = 1;
    for (std::size_t j = 0; j < f.n(); ++j) {
        if (per_axis != 0 && total > 10'000'000 / per_axis)
            throw PreconditionError("grid_surjectivity_oracle: grid too large");
        total *= per_axis;
    }

    struct Slot {
        bool covered = false;
        bool regular = false;
        std::size_t count = 0;
    };
    std::vector<Slot> slots(total);
    std::vector<RVector> targets(total, RVector(f.n()));
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t rest = t;
        for (std::size_t j = 0; j < f.n(); ++j) {
            targets[t][j] = box_lo + Rational(rest % per_axis) * resolution;
            rest /= per_axis;
        }
    }

    detail::parallel_for(total, [&](std::size_t t) {
        const PreimageSet pre = preimages(f, targets[t]);
        Slot& slot = slots[t];
        slot.covered = !pre.points.empty() || !pre.singular_hits.empty();
        const RegularValueReport cls = classify_preimage_set(pre);
        slot.regular = cls.regular;
        slot.count = pre.points.size();
    });

    OracleReport report;
    report.box_lo = box_lo;
    report.box_hi = box_hi;
    report.resolution = resolution;
    report.target_count = total;
    for (std::size_t t = 0; t < total; ++t) {
        if (!slots[t].covered) report.uncovered_targets.push_back(targets[t]);
        if (!slots[t].regular) {
            report.irregular_targets.push_back(targets[t]);
            continue;
        }
        ++report.regular_target_count;
        if (!report.min_preimage_count || slots[t].count < *report.min_preimage_count)
            report.min_preimage_count = slots[t].count;
        if (!report.max_preimage_count || slots[t].count > *report.max_preimage_count)
            report.max_preimage_count = slots[t].count;
    }
    report.surjective_on_grid = report.uncovered_targets.empty();
    return report;
}

}  // namespace plcert
