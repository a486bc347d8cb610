#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "plcert/lp.hpp"
#include "plcert/polyhedron.hpp"

namespace plcert {

/// Any feasible point of P, or nullopt when P is empty.
inline std::optional<RVector> feasible_point(const HPolyhedron& poly) {
    const auto r = lp_solve(RVector(poly.dim()), poly, LPSense::Max);
    if (r.status == LPStatus::Infeasible) return std::nullopt;
    return r.witness;
}

/// Point together with the uniform slack it attains.
struct SlackPoint {
    Rational slack;
    RVector point;
};

/// Maximizes a uniform slack t (capped at 1) over the lifted system
///   normal_k . x + t <= offset_k   for every slacked halfspace,
///   normal_e . x      = offset_e   for every equality halfspace,
/// and returns the optimum with its x-part. slack > 0 certifies a point
/// strictly inside every slacked constraint on the equality locus; slack <= 0
/// certifies there is none. nullopt only when the equality system itself is
/// inconsistent.
inline std::optional<SlackPoint> max_uniform_slack(std::size_t dim,
                                                   const std::vector<Halfspace>& slacked,
                                                   const std::vector<Halfspace>& equalities) {
    std::vector<Halfspace> lifted;
    lifted.reserve(slacked.size() + 2 * equalities.size() + 1);
    const auto lift = [dim](const RVector& normal, const Rational& tcoef) {
        RVector n(dim + 1);
        for (std::size_t j = 0; j < dim; ++j) n[j] = normal[j];
        n[dim] = tcoef;
        return n;
    };
    for (const auto& h : slacked) lifted.emplace_back(lift(h.normal, Rational(1)), h.offset);
    for (const auto& h : equalities) {
        lifted.emplace_back(lift(h.normal, Rational(0)), h.offset);
        lifted.emplace_back(lift(-h.normal, Rational(0)), Rational(-h.offset));
    }
    RVector tdir(dim + 1);
    tdir[dim] = 1;
    lifted.emplace_back(tdir, Rational(1));  // cap keeps the LP bounded

    const auto r = lp_solve(tdir, HPolyhedron(dim + 1, std::move(lifted)), LPSense::Max);
    if (r.status == LPStatus::Infeasible) return std::nullopt;
    if (r.status != LPStatus::Optimal)
        throw InternalError("max_uniform_slack: capped slack LP came back unbounded");
    RVector x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = r.witness[j];
    return SlackPoint{r.optimum, std::move(x)};
}

/// Point strictly inside every constraint, or nullopt when P has empty
/// interior (lower-dimensional or infeasible).
inline std::optional<RVector> interior_point(const HPolyhedron& poly) {
    auto s = max_uniform_slack(poly.dim(), poly.constraints(), {});
    if (!s || s->slack <= 0) return std::nullopt;
    return std::move(s->point);
}

/// Some nonzero recession direction of P, or nullopt when the recession cone
/// is {0}. Decided by 2n LPs maximizing +-d_j over the cone cut to [-1,1]^n.
inline std::optional<RVector> unbounded_direction(const HPolyhedron& poly) {
    const auto cone =
        poly.recession_cone().intersect(box_polyhedron(poly.dim(), Rational(-1), Rational(1))
                                            .constraints());
    for (std::size_t j = 0; j < poly.dim(); ++j) {
        RVector obj(poly.dim());
        obj[j] = 1;
        for (const auto sense : {LPSense::Max, LPSense::Min}) {
            const auto r = lp_solve(obj, cone, sense);
            if (r.status != LPStatus::Optimal)
                throw InternalError("unbounded_direction: boxed cone LP not optimal");
            if ((sense == LPSense::Max && r.optimum > 0) ||
                (sense == LPSense::Min && r.optimum < 0))
                return r.witness;
        }
    }
    return std::nullopt;
}

/// True iff P has no nonzero recession direction. P must be nonempty.
inline bool is_bounded(const HPolyhedron& poly) {
    if (!feasible_point(poly))
        throw PreconditionError("is_bounded: polyhedron is empty");
    return !unbounded_direction(poly).has_value();
}

struct FacetWitness {
    std::size_t constraint;
    RVector point;  // relative-interior point of the facet
};

namespace detail {

/// Positive-scaling canonical form of (normal, offset): divide through by the
/// absolute value of the first nonzero normal coefficient. Two halfspaces are
/// equal as sets iff their canonical forms match.
inline std::vector<Rational> halfspace_key(const Halfspace& h) {
    Rational scale(0);
    for (const auto& e : h.normal.entries())
        if (e != 0) {
            scale = abs(e);
            break;
        }
    std::vector<Rational> key;
    key.reserve(h.normal.dim() + 1);
    for (const auto& e : h.normal.entries()) key.push_back(e / scale);
    key.push_back(h.offset / scale);
    return key;
}

/// Canonical form of the hyperplane {normal . x = offset} under scaling by
/// any nonzero factor: divide through by the first nonzero normal
/// coefficient. Two constraints lie on the same hyperplane iff keys match.
inline std::vector<Rational> hyperplane_key(const Halfspace& h) {
    Rational scale(0);
    for (const auto& e : h.normal.entries())
        if (e != 0) {
            scale = e;
            break;
        }
    std::vector<Rational> key;
    key.reserve(h.normal.dim() + 1);
    for (const auto& e : h.normal.entries()) key.push_back(e / scale);
    key.push_back(h.offset / scale);
    return key;
}

}  // namespace detail

/// One entry per facet-defining constraint of a full-dimensional P, with a
/// point in the facet's relative interior. Duplicate constraints contribute
/// one entry, under the lowest index. Throws on lower-dimensional input.
inline std::vector<FacetWitness> facet_witnesses(const HPolyhedron& poly) {
    if (!interior_point(poly))
        throw PreconditionError("facet_witnesses: polyhedron is not full-dimensional");
    const auto& cs = poly.constraints();

    // group positively-proportional constraints; only the first of each group
    // is a candidate, and its duplicates are dropped from the slack side
    std::vector<std::size_t> group(cs.size());
    std::vector<std::vector<Rational>> keys;
    keys.reserve(cs.size());
    for (std::size_t k = 0; k < cs.size(); ++k) keys.push_back(detail::halfspace_key(cs[k]));
    for (std::size_t k = 0; k < cs.size(); ++k) {
        group[k] = k;
        for (std::size_t l = 0; l < k; ++l)
            if (keys[l] == keys[k]) {
                group[k] = group[l];
                break;
            }
    }

    std::vector<FacetWitness> out;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (group[k] != k) continue;
        std::vector<Halfspace> slacked;
        for (std::size_t j = 0; j < cs.size(); ++j)
            if (group[j] != k) slacked.push_back(cs[j]);
        auto s = max_uniform_slack(poly.dim(), slacked, {cs[k]});
        if (s && s->slack > 0) out.push_back({k, std::move(s->point)});
    }
    return out;
}

/// The face P ∩ {normal_i . x = offset_i} as an H-polyhedron.
inline HPolyhedron constraint_face(const HPolyhedron& poly, std::size_t i) {
    if (i >= poly.constraints().size())
        throw PreconditionError("constraint_face: constraint index out of range");
    const auto& h = poly.constraints()[i];
    return poly.intersect({Halfspace(-h.normal, Rational(-h.offset))});
}

/// P with the given constraints tightened to equalities (reverse inequalities
/// appended). The result is the exposed face of P where they all bind.
inline HPolyhedron with_equalities(const HPolyhedron& poly, const std::vector<std::size_t>& tight) {
    std::vector<Halfspace> extra;
    extra.reserve(tight.size());
    for (const auto i : tight) {
        if (i >= poly.constraints().size())
            throw PreconditionError("with_equalities: constraint index out of range");
        const auto& h = poly.constraints()[i];
        extra.emplace_back(-h.normal, Rational(-h.offset));
    }
    return poly.intersect(std::move(extra));
}

/// True iff A ⊆ B as point sets: every constraint of B's system is implied on
/// A, checked by one LP max per constraint. Empty A is a subset of anything.
inline bool polyhedron_subset(const HPolyhedron& a, const HPolyhedron& b) {
    for (const auto& h : b.constraints()) {
        const auto r = lp_solve(h.normal, a, LPSense::Max);
        if (r.status == LPStatus::Infeasible) return true;
        if (r.status == LPStatus::Unbounded) return false;
        if (r.optimum > h.offset) return false;
    }
    return true;
}

/// True iff the face of P at constraint i equals the face of Q at constraint
/// j as point sets (mutual inclusion; two empty faces compare equal).
inline bool same_face(const HPolyhedron& p, std::size_t i, const HPolyhedron& q, std::size_t j) {
    if (p.dim() != q.dim()) throw DimensionError("same_face: ambient dimensions differ");
    const auto fp = constraint_face(p, i);
    const auto fq = constraint_face(q, j);
    return polyhedron_subset(fp, fq) && polyhedron_subset(fq, fp);
}

/// Indices of P's constraints that hold with equality everywhere on S.
/// Pre: S nonempty and S ⊆ P.
inline std::vector<std::size_t> tight_on(const HPolyhedron& poly, const HPolyhedron& subset) {
    std::vector<std::size_t> out;
    const auto& cs = poly.constraints();
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto r = lp_solve(cs[k].normal, subset, LPSense::Min);
        if (r.status == LPStatus::Infeasible)
            throw PreconditionError("tight_on: subset is empty");
        if (r.status == LPStatus::Optimal && r.optimum == cs[k].offset) out.push_back(k);
    }
    return out;
}

/// All vertices of a 2D polyhedron, in counterclockwise order when there are
/// at least three. Vertices arise as intersections of two constraints with
/// independent normals that land inside P; the order is exact (cross-product
/// comparisons around the vertex centroid, no floating point).
inline std::vector<RVector> vertices_2d(const HPolyhedron& poly) {
    if (poly.dim() != 2) throw DimensionError("vertices_2d: ambient dimension must be 2");
    const auto& cs = poly.constraints();
    std::vector<RVector> verts;
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            RMatrix m(2, 2);
            m(0, 0) = cs[i].normal[0];
            m(0, 1) = cs[i].normal[1];
            m(1, 0) = cs[j].normal[0];
            m(1, 1) = cs[j].normal[1];
            RVector rhs(2);
            rhs[0] = cs[i].offset;
            rhs[1] = cs[j].offset;
            const auto x = solve_unique(m, rhs);
            if (!x || !poly.contains(*x)) continue;
            if (std::find(verts.begin(), verts.end(), *x) == verts.end()) verts.push_back(*x);
        }
    if (verts.size() < 3) return verts;

    RVector center(2);
    for (const auto& v : verts) center = center + v;
    center = (Rational(1) / Rational(static_cast<int>(verts.size()))) * center;

    const auto upper = [](const RVector& d) { return d[1] > 0 || (d[1] == 0 && d[0] > 0); };
    std::sort(verts.begin(), verts.end(), [&](const RVector& a, const RVector& b) {
        const RVector da = a - center, db = b - center;
        const bool ua = upper(da), ub = upper(db);
        if (ua != ub) return ua;
        return da[0] * db[1] - da[1] * db[0] > 0;
    });
    return verts;
}

}  // namespace plcert
