#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "plcert/linalg.hpp"

namespace plcert {

/// Closed halfspace { x : normal . x <= offset }. The normal must be nonzero.
struct Halfspace {
    RVector normal;
    Rational offset;

    Halfspace(RVector n, Rational off) : normal(std::move(n)), offset(std::move(off)) {
        if (is_zero(normal)) throw PreconditionError("Halfspace: zero normal");
    }
};

/// H-representation polyhedron: finite intersection of rational halfspaces.
/// No constraints means all of R^n. Immutable; all queries are pure.
class HPolyhedron {
  public:
    HPolyhedron(std::size_t dim, std::vector<Halfspace> constraints)
        : dim_(dim), constraints_(std::move(constraints)) {
        if (dim_ == 0) throw DimensionError("HPolyhedron: dimension must be positive");
        for (const auto& h : constraints_)
            if (h.normal.dim() != dim_)
                throw DimensionError("HPolyhedron: constraint normal of dim " +
                                     std::to_string(h.normal.dim()) + " in R^" +
                                     std::to_string(dim_));
    }

    std::size_t dim() const { return dim_; }
    const std::vector<Halfspace>& constraints() const { return constraints_; }

    bool contains(const RVector& x) const {
        if (x.dim() != dim_) throw DimensionError("HPolyhedron::contains: point dim mismatch");
        for (const auto& h : constraints_)
            if (dot(h.normal, x) > h.offset) return false;
        return true;
    }

    /// True when every constraint holds with strict inequality at x.
    bool strictly_contains(const RVector& x) const {
        if (x.dim() != dim_) throw DimensionError("HPolyhedron::contains: point dim mismatch");
        for (const auto& h : constraints_)
            if (dot(h.normal, x) >= h.offset) return false;
        return true;
    }

    /// Recession cone { d : normal_k . d <= 0 for every constraint k }.
    HPolyhedron recession_cone() const {
        std::vector<Halfspace> cs;
        cs.reserve(constraints_.size());
        for (const auto& h : constraints_) cs.emplace_back(h.normal, Rational(0));
        return HPolyhedron(dim_, std::move(cs));
    }

    /// New polyhedron with extra constraints appended.
    HPolyhedron intersect(std::vector<Halfspace> extra) const {
        std::vector<Halfspace> cs = constraints_;
        for (auto& h : extra) cs.push_back(std::move(h));
        return HPolyhedron(dim_, std::move(cs));
    }

  private:
    std::size_t dim_;
    std::vector<Halfspace> constraints_;
};

/// Axis-aligned box { x : lo <= x_j <= hi } as an HPolyhedron.
inline HPolyhedron box_polyhedron(std::size_t dim, const Rational& lo, const Rational& hi) {
    std::vector<Halfspace> cs;
    cs.reserve(2 * dim);
    for (std::size_t j = 0; j < dim; ++j) {
        RVector up(dim), down(dim);
        up[j] = 1;
        down[j] = -1;
        cs.emplace_back(std::move(up), hi);
        cs.emplace_back(std::move(down), -lo);
    }
    return HPolyhedron(dim, std::move(cs));
}

}  // namespace plcert
