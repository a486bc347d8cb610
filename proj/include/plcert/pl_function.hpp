#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plcert/detail/parallel.hpp"
#include "plcert/polyhedron_queries.hpp"

namespace plcert {

/// One affine piece x |-> A x + b.
struct Selection {
    RMatrix A;
    RVector b;

    RVector value(const RVector& x) const { return A.apply(x) + b; }
};

/// Full-dimensional polyhedron together with the selection active on it.
struct Cell {
    HPolyhedron polyhedron;
    std::size_t selection;
};

enum class FindingKind {
    EmptyCell,
    LowerDimensionalCell,
    Overlap,
    BadFace,
    Discontinuity,
    UnpairedFacet,
};

inline const char* finding_kind_name(FindingKind k) {
    switch (k) {
        case FindingKind::EmptyCell: return "empty-cell";
        case FindingKind::LowerDimensionalCell: return "lower-dimensional-cell";
        case FindingKind::Overlap: return "overlap";
        case FindingKind::BadFace: return "bad-face";
        case FindingKind::Discontinuity: return "discontinuity";
        case FindingKind::UnpairedFacet: return "unpaired-facet";
    }
    return "unknown";
}

/// One validation violation with enough evidence to reproduce it.
struct Finding {
    FindingKind kind;
    std::vector<std::size_t> cells;
    std::optional<RVector> witness;
    std::optional<std::size_t> constraint;  // facet constraint (unpaired-facet)
    std::string detail;
};

struct ValidationReport {
    bool ok = false;
    std::vector<Finding> findings;
};

/**
 * Piecewise affine function modeled as a cell complex with an affine
 * selection per cell. Construction checks shapes only; validate() checks the
 * geometry (cells full-dimensional, pairwise intersections common proper
 * faces, selections agreeing across shared facets, facets pairing up so the
 * cells cover all of R^n). Analysis operations require a validated function.
 */
class PLFunction {
  public:
    PLFunction(std::size_t n, std::vector<Selection> selections, std::vector<Cell> cells)
        : n_(n), selections_(std::move(selections)), cells_(std::move(cells)) {
        if (n_ == 0) throw DimensionError("PLFunction: ambient dimension must be positive");
        for (const auto& s : selections_) {
            if (!s.A.square() || s.A.rows() != n_)
                throw DimensionError("PLFunction: selection matrix must be n x n");
            if (s.b.dim() != n_)
                throw DimensionError("PLFunction: selection offset must have dimension n");
        }
        for (const auto& c : cells_) {
            if (c.polyhedron.dim() != n_)
                throw DimensionError("PLFunction: cell polyhedron dimension mismatch");
            if (c.selection >= selections_.size())
                throw PreconditionError("PLFunction: cell references missing selection " +
                                        std::to_string(c.selection));
        }
    }

    std::size_t n() const { return n_; }
    const std::vector<Selection>& selections() const { return selections_; }
    const std::vector<Cell>& cells() const { return cells_; }
    bool validated() const { return validated_; }

    ValidationReport validate();

    /// All cells containing x; nonempty on a validated function, with more
    /// than one entry exactly on shared faces.
    std::vector<std::size_t> locate(const RVector& x) const {
        require_validated("locate");
        if (x.dim() != n_) throw DimensionError("locate: point dimension mismatch");
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < cells_.size(); ++k)
            if (cells_[k].polyhedron.contains(x)) out.push_back(k);
        return out;
    }

    /// F(x). When several cells contain x their selections must coincide
    /// there; that is re-checked on every call, exactness makes it cheap.
    RVector evaluate(const RVector& x) const {
        const auto loc = locate(x);
        if (loc.empty()) throw InternalError("evaluate: no cell contains the point");
        RVector y = selections_[cells_[loc.front()].selection].value(x);
        for (std::size_t t = 1; t < loc.size(); ++t)
            if (selections_[cells_[loc[t]].selection].value(x) != y)
                throw InternalError("evaluate: selections disagree at a shared point");
        return y;
    }

    /// Cell indices split into (bounded, unbounded).
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_cells() const {
        require_validated("split_cells");
        std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
        for (std::size_t k = 0; k < cells_.size(); ++k)
            (bounded_[k] ? out.first : out.second).push_back(k);
        return out;
    }

    /// Exact max of ||F(x)||_inf over the union of bounded cells (0 when
    /// there are none): per bounded cell and output coordinate, two LPs.
    Rational bounded_image_radius() const {
        require_validated("bounded_image_radius");
        std::vector<Rational> per_cell(cells_.size(), Rational(0));
        detail::parallel_for(cells_.size(), [&](std::size_t k) {
            if (!bounded_[k]) return;
            const auto& sel = selections_[cells_[k].selection];
            Rational m(0);
            for (std::size_t j = 0; j < n_; ++j) {
                for (const auto sense : {LPSense::Max, LPSense::Min}) {
                    const auto r = lp_solve(sel.A.row(j), cells_[k].polyhedron, sense);
                    if (r.status != LPStatus::Optimal)
                        throw InternalError("bounded_image_radius: LP not optimal on a bounded cell");
                    const Rational v = abs(r.optimum + sel.b[j]);
                    if (v > m) m = v;
                }
            }
            per_cell[k] = m;
        });
        Rational r(0);
        for (const auto& v : per_cell)
            if (v > r) r = v;
        return r;
    }

    bool cell_bounded(std::size_t k) const {
        require_validated("cell_bounded");
        return bounded_.at(k);
    }

    /// Strict interior point of cell k, cached by validate().
    const RVector& cell_interior_point(std::size_t k) const {
        require_validated("cell_interior_point");
        return interior_points_.at(k);
    }

    /// Exact sign of det(A_i) for selection i.
    int selection_det_sign(std::size_t i) const {
        require_validated("selection_det_sign");
        return det_signs_.at(i);
    }

    int cell_det_sign(std::size_t k) const { return selection_det_sign(cells_.at(k).selection); }

  private:
    void require_validated(const char* op) const {
        if (!validated_)
            throw PreconditionError(std::string(op) + ": function has not been validated");
    }

    std::size_t n_;
    std::vector<Selection> selections_;
    std::vector<Cell> cells_;
    bool validated_ = false;

    // caches filled by a successful validate()
    std::vector<bool> bounded_;
    std::vector<RVector> interior_points_;
    std::vector<int> det_signs_;
};

inline ValidationReport PLFunction::validate() {
    validated_ = false;
    ValidationReport rep;
    const auto finish = [&rep]() -> ValidationReport& {
        rep.ok = rep.findings.empty();
        return rep;
    };

    if (cells_.empty()) {
        rep.findings.push_back(
            {FindingKind::EmptyCell, {}, std::nullopt, std::nullopt, "function has no cells"});
        return finish();
    }

    // (a) every cell nonempty and full-dimensional
    std::vector<std::optional<Finding>> cell_findings(cells_.size());
    std::vector<RVector> interior(cells_.size());
    detail::parallel_for(cells_.size(), [&](std::size_t k) {
        if (!feasible_point(cells_[k].polyhedron)) {
            cell_findings[k] = Finding{FindingKind::EmptyCell, {k}, std::nullopt, std::nullopt,
                                       "cell is empty"};
            return;
        }
        auto ip = interior_point(cells_[k].polyhedron);
        if (!ip) {
            cell_findings[k] = Finding{FindingKind::LowerDimensionalCell, {k}, std::nullopt,
                                       std::nullopt, "cell has empty interior"};
            return;
        }
        interior[k] = std::move(*ip);
    });
    for (auto& f : cell_findings)
        if (f) rep.findings.push_back(std::move(*f));
    if (!rep.findings.empty()) return finish();

    // (b) pairwise: disjoint interiors, nonempty intersections common faces
    struct PairCheck {
        std::size_t k, l;
        bool touching = false;
        std::vector<std::size_t> tight_k, tight_l;
        std::optional<Finding> finding;
    };
    std::vector<PairCheck> pairs;
    for (std::size_t k = 0; k < cells_.size(); ++k)
        for (std::size_t l = k + 1; l < cells_.size(); ++l) pairs.push_back({k, l, false, {}, {}, {}});
    detail::parallel_for(pairs.size(), [&](std::size_t t) {
        auto& pc = pairs[t];
        const auto& pk = cells_[pc.k].polyhedron;
        const auto& pl = cells_[pc.l].polyhedron;
        std::vector<Halfspace> combined = pk.constraints();
        combined.insert(combined.end(), pl.constraints().begin(), pl.constraints().end());
        const auto slack = max_uniform_slack(n_, combined, {});
        if (!slack) throw InternalError("validate: pair slack LP infeasible");
        if (slack->slack > 0) {
            pc.finding = Finding{FindingKind::Overlap, {pc.k, pc.l}, slack->point, std::nullopt,
                                 "cells share an interior point"};
            return;
        }
        if (slack->slack < 0) return;  // empty intersection
        pc.touching = true;
        const HPolyhedron inter(n_, std::move(combined));
        pc.tight_k = tight_on(pk, inter);
        pc.tight_l = tight_on(pl, inter);
        const auto face_k = with_equalities(pk, pc.tight_k);
        const auto face_l = with_equalities(pl, pc.tight_l);
        if (!polyhedron_subset(face_k, face_l) || !polyhedron_subset(face_l, face_k)) {
            auto w = feasible_point(inter);
            pc.finding = Finding{FindingKind::BadFace,
                                 {pc.k, pc.l},
                                 w ? std::optional<RVector>(std::move(*w)) : std::nullopt,
                                 std::nullopt,
                                 "intersection is not a common proper face"};
        }
    });
    for (auto& pc : pairs)
        if (pc.finding) rep.findings.push_back(std::move(*pc.finding));
    if (!rep.findings.empty()) return finish();

    // (c) continuity across every shared facet: the two selections must agree
    // on the facet's affine hull, checked at a relative-interior witness and
    // along a basis of hull directions
    std::vector<std::size_t> facet_pairs;
    for (std::size_t t = 0; t < pairs.size(); ++t)
        if (pairs[t].touching &&
            cells_[pairs[t].k].selection != cells_[pairs[t].l].selection)
            facet_pairs.push_back(t);
    std::vector<std::optional<Finding>> cont_findings(facet_pairs.size());
    detail::parallel_for(facet_pairs.size(), [&](std::size_t t) {
        const auto& pc = pairs[facet_pairs[t]];
        const auto& pk = cells_[pc.k].polyhedron;
        const auto& pl = cells_[pc.l].polyhedron;
        std::vector<Halfspace> eqs;
        for (const auto i : pc.tight_k) eqs.push_back(pk.constraints()[i]);
        for (const auto i : pc.tight_l) eqs.push_back(pl.constraints()[i]);
        RMatrix normals(eqs.size(), n_);
        for (std::size_t r = 0; r < eqs.size(); ++r)
            for (std::size_t j = 0; j < n_; ++j) normals(r, j) = eqs[r].normal[j];
        if (rank(normals) != 1) return;  // intersection below dimension n-1

        std::vector<Halfspace> slacked;
        for (std::size_t i = 0; i < pk.constraints().size(); ++i)
            if (std::find(pc.tight_k.begin(), pc.tight_k.end(), i) == pc.tight_k.end())
                slacked.push_back(pk.constraints()[i]);
        for (std::size_t i = 0; i < pl.constraints().size(); ++i)
            if (std::find(pc.tight_l.begin(), pc.tight_l.end(), i) == pc.tight_l.end())
                slacked.push_back(pl.constraints()[i]);
        const auto relint = max_uniform_slack(n_, slacked, eqs);
        if (!relint || relint->slack <= 0)
            throw InternalError("validate: lost the relative interior of a shared facet");
        const RVector& w = relint->point;

        const auto& si = selections_[cells_[pc.k].selection];
        const auto& sj = selections_[cells_[pc.l].selection];
        bool agree = si.value(w) == sj.value(w);
        if (agree)
            for (const auto& v : kernel_basis(normals))
                if (si.value(w + v) != sj.value(w + v)) {
                    agree = false;
                    break;
                }
        if (!agree)
            cont_findings[t] = Finding{FindingKind::Discontinuity,
                                       {pc.k, pc.l},
                                       w,
                                       std::nullopt,
                                       "selections disagree on a shared facet"};
    });
    for (auto& f : cont_findings)
        if (f) rep.findings.push_back(std::move(*f));
    if (!rep.findings.empty()) return finish();

    // (d) covering: every facet pairs with exactly one facet of one other
    // cell; an unpaired facet would be a boundary of the union
    std::vector<std::vector<FacetWitness>> facets(cells_.size());
    detail::parallel_for(cells_.size(), [&](std::size_t k) {
        facets[k] = facet_witnesses(cells_[k].polyhedron);
    });
    struct FacetRef {
        std::size_t cell;
        std::size_t constraint;
        const RVector* witness;
    };
    std::vector<FacetRef> flat;
    std::map<std::vector<Rational>, std::vector<std::size_t>> by_plane;
    for (std::size_t k = 0; k < cells_.size(); ++k)
        for (const auto& f : facets[k]) {
            by_plane[detail::hyperplane_key(cells_[k].polyhedron.constraints()[f.constraint])]
                .push_back(flat.size());
            flat.push_back({k, f.constraint, &f.point});
        }
    std::vector<std::vector<std::size_t>> plane_of(flat.size());
    for (const auto& [key, members] : by_plane)
        for (const auto idx : members) plane_of[idx] = members;
    std::vector<std::optional<Finding>> cover_findings(flat.size());
    detail::parallel_for(flat.size(), [&](std::size_t t) {
        const auto& me = flat[t];
        std::size_t matches = 0;
        for (const auto other_idx : plane_of[t]) {
            const auto& other = flat[other_idx];
            if (other.cell == me.cell) continue;
            if (same_face(cells_[me.cell].polyhedron, me.constraint,
                          cells_[other.cell].polyhedron, other.constraint))
                ++matches;
        }
        if (matches != 1)
            cover_findings[t] = Finding{FindingKind::UnpairedFacet,
                                        {me.cell},
                                        *me.witness,
                                        me.constraint,
                                        "facet matched " + std::to_string(matches) +
                                            " facets of other cells"};
    });
    for (auto& f : cover_findings)
        if (f) rep.findings.push_back(std::move(*f));
    if (!rep.findings.empty()) return finish();

    // caches for analysis operations
    bounded_.assign(cells_.size(), false);
    interior_points_ = std::move(interior);
    std::vector<char> bflags(cells_.size(), 0);
    detail::parallel_for(cells_.size(), [&](std::size_t k) {
        bflags[k] = is_bounded(cells_[k].polyhedron) ? 1 : 0;
    });
    for (std::size_t k = 0; k < cells_.size(); ++k) bounded_[k] = bflags[k] != 0;
    det_signs_.resize(selections_.size());
    for (std::size_t i = 0; i < selections_.size(); ++i)
        det_signs_[i] = det_sign(selections_[i].A);
    validated_ = true;
    return finish();
}

inline ValidationReport validate(PLFunction& f) { return f.validate(); }
inline std::vector<std::size_t> locate(const PLFunction& f, const RVector& x) {
    return f.locate(x);
}
inline RVector evaluate(const PLFunction& f, const RVector& x) { return f.evaluate(x); }
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_cells(
    const PLFunction& f) {
    return f.split_cells();
}
inline Rational bounded_image_radius(const PLFunction& f) { return f.bounded_image_radius(); }

}  // namespace plcert
