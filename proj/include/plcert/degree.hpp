#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plcert/detail/parallel.hpp"
#include "plcert/detail/rng.hpp"
#include "plcert/pl_function.hpp"

namespace plcert {

/// One solution of F(x) = y with its location evidence.
struct PreimagePoint {
    RVector x;
    std::size_t cell;
    bool on_boundary;  // x lies on a proper face of its cell
    int det_sign;      // sign of det(A) for the cell's selection
};

/// Complete preimage of a target: isolated solutions from invertible pieces
/// plus the cells whose singular selection still reaches the target.
struct PreimageSet {
    RVector target;
    std::vector<PreimagePoint> points;        // pairwise distinct
    std::vector<std::size_t> singular_hits;   // cells with det 0 mapping onto target
};

enum class IrregularityKind { SingularCellHit, BoundaryPreimage };

struct Irregularity {
    IrregularityKind kind;
    std::optional<std::size_t> cell;  // singular-cell-hit
    std::optional<RVector> point;     // boundary-preimage
};

struct RegularValueReport {
    RVector y;
    bool regular = false;
    std::vector<Irregularity> reasons;  // regular <=> empty
};

/// Raised when an operation needs a regular value but got an irregular one;
/// carries the full classification.
class IrregularValueError : public Error {
  public:
    explicit IrregularValueError(RegularValueReport report)
        : Error("value is not regular (" + std::to_string(report.reasons.size()) +
                " obstruction(s))"),
          report_(std::move(report)) {}
    const RegularValueReport& report() const { return report_; }

  private:
    RegularValueReport report_;
};

/// Signed preimage sums observed at one regular value.
struct DegreeSample {
    RVector y;
    std::size_t preimage_count;
    int signed_sum;
};

/// Degree plus everything needed to audit it.
struct DegreeEvidence {
    int degree;
    std::vector<DegreeSample> samples;  // far value first, all sums equal
    std::optional<RVector> far_value;
};

namespace detail {

inline void require_validated_fn(const PLFunction& f, const char* op) {
    if (!f.validated())
        throw PreconditionError(std::string(op) + ": function has not been validated");
}

}  // namespace detail

/// First unbounded cell whose selection matrix is singular, if any. The
/// function is an invertible affine map beyond every bounded set exactly
/// when there is none; that is what the far-value machinery needs.
inline std::optional<std::size_t> singular_unbounded_cell(const PLFunction& f) {
    detail::require_validated_fn(f, "singular_unbounded_cell");
    for (std::size_t k = 0; k < f.cells().size(); ++k)
        if (!f.cell_bounded(k) && f.cell_det_sign(k) == 0) return k;
    return std::nullopt;
}

/// All solutions of F(x) = y, exactly. Invertible pieces contribute their
/// unique solve when it lands in the cell; singular pieces are probed by LP
/// feasibility of cell ∩ {A x = y − b}. Solutions shared between cells are
/// merged under the lowest cell index and flagged on_boundary.
inline PreimageSet preimages(const PLFunction& f, const RVector& y) {
    detail::require_validated_fn(f, "preimages");
    if (y.dim() != f.n()) throw DimensionError("preimages: target dimension mismatch");
    PreimageSet out{y, {}, {}};
    for (std::size_t k = 0; k < f.cells().size(); ++k) {
        const auto& cell = f.cells()[k];
        const auto& sel = f.selections()[cell.selection];
        const RVector rhs = y - sel.b;
        const int ds = f.cell_det_sign(k);
        if (ds != 0) {
            const auto x = solve_unique(sel.A, rhs);
            if (!x) throw InternalError("preimages: nonsingular matrix failed to solve");
            if (!cell.polyhedron.contains(*x)) continue;
            const bool boundary = !cell.polyhedron.strictly_contains(*x);
            bool merged = false;
            for (auto& p : out.points)
                if (p.x == *x) {
                    p.on_boundary = true;  // shared between cells => on faces
                    merged = true;
                    break;
                }
            if (!merged) out.points.push_back({*x, k, boundary, ds});
        } else {
            // consistency of the singular system on the cell: rows of A x = rhs
            // as equalities, zero rows checked directly
            std::vector<Halfspace> eqs;
            bool inconsistent = false;
            for (std::size_t i = 0; i < f.n(); ++i) {
                const RVector row = sel.A.row(i);
                if (is_zero(row)) {
                    if (rhs[i] != 0) {
                        inconsistent = true;
                        break;
                    }
                    continue;
                }
                eqs.emplace_back(row, rhs[i]);
                eqs.emplace_back(-row, Rational(-rhs[i]));
            }
            if (inconsistent) continue;
            if (feasible_point(cell.polyhedron.intersect(std::move(eqs))))
                out.singular_hits.push_back(k);
        }
    }
    return out;
}

/// Classification of an already-computed preimage set.
inline RegularValueReport classify_preimage_set(const PreimageSet& pre) {
    RegularValueReport rep{pre.target, false, {}};
    for (const auto k : pre.singular_hits)
        rep.reasons.push_back({IrregularityKind::SingularCellHit, k, std::nullopt});
    for (const auto& p : pre.points)
        if (p.on_boundary)
            rep.reasons.push_back({IrregularityKind::BoundaryPreimage, p.cell, p.x});
    rep.regular = rep.reasons.empty();
    return rep;
}

/// y is regular iff no singular piece reaches it and every preimage point is
/// strictly inside its cell (boundary points are conservatively irregular).
inline RegularValueReport classify_regular(const PLFunction& f, const RVector& y) {
    return classify_preimage_set(preimages(f, y));
}

/// Signed preimage sum at a regular value. Requires every unbounded cell's
/// selection to be invertible so the sum is the same at every regular value.
inline int local_degree(const PLFunction& f, const RVector& y) {
    if (const auto bad = singular_unbounded_cell(f))
        throw PreconditionError("local_degree: selection on unbounded cell " +
                                std::to_string(*bad) + " is singular");
    const auto pre = preimages(f, y);
    auto rep = classify_preimage_set(pre);
    if (!rep.regular) throw IrregularValueError(std::move(rep));
    int s = 0;
    for (const auto& p : pre.points) s += p.det_sign;
    return s;
}

/// Deterministic rejection sampler for regular values in the ∞-ball of the
/// given radius around `center`: coordinates are drawn from a rational grid
/// whose denominator doubles every few rejections.
inline RVector sample_regular_value_near(const PLFunction& f, const RVector& center,
                                         std::uint64_t seed, const Rational& radius,
                                         std::size_t max_tries) {
    detail::require_validated_fn(f, "sample_regular_value_near");
    if (center.dim() != f.n())
        throw DimensionError("sample_regular_value_near: center dimension mismatch");
    if (radius <= 0) throw PreconditionError("sample_regular_value_near: radius must be positive");
    detail::Rng rng(seed);
    for (std::size_t t = 0; t < max_tries; ++t) {
        const Integer denom = Integer(1) << (1 + t / 4);
        RVector y(f.n());
        for (std::size_t j = 0; j < f.n(); ++j)
            y[j] = center[j] + rng.uniform_rational_ball(radius, denom);
        if (classify_regular(f, y).regular) return y;
    }
    throw SamplingError("sample_regular_value: no regular value in " +
                        std::to_string(max_tries) + " tries (radius " + to_string(radius) + ")");
}

/// Regular value sampled from the ∞-ball of the given radius around 0.
inline RVector sample_regular_value(const PLFunction& f, std::uint64_t seed,
                                    const Rational& radius, std::size_t max_tries) {
    return sample_regular_value_near(f, RVector(f.n()), seed, radius, max_tries);
}

/**
 * A regular value beyond the image of every bounded cell, so its preimage
 * lies exclusively in unbounded cells.
 *
 * Construction: r caps ||F|| over bounded cells; walking an interior point
 * of an unbounded cell along a recession direction d drives ||F|| past r
 * because the cell's matrix is invertible (A d != 0). An exact step lands at
 * y0 with ||y0|| >= r + 1, and a ball around y0 small enough to keep every
 * target (a) beyond r and (b) solvable inside the same cell is searched for
 * a regular member. Both postconditions are re-checked exactly.
 */
inline std::pair<RVector, RegularValueReport> far_regular_value(const PLFunction& f) {
    if (const auto bad = singular_unbounded_cell(f))
        throw PreconditionError("far_regular_value: selection on unbounded cell " +
                                std::to_string(*bad) + " is singular");
    const Rational r = f.bounded_image_radius();

    std::size_t k0 = f.cells().size();
    for (std::size_t k = 0; k < f.cells().size(); ++k)
        if (!f.cell_bounded(k)) {
            k0 = k;
            break;
        }
    if (k0 == f.cells().size())
        throw InternalError("far_regular_value: validated function with no unbounded cell");

    const auto& cell = f.cells()[k0];
    const auto& sel = f.selections()[cell.selection];
    const RVector& x0 = f.cell_interior_point(k0);
    const auto d = unbounded_direction(cell.polyhedron);
    if (!d) throw InternalError("far_regular_value: unbounded cell without recession direction");
    const RVector v = sel.A.apply(*d);
    if (is_zero(v)) throw InternalError("far_regular_value: invertible matrix killed a direction");
    const RVector w = sel.value(x0);

    std::size_t jstar = 0;
    for (std::size_t j = 1; j < f.n(); ++j)
        if (abs(v[j]) > abs(v[jstar])) jstar = j;
    const Rational t = (r + abs(w[jstar]) + 1) / abs(v[jstar]);
    const RVector xstar = x0 + t * *d;
    const RVector y0 = sel.value(xstar);

    // ball radius: every member stays past r and keeps its solution strictly
    // inside this cell
    Rational delta = (inf_norm(y0) - r) / 2;
    const auto ainv = inverse(sel.A);
    if (!ainv) throw InternalError("far_regular_value: selection matrix not invertible");
    for (const auto& h : cell.polyhedron.constraints()) {
        RVector g(f.n());
        for (std::size_t j = 0; j < f.n(); ++j) {
            Rational s(0);
            for (std::size_t i = 0; i < f.n(); ++i) s += h.normal[i] * (*ainv)(i, j);
            g[j] = s;
        }
        const Rational slack = h.offset - dot(h.normal, xstar);
        const Rational bound = slack / (2 * one_norm(g));
        if (bound < delta) delta = bound;
    }
    delta /= 2;

    RVector y = y0;
    auto rep = classify_regular(f, y);
    if (!rep.regular) {
        y = sample_regular_value_near(f, y0, 0x7f4a7c15u, delta, 256);
        rep = classify_regular(f, y);
    }

    if (!(inf_norm(y) > r))
        throw InternalError("far_regular_value: candidate inside the bounded-image radius");
    const auto pre = preimages(f, y);
    if (pre.points.empty())
        throw InternalError("far_regular_value: constructed preimage went missing");
    for (const auto& p : pre.points)
        if (f.cell_bounded(p.cell))
            throw InternalError("far_regular_value: preimage landed in a bounded cell");
    return {std::move(y), std::move(rep)};
}

/// Signed preimage sum at the far value and `trials` sampled regular values;
/// all sums must agree and the common value is the degree of F.
inline DegreeEvidence global_degree(const PLFunction& f, std::size_t trials,
                                    std::uint64_t seed) {
    const auto far = far_regular_value(f);
    const RVector& yfar = far.first;
    const Rational radius = 2 * (inf_norm(yfar) + 1);

    detail::Rng rng(seed);
    std::vector<std::uint64_t> seeds(trials);
    for (auto& s : seeds) s = rng.next_u64();

    std::vector<DegreeSample> samples(trials + 1);
    const auto record = [&f](const RVector& y) {
        const auto pre = preimages(f, y);
        int s = 0;
        for (const auto& p : pre.points) s += p.det_sign;
        return DegreeSample{y, pre.points.size(), s};
    };
    samples[0] = record(yfar);
    detail::parallel_for(trials, [&](std::size_t t) {
        samples[t + 1] = record(sample_regular_value(f, seeds[t], radius, 256));
    });

    const int deg = samples[0].signed_sum;
    for (const auto& s : samples)
        if (s.signed_sum != deg)
            throw InternalError("global_degree: signed preimage sums disagree between "
                                "regular values");
    return {deg, std::move(samples), yfar};
}

/// Preimage counts at sampled regular values of a coherently oriented
/// function (every selection's determinant shares one nonzero sign); each
/// count must equal |degree| and that is checked, not assumed.
inline std::vector<std::pair<RVector, std::size_t>> preimage_count_profile(
    const PLFunction& f, std::size_t trials, std::uint64_t seed) {
    detail::require_validated_fn(f, "preimage_count_profile");
    const int s0 = f.selection_det_sign(0);
    bool coherent = s0 != 0;
    for (std::size_t i = 1; coherent && i < f.selections().size(); ++i)
        coherent = f.selection_det_sign(i) == s0;
    if (!coherent)
        throw PreconditionError("preimage_count_profile: function is not coherently oriented");

    const auto ev = global_degree(f, trials, seed);
    const auto expect = static_cast<std::size_t>(ev.degree < 0 ? -ev.degree : ev.degree);
    std::vector<std::pair<RVector, std::size_t>> out;
    out.reserve(ev.samples.size());
    for (const auto& s : ev.samples) {
        if (s.preimage_count != expect)
            throw InternalError("preimage_count_profile: count " +
                                std::to_string(s.preimage_count) + " differs from |degree| " +
                                std::to_string(expect));
        out.emplace_back(s.y, s.preimage_count);
    }
    return out;
}

}  // namespace plcert
