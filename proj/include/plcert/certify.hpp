#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plcert/degree.hpp"

namespace plcert {

enum class OrientationClass { Positive, Negative, Mixed, Singular };

inline const char* orientation_class_name(OrientationClass c) {
    switch (c) {
        case OrientationClass::Positive: return "+1";
        case OrientationClass::Negative: return "-1";
        case OrientationClass::Mixed: return "mixed";
        case OrientationClass::Singular: return "singular";
    }
    return "unknown";
}

struct PerCellSign {
    std::size_t cell;
    int det_sign;
    bool bounded;
};

/// Determinant signs per cell with two aggregates: over the unbounded cells
/// (the behavior at infinity) and over all cells. A zero determinant makes
/// the aggregate "singular" even when other signs already disagree.
struct OrientationSummary {
    std::vector<PerCellSign> per_cell_sign;
    OrientationClass at_infinity;
    OrientationClass global;
};

namespace detail {

inline OrientationClass aggregate_signs(const std::vector<int>& signs) {
    bool pos = false, neg = false;
    for (const int s : signs) {
        if (s == 0) return OrientationClass::Singular;
        (s > 0 ? pos : neg) = true;
    }
    if (pos && neg) return OrientationClass::Mixed;
    return pos ? OrientationClass::Positive : OrientationClass::Negative;
}

}  // namespace detail

inline OrientationSummary orientation_summary(const PLFunction& f) {
    detail::require_validated_fn(f, "orientation_summary");
    OrientationSummary out;
    std::vector<int> all, unbounded;
    for (std::size_t k = 0; k < f.cells().size(); ++k) {
        const int s = f.cell_det_sign(k);
        const bool b = f.cell_bounded(k);
        out.per_cell_sign.push_back({k, s, b});
        all.push_back(s);
        if (!b) unbounded.push_back(s);
    }
    if (unbounded.empty())
        throw InternalError("orientation_summary: validated function with no unbounded cell");
    out.at_infinity = detail::aggregate_signs(unbounded);
    out.global = detail::aggregate_signs(all);
    return out;
}

enum class Surjectivity1D { Surjective, NotSurjective };

/// The two-sided slope test on the line: surjective iff the selections active
/// on the left and right rays have slopes of the same nonzero sign. A single
/// whole-line cell compares its slope with itself, so the verdict is just
/// slope != 0.
inline Surjectivity1D classify_1d(const PLFunction& f) {
    detail::require_validated_fn(f, "classify_1d");
    if (f.n() != 1) throw PreconditionError("classify_1d: ambient dimension must be 1");

    std::optional<Rational> left, right;  // slopes of the two rays
    for (std::size_t k = 0; k < f.cells().size(); ++k) {
        if (f.cell_bounded(k)) continue;
        const auto& cell = f.cells()[k];
        const Rational slope = f.selections()[cell.selection].A(0, 0);
        RVector minus(1), plus(1);
        minus[0] = -1;
        plus[0] = 1;
        const auto cone = cell.polyhedron.recession_cone();
        if (cone.contains(minus)) {
            if (left) throw InternalError("classify_1d: two left rays");
            left = slope;
        }
        if (cone.contains(plus)) {
            if (right) throw InternalError("classify_1d: two right rays");
            right = slope;
        }
    }
    if (!left || !right)
        throw InternalError("classify_1d: missing an unbounded ray in a validated function");
    const int sl = sign(*left), sr = sign(*right);
    return (sl != 0 && sl == sr) ? Surjectivity1D::Surjective : Surjectivity1D::NotSurjective;
}

enum class SurjectivityVerdict { CertifiedSurjective, NotCertified, CertifiedNotSurjective };

inline const char* surjectivity_verdict_name(SurjectivityVerdict v) {
    switch (v) {
        case SurjectivityVerdict::CertifiedSurjective: return "certified_surjective";
        case SurjectivityVerdict::NotCertified: return "not_certified";
        case SurjectivityVerdict::CertifiedNotSurjective: return "certified_not_surjective";
    }
    return "unknown";
}

struct SurjectivityCertificate {
    SurjectivityVerdict verdict;
    OrientationSummary orientation;
    std::optional<DegreeEvidence> degree_evidence;
    std::optional<RVector> far_value;
    std::string note;
};

/**
 * The headline certificate. When all selections active on unbounded cells
 * share one nonzero determinant sign, a far regular value has a nonempty
 * preimage contained in those cells, its signed preimage sum cannot cancel,
 * and a nonzero degree forces every value to be attained: certified
 * surjective, with the degree evidence attached. A mixed or singular sign
 * pattern at infinity certifies nothing in dimension 2 and up; on the line
 * the slope test is exact in both directions and can certify the negative.
 */
inline SurjectivityCertificate certify_surjective(const PLFunction& f, std::size_t trials,
                                                  std::uint64_t seed) {
    detail::require_validated_fn(f, "certify_surjective");
    SurjectivityCertificate cert{SurjectivityVerdict::NotCertified, orientation_summary(f),
                                 std::nullopt, std::nullopt, ""};
    const auto ai = cert.orientation.at_infinity;
    if (ai == OrientationClass::Positive || ai == OrientationClass::Negative) {
        auto ev = global_degree(f, trials, seed);
        if (ev.degree == 0)
            throw InternalError("certify_surjective: coherent orientation at infinity "
                                "produced degree 0");
        cert.verdict = SurjectivityVerdict::CertifiedSurjective;
        cert.far_value = ev.far_value;
        cert.note = "selections on unbounded cells share determinant sign " +
                    std::string(orientation_class_name(ai)) + "; degree " +
                    std::to_string(ev.degree) + " is nonzero, so every target has a preimage";
        cert.degree_evidence = std::move(ev);
        return cert;
    }
    if (f.n() == 1) {
        if (classify_1d(f) == Surjectivity1D::Surjective)
            throw InternalError("certify_surjective: 1D slope test contradicts the "
                                "orientation summary");
        cert.verdict = SurjectivityVerdict::CertifiedNotSurjective;
        cert.note = "the two ray slopes do not share a nonzero sign, so one end of the "
                    "image stays bounded and a half-line is missed";
        return cert;
    }
    cert.note = "orientation at infinity is " + std::string(orientation_class_name(ai)) +
                "; the coherent-orientation criterion is one-directional in dimension 2 "
                "and higher, so no verdict is implied";
    return cert;
}

namespace detail {

/// Largest safe perturbation of F around the image of an interior point x of
/// cell k (invertible selection): every target within the returned radius of
/// F(x) keeps an exact preimage strictly inside cell k. nullopt when the cell
/// has no constraints (any radius works).
inline std::optional<Rational> preimage_stable_radius(const PLFunction& f, std::size_t k,
                                                      const RVector& x) {
    const auto& cell = f.cells()[k];
    const auto& sel = f.selections()[cell.selection];
    const auto ainv = inverse(sel.A);
    if (!ainv) throw PreconditionError("preimage_stable_radius: singular selection");
    std::optional<Rational> radius;
    for (const auto& h : cell.polyhedron.constraints()) {
        RVector g(f.n());
        for (std::size_t j = 0; j < f.n(); ++j) {
            Rational s(0);
            for (std::size_t i = 0; i < f.n(); ++i) s += h.normal[i] * (*ainv)(i, j);
            g[j] = s;
        }
        const Rational slack = h.offset - dot(h.normal, x);
        if (slack <= 0) throw PreconditionError("preimage_stable_radius: point not interior");
        const Rational bound = slack / (2 * one_norm(g));
        if (!radius || bound < *radius) radius = bound;
    }
    return radius;
}

}  // namespace detail

/**
 * Best-effort injectivity counterexample: two distinct points with equal
 * values. A singular cell yields one outright (step along the kernel). Mixed
 * signs with a degree available are forced: target a value near the image of
 * a cell whose sign opposes the degree; its preimage there plus the sign
 * balance guarantees a second preimage. Mixed signs at infinity fall back to
 * sampling. Coherent orientation returns nothing immediately (a collision
 * would contradict it); budget exhaustion returns nothing and claims nothing.
 */
inline std::optional<std::pair<RVector, RVector>> injectivity_falsifier(const PLFunction& f,
                                                                        std::size_t budget,
                                                                        std::uint64_t seed) {
    detail::require_validated_fn(f, "injectivity_falsifier");
    const auto summary = orientation_summary(f);
    if (summary.global == OrientationClass::Positive ||
        summary.global == OrientationClass::Negative)
        return std::nullopt;

    const auto verified = [&f](RVector a, RVector b) {
        if (a == b || f.evaluate(a) != f.evaluate(b))
            throw InternalError("injectivity_falsifier: candidate pair failed verification");
        return std::make_optional(std::make_pair(std::move(a), std::move(b)));
    };

    if (summary.global == OrientationClass::Singular) {
        // walk along the kernel of a singular selection inside its cell
        for (std::size_t k = 0; k < f.cells().size(); ++k) {
            if (f.cell_det_sign(k) != 0) continue;
            const auto& cell = f.cells()[k];
            const auto kb = kernel_basis(f.selections()[cell.selection].A);
            if (kb.empty()) throw InternalError("injectivity_falsifier: singular without kernel");
            const RVector& d = kb.front();
            const RVector& x0 = f.cell_interior_point(k);
            std::optional<Rational> step;
            for (const auto& h : cell.polyhedron.constraints()) {
                const Rational adv = dot(h.normal, d);
                if (adv <= 0) continue;
                const Rational bound = (h.offset - dot(h.normal, x0)) / (2 * adv);
                if (!step || bound < *step) step = bound;
            }
            const Rational t = step.value_or(Rational(1));
            return verified(x0, x0 + t * d);
        }
        throw InternalError("injectivity_falsifier: singular summary without singular cell");
    }

    // mixed signs from here on
    const auto ai = summary.at_infinity;
    if (ai == OrientationClass::Positive || ai == OrientationClass::Negative) {
        // the degree exists; target the sign class it cannot account for
        const auto ev = global_degree(f, 0, seed);
        const int target_sign = ev.degree >= 0 ? -1 : 1;
        for (std::size_t k = 0; k < f.cells().size(); ++k) {
            if (f.cell_det_sign(k) != target_sign) continue;
            const RVector& x0 = f.cell_interior_point(k);
            const RVector y0 = f.selections()[f.cells()[k].selection].value(x0);
            const Rational radius = detail::preimage_stable_radius(f, k, x0).value_or(1) / 2;
            RVector y;
            try {
                y = sample_regular_value_near(f, y0, seed ^ 0x51ed2700u, radius, budget);
            } catch (const SamplingError&) {
                return std::nullopt;
            }
            const auto pre = preimages(f, y);
            if (pre.points.size() < 2)
                throw InternalError("injectivity_falsifier: sign balance promised a second "
                                    "preimage");
            return verified(pre.points[0].x, pre.points[1].x);
        }
        throw InternalError("injectivity_falsifier: mixed summary without a countersign cell");
    }

    // mixed at infinity: no degree anchor; sample for a multi-preimage value.
    // The radius clears the images of all cached interior points so a value
    // reached from two sides is in range.
    Rational radius = f.bounded_image_radius();
    for (std::size_t k = 0; k < f.cells().size(); ++k) {
        const Rational m = inf_norm(f.evaluate(f.cell_interior_point(k)));
        if (m > radius) radius = m;
    }
    radius = 2 * (radius + 1);
    detail::Rng rng(seed);
    for (std::size_t t = 0; t < budget; ++t) {
        if (t > 0 && t % 64 == 0) radius *= 2;
        const Integer denom = Integer(1) << (1 + t / 4);
        RVector y(f.n());
        for (std::size_t j = 0; j < f.n(); ++j)
            y[j] = rng.uniform_rational_ball(radius, denom);
        const auto pre = preimages(f, y);
        if (!classify_preimage_set(pre).regular) continue;
        if (pre.points.size() >= 2) return verified(pre.points[0].x, pre.points[1].x);
    }
    return std::nullopt;
}

enum class HomeomorphismVerdict { Homeomorphism, NotInjective, NotCoherent, Undetermined };

inline const char* homeomorphism_verdict_name(HomeomorphismVerdict v) {
    switch (v) {
        case HomeomorphismVerdict::Homeomorphism: return "homeomorphism";
        case HomeomorphismVerdict::NotInjective: return "not_injective";
        case HomeomorphismVerdict::NotCoherent: return "not_coherent";
        case HomeomorphismVerdict::Undetermined: return "undetermined";
    }
    return "unknown";
}

/// Coherent orientation with |degree| 1 makes F a bijective open map, hence a
/// homeomorphism (degree -1 is the orientation-reversing case). Coherent with
/// |degree| >= 2 pins every regular value to that many preimages: not
/// injective. Without coherent orientation injectivity is already impossible.
inline HomeomorphismVerdict classify_homeomorphism(const PLFunction& f, std::size_t trials,
                                                   std::uint64_t seed) {
    detail::require_validated_fn(f, "classify_homeomorphism");
    const auto summary = orientation_summary(f);
    if (summary.global != OrientationClass::Positive &&
        summary.global != OrientationClass::Negative)
        return HomeomorphismVerdict::NotCoherent;
    const auto ev = global_degree(f, trials, seed);
    const int mag = ev.degree < 0 ? -ev.degree : ev.degree;
    if (mag == 1) return HomeomorphismVerdict::Homeomorphism;
    if (mag >= 2) return HomeomorphismVerdict::NotInjective;
    return HomeomorphismVerdict::Undetermined;  // coherent degree 0 cannot happen
}

}  // namespace plcert
