#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "plcert/detail/rng.hpp"
#include "plcert/harness.hpp"
#include "plcert/linalg.hpp"
#include "plcert/pl_function.hpp"
#include "plcert/rational.hpp"

// Seeded instance families shared by the test suites. Everything here is
// deterministic in the seed and uses only public generator entry points,
// so failures reproduce exactly.

namespace corpus {

using namespace plcert;

/// Random 1D spec: up to `max_breakpoints` strictly increasing breakpoints
/// on the half-integer grid in [-6, 6], slopes drawn from {-3..3} (zero
/// slopes allowed), intercept on the half-integer grid in [-4, 4].
inline GenSpec1D random_zigzag_spec(detail::Rng& rng, std::size_t max_breakpoints = 20) {
    const std::size_t count = static_cast<std::size_t>(rng.below(max_breakpoints + 1));
    std::vector<int> slots(25);  // {-12..12} halves
    std::iota(slots.begin(), slots.end(), -12);
    for (std::size_t i = slots.size(); i > 1; --i)
        std::swap(slots[i - 1], slots[static_cast<std::size_t>(rng.below(i))]);
    slots.resize(count);
    std::sort(slots.begin(), slots.end());

    GenSpec1D spec;
    for (int s : slots) spec.breakpoints.push_back(Rational(s, 2));
    for (std::size_t i = 0; i <= count; ++i)
        spec.slopes.push_back(Rational(rng.uniform_int(-3, 3)));
    spec.intercept = Rational(rng.uniform_int(-8, 8), 2);
    return spec;
}

/// Random strictly monotone 1D spec: slopes share one nonzero sign.
inline GenSpec1D random_monotone_spec(detail::Rng& rng, int sign) {
    GenSpec1D spec = random_zigzag_spec(rng, 12);
    for (Rational& s : spec.slopes) {
        const long long mag = rng.uniform_int(1, 3);
        s = Rational(sign * mag);
    }
    return spec;
}

/// Sixteen integer directions in counterclockwise order; every window of up
/// to seven consecutive steps spans less than a half turn, so any such pair
/// spans a pointed sector.
inline const std::vector<RVector>& palette16() {
    static const std::vector<RVector> dirs = {
        RVector{Rational(1), Rational(0)},   RVector{Rational(2), Rational(1)},
        RVector{Rational(1), Rational(1)},   RVector{Rational(1), Rational(2)},
        RVector{Rational(0), Rational(1)},   RVector{Rational(-1), Rational(2)},
        RVector{Rational(-1), Rational(1)},  RVector{Rational(-2), Rational(1)},
        RVector{Rational(-1), Rational(0)},  RVector{Rational(-2), Rational(-1)},
        RVector{Rational(-1), Rational(-1)}, RVector{Rational(-1), Rational(-2)},
        RVector{Rational(0), Rational(-1)},  RVector{Rational(1), Rational(-2)},
        RVector{Rational(1), Rational(-1)},  RVector{Rational(2), Rational(-1)}};
    return dirs;
}

/// Draws `count` values in [1, 7] and nudges them until they sum to
/// `target` (which must lie in [count, 7*count]).
inline std::vector<int> steps_with_sum(detail::Rng& rng, std::size_t count, int target) {
    if (target < static_cast<int>(count) || target > 7 * static_cast<int>(count))
        throw InternalError("steps_with_sum: target out of range");
    std::vector<int> steps(count);
    int total = 0;
    for (int& s : steps) {
        s = static_cast<int>(rng.uniform_int(1, 7));
        total += s;
    }
    for (std::size_t i = 0; total != target; i = (i + 1) % count) {
        if (total < target && steps[i] < 7) {
            ++steps[i];
            ++total;
        } else if (total > target && steps[i] > 1) {
            --steps[i];
            --total;
        }
    }
    return steps;
}

/// Linear map sending `u` to `pu` and `v` to `pv`.
inline RMatrix map_between(const RVector& u, const RVector& v, const RVector& pu, const RVector& pv) {
    RMatrix basis(2, 2), image(2, 2);
    for (std::size_t r = 0; r < 2; ++r) {
        basis(r, 0) = u[r];
        basis(r, 1) = v[r];
        image(r, 0) = pu[r];
        image(r, 1) = pv[r];
    }
    const auto inv = inverse(basis);
    if (!inv) throw InternalError("map_between: basis not invertible");
    return image * *inv;
}

/// Coherent conewise map of degree `deg` >= 1: the domain rays subdivide
/// the circle once; sector k maps its rays to palette images that advance
/// 16*deg steps in total, each sector by 1..7 steps, so every piece is
/// orientation-preserving.
inline FanSpec2D random_coherent_fan_spec(detail::Rng& rng, int deg) {
    const auto& pal = palette16();
    // Each sector can advance the image walk by at most 7 palette steps.
    const long long min_sectors = (16 * deg + 6) / 7;
    const std::size_t sectors =
        static_cast<std::size_t>(rng.uniform_int(std::max(3LL, min_sectors), 8));
    const std::vector<int> gaps = steps_with_sum(rng, sectors, 16);
    const std::vector<int> steps = steps_with_sum(rng, sectors, 16 * deg);

    FanSpec2D spec;
    std::size_t dom = static_cast<std::size_t>(rng.below(16));
    std::size_t img = static_cast<std::size_t>(rng.below(16));
    std::size_t d = dom, im = img;
    for (std::size_t k = 0; k < sectors; ++k) {
        spec.rays.push_back(pal[d % 16]);
        const RVector& u = pal[d % 16];
        const RVector& v = pal[(d + gaps[k]) % 16];
        const RVector& pu = pal[im % 16];
        const RVector& pv = pal[(im + steps[k]) % 16];
        spec.matrices.push_back(map_between(u, v, pu, pv));
        d += gaps[k];
        im += steps[k];
    }
    return spec;
}

/// Conewise map whose image walk moves both forwards and backwards, giving
/// sectors of both determinant signs. Net advance is zero, so the walk is
/// consistent around the circle.
inline FanSpec2D random_mixed_fan_spec(detail::Rng& rng) {
    const auto& pal = palette16();
    const std::size_t sectors = static_cast<std::size_t>(rng.uniform_int(4, 8));
    const std::vector<int> gaps = steps_with_sum(rng, sectors, 16);

    // Signed steps in [-7,-1] u [1,7] with zero sum and both signs present:
    // pair up positive and negative entries of equal magnitude.
    std::vector<int> steps(sectors, 0);
    for (std::size_t i = 0; i + 1 < sectors; i += 2) {
        const int mag = static_cast<int>(rng.uniform_int(1, 7));
        steps[i] = mag;
        steps[i + 1] = -mag;
    }
    if (sectors % 2 == 1) {
        // Odd count: make a +a, -b, +c triple with a + c = b.
        const int a = static_cast<int>(rng.uniform_int(1, 3));
        const int c = static_cast<int>(rng.uniform_int(1, 3));
        steps[sectors - 3] = a;
        steps[sectors - 2] = -(a + c);
        steps[sectors - 1] = c;
    }

    FanSpec2D spec;
    std::size_t d = static_cast<std::size_t>(rng.below(16));
    std::size_t im = static_cast<std::size_t>(rng.below(16));
    for (std::size_t k = 0; k < sectors; ++k) {
        spec.rays.push_back(pal[d % 16]);
        const RVector& u = pal[d % 16];
        const RVector& v = pal[(d + gaps[k]) % 16];
        const RVector& pu = pal[im % 16];
        const RVector& pv = pal[(im + 16 + steps[k]) % 16];
        spec.matrices.push_back(map_between(u, v, pu, pv));
        d += gaps[k];
        im = (im + 16 + steps[k]) % 16;
    }
    return spec;
}

/// Identity on a square of half-width `size` with four unbounded collar
/// pieces: the standard bounded-plus-collar subdivision of the plane.
inline PLFunction collar_identity(const Rational& size) {
    const Rational zero(0);
    const RVector e1{Rational(1), Rational(0)}, e2{Rational(0), Rational(1)};
    const auto hs = [](Rational a, Rational b, Rational off) {
        return Halfspace(RVector{std::move(a), std::move(b)}, std::move(off));
    };
    std::vector<Cell> cells;
    cells.push_back(Cell{HPolyhedron(2, {hs(1, 0, size), hs(-1, 0, size), hs(0, 1, size), hs(0, -1, size)}), 0});
    cells.push_back(Cell{HPolyhedron(2, {hs(-1, 0, -size), hs(-1, 1, zero), hs(-1, -1, zero)}), 0});
    cells.push_back(Cell{HPolyhedron(2, {hs(0, -1, -size), hs(1, -1, zero), hs(-1, -1, zero)}), 0});
    cells.push_back(Cell{HPolyhedron(2, {hs(1, 0, -size), hs(1, 1, zero), hs(1, -1, zero)}), 0});
    cells.push_back(Cell{HPolyhedron(2, {hs(0, 1, -size), hs(-1, 1, zero), hs(1, 1, zero)}), 0});
    PLFunction f(2, {Selection{RMatrix::identity(2), RVector{zero, zero}}}, std::move(cells));
    f.validate();
    return f;
}

// Hand-built defective inputs, one per validation finding category. They are
// returned unvalidated; asserting on the produced findings is the point.

inline Selection slope_1d(int slope, int value_at_zero = 0) {
    RMatrix a(1, 1);
    a(0, 0) = slope;
    return Selection{std::move(a), RVector{Rational(value_at_zero)}};
}

inline HPolyhedron ray_le(const Rational& bound) {  // x <= bound
    return HPolyhedron(1, {Halfspace(RVector{Rational(1)}, bound)});
}

inline HPolyhedron ray_ge(const Rational& bound) {  // x >= bound
    return HPolyhedron(1, {Halfspace(RVector{Rational(-1)}, -bound)});
}

inline PLFunction fixture_overlap() {
    // (-inf, 1] and [0, inf) overlap on (0, 1).
    return PLFunction(1, {slope_1d(1)},
                      {Cell{ray_le(Rational(1)), 0}, Cell{ray_ge(Rational(0)), 0}});
}

inline PLFunction fixture_gap() {
    // (-inf, 0] and [1, inf) leave (0, 1) uncovered.
    return PLFunction(1, {slope_1d(1)},
                      {Cell{ray_le(Rational(0)), 0}, Cell{ray_ge(Rational(1)), 0}});
}

inline PLFunction fixture_discontinuity() {
    // -x on the left, x + 1 on the right: jumps at 0.
    return PLFunction(1, {slope_1d(-1), slope_1d(1, 1)},
                      {Cell{ray_le(Rational(0)), 0}, Cell{ray_ge(Rational(0)), 1}});
}

inline PLFunction fixture_empty_cell() {
    const HPolyhedron empty(1, {Halfspace(RVector{Rational(1)}, Rational(-1)),
                                Halfspace(RVector{Rational(-1)}, Rational(-1))});
    return PLFunction(1, {slope_1d(1)}, {Cell{HPolyhedron(1, {}), 0}, Cell{empty, 0}});
}

inline PLFunction fixture_lower_dimensional() {
    const HPolyhedron point(1, {Halfspace(RVector{Rational(1)}, Rational(0)),
                                Halfspace(RVector{Rational(-1)}, Rational(0))});
    return PLFunction(1, {slope_1d(1)},
                      {Cell{ray_le(Rational(0)), 0}, Cell{point, 0}, Cell{ray_ge(Rational(0)), 0}});
}

inline PLFunction fixture_bad_face() {
    // Left square [0,2]^2 meets two right boxes along x = 2; the interface
    // pieces are faces of the right boxes but not of the square.
    const auto hs = [](int a, int b, const Rational& off) {
        return Halfspace(RVector{Rational(a), Rational(b)}, off);
    };
    const HPolyhedron square(2, {hs(1, 0, Rational(2)), hs(-1, 0, Rational(0)),
                                 hs(0, 1, Rational(2)), hs(0, -1, Rational(0))});
    const HPolyhedron low(2, {hs(1, 0, Rational(3)), hs(-1, 0, Rational(-2)),
                              hs(0, 1, Rational(1)), hs(0, -1, Rational(0))});
    const HPolyhedron high(2, {hs(1, 0, Rational(3)), hs(-1, 0, Rational(-2)),
                               hs(0, 1, Rational(2)), hs(0, -1, Rational(-1))});
    return PLFunction(2, {Selection{RMatrix::identity(2), RVector{Rational(0), Rational(0)}}},
                      {Cell{square, 0}, Cell{low, 0}, Cell{high, 0}});
}

/// Three pieces x, -x, x - 2: bounded middle piece [0, 1], image radius 1.
inline PLFunction three_piece_1d() {
    PLFunction f(1, {slope_1d(1), slope_1d(-1), slope_1d(1, -2)},
                 {Cell{ray_le(Rational(0)), 0},
                  Cell{HPolyhedron(1, {Halfspace(RVector{Rational(-1)}, Rational(0)),
                                       Halfspace(RVector{Rational(1)}, Rational(1))}),
                       1},
                  Cell{ray_ge(Rational(1)), 2}});
    f.validate();
    return f;
}

}  // namespace corpus
