#include <catch2/catch_amalgamated.hpp>

#include "corpus.hpp"
#include "plcert/certify.hpp"

using namespace plcert;

namespace {

PLFunction abs_map() { return gen_1d({{Rational(0)}, {Rational(-1), Rational(1)}, Rational(0)}); }

PLFunction half_fold_2d() {
    // (x1, x2) -> (|x1|, x2): orientation flips across the vertical axis.
    FanSpec2D spec;
    spec.rays = {RVector{Rational(1), Rational(0)}, RVector{Rational(0), Rational(1)},
                 RVector{Rational(-1), Rational(0)}, RVector{Rational(0), Rational(-1)}};
    RMatrix flip = RMatrix::identity(2);
    flip(0, 0) = -1;
    spec.matrices = {RMatrix::identity(2), flip, flip, RMatrix::identity(2)};
    return gen_fan_2d(spec);
}

PLFunction zigzag_up() {
    // Slopes 1, -1, 2: both rays increase eventually; middle piece descends.
    return gen_1d({{Rational(0), Rational(1)},
                   {Rational(1), Rational(-1), Rational(2)},
                   Rational(0)});
}

}  // namespace

TEST_CASE("orientation summaries") {
    const OrientationSummary id = orientation_summary(corpus::collar_identity(Rational(1)));
    CHECK(id.at_infinity == OrientationClass::Positive);
    CHECK(id.global == OrientationClass::Positive);
    REQUIRE(id.per_cell_sign.size() == 5);
    for (const PerCellSign& p : id.per_cell_sign) CHECK(p.det_sign == 1);

    const OrientationSummary mixed = orientation_summary(abs_map());
    CHECK(mixed.at_infinity == OrientationClass::Mixed);
    CHECK(mixed.global == OrientationClass::Mixed);

    const OrientationSummary zig = orientation_summary(zigzag_up());
    CHECK(zig.at_infinity == OrientationClass::Positive);
    CHECK(zig.global == OrientationClass::Mixed);

    const OrientationSummary flat = orientation_summary(
        gen_1d({{Rational(0)}, {Rational(0), Rational(1)}, Rational(0)}));
    CHECK(flat.at_infinity == OrientationClass::Singular);

    CHECK(std::string(orientation_class_name(OrientationClass::Positive)) == "+1");
    CHECK(std::string(orientation_class_name(OrientationClass::Negative)) == "-1");
    CHECK(std::string(orientation_class_name(OrientationClass::Mixed)) == "mixed");
    CHECK(std::string(orientation_class_name(OrientationClass::Singular)) == "singular");
}

TEST_CASE("one-dimensional surjectivity is decided by the two ray slopes") {
    const auto classify = [](std::vector<Rational> slopes, std::vector<Rational> bps) {
        return classify_1d(gen_1d({std::move(bps), std::move(slopes), Rational(0)}));
    };
    CHECK(classify({Rational(1), Rational(1)}, {Rational(0)}) == Surjectivity1D::Surjective);
    CHECK(classify({Rational(-2), Rational(-1)}, {Rational(0)}) == Surjectivity1D::Surjective);
    CHECK(classify({Rational(-1), Rational(1)}, {Rational(0)}) == Surjectivity1D::NotSurjective);
    CHECK(classify({Rational(1), Rational(-1)}, {Rational(0)}) == Surjectivity1D::NotSurjective);
    CHECK(classify({Rational(0), Rational(1)}, {Rational(0)}) == Surjectivity1D::NotSurjective);
    CHECK(classify({Rational(1), Rational(0)}, {Rational(0)}) == Surjectivity1D::NotSurjective);
    // Single affine piece: the whole line is both rays.
    CHECK(classify({Rational(3)}, {}) == Surjectivity1D::Surjective);
    CHECK(classify({Rational(0)}, {}) == Surjectivity1D::NotSurjective);
    // Sign changes in the middle do not matter.
    CHECK(classify_1d(zigzag_up()) == Surjectivity1D::Surjective);

    CHECK_THROWS_AS(classify_1d(half_fold_2d()), PreconditionError);
}

TEST_CASE("surjectivity certificates across the three verdicts") {
    const SurjectivityCertificate id = certify_surjective(corpus::collar_identity(Rational(1)), 10, 1);
    CHECK(id.verdict == SurjectivityVerdict::CertifiedSurjective);
    REQUIRE(id.degree_evidence.has_value());
    CHECK(id.degree_evidence->degree == 1);
    CHECK(id.far_value.has_value());

    const SurjectivityCertificate fold = certify_surjective(gen_fan_2d(angle_doubling_fan_spec()), 10, 1);
    CHECK(fold.verdict == SurjectivityVerdict::CertifiedSurjective);
    REQUIRE(fold.degree_evidence.has_value());
    CHECK(fold.degree_evidence->degree == 2);

    const SurjectivityCertificate zig = certify_surjective(zigzag_up(), 10, 1);
    CHECK(zig.verdict == SurjectivityVerdict::CertifiedSurjective);  // coherent at infinity only
    REQUIRE(zig.degree_evidence.has_value());
    CHECK(zig.degree_evidence->degree == 1);

    const SurjectivityCertificate abs_cert = certify_surjective(abs_map(), 10, 1);
    CHECK(abs_cert.verdict == SurjectivityVerdict::CertifiedNotSurjective);
    CHECK_FALSE(abs_cert.degree_evidence.has_value());

    const SurjectivityCertificate flat = certify_surjective(
        gen_1d({{Rational(0)}, {Rational(0), Rational(1)}, Rational(0)}), 10, 1);
    CHECK(flat.verdict == SurjectivityVerdict::CertifiedNotSurjective);

    const SurjectivityCertificate half = certify_surjective(half_fold_2d(), 10, 1);
    CHECK(half.verdict == SurjectivityVerdict::NotCertified);
    CHECK_FALSE(half.degree_evidence.has_value());

    CHECK(std::string(surjectivity_verdict_name(SurjectivityVerdict::CertifiedSurjective)) ==
          "certified_surjective");
    CHECK(std::string(surjectivity_verdict_name(SurjectivityVerdict::NotCertified)) ==
          "not_certified");
    CHECK(std::string(surjectivity_verdict_name(SurjectivityVerdict::CertifiedNotSurjective)) ==
          "certified_not_surjective");
}

TEST_CASE("falsifier finds exact collisions when orientation mixes") {
    const auto verify_collision = [](const PLFunction& f,
                                     const std::optional<std::pair<RVector, RVector>>& hit) {
        REQUIRE(hit.has_value());
        CHECK_FALSE(hit->first == hit->second);
        CHECK(f.evaluate(hit->first) == f.evaluate(hit->second));
    };

    SECTION("mixed at infinity, by sampling") {
        PLFunction f = abs_map();
        verify_collision(f, injectivity_falsifier(f, 256, 7));
        PLFunction half = half_fold_2d();
        verify_collision(half, injectivity_falsifier(half, 256, 7));
    }
    SECTION("coherent at infinity, by targeted sampling near a reversed cell") {
        PLFunction f = zigzag_up();
        verify_collision(f, injectivity_falsifier(f, 256, 7));
    }
    SECTION("singular pieces, by walking the kernel") {
        PLFunction flat = gen_1d({{Rational(0), Rational(1)},
                                  {Rational(1), Rational(0), Rational(1)},
                                  Rational(0)});
        verify_collision(flat, injectivity_falsifier(flat, 256, 7));

        RMatrix rank1(2, 2);
        rank1(0, 0) = 1;
        rank1(0, 1) = 1;
        rank1(1, 0) = 1;
        rank1(1, 1) = 1;
        PLFunction plane(2, {Selection{rank1, RVector{Rational(0), Rational(0)}}},
                         {Cell{HPolyhedron(2, {}), 0}});
        plane.validate();
        verify_collision(plane, injectivity_falsifier(plane, 256, 7));
    }
    SECTION("coherent maps yield no collision") {
        PLFunction fold = gen_fan_2d(angle_doubling_fan_spec());
        CHECK_FALSE(injectivity_falsifier(fold, 64, 7).has_value());
        PLFunction id = corpus::collar_identity(Rational(1));
        CHECK_FALSE(injectivity_falsifier(id, 64, 7).has_value());
    }
}

TEST_CASE("preimage stability radius keeps nearby targets inside the cell") {
    PLFunction fold = gen_fan_2d(angle_doubling_fan_spec());
    const std::size_t k = 0;
    const RVector x = fold.cell_interior_point(k);
    const auto radius = detail::preimage_stable_radius(fold, k, x);
    REQUIRE(radius.has_value());
    CHECK(*radius > 0);
    const Selection& s = fold.selections()[fold.cells()[k].selection];
    const RVector y0 = s.value(x);
    const auto inv = inverse(s.A);
    REQUIRE(inv.has_value());
    // Probe the corners and edge midpoints of the stability box.
    for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
            const RVector y{y0[0] + *radius * Rational(dx), y0[1] + *radius * Rational(dy)};
            const RVector xx = inv->apply(y - s.b);
            CHECK(fold.cells()[k].polyhedron.contains(xx));
        }
    }
}

TEST_CASE("homeomorphism classification") {
    CHECK(classify_homeomorphism(corpus::collar_identity(Rational(1)), 10, 3) ==
          HomeomorphismVerdict::Homeomorphism);
    CHECK(classify_homeomorphism(gen_1d({{}, {Rational(3)}, Rational(-5)}), 10, 3) ==
          HomeomorphismVerdict::Homeomorphism);

    // Orientation-reversing bijection: coherent with degree -1.
    RMatrix swap(2, 2);
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    PLFunction mirror(2, {Selection{swap, RVector{Rational(0), Rational(0)}}},
                      {Cell{HPolyhedron(2, {}), 0}});
    mirror.validate();
    CHECK(classify_homeomorphism(mirror, 10, 3) == HomeomorphismVerdict::Homeomorphism);

    CHECK(classify_homeomorphism(gen_fan_2d(angle_doubling_fan_spec()), 10, 3) ==
          HomeomorphismVerdict::NotInjective);
    CHECK(classify_homeomorphism(abs_map(), 10, 3) == HomeomorphismVerdict::NotCoherent);
    CHECK(classify_homeomorphism(zigzag_up(), 10, 3) == HomeomorphismVerdict::NotCoherent);

    CHECK(std::string(homeomorphism_verdict_name(HomeomorphismVerdict::Homeomorphism)) ==
          "homeomorphism");
    CHECK(std::string(homeomorphism_verdict_name(HomeomorphismVerdict::NotInjective)) ==
          "not_injective");
    CHECK(std::string(homeomorphism_verdict_name(HomeomorphismVerdict::NotCoherent)) ==
          "not_coherent");
}
