#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "corpus.hpp"
#include "plcert/json_io.hpp"

using namespace plcert;

namespace {

PLFunction abs_map() { return gen_1d({{Rational(0)}, {Rational(-1), Rational(1)}, Rational(0)}); }

Json abs_json() { return function_to_json(abs_map()); }

}  // namespace

TEST_CASE("function round trip keeps the canonical dump and the digest") {
    PLFunction f = abs_map();
    const Json j = function_to_json(f);
    PLFunction back = parse_function(j);
    CHECK(canonical_function_dump(back) == canonical_function_dump(f));
    CHECK(function_digest(back) == function_digest(f));

    PLFunction fold = gen_fan_2d(angle_doubling_fan_spec());
    PLFunction fold_back = parse_function(function_to_json(fold));
    CHECK(canonical_function_dump(fold_back) == canonical_function_dump(fold));
    REQUIRE(fold_back.validate().ok);
    CHECK(fold_back.evaluate(RVector{Rational(0), Rational(1)}) ==
          RVector{Rational(-1), Rational(0)});
}

TEST_CASE("the digest is pinned so report identity stays stable") {
    CHECK(function_digest(abs_map()) == "fnv1a64:4d782f334cb9e121");
    // compact form, no whitespace
    const std::string dump = canonical_function_dump(abs_map());
    CHECK(dump.find(' ') == std::string::npos);
    CHECK(dump.find('\n') == std::string::npos);
    CHECK(dump.substr(0, 8) == "{\"n\":1,\"");
}

TEST_CASE("parse errors carry a path to the offending field") {
    const auto message = [](const Json& j) {
        try {
            parse_function(j);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };

    CHECK(message(Json::array()) == "$: expected an object");
    CHECK(message(Json::object()) == "$.n: missing field");

    Json j = abs_json();
    j.erase("selections");
    CHECK(message(j) == "$.selections: missing field");

    j = abs_json();
    j["selections"][0].erase("A");
    CHECK(message(j) == "$.selections[0].A: missing field");

    j = abs_json();
    j["selections"][0]["A"] = Json::array({Json::array({"1", "0"}), Json::array({"2"})});
    CHECK(message(j) == "$.selections[0].A[1]: rows of a matrix must have equal length");

    j = abs_json();
    j["selections"][0]["b"][0] = "1.5";
    CHECK(message(j) == "$.selections[0].b[0]: malformed rational \"1.5\"");

    j = abs_json();
    j["cells"][1]["constraints"][0]["offset"] = "1/0";
    CHECK(message(j) == "$.cells[1].constraints[0].offset: malformed rational \"1/0\": zero denominator");

    j = abs_json();
    j["cells"][0]["selection"] = 7;
    CHECK(message(j).find("cell references missing selection") != std::string::npos);

    j = abs_json();
    j["cells"][0]["constraints"][0]["normal"] = Json::array({"0"});
    CHECK(message(j) == "$.cells[0].constraints[0]: Halfspace: zero normal");
}

TEST_CASE("rational fields accept JSON integers as well as strings") {
    Json j = abs_json();
    j["selections"][0]["b"][0] = -3;
    PLFunction f = parse_function(j);
    CHECK(f.selections()[0].b[0] == Rational(-3));
}

TEST_CASE("generator specs round trip") {
    GenSpec1D spec{{Rational(-1), Rational(1)},
                   {Rational(1), Rational(-2), Rational(1)},
                   Rational(1, 2)};
    const GenSpec1D back = parse_gen_spec_1d(gen_spec_1d_json(spec));
    CHECK(back.breakpoints == spec.breakpoints);
    CHECK(back.slopes == spec.slopes);
    CHECK(back.intercept == spec.intercept);

    const FanSpec2D fan = angle_doubling_fan_spec();
    const FanSpec2D fan_back = parse_fan_spec_2d(fan_spec_2d_json(fan));
    REQUIRE(fan_back.rays.size() == fan.rays.size());
    for (std::size_t i = 0; i < fan.rays.size(); ++i) CHECK(fan_back.rays[i] == fan.rays[i]);
    REQUIRE(fan_back.matrices.size() == fan.matrices.size());
    CHECK(canonical_function_dump(gen_fan_2d(fan_back)) ==
          canonical_function_dump(gen_fan_2d(fan)));
}

TEST_CASE("file loading reports open and syntax failures") {
    CHECK_THROWS_WITH(load_json_file("/nonexistent/path.json"),
                      "/nonexistent/path.json: cannot open file");

    const std::string path = "/tmp/plcert_test_badsyntax.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_json_file(path), ParseError);
    std::remove(path.c_str());

    const std::string good = "/tmp/plcert_test_good.json";
    std::ofstream(good) << pretty_json(abs_json());
    PLFunction f = load_function(good);
    CHECK(function_digest(f) == function_digest(abs_map()));
    std::remove(good.c_str());
}

TEST_CASE("validation report shape") {
    PLFunction ok = abs_map();
    const Json jok = validation_report_json(ok.validate());
    CHECK(jok["ok"] == true);
    CHECK(jok["findings"].empty());

    PLFunction gap = corpus::fixture_gap();
    const Json jbad = validation_report_json(gap.validate());
    CHECK(jbad["ok"] == false);
    REQUIRE(!jbad["findings"].empty());
    for (const Json& finding : jbad["findings"]) {
        CHECK(finding["kind"] == "unpaired-facet");
        CHECK(finding["cells"].is_array());
        CHECK(finding.contains("witness"));
        CHECK(finding.contains("constraint"));
        CHECK(finding["detail"].is_string());
    }
}

TEST_CASE("preimage and degree reports") {
    PLFunction f = abs_map();
    f.validate();
    const Json pre = preimage_set_json(preimages(f, RVector{Rational(4)}));
    CHECK(pre["target"] == Json::array({"4"}));
    REQUIRE(pre["points"].size() == 2);
    CHECK(pre["points"][0]["x"] == Json::array({"-4"}));
    CHECK(pre["points"][0]["cell"] == 0);
    CHECK(pre["points"][0]["det_sign"] == -1);
    CHECK(pre["points"][0]["on_boundary"] == false);
    CHECK(pre["points"][1]["x"] == Json::array({"4"}));
    CHECK(pre["singular_hits"].empty());
    CHECK(pre["regular"] == true);

    const Json folded = preimage_set_json(preimages(f, RVector{Rational(0)}));
    CHECK(folded["regular"] == false);

    const Json ev = degree_evidence_json(global_degree(f, 5, 3));
    CHECK(ev["degree"] == 0);
    CHECK(ev.contains("far_value"));
    REQUIRE(ev["samples"].size() == 6);
    for (const Json& s : ev["samples"]) {
        CHECK(s["y"].is_array());
        CHECK(s["signed_sum"] == 0);
    }
}

TEST_CASE("orientation, certificate, and oracle reports") {
    PLFunction f = abs_map();
    f.validate();
    const Json ori = orientation_summary_json(orientation_summary(f));
    CHECK(ori["at_infinity"] == "mixed");
    CHECK(ori["global"] == "mixed");
    REQUIRE(ori["per_cell_sign"].size() == 2);
    CHECK(ori["per_cell_sign"][0]["cell"] == 0);
    CHECK(ori["per_cell_sign"][0]["det_sign"] == -1);
    CHECK(ori["per_cell_sign"][0]["bounded"] == false);

    const Json cert = certificate_json(certify_surjective(f, 4, 1));
    CHECK(cert["verdict"] == "certified_not_surjective");
    CHECK(cert["note"].is_string());
    CHECK_FALSE(cert["note"].get<std::string>().empty());
    CHECK_FALSE(cert.contains("degree_evidence"));

    PLFunction fold = gen_fan_2d(angle_doubling_fan_spec());
    const Json cert2 = certificate_json(certify_surjective(fold, 4, 1));
    CHECK(cert2["verdict"] == "certified_surjective");
    CHECK(cert2["degree_evidence"]["degree"] == 2);
    CHECK(cert2.contains("far_value"));

    const Json oracle = oracle_report_json(
        grid_surjectivity_oracle(f, Rational(-2), Rational(2), Rational(1)));
    CHECK(oracle["box"] == Json::array({"-2", "2"}));
    CHECK(oracle["resolution"] == "1");
    CHECK(oracle["target_count"] == 5);
    CHECK(oracle["uncovered_targets"] ==
          Json::array({Json::array({"-2"}), Json::array({"-1"})}));
    CHECK(oracle["surjective_on_grid"] == false);
}

TEST_CASE("report envelope carries version, command, and digest") {
    const Json env = report_envelope("validate", "fnv1a64:0000000000000000", Json::object());
    REQUIRE(env.size() == 4);
    CHECK(env["tool_version"] == "0.1.0");
    CHECK(env["command"] == "validate");
    CHECK(env["input_digest"] == "fnv1a64:0000000000000000");
    CHECK(env["payload"] == Json::object());
    auto it = env.begin();
    CHECK(it.key() == "tool_version");

    const std::string digest = function_digest(abs_map());
    CHECK(digest.size() == std::string("fnv1a64:").size() + 16);
    CHECK(digest.compare(0, 8, "fnv1a64:") == 0);

    const std::string pretty = pretty_json(Json::object());
    CHECK(pretty == "{}\n");
}
