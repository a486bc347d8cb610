#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "plcert/certify.hpp"
#include "plcert/degree.hpp"
#include "plcert/errors.hpp"
#include "plcert/harness.hpp"
#include "plcert/linalg.hpp"
#include "plcert/pl_function.hpp"
#include "plcert/polyhedron.hpp"
#include "plcert/rational.hpp"

// JSON form of functions, generator specs and analysis reports. Rationals
// travel as canonical strings ("p" or "p/q" in lowest terms), so a parse
// followed by a dump is byte-stable and safe to hash.

namespace plcert {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

inline const Json& member(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) parse_fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) parse_fail(path + "." + key, "missing field");
    return *it;
}

inline Rational rational_field(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (!j.is_string()) parse_fail(path, "expected a rational written as a string");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
        parse_fail(path, e.what());
    }
}

inline std::size_t index_field(const Json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        parse_fail(path, "expected a nonnegative integer");
    return static_cast<std::size_t>(j.get<long long>());
}

inline RVector vector_field(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) parse_fail(path, "expected a nonempty array of rationals");
    std::vector<Rational> entries;
    entries.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        entries.push_back(rational_field(j[i], path + "[" + std::to_string(i) + "]"));
    return RVector(std::move(entries));
}

inline RMatrix matrix_field(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) parse_fail(path, "expected a nonempty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    RMatrix m(1, 1);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        const RVector row = vector_field(j[r], row_path);
        if (r == 0) {
            cols = row.dim();
            m = RMatrix(rows, cols);
        } else if (row.dim() != cols) {
            parse_fail(row_path, "rows of a matrix must have equal length");
        }
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
}

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace detail

inline Json vector_json(const RVector& v) {
    Json a = Json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) a.push_back(to_string(v[i]));
    return a;
}

inline Json matrix_json(const RMatrix& m) {
    Json a = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
        a.push_back(std::move(row));
    }
    return a;
}

inline Json function_to_json(const PLFunction& f) {
    Json j;
    j["n"] = f.n();
    Json sels = Json::array();
    for (const Selection& s : f.selections()) {
        Json sel;
        sel["A"] = matrix_json(s.A);
        sel["b"] = vector_json(s.b);
        sels.push_back(std::move(sel));
    }
    j["selections"] = std::move(sels);
    Json cells = Json::array();
    for (const Cell& c : f.cells()) {
        Json cell;
        Json cons = Json::array();
        for (const Halfspace& h : c.polyhedron.constraints()) {
            Json hs;
            hs["normal"] = vector_json(h.normal);
            hs["offset"] = to_string(h.offset);
            cons.push_back(std::move(hs));
        }
        cell["constraints"] = std::move(cons);
        cell["selection"] = c.selection;
        cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    return j;
}

/// Parses the function shape; validation of the subdivision is separate.
/// Structural defects (bad dimensions, out-of-range selection indices) are
/// reported as parse errors with a field path.
inline PLFunction parse_function(const Json& j) {
    const std::size_t n = detail::index_field(detail::member(j, "n", "$"), "$.n");
    const Json& jsel = detail::member(j, "selections", "$");
    if (!jsel.is_array()) detail::parse_fail("$.selections", "expected an array");
    std::vector<Selection> selections;
    selections.reserve(jsel.size());
    for (std::size_t i = 0; i < jsel.size(); ++i) {
        const std::string path = "$.selections[" + std::to_string(i) + "]";
        selections.push_back(Selection{
            detail::matrix_field(detail::member(jsel[i], "A", path), path + ".A"),
            detail::vector_field(detail::member(jsel[i], "b", path), path + ".b")});
    }
    const Json& jcells = detail::member(j, "cells", "$");
    if (!jcells.is_array()) detail::parse_fail("$.cells", "expected an array");
    std::vector<Cell> cells;
    cells.reserve(jcells.size());
    for (std::size_t i = 0; i < jcells.size(); ++i) {
        const std::string path = "$.cells[" + std::to_string(i) + "]";
        const Json& jcons = detail::member(jcells[i], "constraints", path);
        if (!jcons.is_array()) detail::parse_fail(path + ".constraints", "expected an array");
        std::vector<Halfspace> constraints;
        constraints.reserve(jcons.size());
        for (std::size_t k = 0; k < jcons.size(); ++k) {
            const std::string hpath = path + ".constraints[" + std::to_string(k) + "]";
            try {
                constraints.emplace_back(
                    detail::vector_field(detail::member(jcons[k], "normal", hpath), hpath + ".normal"),
                    detail::rational_field(detail::member(jcons[k], "offset", hpath), hpath + ".offset"));
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                detail::parse_fail(hpath, e.what());
            }
        }
        std::size_t selection = detail::index_field(detail::member(jcells[i], "selection", path),
                                                    path + ".selection");
        try {
            cells.push_back(Cell{HPolyhedron(n, std::move(constraints)), selection});
        } catch (const Error& e) {
            detail::parse_fail(path, e.what());
        }
    }
    try {
        return PLFunction(n, std::move(selections), std::move(cells));
    } catch (const Error& e) {
        detail::parse_fail("$", e.what());
    }
}

inline Json gen_spec_1d_json(const GenSpec1D& spec) {
    Json j;
    Json bps = Json::array();
    for (const Rational& b : spec.breakpoints) bps.push_back(to_string(b));
    j["breakpoints"] = std::move(bps);
    Json slopes = Json::array();
    for (const Rational& s : spec.slopes) slopes.push_back(to_string(s));
    j["slopes"] = std::move(slopes);
    j["intercept"] = to_string(spec.intercept);
    return j;
}

inline GenSpec1D parse_gen_spec_1d(const Json& j) {
    GenSpec1D spec;
    const Json& jb = detail::member(j, "breakpoints", "$");
    if (!jb.is_array()) detail::parse_fail("$.breakpoints", "expected an array");
    for (std::size_t i = 0; i < jb.size(); ++i)
        spec.breakpoints.push_back(
            detail::rational_field(jb[i], "$.breakpoints[" + std::to_string(i) + "]"));
    const Json& js = detail::member(j, "slopes", "$");
    if (!js.is_array()) detail::parse_fail("$.slopes", "expected an array");
    for (std::size_t i = 0; i < js.size(); ++i)
        spec.slopes.push_back(detail::rational_field(js[i], "$.slopes[" + std::to_string(i) + "]"));
    spec.intercept = detail::rational_field(detail::member(j, "intercept", "$"), "$.intercept");
    return spec;
}

inline Json fan_spec_2d_json(const FanSpec2D& spec) {
    Json j;
    Json rays = Json::array();
    for (const RVector& r : spec.rays) rays.push_back(vector_json(r));
    j["rays"] = std::move(rays);
    Json mats = Json::array();
    for (const RMatrix& m : spec.matrices) mats.push_back(matrix_json(m));
    j["matrices"] = std::move(mats);
    return j;
}

inline FanSpec2D parse_fan_spec_2d(const Json& j) {
    FanSpec2D spec;
    const Json& jr = detail::member(j, "rays", "$");
    if (!jr.is_array()) detail::parse_fail("$.rays", "expected an array");
    for (std::size_t i = 0; i < jr.size(); ++i)
        spec.rays.push_back(detail::vector_field(jr[i], "$.rays[" + std::to_string(i) + "]"));
    const Json& jm = detail::member(j, "matrices", "$");
    if (!jm.is_array()) detail::parse_fail("$.matrices", "expected an array");
    for (std::size_t i = 0; i < jm.size(); ++i)
        spec.matrices.push_back(detail::matrix_field(jm[i], "$.matrices[" + std::to_string(i) + "]"));
    return spec;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline PLFunction load_function(const std::string& path) {
    return parse_function(load_json_file(path));
}

/// Canonical compact serialization used for hashing and round-trip checks.
inline std::string canonical_function_dump(const PLFunction& f) {
    return function_to_json(f).dump();
}

inline std::string digest_string(std::string_view canonical) {
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << detail::fnv1a64(canonical);
    return out.str();
}

inline std::string function_digest(const PLFunction& f) {
    return digest_string(canonical_function_dump(f));
}

inline Json finding_json(const Finding& finding) {
    Json j;
    j["kind"] = finding_kind_name(finding.kind);
    j["cells"] = finding.cells;
    if (finding.witness) j["witness"] = vector_json(*finding.witness);
    if (finding.constraint) j["constraint"] = *finding.constraint;
    j["detail"] = finding.detail;
    return j;
}

inline Json validation_report_json(const ValidationReport& report) {
    Json j;
    j["ok"] = report.ok;
    Json findings = Json::array();
    for (const Finding& f : report.findings) findings.push_back(finding_json(f));
    j["findings"] = std::move(findings);
    return j;
}

inline Json preimage_set_json(const PreimageSet& pre) {
    Json j;
    j["target"] = vector_json(pre.target);
    Json points = Json::array();
    for (const PreimagePoint& p : pre.points) {
        Json pt;
        pt["x"] = vector_json(p.x);
        pt["cell"] = p.cell;
        pt["on_boundary"] = p.on_boundary;
        pt["det_sign"] = p.det_sign;
        points.push_back(std::move(pt));
    }
    j["points"] = std::move(points);
    j["singular_hits"] = pre.singular_hits;
    j["regular"] = classify_preimage_set(pre).regular;
    return j;
}

inline Json degree_evidence_json(const DegreeEvidence& ev) {
    Json j;
    j["degree"] = ev.degree;
    if (ev.far_value) j["far_value"] = vector_json(*ev.far_value);
    Json samples = Json::array();
    for (const DegreeSample& s : ev.samples) {
        Json sample;
        sample["y"] = vector_json(s.y);
        sample["preimage_count"] = s.preimage_count;
        sample["signed_sum"] = s.signed_sum;
        samples.push_back(std::move(sample));
    }
    j["samples"] = std::move(samples);
    return j;
}

inline Json orientation_summary_json(const OrientationSummary& summary) {
    Json j;
    j["at_infinity"] = orientation_class_name(summary.at_infinity);
    j["global"] = orientation_class_name(summary.global);
    Json per_cell = Json::array();
    for (const PerCellSign& p : summary.per_cell_sign) {
        Json row;
        row["cell"] = p.cell;
        row["det_sign"] = p.det_sign;
        row["bounded"] = p.bounded;
        per_cell.push_back(std::move(row));
    }
    j["per_cell_sign"] = std::move(per_cell);
    return j;
}

inline Json certificate_json(const SurjectivityCertificate& cert) {
    Json j;
    j["verdict"] = surjectivity_verdict_name(cert.verdict);
    j["orientation"] = orientation_summary_json(cert.orientation);
    if (cert.degree_evidence) j["degree_evidence"] = degree_evidence_json(*cert.degree_evidence);
    if (cert.far_value) j["far_value"] = vector_json(*cert.far_value);
    j["note"] = cert.note;
    return j;
}

inline Json oracle_report_json(const OracleReport& report) {
    Json j;
    j["box"] = Json::array({to_string(report.box_lo), to_string(report.box_hi)});
    j["resolution"] = to_string(report.resolution);
    j["target_count"] = report.target_count;
    j["regular_target_count"] = report.regular_target_count;
    Json uncovered = Json::array();
    for (const RVector& y : report.uncovered_targets) uncovered.push_back(vector_json(y));
    j["uncovered_targets"] = std::move(uncovered);
    Json irregular = Json::array();
    for (const RVector& y : report.irregular_targets) irregular.push_back(vector_json(y));
    j["irregular_targets"] = std::move(irregular);
    if (report.min_preimage_count) j["min_preimage_count"] = *report.min_preimage_count;
    if (report.max_preimage_count) j["max_preimage_count"] = *report.max_preimage_count;
    j["surjective_on_grid"] = report.surjective_on_grid;
    return j;
}

inline Json report_envelope(const std::string& command, const std::string& input_digest,
                            Json payload) {
    Json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["input_digest"] = input_digest;
    j["payload"] = std::move(payload);
    return j;
}

/// Stable pretty form used for all emitted reports.
inline std::string pretty_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace plcert
