#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "plcert/plcert.hpp"

// plcert: exact analysis of piecewise affine maps R^n -> R^n.
//
// Exit codes are a stable contract:
//   0  success (for `certify`: certified surjective)
//   1  validation findings in the input function
//   2  unreadable input: JSON/rational parse error, bad flags, bad gen spec
//   3  `certify`: not certified (no verdict either way)
//   4  `certify`: certified not surjective
//   5  analysis errors (e.g. degree of a map singular at infinity)

namespace {

using namespace plcert;

int write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    out << text;
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 5;
    }
    return 0;
}

struct Loaded {
    PLFunction function;
    std::string digest;
    ValidationReport report;
};

Loaded load_input(const std::string& path) {
    PLFunction f = load_function(path);
    std::string digest = function_digest(f);
    ValidationReport report = f.validate();
    return Loaded{std::move(f), std::move(digest), std::move(report)};
}

/// Shared "validation failures propagate" policy: commands that need a valid
/// function emit the validation report and exit 1 when findings exist.
int report_invalid(const Loaded& in, const std::string& command, const std::string& out_path) {
    write_text(pretty_json(report_envelope(command, in.digest, validation_report_json(in.report))),
               out_path);
    return 1;
}

/// Accepts either a JSON array ("[\"-1/2\", 3]") or a bare rational ("4").
RVector parse_vector_arg(const std::string& text, const std::string& what) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error&) {
        j = Json(text);
    }
    if (!j.is_array()) j = Json::array({j});
    return detail::vector_field(j, what);
}

std::pair<Rational, Rational> parse_box_arg(const std::string& text) {
    const RVector v = parse_vector_arg(text, "--box");
    if (v.dim() != 2) throw ParseError("--box: expected two entries [lo, hi]");
    if (!(v[0] < v[1])) throw ParseError("--box: lower bound must be below upper bound");
    return {v[0], v[1]};
}

int cmd_validate(const std::string& input, const std::string& out_path) {
    const Loaded in = load_input(input);
    const int rc = in.report.ok ? 0 : 1;
    const int wrc = write_text(
        pretty_json(report_envelope("validate", in.digest, validation_report_json(in.report))),
        out_path);
    return wrc != 0 ? wrc : rc;
}

int cmd_certify(const std::string& input, unsigned trials, unsigned long long seed,
                const std::string& out_path) {
    const Loaded in = load_input(input);
    if (!in.report.ok) return report_invalid(in, "certify", out_path);
    const SurjectivityCertificate cert = certify_surjective(in.function, trials, seed);
    const int wrc =
        write_text(pretty_json(report_envelope("certify", in.digest, certificate_json(cert))),
                   out_path);
    if (wrc != 0) return wrc;
    switch (cert.verdict) {
        case SurjectivityVerdict::CertifiedSurjective: return 0;
        case SurjectivityVerdict::NotCertified: return 3;
        case SurjectivityVerdict::CertifiedNotSurjective: return 4;
    }
    return 5;
}

int cmd_degree(const std::string& input, unsigned trials, unsigned long long seed,
               const std::string& out_path) {
    const Loaded in = load_input(input);
    if (!in.report.ok) return report_invalid(in, "degree", out_path);
    const DegreeEvidence ev = global_degree(in.function, trials, seed);
    return write_text(pretty_json(report_envelope("degree", in.digest, degree_evidence_json(ev))),
                      out_path);
}

int cmd_preimages(const std::string& input, const std::string& target_text,
                  const std::string& out_path) {
    const Loaded in = load_input(input);
    if (!in.report.ok) return report_invalid(in, "preimages", out_path);
    const RVector target = parse_vector_arg(target_text, "--target");
    if (target.dim() != in.function.n())
        throw ParseError("--target: expected " + std::to_string(in.function.n()) + " coordinates");
    const PreimageSet pre = preimages(in.function, target);
    return write_text(pretty_json(report_envelope("preimages", in.digest, preimage_set_json(pre))),
                      out_path);
}

int cmd_oracle(const std::string& input, const std::string& box_text,
               const std::string& resolution_text, const std::string& out_path) {
    const Loaded in = load_input(input);
    if (!in.report.ok) return report_invalid(in, "oracle", out_path);
    const auto [lo, hi] = parse_box_arg(box_text);
    const Rational resolution = parse_rational(resolution_text);
    const OracleReport rep = grid_surjectivity_oracle(in.function, lo, hi, resolution);
    return write_text(pretty_json(report_envelope("oracle", in.digest, oracle_report_json(rep))),
                      out_path);
}

int cmd_gen(const std::string& kind, const std::string& spec_path, const std::string& out_path) {
    try {
        PLFunction f = [&] {
            if (kind == "angle-doubling") return gen_fan_2d(angle_doubling_fan_spec());
            if (spec_path.empty())
                throw ParseError("gen: --spec is required for kind '" + kind + "'");
            const Json spec = load_json_file(spec_path);
            if (kind == "1d") return gen_1d(parse_gen_spec_1d(spec));
            return gen_fan_2d(parse_fan_spec_2d(spec));
        }();
        return write_text(pretty_json(function_to_json(f)), out_path);
    } catch (const PreconditionError& e) {
        // A spec that cannot produce a valid function is an input error.
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_render(const std::string& input, const std::string& box_text, const std::string& out_path) {
    const Loaded in = load_input(input);
    if (!in.report.ok) return report_invalid(in, "render", "");  // report goes to stdout
    const auto [lo, hi] = parse_box_arg(box_text);
    return write_text(render_svg(in.function, lo, hi), out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "exact analysis of piecewise affine maps R^n -> R^n: subdivision validation,\n"
        "preimages, mapping degree, and surjectivity certificates.\n"
        "Set PLCERT_THREADS to cap analysis worker threads."};
    app.require_subcommand(1);

    std::string input, out_path, target_text, box_text, resolution_text, kind, spec_path;
    unsigned trials = 50;
    unsigned long long seed = 0;

    CLI::App* validate = app.add_subcommand("validate", "check the subdivision and continuity of a function file");
    validate->add_option("input", input, "function JSON file")->required();
    validate->add_option("--out", out_path, "write the report here instead of stdout");

    CLI::App* certify = app.add_subcommand("certify", "decide surjectivity from the orientation at infinity");
    certify->add_option("input", input, "function JSON file")->required();
    certify->add_option("--trials", trials, "regular values to sample as corroborating evidence");
    certify->add_option("--seed", seed, "sampling seed");
    certify->add_option("--out", out_path, "write the report here instead of stdout");

    CLI::App* degree = app.add_subcommand("degree", "compute the mapping degree with sampled evidence");
    degree->add_option("input", input, "function JSON file")->required();
    degree->add_option("--trials", trials, "regular values to sample");
    degree->add_option("--seed", seed, "sampling seed");
    degree->add_option("--out", out_path, "write the report here instead of stdout");

    CLI::App* preimages = app.add_subcommand("preimages", "enumerate the exact preimage of a target point");
    preimages->add_option("input", input, "function JSON file")->required();
    preimages->add_option("--target", target_text, "target point, e.g. \"4\" or \"[\\\"1/2\\\", -1]\"")->required();
    preimages->add_option("--out", out_path, "write the report here instead of stdout");

    CLI::App* oracle = app.add_subcommand("oracle", "exhaustively test coverage of a grid of targets");
    oracle->add_option("input", input, "function JSON file")->required();
    oracle->add_option("--box", box_text, "target box, e.g. \"[-2,2]\"")->required();
    oracle->add_option("--resolution", resolution_text, "grid spacing, e.g. \"1/2\"")->required();
    oracle->add_option("--out", out_path, "write the report here instead of stdout");

    CLI::App* gen = app.add_subcommand("gen", "generate a function file from a small spec");
    gen->add_option("--kind", kind, "1d | fan | angle-doubling")
        ->required()
        ->check(CLI::IsMember({"1d", "fan", "angle-doubling"}));
    gen->add_option("--spec", spec_path, "generator spec JSON file (not needed for angle-doubling)");
    gen->add_option("--out", out_path, "write the function here instead of stdout");

    CLI::App* render = app.add_subcommand("render", "draw a planar subdivision as SVG, colored by determinant sign");
    render->add_option("input", input, "function JSON file")->required();
    render->add_option("--box", box_text, "clipping box, e.g. \"[-2,2]\"")->required();
    render->add_option("--out", out_path, "SVG output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits cleanly; usage errors are input errors
    }

    try {
        if (validate->parsed()) return cmd_validate(input, out_path);
        if (certify->parsed()) return cmd_certify(input, trials, seed, out_path);
        if (degree->parsed()) return cmd_degree(input, trials, seed, out_path);
        if (preimages->parsed()) return cmd_preimages(input, target_text, out_path);
        if (oracle->parsed()) return cmd_oracle(input, box_text, resolution_text, out_path);
        if (gen->parsed()) return cmd_gen(kind, spec_path, out_path);
        if (render->parsed()) return cmd_render(input, box_text, out_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
    return 5;
}
