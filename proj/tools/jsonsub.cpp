// jsonsub: decide the subschema relation between JSON Schema (draft-04)
// documents, plus canonicalize/simplify/validate helpers and a corpus
// harness for schema-evolution compatibility reports.

#include "jsonsub/canonical.hpp"
#include "jsonsub/corpus.hpp"
#include "jsonsub/error.hpp"
#include "jsonsub/simplify.hpp"
#include "jsonsub/subtype.hpp"
#include "jsonsub/validator.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

// exit codes: 0 holds/valid, 1 does not hold/invalid, 2 undecidable or
// unsupported feature, 3 input error
constexpr int exit_holds = 0;
constexpr int exit_does_not_hold = 1;
constexpr int exit_undecidable = 2;
constexpr int exit_input_error = 3;

jsonsub::check_options options_from_env() {
    jsonsub::check_options opts;
    if (const char* env = std::getenv("JSONSUB_POINT_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) opts.point_budget = v;
    }
    return opts;
}

jsonsub::check_direction parse_direction(const std::string& name) {
    if (name == "sub") return jsonsub::check_direction::sub;
    if (name == "super") return jsonsub::check_direction::super;
    if (name == "equiv") return jsonsub::check_direction::equiv;
    throw CLI::ValidationError("--direction must be sub, super, or equiv");
}

int report_verdict(const jsonsub::subtype_verdict& v, bool as_json) {
    using jsonsub::json_value;
    if (as_json) {
        json_value line = json_value::object({});
        switch (v.result()) {
        case jsonsub::subtype_verdict::kind::holds:
            line["verdict"] = "holds";
            break;
        case jsonsub::subtype_verdict::kind::does_not_hold:
            line["verdict"] = "does_not_hold";
            line["witness"] = v.witness();
            break;
        case jsonsub::subtype_verdict::kind::undecidable:
            line["verdict"] = "undecidable";
            line["feature_tag"] = jsonsub::to_string(v.reason());
            line["detail"] = v.witness();
            break;
        }
        std::cout << jsonsub::serialize_json(line) << "\n";
    } else {
        switch (v.result()) {
        case jsonsub::subtype_verdict::kind::holds:
            std::cout << "holds\n";
            break;
        case jsonsub::subtype_verdict::kind::does_not_hold:
            std::cout << "does not hold: " << v.witness() << "\n";
            break;
        case jsonsub::subtype_verdict::kind::undecidable:
            std::cout << "undecidable [" << jsonsub::to_string(v.reason()) << "] "
                      << v.witness() << "\n";
            break;
        }
    }
    switch (v.result()) {
    case jsonsub::subtype_verdict::kind::holds: return exit_holds;
    case jsonsub::subtype_verdict::kind::does_not_hold: return exit_does_not_hold;
    default: return exit_undecidable;
    }
}

int run_check(const std::string& lhs, const std::string& rhs, const std::string& direction,
              bool as_json) {
    jsonsub::schema a = jsonsub::parse_json_file(lhs);
    jsonsub::schema b = jsonsub::parse_json_file(rhs);
    jsonsub::subtype_verdict v =
        jsonsub::check(a, b, parse_direction(direction), options_from_env());
    return report_verdict(v, as_json);
}

int run_transform(const std::string& path, bool also_simplify) {
    jsonsub::schema s = jsonsub::parse_json_file(path);
    jsonsub::validation_report report = jsonsub::validate_meta(s);
    if (!report.empty()) {
        for (const auto& v : report)
            std::cerr << "meta-schema violation at " << v.path << ": " << v.message << "\n";
        return exit_input_error;
    }
    jsonsub::schema out = jsonsub::canonicalize(jsonsub::resolve_refs(s));
    if (also_simplify) out = jsonsub::simplify(out);
    std::cout << jsonsub::serialize_json(out, true) << "\n";
    return exit_holds;
}

int run_validate(const std::string& doc_path, const std::string& schema_path, bool as_json) {
    jsonsub::json_value doc = jsonsub::parse_json_file(doc_path);
    jsonsub::schema s = jsonsub::parse_json_file(schema_path);
    jsonsub::validation_report report = jsonsub::validate_meta(s);
    if (!report.empty()) {
        for (const auto& v : report)
            std::cerr << "meta-schema violation at " << v.path << ": " << v.message << "\n";
        return exit_input_error;
    }
    bool ok = jsonsub::validate(doc, jsonsub::resolve_refs(s));
    if (as_json)
        std::cout << jsonsub::serialize_json(
                         jsonsub::json_value::object({{"valid", jsonsub::json_value(ok)}}))
                  << "\n";
    else
        std::cout << (ok ? "valid" : "invalid") << "\n";
    return ok ? exit_holds : exit_does_not_hold;
}

int run_corpus_cmd(const std::string& old_dir, const std::string& new_dir,
                   const std::string& out_path, const std::string& direction,
                   double time_budget, std::size_t jobs) {
    jsonsub::corpus_options opts;
    opts.direction = parse_direction(direction);
    opts.time_budget_seconds = time_budget;
    opts.jobs = jobs;
    opts.check = options_from_env();
    jsonsub::corpus_report report = jsonsub::run_corpus(old_dir, new_dir, opts);
    if (out_path.empty() || out_path == "-") {
        jsonsub::write_report(report, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot open output file: " << out_path << "\n";
            return exit_input_error;
        }
        jsonsub::write_report(report, out);
    }
    return exit_holds;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"JSON Schema (draft-04) subschema checker"};
    app.require_subcommand(1);

    std::string lhs, rhs, direction = "sub";
    bool as_json = false;

    auto* cmd_check = app.add_subcommand("check", "decide lhs <: rhs (or super/equiv)");
    cmd_check->add_option("lhs", lhs, "left schema file")->required();
    cmd_check->add_option("rhs", rhs, "right schema file")->required();
    cmd_check->add_option("--direction", direction, "sub | super | equiv")
        ->default_val("sub");
    cmd_check->add_flag("--json", as_json, "machine-parsable verdict line");

    auto* cmd_equiv = app.add_subcommand("equiv", "decide lhs == rhs");
    cmd_equiv->add_option("lhs", lhs, "left schema file")->required();
    cmd_equiv->add_option("rhs", rhs, "right schema file")->required();
    cmd_equiv->add_flag("--json", as_json, "machine-parsable verdict line");

    std::string input;
    auto* cmd_canon = app.add_subcommand("canonicalize", "emit the canonical form");
    cmd_canon->add_option("file", input, "schema file")->required();
    auto* cmd_simplify = app.add_subcommand("simplify", "emit the simplified form");
    cmd_simplify->add_option("file", input, "schema file")->required();

    std::string doc_path, schema_path;
    auto* cmd_validate = app.add_subcommand("validate", "validate a document against a schema");
    cmd_validate->add_option("document", doc_path, "JSON document file")->required();
    cmd_validate->add_option("schema", schema_path, "schema file")->required();
    cmd_validate->add_flag("--json", as_json, "machine-parsable verdict line");

    std::string old_dir, new_dir, out_path;
    double time_budget = 0;
    std::size_t jobs = 1;
    auto* cmd_corpus =
        app.add_subcommand("corpus", "compatibility report over two schema directories");
    cmd_corpus->add_option("old-dir", old_dir, "directory of older schema versions")->required();
    cmd_corpus->add_option("new-dir", new_dir, "directory of newer schema versions")->required();
    cmd_corpus->add_option("--out", out_path, "report path (JSON Lines); '-' for stdout");
    cmd_corpus->add_option("--direction", direction, "sub | super | equiv")->default_val("sub");
    cmd_corpus->add_option("--time-budget", time_budget, "per-pair wall-clock budget in seconds");
    cmd_corpus->add_option("--jobs", jobs, "parallel workers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_check->parsed()) return run_check(lhs, rhs, direction, as_json);
        if (cmd_equiv->parsed()) return run_check(lhs, rhs, "equiv", as_json);
        if (cmd_canon->parsed()) return run_transform(input, false);
        if (cmd_simplify->parsed()) return run_transform(input, true);
        if (cmd_validate->parsed()) return run_validate(doc_path, schema_path, as_json);
        if (cmd_corpus->parsed())
            return run_corpus_cmd(old_dir, new_dir, out_path, direction, time_budget, jobs);
    } catch (const jsonsub::error& e) {
        switch (e.code()) {
        case jsonsub::errc::unsupported_pattern:
        case jsonsub::errc::recursive_ref:
        case jsonsub::errc::capacity:
            std::cerr << "unsupported: " << e.what() << "\n";
            return exit_undecidable;
        default:
            std::cerr << "error: " << e.what() << "\n";
            return exit_input_error;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_input_error;
}
