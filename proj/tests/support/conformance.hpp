#pragma once

// Runner for test-suite files shaped as
// [{description, schema, tests: [{description, data, valid}]}].

#include "jsonsub/error.hpp"
#include "jsonsub/schema.hpp"
#include "jsonsub/validator.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace conformance {

struct result {
    int total = 0;
    int passed = 0;
    int failed = 0;
    int skipped = 0;
    std::vector<std::string> failures;
    std::map<std::string, int> skip_reasons;
};

inline result run_directory(const std::string& dir) {
    namespace fs = std::filesystem;
    result out;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) {
        jsonsub::json_value groups = jsonsub::parse_json_file(path.string());
        for (const auto& group : groups.as_array()) {
            const jsonsub::schema& raw = group.at("schema");
            const auto& tests = group.at("tests").as_array();
            out.total += static_cast<int>(tests.size());
            jsonsub::schema resolved;
            try {
                resolved = jsonsub::resolve_refs(raw);
            } catch (const jsonsub::error& e) {
                out.skipped += static_cast<int>(tests.size());
                out.skip_reasons[jsonsub::to_string(e.code())] +=
                    static_cast<int>(tests.size());
                continue;
            }
            for (const auto& test : tests) {
                bool expected = test.at("valid").as_boolean();
                bool actual;
                try {
                    actual = jsonsub::validate(test.at("data"), resolved);
                } catch (const jsonsub::error& e) {
                    ++out.skipped;
                    ++out.skip_reasons[jsonsub::to_string(e.code())];
                    continue;
                }
                if (actual == expected) {
                    ++out.passed;
                } else {
                    ++out.failed;
                    out.failures.push_back(
                        path.filename().string() + ": " + group.at("description").as_string()
                        + " / " + test.at("description").as_string());
                }
            }
        }
    }
    return out;
}

} // namespace conformance
