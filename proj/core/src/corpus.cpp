#include "jsonsub/corpus.hpp"
#include "jsonsub/error.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace jsonsub {

const char* to_string(check_direction d) {
    switch (d) {
    case check_direction::sub: return "sub";
    case check_direction::super: return "super";
    case check_direction::equiv: return "equiv";
    }
    return "sub";
}

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

pair_record check_pair(const std::filesystem::path& lhs, const std::filesystem::path& rhs,
                       const corpus_options& options) {
    pair_record rec;
    rec.lhs = lhs.string();
    rec.rhs = rhs.string();
    rec.direction = to_string(options.direction);
    auto begin = std::chrono::steady_clock::now();
    try {
        schema a = parse_json_file(lhs.string());
        schema b = parse_json_file(rhs.string());
        check_options opts = options.check;
        if (options.time_budget_seconds > 0)
            opts.deadline = begin + std::chrono::microseconds(static_cast<long long>(
                                        options.time_budget_seconds * 1e6));
        subtype_verdict v = check(a, b, options.direction, opts);
        switch (v.result()) {
        case subtype_verdict::kind::holds:
            rec.verdict = "holds";
            break;
        case subtype_verdict::kind::does_not_hold:
            rec.verdict = "does_not_hold";
            rec.detail = v.witness();
            break;
        case subtype_verdict::kind::undecidable:
            rec.verdict = "undecidable";
            rec.feature_tag = to_string(v.reason());
            rec.detail = v.witness();
            break;
        }
    } catch (const error& e) {
        rec.verdict = "input_error";
        rec.feature_tag = to_string(e.code());
        rec.detail = e.what();
    } catch (const std::exception& e) {
        rec.verdict = "input_error";
        rec.feature_tag = "internal";
        rec.detail = e.what();
    }
    auto end = std::chrono::steady_clock::now();
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(end - begin).count();
    return rec;
}

} // namespace

corpus_report run_corpus(const std::string& old_dir, const std::string& new_dir,
                         const corpus_options& options) {
    namespace fs = std::filesystem;
    corpus_report report;

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(old_dir))
        if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());

    std::vector<std::pair<fs::path, fs::path>> pairs;
    for (const auto& name : names) {
        fs::path lhs = fs::path(old_dir) / name;
        fs::path rhs = fs::path(new_dir) / name;
        if (!fs::exists(rhs)) {
            ++report.files_unpaired;
            continue;
        }
        if (slurp(lhs) == slurp(rhs)) {
            ++report.pairs_skipped_equal;
            continue;
        }
        pairs.emplace_back(std::move(lhs), std::move(rhs));
    }
    for (const auto& entry : fs::directory_iterator(new_dir))
        if (entry.is_regular_file()
            && !fs::exists(fs::path(old_dir) / entry.path().filename()))
            ++report.files_unpaired;

    report.records.resize(pairs.size());
    std::size_t jobs = std::max<std::size_t>(1, options.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            report.records[i] = check_pair(pairs[i].first, pairs[i].second, options);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= pairs.size()) break;
                    report.records[i] = check_pair(pairs[i].first, pairs[i].second, options);
                }
            });
        }
        for (auto& t : workers) t.join();
    }

    report.pairs_processed = report.records.size();
    for (const auto& rec : report.records) {
        ++report.verdict_counts[rec.verdict];
        if (!rec.feature_tag.empty()) ++report.failure_counts[rec.feature_tag];
    }
    return report;
}

void write_report(const corpus_report& report, std::ostream& out) {
    for (const auto& rec : report.records) {
        json_value line = json_value::object({
            {"lhs", rec.lhs},
            {"rhs", rec.rhs},
            {"direction", rec.direction},
            {"verdict", rec.verdict},
        });
        if (!rec.feature_tag.empty()) line["feature_tag"] = rec.feature_tag;
        if (!rec.detail.empty()) line["detail"] = rec.detail;
        line["elapsed_ms"] = json_value(parse_decimal(
            [&] {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.3f", rec.elapsed_ms);
                return std::string(buf);
            }()));
        out << serialize_json(line) << "\n";
    }
    json_value counts(json_object{});
    for (const auto& [k, v] : report.verdict_counts)
        counts[k] = json_value(static_cast<long long>(v));
    json_value failures(json_object{});
    for (const auto& [k, v] : report.failure_counts)
        failures[k] = json_value(static_cast<long long>(v));
    json_value footer = json_value::object({
        {"aggregate",
         json_value::object({
             {"pairs_processed", json_value(static_cast<long long>(report.pairs_processed))},
             {"pairs_skipped_equal",
              json_value(static_cast<long long>(report.pairs_skipped_equal))},
             {"files_unpaired", json_value(static_cast<long long>(report.files_unpaired))},
             {"verdicts", counts},
             {"failure_tags", failures},
         })},
    });
    out << serialize_json(footer) << "\n";
}

} // namespace jsonsub
