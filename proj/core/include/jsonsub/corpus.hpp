#pragma once

#include "jsonsub/subtype.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace jsonsub {

struct corpus_options {
    check_direction direction = check_direction::sub;
    double time_budget_seconds = 0; // 0 = unlimited
    std::size_t jobs = 1;
    check_options check;
};

struct pair_record {
    std::string lhs;
    std::string rhs;
    std::string direction;
    std::string verdict;     // holds | does_not_hold | undecidable | input_error
    std::string feature_tag; // Table-5 style tag when undecidable
    std::string detail;
    double elapsed_ms = 0;
};

struct corpus_report {
    std::vector<pair_record> records;
    std::size_t pairs_processed = 0;
    std::size_t pairs_skipped_equal = 0;
    std::size_t files_unpaired = 0;
    std::map<std::string, std::size_t> verdict_counts;
    std::map<std::string, std::size_t> failure_counts;
};

// Pairs same-named schema files from two directory snapshots, skips
// byte-identical pairs, and checks each remaining pair. Per-pair failures
// are recorded, never fatal. Deterministic apart from the elapsed fields.
corpus_report run_corpus(const std::string& old_dir, const std::string& new_dir,
                         const corpus_options& options);

// JSON Lines, one record per pair, then one aggregate footer object.
void write_report(const corpus_report& report, std::ostream& out);

const char* to_string(check_direction d);

} // namespace jsonsub
