// experiments.hpp
// Experiment runner: a validated flat run configuration, dispatch to the
// analysis modules, and deterministic report files (CSV or JSON data plus
// JSON metadata). Identical (config, seed, version) yields identical bytes.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "urlab/report_io.hpp"

namespace urlab::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
    std::string experiment; // verify | zero-scan | mt | mt-limits | zeno | bw
    double hbar = 1.0;
    std::uint64_t seed = 0;
    std::vector<long> dims = {2, 3, 4, 5, 6, 7, 8};
    long trials = 1000;
    std::string format = "csv"; // csv | json
    std::string output_dir = ".";
    nlohmann::json params = nlohmann::json::object();
};

// Throws ConfigParse for unreadable or malformed JSON.
RunConfig load_config(const std::string& path);

// Throws ConfigValidate for unknown keys, bad types or out-of-range values.
RunConfig config_from_json(const nlohmann::json& j);

// The effective configuration as JSON (defaults filled in), echoed into the
// metadata file.
nlohmann::json config_to_json(const RunConfig& config);

struct RunOutcome {
    int exit_code; // 0 all assertions passed, 1 otherwise
    std::vector<std::string> failures;
    std::string data_path;
    std::string metadata_path;
    std::string failures_path; // empty when every assertion passed
};

RunOutcome run(const RunConfig& config);

// Table builders behind each experiment; exposed for tests. Assertion
// violations are appended to `failures` rather than thrown.
Table run_verify(const RunConfig& config, std::vector<std::string>& failures);
Table run_zero_scan(const RunConfig& config, std::vector<std::string>& failures);
Table run_mt(const RunConfig& config, std::vector<std::string>& failures);
Table run_mt_limits(const RunConfig& config, std::vector<std::string>& failures);
Table run_zeno(const RunConfig& config, std::vector<std::string>& failures);
Table run_bw(const RunConfig& config, std::vector<std::string>& failures);

} // namespace urlab::cli
