#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randkit/report.hpp"
#include "randkit/sources.hpp"

namespace randkit {

enum class PipelinePreset { coin_toss, bell_synthetic, nogo_demo };

std::string to_string(PipelinePreset preset);

/// Fully resolved run description. Parsed from a JSON config file; every
/// field has a recorded value after parsing so the canonical dump (and
/// therefore the report's config_hash) pins the whole run.
struct PipelineConfig {
    PipelinePreset preset = PipelinePreset::coin_toss;
    std::optional<Key256> seed; ///< master seed; required except for pure os_entropy runs

    // coin-toss and nogo-demo
    std::size_t trials = 100;
    std::size_t n = 20000;
    std::vector<double> p_values = {0.4851, 0.5, 0.4893};

    // nogo-demo
    SourceKind source1 = SourceKind::os_entropy;
    SourceKind source2 = SourceKind::chacha20;

    // bell-synthetic
    std::size_t runs = 5;
    std::size_t pairs = 20000;
    double rate_hz = 50000.0;
    double jitter_sigma_ns = 100.0;
    double efficiency_a = 0.95;
    double efficiency_b = 0.95;
    std::int64_t window_ns = 1000;
    std::int64_t offset_ns = 0;
    std::size_t min_coincidences = 2000;

    std::string out_json = "report.json";
    std::optional<std::string> out_csv;

    /// Canonical sorted-key dump with all defaults applied.
    std::string canonical_text() const;
};

/// Parses and validates a JSON config document. Unknown keys, missing
/// seeds, malformed hex, and out-of-range values are all hard errors.
PipelineConfig parse_pipeline_config(const std::string& json_text);

/// Executes the configured run. Generation and measurement fan out over
/// a worker pool; rows are ordered by trial index regardless of
/// scheduling, so seeded configs reproduce byte-identical reports.
ReportDocument run_pipeline(const PipelineConfig& config);

/// Writes the JSON report (and the preset's CSV mirror when configured)
/// under out_dir. Returns the paths written.
std::vector<std::string> write_pipeline_outputs(const ReportDocument& doc,
                                                const PipelineConfig& config,
                                                const std::string& out_dir);

} // namespace randkit
