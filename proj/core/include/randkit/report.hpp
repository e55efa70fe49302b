#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "randkit/bell.hpp"
#include "randkit/measures.hpp"
#include "randkit/sources.hpp"
#include "randkit/stats.hpp"

namespace randkit {

/// Where a row's data came from: a declarative source spec for generated
/// strings, or a file path plus content hash for ingested ones.
struct Provenance {
    std::optional<SourceSpec> source;
    std::optional<std::uint64_t> trial;
    std::optional<std::string> file;
    std::optional<std::string> file_hash;
};

Provenance provenance_from_source(const SourceSpec& spec, std::uint64_t trial);
Provenance provenance_from_file(const std::string& path);

struct MeasureRow {
    Provenance provenance;
    MeasureReport report;
};

/// One coincidence run, shaped like the per-dataset numerics table:
/// identity, pair count, CHSH S, and the measure suite for the Alice,
/// Bob, and interleaved strings.
struct BellRow {
    std::string name;
    Provenance provenance;
    std::size_t n_pairs = 0;
    double s = 0.0;
    bool low_n = false;
    MeasureReport alice;
    MeasureReport bob;
    MeasureReport mixed;
};

struct WelchRow {
    std::string measure;
    WelchResult result;
};

struct PearsonRow {
    std::string label;
    std::size_t stratum_lo = 0;
    std::size_t stratum_hi = 0;
    PearsonResult result;
};

struct AdvantageRow {
    std::string measure;
    std::string rule;
    double threshold = 0.0;
    SourceSpec source1;
    SourceSpec source2;
    AdvantageEstimate estimate;
};

/// Batch-level frequency summary (mean and spread over repeated draws).
struct FrequencySummaryRow {
    std::string label;
    Provenance provenance;
    std::size_t trials = 0;
    std::size_t n = 0;
    double mean_frequency = 0.0;
    double std_frequency = 0.0;
    double mean_k = 0.0;
    double mean_kappa = 0.0;
    double mean_b = 0.0;
};

using ReportRow =
    std::variant<MeasureRow, BellRow, WelchRow, PearsonRow, AdvantageRow, FrequencySummaryRow>;

/// Canonical output document. The JSON rendering is deterministic
/// (sorted keys, fixed float format) so identical runs produce identical
/// bytes; CSV mirrors are lossy and meant for plotting.
struct ReportDocument {
    std::string tool_version = "0.1.0";
    std::string config_text; ///< canonical config dump; hashed into config_hash
    std::vector<ReportRow> rows;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

std::string render_json(const ReportDocument& doc);
std::string render_measure_csv(const ReportDocument& doc);
std::string render_bell_csv(const ReportDocument& doc);
std::string render_pearson_csv(const ReportDocument& doc);
std::string render_advantage_csv(const ReportDocument& doc);

void write_text_file(const std::string& path, const std::string& content);
std::string hash_file(const std::string& path);

} // namespace randkit
