#include "randkit/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "randkit/measures.hpp"
#include "randkit/parallel.hpp"

namespace randkit {

namespace {

using nlohmann::json;

// Sub-seed namespaces: per-p-value streams, nogo sources, and trial draws
// must never reuse keystream slices of the master key.
constexpr std::uint64_t tag_coin_base = 1ull << 40;
constexpr std::uint64_t tag_nogo_base = 1ull << 41;

PipelinePreset preset_from_string(const std::string& name) {
    if (name == "coin-toss") return PipelinePreset::coin_toss;
    if (name == "bell-synthetic") return PipelinePreset::bell_synthetic;
    if (name == "nogo-demo") return PipelinePreset::nogo_demo;
    throw std::invalid_argument("config: unknown preset '" + name + "'");
}

bool kind_needs_seed(SourceKind kind) { return kind != SourceKind::os_entropy; }

void require_bit_source(SourceKind kind, const char* field) {
    if (kind == SourceKind::bell_quantum || kind == SourceKind::bell_lhv)
        throw std::invalid_argument(std::string("config: ") + field +
                                    " must be a bit source, not an event generator");
}

} // namespace

std::string to_string(PipelinePreset preset) {
    switch (preset) {
    case PipelinePreset::coin_toss: return "coin-toss";
    case PipelinePreset::bell_synthetic: return "bell-synthetic";
    case PipelinePreset::nogo_demo: return "nogo-demo";
    }
    throw std::invalid_argument("unknown preset");
}

std::string PipelineConfig::canonical_text() const {
    json j;
    j["preset"] = to_string(preset);
    j["seed"] = seed ? json(key_to_hex(*seed)) : json(nullptr);
    j["trials"] = trials;
    j["n"] = n;
    j["p_values"] = p_values;
    j["source1"] = randkit::to_string(source1);
    j["source2"] = randkit::to_string(source2);
    j["runs"] = runs;
    j["pairs"] = pairs;
    j["rate_hz"] = rate_hz;
    j["jitter_sigma_ns"] = jitter_sigma_ns;
    j["efficiency_a"] = efficiency_a;
    j["efficiency_b"] = efficiency_b;
    j["window_ns"] = window_ns;
    j["offset_ns"] = offset_ns;
    j["min_coincidences"] = min_coincidences;
    j["out_json"] = out_json;
    j["out_csv"] = out_csv ? json(*out_csv) : json(nullptr);
    return j.dump();
}

PipelineConfig parse_pipeline_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    static const std::set<std::string> known = {
        "preset",        "seed",        "trials",          "n",
        "p_values",      "source1",     "source2",         "runs",
        "pairs",         "rate_hz",     "jitter_sigma_ns", "efficiency",
        "efficiency_a",  "efficiency_b", "window_ns",      "offset_ns",
        "min_coincidences", "out_json", "out_csv"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");

    PipelineConfig cfg;
    try {
        if (!j.contains("preset")) throw std::invalid_argument("config: missing 'preset'");
        cfg.preset = preset_from_string(j.at("preset").get<std::string>());
        if (j.contains("seed")) cfg.seed = parse_key_hex(j.at("seed").get<std::string>());
        if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
        if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
        if (j.contains("p_values")) cfg.p_values = j.at("p_values").get<std::vector<double>>();
        if (j.contains("source1"))
            cfg.source1 = source_kind_from_string(j.at("source1").get<std::string>());
        if (j.contains("source2"))
            cfg.source2 = source_kind_from_string(j.at("source2").get<std::string>());
        if (j.contains("runs")) cfg.runs = j.at("runs").get<std::size_t>();
        if (j.contains("pairs")) cfg.pairs = j.at("pairs").get<std::size_t>();
        if (j.contains("rate_hz")) cfg.rate_hz = j.at("rate_hz").get<double>();
        if (j.contains("jitter_sigma_ns"))
            cfg.jitter_sigma_ns = j.at("jitter_sigma_ns").get<double>();
        if (j.contains("efficiency")) {
            cfg.efficiency_a = j.at("efficiency").get<double>();
            cfg.efficiency_b = cfg.efficiency_a;
        }
        if (j.contains("efficiency_a")) cfg.efficiency_a = j.at("efficiency_a").get<double>();
        if (j.contains("efficiency_b")) cfg.efficiency_b = j.at("efficiency_b").get<double>();
        if (j.contains("window_ns")) cfg.window_ns = j.at("window_ns").get<std::int64_t>();
        if (j.contains("offset_ns")) cfg.offset_ns = j.at("offset_ns").get<std::int64_t>();
        if (j.contains("min_coincidences"))
            cfg.min_coincidences = j.at("min_coincidences").get<std::size_t>();
        if (j.contains("out_json")) cfg.out_json = j.at("out_json").get<std::string>();
        if (j.contains("out_csv")) cfg.out_csv = j.at("out_csv").get<std::string>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }

    if (cfg.n < 4) throw std::invalid_argument("config: n must be at least 4");
    switch (cfg.preset) {
    case PipelinePreset::coin_toss:
        if (!cfg.seed) throw std::invalid_argument("config: coin-toss requires a seed");
        if (cfg.trials < 2) throw std::invalid_argument("config: coin-toss needs trials >= 2");
        if (cfg.p_values.empty()) throw std::invalid_argument("config: p_values is empty");
        for (double p : cfg.p_values)
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("config: p_values entry outside [0, 1]");
        break;
    case PipelinePreset::bell_synthetic:
        if (!cfg.seed) throw std::invalid_argument("config: bell-synthetic requires a seed");
        if (cfg.runs == 0) throw std::invalid_argument("config: runs must be positive");
        if (cfg.pairs < 100)
            throw std::invalid_argument("config: pairs too small for a coincidence run");
        if (cfg.window_ns <= 0) throw std::invalid_argument("config: window_ns must be positive");
        break;
    case PipelinePreset::nogo_demo:
        require_bit_source(cfg.source1, "source1");
        require_bit_source(cfg.source2, "source2");
        if (cfg.trials < 30) throw std::invalid_argument("config: nogo-demo needs trials >= 30");
        if ((kind_needs_seed(cfg.source1) || kind_needs_seed(cfg.source2)) && !cfg.seed)
            throw std::invalid_argument("config: seeded sources require a master seed");
        break;
    }
    return cfg;
}

namespace {

void run_coin_toss(const PipelineConfig& config, ReportDocument& doc) {
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
        SourceSpec spec;
        spec.kind = SourceKind::mimic_2byte;
        spec.seed = derive_trial_key(*config.seed, tag_coin_base + pi);
        spec.p = config.p_values[pi];
        spec.n = config.n;

        std::vector<MeasureReport> reports(config.trials);
        parallel_for(config.trials, [&](std::size_t i) {
            reports[i] = measure_suite(draw_bits(spec, i), spec.label());
        });

        std::vector<double> freq, k, kappa, b;
        freq.reserve(config.trials);
        for (std::size_t i = 0; i < config.trials; ++i) {
            doc.rows.push_back(MeasureRow{provenance_from_source(spec, i), reports[i]});
            freq.push_back(reports[i].meta.relative_frequency);
            k.push_back(reports[i].k);
            kappa.push_back(reports[i].kappa);
            b.push_back(reports[i].b);
        }

        FrequencySummaryRow summary;
        summary.label = spec.label();
        summary.provenance.source = spec;
        summary.trials = config.trials;
        summary.n = config.n;
        summary.mean_frequency = mean(freq);
        summary.std_frequency = std::sqrt(sample_variance(freq));
        summary.mean_k = mean(k);
        summary.mean_kappa = mean(kappa);
        summary.mean_b = mean(b);
        doc.rows.push_back(std::move(summary));
    }
}

void run_bell_synthetic(const PipelineConfig& config, ReportDocument& doc) {
    TimingParams timing;
    timing.rate_hz = config.rate_hz;
    timing.jitter_sigma_ns = config.jitter_sigma_ns;
    timing.efficiency_a = config.efficiency_a;
    timing.efficiency_b = config.efficiency_b;
    const CorrelationTable correlations = singlet_correlations();

    std::vector<BellRow> rows(config.runs);
    parallel_for(config.runs, [&](std::size_t run) {
        const Key256 key = derive_trial_key(*config.seed, run);
        const EventPairStreams events =
            bell_quantum_events(key, config.pairs, correlations, timing);
        const std::vector<CoincidencePair> pairs =
            match_coincidences(events.alice, events.bob, config.window_ns, config.offset_ns);
        const BellSummary summary = bell_summary(pairs, config.min_coincidences);
        const ExtractedStrings strings = extract_strings(pairs);

        BellRow row;
        row.name = "singlet-run-" + std::to_string(run);
        SourceSpec spec;
        spec.kind = SourceKind::bell_quantum;
        spec.seed = config.seed;
        spec.n = config.pairs;
        row.provenance = provenance_from_source(spec, run);
        row.n_pairs = pairs.size();
        row.s = summary.s;
        row.low_n = summary.low_n;
        row.alice = measure_suite(strings.alice, row.name + "/alice");
        row.bob = measure_suite(strings.bob, row.name + "/bob");
        row.mixed = measure_suite(strings.mixed, row.name + "/mixed");
        rows[run] = std::move(row);
    });
    for (BellRow& row : rows) doc.rows.push_back(std::move(row));
}

void run_nogo_demo(const PipelineConfig& config, ReportDocument& doc) {
    auto make_spec = [&](SourceKind kind, std::uint64_t tag) {
        SourceSpec spec;
        spec.kind = kind;
        spec.n = config.n;
        if (kind_needs_seed(kind)) spec.seed = derive_trial_key(*config.seed, tag_nogo_base + tag);
        return spec;
    };
    const SourceSpec src1 = make_spec(config.source1, 0);
    const SourceSpec src2 = make_spec(config.source2, 1);

    static constexpr MeasureId ids[] = {MeasureId::k, MeasureId::kappa, MeasureId::b,
                                        MeasureId::frequency};
    std::vector<AdvantageRow> rows(std::size(ids));
    parallel_for(std::size(ids), [&](std::size_t i) {
        const Distinguisher d = pilot_median_distinguisher(src1, src2, ids[i], config.n);
        AdvantageRow row;
        row.measure = to_string(ids[i]);
        row.rule = to_string(d.rule);
        row.threshold = d.threshold;
        row.source1 = src1;
        row.source2 = src2;
        row.estimate = estimate_advantage(src1, src2, d, config.trials, config.n);
        rows[i] = std::move(row);
    });
    for (AdvantageRow& row : rows) doc.rows.push_back(std::move(row));
}

} // namespace

ReportDocument run_pipeline(const PipelineConfig& config) {
    ReportDocument doc;
    doc.config_text = config.canonical_text();
    switch (config.preset) {
    case PipelinePreset::coin_toss: run_coin_toss(config, doc); break;
    case PipelinePreset::bell_synthetic: run_bell_synthetic(config, doc); break;
    case PipelinePreset::nogo_demo: run_nogo_demo(config, doc); break;
    }
    return doc;
}

std::vector<std::string> write_pipeline_outputs(const ReportDocument& doc,
                                                const PipelineConfig& config,
                                                const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);

    std::vector<std::string> written;
    const fs::path json_path = dir / config.out_json;
    write_text_file(json_path.string(), render_json(doc));
    written.push_back(json_path.string());

    if (config.out_csv) {
        std::string csv;
        switch (config.preset) {
        case PipelinePreset::coin_toss: csv = render_measure_csv(doc); break;
        case PipelinePreset::bell_synthetic: csv = render_bell_csv(doc); break;
        case PipelinePreset::nogo_demo: csv = render_advantage_csv(doc); break;
        }
        const fs::path csv_path = dir / *config.out_csv;
        write_text_file(csv_path.string(), csv);
        written.push_back(csv_path.string());
    }
    return written;
}

} // namespace randkit
