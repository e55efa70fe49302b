// randkit: generation, measurement, and analysis of bit-string randomness,
// plus time-tagged two-station event processing. See README for the model.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "randkit/bell.hpp"
#include "randkit/bits.hpp"
#include "randkit/measures.hpp"
#include "randkit/pipeline.hpp"
#include "randkit/report.hpp"
#include "randkit/sources.hpp"
#include "randkit/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace randkit;

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

BitFileFormat detect_format(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[4] = {};
    in.read(magic, 4);
    return (in.gcount() == 4 && std::string_view(magic, 4) == "RBIT") ? BitFileFormat::packed
                                                                      : BitFileFormat::ascii;
}

std::string indexed_path(const std::string& out, std::size_t i) {
    const fs::path p(out);
    char suffix[8];
    std::snprintf(suffix, sizeof suffix, "_%03zu", i);
    fs::path named = p.parent_path() / (p.stem().string() + suffix + p.extension().string());
    return named.string();
}

LhvStrategy lhv_strategy_by_name(const std::string& name) {
    LhvStrategy s;
    if (name == "agree") {
        // Both stations always output 0: perfect agreement, S = 2.
        s.lambda_weights = {1.0};
        s.a = {{{0}, {0}}};
        s.b = {{{0}, {0}}};
        return s;
    }
    if (name == "shared-coin") {
        // Both stations echo a shared fair coin, again S = 2.
        s.lambda_weights = {0.5, 0.5};
        s.a = {{{0, 1}, {0, 1}}};
        s.b = {{{0, 1}, {0, 1}}};
        return s;
    }
    throw std::runtime_error("unknown LHV strategy: " + name + " (try agree, shared-coin)");
}

void maybe_write(const std::optional<std::string>& path, const std::string& content,
                 std::vector<std::string>& written) {
    if (!path) return;
    write_text_file(*path, content);
    written.push_back(*path);
}

void report_written(const std::vector<std::string>& written) {
    for (const std::string& path : written) std::cout << "wrote " << path << "\n";
}

struct GenOptions {
    std::string kind = "chacha20";
    std::string seed_hex;
    std::size_t n = 20000;
    std::size_t count = 1;
    double p = 0.5;
    unsigned m = 16;
    std::string format = "ascii";
    std::string out;
    std::size_t pairs = 20000;
    double rate_hz = 50000.0;
    double jitter_ns = 100.0;
    double efficiency_a = 1.0;
    double efficiency_b = 1.0;
    std::string lhv = "agree";
    std::string out_a;
    std::string out_b;
};

int run_gen(const GenOptions& opt) {
    const SourceKind kind = source_kind_from_string(opt.kind);
    const bool events = kind == SourceKind::bell_quantum || kind == SourceKind::bell_lhv;

    if (events) {
        if (opt.out_a.empty() || opt.out_b.empty())
            throw std::runtime_error("event generators need --out-a and --out-b");
        if (opt.seed_hex.empty()) throw std::runtime_error("event generators need --seed");
        const Key256 key = parse_key_hex(opt.seed_hex);
        TimingParams timing{opt.rate_hz, opt.jitter_ns, opt.efficiency_a, opt.efficiency_b};
        const EventPairStreams streams =
            kind == SourceKind::bell_quantum
                ? bell_quantum_events(key, opt.pairs, singlet_correlations(), timing)
                : bell_lhv_events(key, opt.pairs, lhv_strategy_by_name(opt.lhv), timing);
        store_events_csv(streams.alice, opt.out_a);
        store_events_csv(streams.bob, opt.out_b);
        std::cout << "wrote " << opt.out_a << " (" << streams.alice.size() << " events)\n"
                  << "wrote " << opt.out_b << " (" << streams.bob.size() << " events)\n";
        return 0;
    }

    if (opt.out.empty()) throw std::runtime_error("--out is required");
    SourceSpec spec;
    spec.kind = kind;
    spec.p = opt.p;
    spec.m = opt.m;
    spec.n = opt.n;
    if (!opt.seed_hex.empty()) spec.seed = parse_key_hex(opt.seed_hex);
    const BitFileFormat format =
        opt.format == "packed" ? BitFileFormat::packed : BitFileFormat::ascii;

    for (std::size_t i = 0; i < opt.count; ++i) {
        const std::string path = opt.count == 1 ? opt.out : indexed_path(opt.out, i);
        store_bits(draw_bits(spec, i), path, format);
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

struct MeasureOptions {
    std::vector<std::string> files;
    std::string format = "auto";
    std::optional<std::string> out_json;
    std::optional<std::string> out_csv;
};

int run_measure(const MeasureOptions& opt) {
    ReportDocument doc;
    json cfg;
    cfg["command"] = "measure";
    cfg["files"] = opt.files;
    doc.config_text = cfg.dump();

    for (const std::string& file : opt.files) {
        const BitFileFormat format = opt.format == "ascii"  ? BitFileFormat::ascii
                                     : opt.format == "packed" ? BitFileFormat::packed
                                                              : detect_format(file);
        const BitString bits = load_bits(file, format);
        const MeasureReport report = measure_suite(bits, fs::path(file).filename().string());
        doc.rows.push_back(MeasureRow{provenance_from_file(file), report});
        std::printf("%-28s n=%-8zu freq=%.6f K=%.4f kappa=%.4f B=%.4f %s\n",
                    report.meta.source_id.c_str(), report.meta.n,
                    report.meta.relative_frequency, report.k, report.kappa, report.b,
                    report.borel_normal ? "borel-normal" : "not-borel-normal");
    }

    std::vector<std::string> written;
    if (opt.out_json) maybe_write(opt.out_json, render_json(doc), written);
    if (opt.out_csv) maybe_write(opt.out_csv, render_measure_csv(doc), written);
    report_written(written);
    return 0;
}

struct BellOptions {
    std::string alice;
    std::string bob;
    std::int64_t window_ns = 1000;
    std::int64_t offset_ns = 0;
    std::size_t min_coincidences = 2000;
    std::string name;
    std::optional<std::string> out_json;
    std::optional<std::string> out_csv;
    std::optional<std::string> dump_strings;
};

int run_bell(const BellOptions& opt) {
    const std::vector<EventRecord> alice = load_events_csv(opt.alice);
    const std::vector<EventRecord> bob = load_events_csv(opt.bob);
    const std::vector<CoincidencePair> pairs =
        match_coincidences(alice, bob, opt.window_ns, opt.offset_ns);
    if (pairs.empty()) throw std::runtime_error("no coincidences inside the matching window");

    const BellSummary summary = bell_summary(pairs, opt.min_coincidences);
    const ExtractedStrings strings = extract_strings(pairs);

    BellRow row;
    row.name = !opt.name.empty()
                   ? opt.name
                   : fs::path(opt.alice).stem().string() + "+" + fs::path(opt.bob).stem().string();
    row.provenance.file = opt.alice + ";" + opt.bob;
    row.provenance.file_hash = hash_hex(fnv1a64(hash_file(opt.alice) + hash_file(opt.bob)));
    row.n_pairs = pairs.size();
    row.s = summary.s;
    row.low_n = summary.low_n;
    row.alice = measure_suite(strings.alice, row.name + "/alice");
    row.bob = measure_suite(strings.bob, row.name + "/bob");
    row.mixed = measure_suite(strings.mixed, row.name + "/mixed");

    std::printf("%s: N=%zu S=%.4f%s\n", row.name.c_str(), row.n_pairs, row.s,
                row.low_n ? " [low-N]" : "");
    std::printf("  H(A|X=0)=%.4f H(A|X=1)=%.4f H(B|Y=0)=%.4f H(B|Y=1)=%.4f\n",
                summary.h_a_given_x[0], summary.h_a_given_x[1], summary.h_b_given_y[0],
                summary.h_b_given_y[1]);
    for (const auto& [label, report] :
         {std::pair<const char*, const MeasureReport*>{"alice", &row.alice},
          {"bob", &row.bob},
          {"mixed", &row.mixed}})
        std::printf("  %-6s n=%-8zu freq=%.6f K=%.4f kappa=%.4f B=%.4f\n", label,
                    report->meta.n, report->meta.relative_frequency, report->k, report->kappa,
                    report->b);

    ReportDocument doc;
    json cfg;
    cfg["command"] = "bell";
    cfg["alice"] = opt.alice;
    cfg["bob"] = opt.bob;
    cfg["window_ns"] = opt.window_ns;
    cfg["offset_ns"] = opt.offset_ns;
    cfg["min_coincidences"] = opt.min_coincidences;
    doc.config_text = cfg.dump();
    doc.rows.push_back(row);

    std::vector<std::string> written;
    if (opt.dump_strings) {
        const std::string prefix = *opt.dump_strings;
        store_bits(strings.alice, prefix + "_alice.bits", BitFileFormat::ascii);
        store_bits(strings.bob, prefix + "_bob.bits", BitFileFormat::ascii);
        store_bits(strings.mixed, prefix + "_mixed.bits", BitFileFormat::ascii);
        written.insert(written.end(),
                       {prefix + "_alice.bits", prefix + "_bob.bits", prefix + "_mixed.bits"});
    }
    if (opt.out_json) maybe_write(opt.out_json, render_json(doc), written);
    if (opt.out_csv) maybe_write(opt.out_csv, render_bell_csv(doc), written);
    report_written(written);
    return 0;
}

std::vector<MeasureReport> load_measure_reports(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": not valid JSON: " + e.what());
    }
    std::vector<MeasureReport> out;
    for (const json& row : doc.at("rows")) {
        if (row.value("type", "") != "measure") continue;
        const json& r = row.at("report");
        MeasureReport report;
        report.meta.source_id = r.value("source", "");
        report.meta.n = r.at("n").get<std::size_t>();
        report.meta.relative_frequency = r.at("frequency").get<double>();
        report.k = r.at("K").get<double>();
        report.kappa = r.at("kappa").get<double>();
        report.b = r.at("B").get<double>();
        report.borel_normal = r.at("borel_normal").get<bool>();
        out.push_back(std::move(report));
    }
    if (out.size() < 2)
        throw std::runtime_error(path + ": needs at least two measure rows to compare");
    return out;
}

struct CompareOptions {
    std::string a;
    std::string b;
    std::optional<std::string> out_json;
};

int run_compare(const CompareOptions& opt) {
    const std::vector<MeasureReport> batch_a = load_measure_reports(opt.a);
    const std::vector<MeasureReport> batch_b = load_measure_reports(opt.b);
    const BatchComparison cmp = compare_batches(batch_a, batch_b);

    ReportDocument doc;
    json cfg;
    cfg["command"] = "compare";
    cfg["a"] = opt.a;
    cfg["b"] = opt.b;
    doc.config_text = cfg.dump();

    std::printf("%-10s %12s %10s %12s\n", "measure", "t", "df", "p");
    for (const auto& [name, res] :
         {std::pair<const char*, const WelchResult*>{"K", &cmp.k},
          {"kappa", &cmp.kappa},
          {"B", &cmp.b}}) {
        std::printf("%-10s %12.4f %10.2f %12.6f\n", name, res->t, res->df, res->p);
        doc.rows.push_back(WelchRow{name, *res});
    }

    std::vector<std::string> written;
    if (opt.out_json) maybe_write(opt.out_json, render_json(doc), written);
    report_written(written);
    return 0;
}

struct CorrelateOptions {
    std::string input;
    std::vector<std::size_t> edges = {20000, 40000};
    double conf = 0.95;
    std::string label = "correlation";
    std::optional<std::string> out_json;
    std::optional<std::string> out_csv;
};

std::vector<StratumRecord> load_stratum_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<StratumRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("n,", 0) == 0) continue; // header
        std::istringstream ss(line);
        std::string n_s, s_s, v_s;
        if (!std::getline(ss, n_s, ',') || !std::getline(ss, s_s, ',') ||
            !std::getline(ss, v_s))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected n,s,value");
        try {
            out.push_back({static_cast<std::size_t>(std::stoull(n_s)), std::stod(s_s),
                           std::stod(v_s)});
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed number");
        }
    }
    return out;
}

int run_correlate(const CorrelateOptions& opt) {
    const std::vector<StratumRecord> records = load_stratum_records(opt.input);
    const std::vector<StratumResult> strata = stratified_pearson(records, opt.edges, opt.conf);

    ReportDocument doc;
    json cfg;
    cfg["command"] = "correlate";
    cfg["input"] = opt.input;
    cfg["edges"] = opt.edges;
    cfg["conf"] = opt.conf;
    doc.config_text = cfg.dump();

    for (const StratumResult& s : strata) {
        std::string range = s.upper == std::numeric_limits<std::size_t>::max()
                                ? "N>=" + std::to_string(s.lower)
                                : std::to_string(s.lower) + "<=N<" + std::to_string(s.upper);
        std::printf("%-22s n=%-4zu r=%+.4f p=%.4f ci=[%+.4f, %+.4f]%s\n", range.c_str(),
                    s.stats.n, s.stats.r, s.stats.p, s.stats.ci_lo, s.stats.ci_hi,
                    s.stats.degenerate ? " [degenerate]" : "");
        doc.rows.push_back(PearsonRow{opt.label, s.lower, s.upper, s.stats});
    }

    std::vector<std::string> written;
    if (opt.out_json) maybe_write(opt.out_json, render_json(doc), written);
    if (opt.out_csv) maybe_write(opt.out_csv, render_pearson_csv(doc), written);
    report_written(written);
    return 0;
}

struct NogoOptions {
    std::string seed_hex;
    std::size_t trials = 200;
    std::size_t n = 20000;
    std::string source1 = "os_entropy";
    std::string source2 = "chacha20";
    std::optional<std::string> out_json;
    std::optional<std::string> out_csv;
};

int run_nogo(const NogoOptions& opt) {
    PipelineConfig cfg;
    cfg.preset = PipelinePreset::nogo_demo;
    cfg.trials = opt.trials;
    cfg.n = opt.n;
    cfg.source1 = source_kind_from_string(opt.source1);
    cfg.source2 = source_kind_from_string(opt.source2);
    if (!opt.seed_hex.empty()) {
        cfg.seed = parse_key_hex(opt.seed_hex);
    } else if (cfg.source1 != SourceKind::os_entropy || cfg.source2 != SourceKind::os_entropy) {
        // No seed given: draw one and announce it so the run can be replayed.
        const BitString bits = trng_bits(256);
        Key256 key{};
        for (std::size_t i = 0; i < 256; ++i)
            key[i / 8] = static_cast<std::uint8_t>((key[i / 8] << 1) | bits[i]);
        cfg.seed = key;
        std::cout << "seed: " << key_to_hex(key) << "\n";
    }

    const ReportDocument doc = run_pipeline(cfg);
    for (const ReportRow& row : doc.rows) {
        const auto& a = std::get<AdvantageRow>(row);
        std::printf("%-10s adv=%.4f rates %.3f vs %.3f ci=[%+.4f, %+.4f] threshold=%.6g\n",
                    a.measure.c_str(), a.estimate.adv, a.estimate.rate1, a.estimate.rate2,
                    a.estimate.ci_lo, a.estimate.ci_hi, a.threshold);
    }

    std::vector<std::string> written;
    if (opt.out_json) maybe_write(opt.out_json, render_json(doc), written);
    if (opt.out_csv) maybe_write(opt.out_csv, render_advantage_csv(doc), written);
    report_written(written);
    return 0;
}

struct PipelineOptions {
    std::string config;
    std::string out_dir = ".";
};

int run_pipeline_cmd(const PipelineOptions& opt) {
    const PipelineConfig config = parse_pipeline_config(read_text_file(opt.config));
    const ReportDocument doc = run_pipeline(config);
    report_written(write_pipeline_outputs(doc, config, opt.out_dir));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bit-string randomness measures, distinguisher experiments, and "
                 "two-station coincidence analysis"};
    app.require_subcommand(1);

    GenOptions gen_opt;
    auto* gen = app.add_subcommand("gen", "generate bit strings or event streams");
    gen->add_option("--kind", gen_opt.kind,
                    "os_entropy|chacha20|mimic_2byte|mimic_fraction|bell_quantum|bell_lhv");
    gen->add_option("--seed", gen_opt.seed_hex, "64 hex chars (32-byte key)");
    gen->add_option("--n", gen_opt.n, "bits per string");
    gen->add_option("--count", gen_opt.count, "number of strings (trial indices 0..count-1)");
    gen->add_option("--p", gen_opt.p, "target one-probability (mimic kinds)");
    gen->add_option("--m", gen_opt.m, "precision bits (mimic_fraction)");
    gen->add_option("--format", gen_opt.format)->check(CLI::IsMember({"ascii", "packed"}));
    gen->add_option("--out", gen_opt.out, "output path (indexed when --count > 1)");
    gen->add_option("--pairs", gen_opt.pairs, "entangled pairs (bell kinds)");
    gen->add_option("--rate-hz", gen_opt.rate_hz, "pair creation rate");
    gen->add_option("--jitter-ns", gen_opt.jitter_ns, "per-station timing jitter sigma");
    gen->add_option("--efficiency-a", gen_opt.efficiency_a);
    gen->add_option("--efficiency-b", gen_opt.efficiency_b);
    gen->add_option("--lhv-strategy", gen_opt.lhv, "agree|shared-coin");
    gen->add_option("--out-a", gen_opt.out_a, "Alice event CSV (bell kinds)");
    gen->add_option("--out-b", gen_opt.out_b, "Bob event CSV (bell kinds)");

    MeasureOptions measure_opt;
    auto* measure = app.add_subcommand("measure", "measure suite over bit files");
    measure->add_option("files", measure_opt.files, "bit files")->required();
    measure->add_option("--format", measure_opt.format)
        ->check(CLI::IsMember({"auto", "ascii", "packed"}));
    measure->add_option("--json", measure_opt.out_json, "write JSON report");
    measure->add_option("--csv", measure_opt.out_csv, "write CSV mirror");

    BellOptions bell_opt;
    auto* bell = app.add_subcommand("bell", "coincidence matching and CHSH analysis");
    bell->add_option("--alice", bell_opt.alice, "Alice event CSV")->required();
    bell->add_option("--bob", bell_opt.bob, "Bob event CSV")->required();
    bell->add_option("--window-ns", bell_opt.window_ns, "coincidence window");
    bell->add_option("--offset-ns", bell_opt.offset_ns, "fixed Bob-time offset");
    bell->add_option("--min-coincidences", bell_opt.min_coincidences,
                     "below this, the run is flagged low-N");
    bell->add_option("--name", bell_opt.name, "row label");
    bell->add_option("--json", bell_opt.out_json, "write JSON report");
    bell->add_option("--csv", bell_opt.out_csv, "write CSV mirror");
    bell->add_option("--dump-strings", bell_opt.dump_strings,
                     "write extracted alice/bob/mixed bit files with this prefix");

    CompareOptions compare_opt;
    auto* compare = app.add_subcommand("compare", "Welch's t between two measure reports");
    compare->add_option("--a", compare_opt.a, "JSON report (batch A)")->required();
    compare->add_option("--b", compare_opt.b, "JSON report (batch B)")->required();
    compare->add_option("--json", compare_opt.out_json, "write JSON report");

    CorrelateOptions correlate_opt;
    auto* correlate = app.add_subcommand("correlate", "stratified correlation of n,s,value records");
    correlate->add_option("--input", correlate_opt.input, "CSV with header n,s,value")->required();
    correlate->add_option("--edges", correlate_opt.edges, "stratum edges on N")->delimiter(',');
    correlate->add_option("--conf", correlate_opt.conf, "confidence level");
    correlate->add_option("--label", correlate_opt.label, "row label");
    correlate->add_option("--json", correlate_opt.out_json, "write JSON report");
    correlate->add_option("--csv", correlate_opt.out_csv, "write CSV mirror");

    NogoOptions nogo_opt;
    auto* nogo = app.add_subcommand("nogo-demo", "distinguisher advantage across all measures");
    nogo->add_option("--seed", nogo_opt.seed_hex, "master seed (64 hex chars)");
    nogo->add_option("--trials", nogo_opt.trials, "trials per source");
    nogo->add_option("--n", nogo_opt.n, "bits per string");
    nogo->add_option("--source1", nogo_opt.source1);
    nogo->add_option("--source2", nogo_opt.source2);
    nogo->add_option("--json", nogo_opt.out_json, "write JSON report");
    nogo->add_option("--csv", nogo_opt.out_csv, "write CSV mirror");

    PipelineOptions pipeline_opt;
    auto* pipeline = app.add_subcommand("pipeline", "run a JSON-configured pipeline");
    pipeline->add_option("--config", pipeline_opt.config, "JSON config file")->required();
    pipeline->add_option("--out-dir", pipeline_opt.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(gen_opt);
        if (measure->parsed()) return run_measure(measure_opt);
        if (bell->parsed()) return run_bell(bell_opt);
        if (compare->parsed()) return run_compare(compare_opt);
        if (correlate->parsed()) return run_correlate(correlate_opt);
        if (nogo->parsed()) return run_nogo(nogo_opt);
        if (pipeline->parsed()) return run_pipeline_cmd(pipeline_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
