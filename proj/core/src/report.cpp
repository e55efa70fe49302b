#include "randkit/report.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace randkit {

namespace {

using nlohmann::json;

constexpr std::size_t open_upper = std::numeric_limits<std::size_t>::max();

json source_to_json(const SourceSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    if (spec.seed) j["seed"] = key_to_hex(*spec.seed);
    if (spec.kind == SourceKind::mimic_2byte || spec.kind == SourceKind::mimic_fraction)
        j["p"] = spec.p;
    if (spec.kind == SourceKind::mimic_fraction) j["m"] = spec.m;
    j["n"] = spec.n;
    return j;
}

json provenance_to_json(const Provenance& p) {
    json j;
    if (p.source) j["source"] = source_to_json(*p.source);
    if (p.trial) j["trial"] = *p.trial;
    if (p.file) j["file"] = *p.file;
    if (p.file_hash) j["file_hash"] = *p.file_hash;
    return j;
}

json measure_report_to_json(const MeasureReport& r) {
    json j;
    j["source"] = r.meta.source_id;
    j["n"] = r.meta.n;
    j["frequency"] = r.meta.relative_frequency;
    j["K"] = r.k;
    j["kappa"] = r.kappa;
    j["B"] = r.b;
    j["borel_normal"] = r.borel_normal;
    return j;
}

json pearson_to_json(const PearsonResult& r) {
    json j;
    j["n"] = r.n;
    j["r"] = r.r;
    j["p"] = r.p;
    j["ci"] = json::array({r.ci_lo, r.ci_hi});
    j["degenerate"] = r.degenerate;
    return j;
}

struct RowRenderer {
    json operator()(const MeasureRow& row) const {
        json j;
        j["type"] = "measure";
        j["provenance"] = provenance_to_json(row.provenance);
        j["report"] = measure_report_to_json(row.report);
        return j;
    }
    json operator()(const BellRow& row) const {
        json j;
        j["type"] = "bell";
        j["name"] = row.name;
        j["provenance"] = provenance_to_json(row.provenance);
        j["n_pairs"] = row.n_pairs;
        j["s"] = row.s;
        j["low_n"] = row.low_n;
        j["alice"] = measure_report_to_json(row.alice);
        j["bob"] = measure_report_to_json(row.bob);
        j["mixed"] = measure_report_to_json(row.mixed);
        return j;
    }
    json operator()(const WelchRow& row) const {
        json j;
        j["type"] = "welch";
        j["measure"] = row.measure;
        j["t"] = row.result.t;
        j["df"] = row.result.df;
        j["p"] = row.result.p;
        return j;
    }
    json operator()(const PearsonRow& row) const {
        json j;
        j["type"] = "pearson";
        j["label"] = row.label;
        j["stratum_lo"] = row.stratum_lo;
        if (row.stratum_hi == open_upper)
            j["stratum_hi"] = nullptr;
        else
            j["stratum_hi"] = row.stratum_hi;
        j["result"] = pearson_to_json(row.result);
        return j;
    }
    json operator()(const AdvantageRow& row) const {
        json j;
        j["type"] = "advantage";
        j["measure"] = row.measure;
        j["rule"] = row.rule;
        j["threshold"] = row.threshold;
        j["source1"] = source_to_json(row.source1);
        j["source2"] = source_to_json(row.source2);
        j["rate1"] = row.estimate.rate1;
        j["rate2"] = row.estimate.rate2;
        j["diff"] = row.estimate.diff;
        j["adv"] = row.estimate.adv;
        j["ci"] = json::array({row.estimate.ci_lo, row.estimate.ci_hi});
        j["trials"] = row.estimate.trials;
        return j;
    }
    json operator()(const FrequencySummaryRow& row) const {
        json j;
        j["type"] = "frequency_summary";
        j["label"] = row.label;
        j["provenance"] = provenance_to_json(row.provenance);
        j["trials"] = row.trials;
        j["n"] = row.n;
        j["mean_frequency"] = row.mean_frequency;
        j["std_frequency"] = row.std_frequency;
        j["mean_K"] = row.mean_k;
        j["mean_kappa"] = row.mean_kappa;
        j["mean_B"] = row.mean_b;
        return j;
    }
};

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

Provenance provenance_from_source(const SourceSpec& spec, std::uint64_t trial) {
    Provenance p;
    p.source = spec;
    p.trial = trial;
    return p;
}

Provenance provenance_from_file(const std::string& path) {
    Provenance p;
    p.file = path;
    p.file_hash = hash_file(path);
    return p;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string render_json(const ReportDocument& doc) {
    json j;
    j["config_hash"] = hash_hex(fnv1a64(doc.config_text));
    j["tool_version"] = doc.tool_version;
    json rows = json::array();
    for (const ReportRow& row : doc.rows) rows.push_back(std::visit(RowRenderer{}, row));
    j["rows"] = std::move(rows);
    // nlohmann's object keys are sorted, so the dump is deterministic.
    return j.dump(2) + "\n";
}

std::string render_measure_csv(const ReportDocument& doc) {
    std::string out = "source,trial,n,frequency,K,kappa,B,borel_normal\n";
    for (const ReportRow& row : doc.rows) {
        const auto* m = std::get_if<MeasureRow>(&row);
        if (!m) continue;
        out += m->report.meta.source_id + ",";
        out += m->provenance.trial ? std::to_string(*m->provenance.trial) : std::string();
        out += "," + std::to_string(m->report.meta.n);
        out += "," + format_double(m->report.meta.relative_frequency);
        out += "," + format_double(m->report.k);
        out += "," + format_double(m->report.kappa);
        out += "," + format_double(m->report.b);
        out += m->report.borel_normal ? ",1\n" : ",0\n";
    }
    return out;
}

std::string render_bell_csv(const ReportDocument& doc) {
    std::string out = "name,N,S,K_alice,K_bob,K_mixed,kappa_alice,kappa_bob,kappa_mixed,"
                      "B_alice,B_bob,B_mixed\n";
    for (const ReportRow& row : doc.rows) {
        const auto* b = std::get_if<BellRow>(&row);
        if (!b) continue;
        out += b->name;
        out += "," + std::to_string(b->n_pairs);
        out += "," + format_double(b->s);
        for (const MeasureReport* r : {&b->alice, &b->bob, &b->mixed})
            out += "," + format_double(r->k);
        for (const MeasureReport* r : {&b->alice, &b->bob, &b->mixed})
            out += "," + format_double(r->kappa);
        for (const MeasureReport* r : {&b->alice, &b->bob, &b->mixed})
            out += "," + format_double(r->b);
        out += "\n";
    }
    return out;
}

std::string render_pearson_csv(const ReportDocument& doc) {
    std::string out = "label,stratum_lo,stratum_hi,n,r,p,ci_lo,ci_hi\n";
    for (const ReportRow& row : doc.rows) {
        const auto* p = std::get_if<PearsonRow>(&row);
        if (!p) continue;
        out += p->label;
        out += "," + std::to_string(p->stratum_lo);
        out += ",";
        if (p->stratum_hi != open_upper) out += std::to_string(p->stratum_hi);
        out += "," + std::to_string(p->result.n);
        out += "," + format_double(p->result.r);
        out += "," + format_double(p->result.p);
        out += "," + format_double(p->result.ci_lo);
        out += "," + format_double(p->result.ci_hi);
        out += "\n";
    }
    return out;
}

std::string render_advantage_csv(const ReportDocument& doc) {
    std::string out = "measure,rule,threshold,source1,source2,rate1,rate2,diff,adv,"
                      "ci_lo,ci_hi,trials\n";
    for (const ReportRow& row : doc.rows) {
        const auto* a = std::get_if<AdvantageRow>(&row);
        if (!a) continue;
        out += a->measure + "," + a->rule;
        out += "," + format_double(a->threshold);
        out += "," + a->source1.label() + "," + a->source2.label();
        out += "," + format_double(a->estimate.rate1);
        out += "," + format_double(a->estimate.rate2);
        out += "," + format_double(a->estimate.diff);
        out += "," + format_double(a->estimate.adv);
        out += "," + format_double(a->estimate.ci_lo);
        out += "," + format_double(a->estimate.ci_hi);
        out += "," + std::to_string(a->estimate.trials);
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return hash_hex(fnv1a64(buf.str()));
}

} // namespace randkit
