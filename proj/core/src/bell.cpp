#include "randkit/bell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

namespace randkit {

namespace {

void require_sorted(std::span<const EventRecord> events, const char* which) {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].time_ns < events[i - 1].time_ns)
            throw std::invalid_argument(std::string("match_coincidences: ") + which +
                                        " stream not sorted by time at index " +
                                        std::to_string(i));
}

// -sum p log2 p over one distribution, with 0 log 0 = 0.
template <typename Range>
double entropy_bits(const Range& probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

} // namespace

std::vector<CoincidencePair> match_coincidences(std::span<const EventRecord> alice,
                                                std::span<const EventRecord> bob,
                                                std::int64_t window_ns,
                                                std::int64_t offset_ns) {
    if (window_ns <= 0) throw std::invalid_argument("match_coincidences: window must be > 0");
    require_sorted(alice, "alice");
    require_sorted(bob, "bob");

    std::vector<CoincidencePair> pairs;
    std::vector<bool> used(bob.size(), false);
    std::size_t first_alive = 0;

    for (const EventRecord& ea : alice) {
        const std::int64_t target = ea.time_ns - offset_ns;
        const std::int64_t lo = target - window_ns;
        const std::int64_t hi = target + window_ns;

        // Bob events before lo can never match this or any later Alice event.
        while (first_alive < bob.size() &&
               (used[first_alive] || bob[first_alive].time_ns < lo))
            ++first_alive;

        std::size_t best = bob.size();
        std::int64_t best_dist = 0;
        for (std::size_t j = first_alive; j < bob.size() && bob[j].time_ns <= hi; ++j) {
            if (used[j]) continue;
            const std::int64_t dist = std::abs(bob[j].time_ns - target);
            if (best == bob.size() || dist < best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        if (best == bob.size()) continue;
        used[best] = true;
        pairs.push_back({ea.outcome, bob[best].outcome, ea.setting, bob[best].setting,
                         ea.time_ns, bob[best].time_ns});
    }
    return pairs;
}

ExtractedStrings extract_strings(std::span<const CoincidencePair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("extract_strings: no coincidence pairs");
    ExtractedStrings out;
    out.alice.reserve(pairs.size());
    out.bob.reserve(pairs.size());
    for (const CoincidencePair& p : pairs) {
        out.alice.push_back(p.a);
        out.bob.push_back(p.b);
    }
    out.mixed = interleave(out.alice, out.bob);
    return out;
}

double chsh_s(std::span<const CoincidencePair> pairs) {
    std::size_t count[2][2] = {};
    std::size_t equal[2][2] = {};
    for (const CoincidencePair& p : pairs) {
        ++count[p.x][p.y];
        if (p.a == p.b) ++equal[p.x][p.y];
    }
    double s = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            if (count[x][y] == 0)
                throw std::invalid_argument("chsh_s: no pairs with settings (x=" +
                                            std::to_string(x) + ", y=" + std::to_string(y) + ")");
            const double p_eq =
                static_cast<double>(equal[x][y]) / static_cast<double>(count[x][y]);
            const double correlation = p_eq - (1.0 - p_eq);
            s += (x == 1 && y == 1) ? -correlation : correlation;
        }
    }
    return std::abs(s);
}

BellSummary bell_summary(std::span<const CoincidencePair> pairs, std::size_t low_n_floor) {
    BellSummary out;
    out.n = pairs.size();
    out.s = chsh_s(pairs); // also enforces the nonempty-cell precondition
    out.low_n_floor = low_n_floor;
    out.low_n = pairs.size() < low_n_floor;

    std::size_t n_x[2] = {}, n_y[2] = {}, n_xy[2][2] = {};
    std::size_t n_ax[2][2] = {}, n_by[2][2] = {}, n_abxy[2][2][4] = {};
    for (const CoincidencePair& p : pairs) {
        ++n_x[p.x];
        ++n_y[p.y];
        ++n_xy[p.x][p.y];
        ++n_ax[p.x][p.a];
        ++n_by[p.y][p.b];
        ++n_abxy[p.x][p.y][2 * p.a + p.b];
    }

    for (int i = 0; i < 2; ++i) {
        for (int a = 0; a < 2; ++a) {
            out.p_a_given_x[i][a] =
                static_cast<double>(n_ax[i][a]) / static_cast<double>(n_x[i]);
            out.p_b_given_y[i][a] =
                static_cast<double>(n_by[i][a]) / static_cast<double>(n_y[i]);
        }
        out.h_a_given_x[i] = entropy_bits(out.p_a_given_x[i]);
        out.h_b_given_y[i] = entropy_bits(out.p_b_given_y[i]);
    }
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int ab = 0; ab < 4; ++ab)
                out.p_ab_given_xy[x][y][ab] =
                    static_cast<double>(n_abxy[x][y][ab]) / static_cast<double>(n_xy[x][y]);
            out.h_ab_given_xy[x][y] = entropy_bits(out.p_ab_given_xy[x][y]);
        }
    }
    return out;
}

std::vector<EventRecord> load_events_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open for reading");

    std::vector<EventRecord> events;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "time_ns,setting,outcome") continue;

        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected time_ns,setting,outcome");
        try {
            EventRecord e;
            std::size_t used = 0;
            e.time_ns = std::stoll(line.substr(0, c1), &used);
            if (used != c1) throw std::invalid_argument("trailing junk in time field");
            const int setting = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
            const int outcome = std::stoi(line.substr(c2 + 1));
            if (setting < 0 || setting > 1 || outcome < 0 || outcome > 1)
                throw std::invalid_argument("setting/outcome must be 0 or 1");
            e.setting = static_cast<std::uint8_t>(setting);
            e.outcome = static_cast<std::uint8_t>(outcome);
            events.push_back(e);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return events;
}

void store_events_csv(std::span<const EventRecord> events, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << "time_ns,setting,outcome\n";
    for (const EventRecord& e : events)
        out << e.time_ns << ',' << int(e.setting) << ',' << int(e.outcome) << '\n';
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

} // namespace randkit
