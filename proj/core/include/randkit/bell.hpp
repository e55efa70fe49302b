#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "randkit/bits.hpp"

namespace randkit {

/// One time-tagged detection at a station: when, which measurement
/// setting was active, and which outcome fired.
struct EventRecord {
    std::int64_t time_ns = 0;
    std::uint8_t setting = 0; ///< x (Alice) or y (Bob), in {0,1}
    std::uint8_t outcome = 0; ///< a or b, in {0,1}

    bool operator==(const EventRecord&) const = default;
};

/// A matched Alice-Bob detection pair.
struct CoincidencePair {
    std::uint8_t a = 0, b = 0; ///< outcomes
    std::uint8_t x = 0, y = 0; ///< settings
    std::int64_t t_a = 0, t_b = 0;

    bool operator==(const CoincidencePair&) const = default;
};

/// Pairs events of two time-sorted streams. Alice's events are processed
/// in time order; each pairs with the not-yet-used Bob event minimizing
/// |t_a - t_b - offset| among those within the window (ties resolved to
/// the earlier Bob event). Each event is used at most once; the output is
/// ordered by t_a. Throws if either stream is unsorted or window <= 0.
std::vector<CoincidencePair> match_coincidences(std::span<const EventRecord> alice,
                                                std::span<const EventRecord> bob,
                                                std::int64_t window_ns,
                                                std::int64_t offset_ns = 0);

struct ExtractedStrings {
    BitString alice; ///< a_1 ... a_N
    BitString bob;   ///< b_1 ... b_N
    BitString mixed; ///< a_1 b_1 a_2 b_2 ... a_N b_N
};

/// Outcome strings of a coincidence run. Throws on an empty pair list.
ExtractedStrings extract_strings(std::span<const CoincidencePair> pairs);

/// CHSH correlation function
/// S = | sum_{x,y} (-1)^{xy} [P(A=B|xy) - P(A!=B|xy)] |,
/// estimated from the per-setting conditional frequencies. Every setting
/// combination must occur at least once; otherwise throws, naming the
/// missing (x, y).
double chsh_s(std::span<const CoincidencePair> pairs);

/// Full statistical summary of one coincidence run.
struct BellSummary {
    std::size_t n = 0; ///< number of coincidence pairs
    double s = 0.0;    ///< CHSH correlation function

    /// p_a_given_x[x][a] etc.; joint indexed by 2a+b within the (x,y) cell.
    std::array<std::array<double, 2>, 2> p_a_given_x{};
    std::array<std::array<double, 2>, 2> p_b_given_y{};
    std::array<std::array<std::array<double, 4>, 2>, 2> p_ab_given_xy{};

    std::array<double, 2> h_a_given_x{};               ///< H(A|X=i), bits
    std::array<double, 2> h_b_given_y{};               ///< H(B|Y=i), bits
    std::array<std::array<double, 2>, 2> h_ab_given_xy{}; ///< H(AB|X=i,Y=j), bits

    /// Set when n fell below the configured floor; the run is annotated,
    /// not rejected.
    bool low_n = false;
    std::size_t low_n_floor = 0;
};

/// Computes all conditional distributions and entropies plus N and S.
/// Requires at least one pair in every conditioning cell.
BellSummary bell_summary(std::span<const CoincidencePair> pairs, std::size_t low_n_floor = 2000);

/// Station event CSV: header "time_ns,setting,outcome", one integer
/// nanosecond timestamp and two {0,1} fields per line.
std::vector<EventRecord> load_events_csv(const std::filesystem::path& path);
void store_events_csv(std::span<const EventRecord> events, const std::filesystem::path& path);

} // namespace randkit
