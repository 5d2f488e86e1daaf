#ifndef RUNLONG_ORACLE_HPP
#define RUNLONG_ORACLE_HPP

#include "runlong/assembly.hpp"

#include <cstdint>
#include <functional>
#include <random>

namespace runlong {

// Ground truth by brute force: enumerate every distinct arrangement of a
// small composition, or sample arrangements uniformly when enumeration is out
// of reach. The closed-form counts are tested against these, never the other
// way around.

/// The run structure of one arrangement, reduced to what the counting
/// functions talk about: run lengths per letter and overall, sorted
/// descending.
struct RunProfile {
    std::vector<std::vector<int>> per_letter_sorted;
    std::vector<int> whole_sorted;
    int total_runs = 0;

    /// Builds the profile of a sequence over letters 0..k-1.
    static RunProfile from_sequence(const std::vector<int>& seq, int k);

    /// l_m of the given letter: its (m+1)-th longest run length, 0 when the
    /// letter has m runs or fewer.
    int letter_level(int letter, int m) const {
        const auto& runs = per_letter_sorted.at(letter);
        return m < static_cast<int>(runs.size()) ? runs[m] : 0;
    }

    /// l_m of the whole system, 0 when there are m runs or fewer.
    int whole_level(int m) const {
        return m < static_cast<int>(whole_sorted.size()) ? whole_sorted[m] : 0;
    }

    /// Checks the structural invariants against the composition; throws
    /// std::logic_error on any violation.
    void validate(const Composition& comp) const;
};

inline constexpr long kDefaultEnumerationCap = 2'000'000;

/// Thrown when an enumeration would visit more arrangements than the cap
/// allows; carries the exact count that was requested.
class EnumerationCapExceeded : public std::runtime_error {
public:
    EnumerationCapExceeded(ExactCount count, long cap)
        : std::runtime_error("enumeration of " + count.get_str() +
                             " arrangements exceeds the cap of " + std::to_string(cap)),
          count_(std::move(count)) {}

    const ExactCount& count() const { return count_; }

private:
    ExactCount count_;
};

/// Visits the RunProfile of every distinct arrangement exactly once, in
/// lexicographic sequence order.
void enumerate_profiles(const Composition& comp,
                        const std::function<void(const RunProfile&)>& visit,
                        long cap = kDefaultEnumerationCap);

/// Number of arrangements whose profile satisfies the predicate.
ExactCount oracle_count(const Composition& comp,
                        const std::function<bool(const RunProfile&)>& pred,
                        long cap = kDefaultEnumerationCap);

/// Uniform i.i.d. arrangements from a seeded generator. The stream is stable
/// across platforms: mt19937_64 has a standard-mandated sequence, and the
/// shuffle uses a fixed Fisher-Yates with rejection-sampled bounded draws
/// instead of the implementation-defined std::shuffle.
class ProfileSampler {
public:
    ProfileSampler(const Composition& comp, std::uint64_t seed);

    RunProfile next();

private:
    std::uint64_t draw_below(std::uint64_t bound);

    int k_;
    std::vector<int> seq_;
    std::mt19937_64 rng_;
};

// Predicates matching the assembly counts one definition at a time; the
// oracle suite pairs each with its closed-form counterpart.
namespace predicates {

/// N: every letter's (m_i+1)-th longest run is <= q_i.
bool all_letters_within(const RunProfile& p, const PerLetterSpec& spec);

/// L: all within and at least one letter exactly at its bound.
bool boundary_hit(const RunProfile& p, const PerLetterSpec& spec);

/// W per letter: every letter's (m_i+1)-th longest run is exactly q_i.
bool all_letters_exact(const RunProfile& p, const PerLetterSpec& spec);

/// Z: letter 0 has at least m+1 runs of length >= q.
bool letter1_at_least(const RunProfile& p, int q, int m);

/// Q: the whole system's (m+1)-th longest run is <= q.
bool whole_within(const RunProfile& p, int q, int m);

/// W whole: the whole system's (m+1)-th longest run is exactly q.
bool whole_exact(const RunProfile& p, int q, int m);

/// T: exactly r runs in total.
bool total_runs_is(const RunProfile& p, int r);

} // namespace predicates

} // namespace runlong

#endif
