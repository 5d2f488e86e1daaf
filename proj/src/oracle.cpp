#include "runlong/oracle.hpp"

#include <algorithm>
#include <limits>

namespace runlong {

RunProfile RunProfile::from_sequence(const std::vector<int>& seq, int k) {
    if (seq.empty())
        throw std::domain_error("profile of an empty sequence");
    RunProfile p;
    p.per_letter_sorted.resize(k);
    int run_start = 0;
    for (std::size_t i = 1; i <= seq.size(); ++i) {
        if (i == seq.size() || seq[i] != seq[run_start]) {
            const int letter = seq[run_start];
            if (letter < 0 || letter >= k)
                throw std::domain_error("sequence letter outside 0..k-1");
            p.per_letter_sorted[letter].push_back(static_cast<int>(i) - run_start);
            run_start = static_cast<int>(i);
        }
    }
    for (auto& runs : p.per_letter_sorted) {
        std::sort(runs.begin(), runs.end(), std::greater<int>());
        p.whole_sorted.insert(p.whole_sorted.end(), runs.begin(), runs.end());
        p.total_runs += static_cast<int>(runs.size());
    }
    std::sort(p.whole_sorted.begin(), p.whole_sorted.end(), std::greater<int>());
    return p;
}

void RunProfile::validate(const Composition& comp) const {
    if (static_cast<int>(per_letter_sorted.size()) != comp.k())
        throw std::logic_error("profile letter count mismatch");
    std::vector<int> merged;
    int runs = 0;
    for (int i = 0; i < comp.k(); ++i) {
        const auto& lens = per_letter_sorted[i];
        int total = 0;
        for (std::size_t j = 0; j < lens.size(); ++j) {
            if (lens[j] < 1)
                throw std::logic_error("profile run of nonpositive length");
            if (j > 0 && lens[j] > lens[j - 1])
                throw std::logic_error("profile per-letter lengths not descending");
            total += lens[j];
        }
        if (total != comp.count(i))
            throw std::logic_error("profile lengths do not sum to the letter count");
        runs += static_cast<int>(lens.size());
        merged.insert(merged.end(), lens.begin(), lens.end());
    }
    std::sort(merged.begin(), merged.end(), std::greater<int>());
    if (merged != whole_sorted)
        throw std::logic_error("profile whole-system lengths inconsistent");
    if (runs != total_runs)
        throw std::logic_error("profile total run count inconsistent");
}

namespace {

std::vector<int> sorted_sequence(const Composition& comp) {
    std::vector<int> seq;
    seq.reserve(comp.total());
    for (int letter = 0; letter < comp.k(); ++letter)
        seq.insert(seq.end(), comp.count(letter), letter);
    return seq;
}

} // namespace

void enumerate_profiles(const Composition& comp,
                        const std::function<void(const RunProfile&)>& visit, long cap) {
    const ExactCount total = multinomial(comp.counts());
    if (cap < 1 || cmp(total, cap) > 0)
        throw EnumerationCapExceeded(total, cap);
    std::vector<int> seq = sorted_sequence(comp);
    do {
        visit(RunProfile::from_sequence(seq, comp.k()));
    } while (std::next_permutation(seq.begin(), seq.end()));
}

ExactCount oracle_count(const Composition& comp,
                        const std::function<bool(const RunProfile&)>& pred, long cap) {
    ExactCount hits = 0;
    enumerate_profiles(
        comp,
        [&](const RunProfile& p) {
            if (pred(p))
                ++hits;
        },
        cap);
    return hits;
}

ProfileSampler::ProfileSampler(const Composition& comp, std::uint64_t seed)
    : k_(comp.k()), seq_(sorted_sequence(comp)), rng_(seed) {}

std::uint64_t ProfileSampler::draw_below(std::uint64_t bound) {
    // Rejection keeps the draw exactly uniform; the loop repeats with
    // probability below 2^-52 for the sequence lengths used here.
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x;
    do {
        x = rng_();
    } while (x >= limit);
    return x % bound;
}

RunProfile ProfileSampler::next() {
    for (std::size_t i = seq_.size() - 1; i > 0; --i)
        std::swap(seq_[i], seq_[draw_below(i + 1)]);
    return RunProfile::from_sequence(seq_, k_);
}

namespace predicates {

bool all_letters_within(const RunProfile& p, const PerLetterSpec& spec) {
    for (std::size_t i = 0; i < spec.q_vec.size(); ++i)
        if (p.letter_level(static_cast<int>(i), spec.m_vec[i]) > spec.q_vec[i])
            return false;
    return true;
}

bool boundary_hit(const RunProfile& p, const PerLetterSpec& spec) {
    bool exact = false;
    for (std::size_t i = 0; i < spec.q_vec.size(); ++i) {
        const int level = p.letter_level(static_cast<int>(i), spec.m_vec[i]);
        if (level > spec.q_vec[i])
            return false;
        exact = exact || level == spec.q_vec[i];
    }
    return exact;
}

bool all_letters_exact(const RunProfile& p, const PerLetterSpec& spec) {
    for (std::size_t i = 0; i < spec.q_vec.size(); ++i)
        if (p.letter_level(static_cast<int>(i), spec.m_vec[i]) != spec.q_vec[i])
            return false;
    return true;
}

bool letter1_at_least(const RunProfile& p, int q, int m) {
    return p.letter_level(0, m) >= q;
}

bool whole_within(const RunProfile& p, int q, int m) {
    return p.whole_level(m) <= q;
}

bool whole_exact(const RunProfile& p, int q, int m) {
    return p.whole_level(m) == q;
}

bool total_runs_is(const RunProfile& p, int r) {
    return p.total_runs == r;
}

} // namespace predicates

} // namespace runlong
