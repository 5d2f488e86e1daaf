#ifndef RUNLONG_STATS_HPP
#define RUNLONG_STATS_HPP

#include "runlong/assembly.hpp"
#include "runlong/exact.hpp"

#include <string>

namespace runlong {

// Exact distributions and tests on top of the assembly counts. Everything
// stays rational until a caller renders decimals.

enum class Definition {
    per_letter,  // track l_{m_i} of every letter; the statistic is their max
    whole_system // track l_m with all run lengths sorted together
};

struct DistributionRow {
    int q = 0;
    Probability pmf;
    Probability cdf;
};

/// Exact distribution of the tracked run-length statistic over q. Under the
/// per-letter definition the statistic is max_i l^(i)_{m_i}, whose cdf at q
/// is the probability that every letter stays within q; under the
/// whole-system definition it is l_m. Rows always cover q = 0..support_max.
struct DistributionTable {
    Definition definition = Definition::whole_system;
    std::vector<int> m_vec; // k entries per-letter, one entry whole-system
    std::vector<DistributionRow> rows;
    int support_max = 0;
    ExactCount total; // number of arrangements, the common denominator
};

struct MomentSummary {
    Rational mean;
    Rational second_moment;
    Rational variance;
};

struct TestResult {
    std::string statistic_name;
    int observed_q = 0;
    Probability p_value;
    Rational alpha;
    bool reject = false;
};

/// Builds the exact pmf and cdf. The cdf values come from the cumulative
/// counts directly (not from summing pmf rows); construction verifies that
/// the pmf entries are their exact differences and that the final cdf is 1.
DistributionTable pmf_table(const BinomialCache& binom, const Composition& comp,
                            Definition definition, const std::vector<int>& m_vec);

/// Exact E(X), E(X^2) and variance of the tabulated statistic.
MomentSummary moments(const DistributionTable& table);

/// Exact p-value of observing an (m+1)-th longest run of length >= observed_q.
/// Per-letter tests letter 1 (permute the composition for others); whole-system
/// tests l_m. observed_q = 0 gives p = 1.
TestResult p_value_at_least(const BinomialCache& binom, const Composition& comp,
                            Definition definition, int m, int observed_q,
                            const Rational& alpha = Rational(1, 20));

/// Whole-system moment summaries for m = 0..m_max, sharing the per-q sweeps.
std::vector<MomentSummary> narrowing_report(const BinomialCache& binom, const Composition& comp,
                                            int m_max);

} // namespace runlong

#endif
