#include "runlong/stats.hpp"

#include <stdexcept>
#include <utility>

namespace runlong {

namespace {

ExactCount arrangement_total(const Composition& comp) {
    return multinomial(comp.counts());
}

void check_m_vec(const Composition& comp, Definition definition, const std::vector<int>& m_vec) {
    const std::size_t want = definition == Definition::per_letter
                                 ? static_cast<std::size_t>(comp.k())
                                 : std::size_t{1};
    if (m_vec.size() != want) {
        throw std::domain_error("m_vec arity does not match the definition");
    }
    for (int m : m_vec) {
        if (m < 0) {
            throw std::domain_error("rank m must be nonnegative");
        }
    }
}

// Cumulative counts at q = 0..max_count: arrangements whose statistic is <= q.
std::vector<ExactCount> cumulative_counts(const BinomialCache& binom, const Composition& comp,
                                          Definition definition, const std::vector<int>& m_vec) {
    const int q_hi = comp.max_count();
    std::vector<ExactCount> cum(static_cast<std::size_t>(q_hi) + 1);
    if (definition == Definition::whole_system) {
        for (int q = 0; q <= q_hi; ++q) {
            cum[static_cast<std::size_t>(q)] = count_Q(binom, comp, q, m_vec[0]);
        }
    } else {
        PerLetterSpec spec;
        spec.m_vec = m_vec;
        spec.q_vec.assign(static_cast<std::size_t>(comp.k()), 0);
        for (int q = 0; q <= q_hi; ++q) {
            spec.q_vec.assign(spec.q_vec.size(), q);
            cum[static_cast<std::size_t>(q)] = count_N(binom, comp, spec);
        }
    }
    return cum;
}

} // namespace

DistributionTable pmf_table(const BinomialCache& binom, const Composition& comp,
                            Definition definition, const std::vector<int>& m_vec) {
    check_m_vec(comp, definition, m_vec);

    DistributionTable table;
    table.definition = definition;
    table.m_vec = m_vec;
    table.total = arrangement_total(comp);

    const std::vector<ExactCount> cum = cumulative_counts(binom, comp, definition, m_vec);
    if (cum.back() != table.total) {
        throw std::logic_error("distribution does not saturate at the maximal run length");
    }

    Rational pmf_sum(0);
    ExactCount prev(0);
    for (int q = 0; q < static_cast<int>(cum.size()); ++q) {
        const ExactCount& here = cum[static_cast<std::size_t>(q)];
        DistributionRow row;
        row.q = q;
        // Probability rejects negative mass, so this also enforces that the
        // cumulative counts never decrease.
        row.pmf = Probability(here - prev, table.total);
        row.cdf = Probability(here, table.total);
        pmf_sum += row.pmf.value();
        if (pmf_sum != row.cdf.value()) {
            throw std::logic_error("pmf prefix sums disagree with the cdf");
        }
        if (row.pmf.value() > 0) {
            table.support_max = q;
        }
        table.rows.push_back(std::move(row));
        prev = here;
    }
    if (pmf_sum != 1) {
        throw std::logic_error("pmf does not sum to one");
    }
    table.rows.resize(static_cast<std::size_t>(table.support_max) + 1);
    return table;
}

MomentSummary moments(const DistributionTable& table) {
    MomentSummary out;
    out.mean = 0;
    out.second_moment = 0;
    for (const DistributionRow& row : table.rows) {
        const Rational mass = row.pmf.value();
        out.mean += row.q * mass;
        out.second_moment += row.q * row.q * mass;
    }
    out.variance = out.second_moment - out.mean * out.mean;
    if (out.variance < 0) {
        throw std::logic_error("negative variance from an exact distribution");
    }
    return out;
}

TestResult p_value_at_least(const BinomialCache& binom, const Composition& comp,
                            Definition definition, int m, int observed_q,
                            const Rational& alpha) {
    if (m < 0) {
        throw std::domain_error("rank m must be nonnegative");
    }
    if (observed_q < 0) {
        throw std::domain_error("observed run length must be nonnegative");
    }
    if (alpha <= 0 || alpha > 1) {
        throw std::domain_error("alpha must lie in (0, 1]");
    }

    TestResult result;
    result.statistic_name =
        (definition == Definition::per_letter ? "letter1_l" : "whole_l") + std::to_string(m);
    result.observed_q = observed_q;
    result.alpha = alpha;

    const ExactCount total = arrangement_total(comp);
    if (observed_q == 0) {
        // Every arrangement has all run lengths >= 0.
        result.p_value = Probability(1, 1);
    } else if (definition == Definition::per_letter) {
        result.p_value = Probability(count_Z(binom, comp, observed_q, m), total);
    } else {
        result.p_value = Probability(total - count_Q(binom, comp, observed_q - 1, m), total);
    }
    result.reject = result.p_value.value() <= alpha;
    return result;
}

std::vector<MomentSummary> narrowing_report(const BinomialCache& binom, const Composition& comp,
                                            int m_max) {
    if (m_max < 0) {
        throw std::domain_error("m_max must be nonnegative");
    }
    const int q_hi = comp.max_count();
    const ExactCount total = arrangement_total(comp);

    // batch[q][m] = arrangements with l_m <= q; one sweep is shared by all m.
    std::vector<std::vector<ExactCount>> batch(static_cast<std::size_t>(q_hi) + 1);
    for (int q = 0; q <= q_hi; ++q) {
        batch[static_cast<std::size_t>(q)] = count_Q_batch(binom, comp, q, m_max);
    }

    std::vector<MomentSummary> report;
    report.reserve(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        ExactInt s0(0), s1(0), s2(0);
        ExactCount prev(0);
        for (int q = 0; q <= q_hi; ++q) {
            const ExactCount& here = batch[static_cast<std::size_t>(q)][static_cast<std::size_t>(m)];
            ExactCount mass = here - prev;
            if (mass < 0) {
                throw std::logic_error("cumulative counts decreased");
            }
            s0 += mass;
            s1 += q * mass;
            s2 += q * q * mass;
            prev = here;
        }
        if (s0 != total) {
            throw std::logic_error("distribution does not saturate at the maximal run length");
        }
        MomentSummary summary;
        summary.mean = Rational(s1) / Rational(total);
        summary.second_moment = Rational(s2) / Rational(total);
        summary.variance = summary.second_moment - summary.mean * summary.mean;
        report.push_back(std::move(summary));
    }
    return report;
}

} // namespace runlong
