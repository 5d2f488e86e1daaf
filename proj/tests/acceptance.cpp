// Acceptance gate: seven end-to-end criteria, one line of output each.
// Every expectation is pinned in this file; comparisons are exact unless a
// pinned decimal rendering is stated. A criterion that cannot be met by
// exact counting is reported as FAIL with the computed truth in its detail.

#include "runlong/cli.hpp"
#include "runlong/oracle.hpp"
#include "runlong/stats.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace runlong;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& note) {
        if (!ok) {
            pass = false;
            if (!detail.empty())
                detail += "; ";
            detail += note;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void compositions_into(std::vector<int>& prefix, int remaining, int parts,
                       std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        prefix.push_back(remaining);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int first = 1; first <= remaining - (parts - 1); ++first) {
        prefix.push_back(first);
        compositions_into(prefix, remaining - first, parts - 1, out);
        prefix.pop_back();
    }
}

std::vector<std::vector<int>> grid(int max_total, int max_k) {
    std::vector<std::vector<int>> out;
    std::vector<int> prefix;
    for (int k = 1; k <= max_k; ++k)
        for (int total = k; total <= max_total; ++total)
            compositions_into(prefix, total, k, out);
    return out;
}

PerLetterSpec uniform_spec(int k, int m, int q) {
    PerLetterSpec spec;
    spec.m_vec.assign(static_cast<std::size_t>(k), m);
    spec.q_vec.assign(static_cast<std::size_t>(k), q);
    return spec;
}

// --- 1: reference p-values for a 17-element two-letter system --------------

Outcome criterion_reference_pvalues() {
    Outcome outcome;
    const BinomialCache& binom = shared_binomials(20);
    const Composition comp({10, 7});

    const auto start = std::chrono::steady_clock::now();
    const TestResult longest = p_value_at_least(binom, comp, Definition::per_letter, 0, 7);
    const TestResult second = p_value_at_least(binom, comp, Definition::per_letter, 1, 4);
    const double elapsed = seconds_since(start);

    // Pinned renderings at three decimal places.
    const std::string expected_longest = "0.049";
    const std::string expected_second = "0.041";

    outcome.require(longest.p_value.decimal_places(3) == expected_longest,
                    "P(longest run of letter 1 >= 7) renders as " +
                        longest.p_value.decimal_places(3) + ", pinned " + expected_longest);
    outcome.require(second.p_value.decimal_places(3) == expected_second,
                    "P(second longest run of letter 1 >= 4) = " +
                        second.p_value.ratio_string() + " = " +
                        second.p_value.decimal_places(3) + ", pinned " + expected_second);
    outcome.require(elapsed < 1.0, "exceeded the 1 s budget");

    // Independent ground truth: every one of the 19448 arrangements.
    const ExactCount hits_longest = oracle_count(comp, [](const RunProfile& p) {
        return predicates::letter1_at_least(p, 7, 0);
    });
    const ExactCount hits_second = oracle_count(comp, [](const RunProfile& p) {
        return predicates::letter1_at_least(p, 4, 1);
    });
    outcome.require(Probability(hits_longest, 19448) == longest.p_value,
                    "closed form disagrees with enumeration for the longest run");
    outcome.require(Probability(hits_second, 19448) == second.p_value,
                    "closed form disagrees with enumeration for the second longest run");
    if (!outcome.pass && Probability(hits_second, 19448) == second.p_value)
        outcome.detail += " (enumeration of all 19448 arrangements confirms " +
                          hits_second.get_str() + "/19448; the pinned 0.041 is not attainable)";
    return outcome;
}

// --- 2: moment table for a 500-element two-letter system --------------------

Outcome criterion_moment_table() {
    Outcome outcome;
    const BinomialCache& binom = shared_binomials(510);
    const Composition comp({200, 300});

    const auto start = std::chrono::steady_clock::now();
    const std::vector<MomentSummary> report = narrowing_report(binom, comp, 3);
    const double elapsed = seconds_since(start);

    const char* expected[4][3] = {
        {"10.997", "126.502", "5.562"},
        {"9.072", "84.309", "2.006"},
        {"8.121", "67.115", "1.165"},
        {"7.494", "56.966", "0.809"},
    };
    for (int m = 0; m <= 3; ++m) {
        const MomentSummary& s = report[static_cast<std::size_t>(m)];
        const std::string got[3] = {decimal_fixed(s.mean, 3), decimal_fixed(s.second_moment, 3),
                                    decimal_fixed(s.variance, 3)};
        for (int i = 0; i < 3; ++i)
            outcome.require(got[i] == expected[m][i],
                            "m=" + std::to_string(m) + " column " + std::to_string(i) +
                                ": got " + got[i] + ", pinned " + expected[m][i]);
    }
    outcome.require(elapsed < 600.0, "exceeded the 600 s budget");
    if (outcome.pass)
        outcome.detail = "all 12 values match to 3 decimal places";
    return outcome;
}

// --- 3: closed forms equal enumeration on the full small grid ----------------

Outcome criterion_oracle_grid() {
    Outcome outcome;
    const BinomialCache& binom = shared_binomials(20);
    constexpr int kMaxM = 4;
    long cases = 0;

    for (const std::vector<int>& counts : grid(12, 3)) {
        const Composition comp(counts);
        const int n = comp.total();
        const int k = comp.k();
        const int maxq = comp.max_count();

        std::vector<std::vector<long>> whole_hist(
            kMaxM + 1, std::vector<long>(static_cast<std::size_t>(maxq) + 1, 0));
        std::vector<std::vector<long>> letter_max_hist(
            kMaxM + 1, std::vector<long>(static_cast<std::size_t>(maxq) + 1, 0));
        std::vector<std::vector<long>> letter_eq_hist(
            kMaxM + 1, std::vector<long>(static_cast<std::size_t>(maxq) + 1, 0));
        std::vector<std::vector<long>> z_tally(
            kMaxM + 1, std::vector<long>(static_cast<std::size_t>(maxq) + 2, 0));
        std::vector<long> runs_hist(static_cast<std::size_t>(n) + 1, 0);

        enumerate_profiles(comp, [&](const RunProfile& p) {
            runs_hist[static_cast<std::size_t>(p.total_runs)] += 1;
            for (int m = 0; m <= kMaxM; ++m) {
                whole_hist[static_cast<std::size_t>(m)]
                          [static_cast<std::size_t>(p.whole_level(m))] += 1;
                int max_level = 0;
                bool all_equal = true;
                const int first = p.letter_level(0, m);
                for (int i = 0; i < k; ++i) {
                    const int level = p.letter_level(i, m);
                    max_level = std::max(max_level, level);
                    all_equal = all_equal && level == first;
                }
                letter_max_hist[static_cast<std::size_t>(m)]
                               [static_cast<std::size_t>(max_level)] += 1;
                if (all_equal)
                    letter_eq_hist[static_cast<std::size_t>(m)]
                                  [static_cast<std::size_t>(first)] += 1;
                const std::vector<int>& first_runs = p.per_letter_sorted[0];
                for (int q = 1; q <= maxq + 1; ++q) {
                    const bool enough = static_cast<int>(first_runs.size()) > m &&
                                        first_runs[static_cast<std::size_t>(m)] >= q;
                    if (enough)
                        z_tally[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)] += 1;
                }
            }
        });

        for (int m = 0; m <= kMaxM; ++m) {
            long cum_whole = 0, cum_letter = 0;
            for (int q = 0; q <= n; ++q) {
                const long whole_here =
                    q <= maxq ? whole_hist[static_cast<std::size_t>(m)]
                                          [static_cast<std::size_t>(q)]
                              : 0;
                const long letter_here =
                    q <= maxq ? letter_max_hist[static_cast<std::size_t>(m)]
                                               [static_cast<std::size_t>(q)]
                              : 0;
                const long letter_eq_here =
                    q <= maxq ? letter_eq_hist[static_cast<std::size_t>(m)]
                                              [static_cast<std::size_t>(q)]
                              : 0;
                cum_whole += whole_here;
                cum_letter += letter_here;

                cases += 5;
                if (count_Q(binom, comp, q, m) != cum_whole ||
                    count_W_whole(binom, comp, q, m) != whole_here) {
                    outcome.require(false, "whole-system mismatch at counts=" +
                                               std::to_string(counts[0]) + "..., q=" +
                                               std::to_string(q) + ", m=" + std::to_string(m));
                    return outcome;
                }
                const PerLetterSpec spec = uniform_spec(k, m, q);
                if (count_N(binom, comp, spec) != cum_letter ||
                    count_L(binom, comp, spec) != letter_here ||
                    count_W_per_letter(binom, comp, spec) != letter_eq_here) {
                    outcome.require(false, "per-letter mismatch at q=" + std::to_string(q) +
                                               ", m=" + std::to_string(m));
                    return outcome;
                }
            }
            for (int q = 1; q <= n; ++q) {
                const long z_here =
                    q <= maxq + 1 ? z_tally[static_cast<std::size_t>(m)]
                                           [static_cast<std::size_t>(q)]
                                  : 0;
                ++cases;
                if (count_Z(binom, comp, q, m) != z_here) {
                    outcome.require(false, "letter exceedance mismatch at q=" +
                                               std::to_string(q) + ", m=" + std::to_string(m));
                    return outcome;
                }
            }
        }
        for (int r = 0; r <= n; ++r) {
            ++cases;
            if (count_T(binom, comp, r) != runs_hist[static_cast<std::size_t>(r)]) {
                outcome.require(false, "run-count mismatch at r=" + std::to_string(r));
                return outcome;
            }
        }
    }
    outcome.detail = std::to_string(cases) + " exact comparisons, zero tolerance";
    return outcome;
}

// --- 4: naive and collapsed assemblies agree on randomized instances ---------

Outcome criterion_naive_vs_collapsed() {
    Outcome outcome;
    const BinomialCache& binom = shared_binomials(44);
    std::mt19937 rng(20260819);
    const auto draw = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
    };

    const int instances = 220;
    for (int i = 0; i < instances; ++i) {
        const int k = draw(1, 3);
        std::vector<int> counts(static_cast<std::size_t>(k));
        for (int& c : counts)
            c = draw(1, 40 / k);
        const Composition comp(counts);

        PerLetterSpec spec;
        for (int j = 0; j < k; ++j) {
            spec.m_vec.push_back(draw(0, 2));
            spec.q_vec.push_back(draw(0, comp.max_count()));
        }
        if (count_N(binom, comp, spec) != count_N_naive(binom, comp, spec)) {
            outcome.require(false, "per-letter disagreement at instance " + std::to_string(i));
            return outcome;
        }

        const int m = draw(0, 3);
        const int q = draw(0, comp.max_count());
        if (count_Q(binom, comp, q, m) != count_Q_naive(binom, comp, q, m)) {
            outcome.require(false, "whole-system disagreement at instance " + std::to_string(i));
            return outcome;
        }
    }
    outcome.detail = std::to_string(instances) + " randomized instances with total <= 40";
    return outcome;
}

// --- 5: exact identity suite -------------------------------------------------

Outcome criterion_identities() {
    Outcome outcome;
    const BinomialCache& binom = shared_binomials(44);
    long cases = 0;

    for (const std::vector<int>& counts : grid(10, 3)) {
        const Composition comp(counts);
        const ExactCount total = multinomial(counts);

        for (int m = 0; m <= 4; ++m) {
            ExactCount w_sum = 0;
            for (int q = 0; q <= comp.max_count(); ++q)
                w_sum += count_W_whole(binom, comp, q, m);
            ++cases;
            outcome.require(w_sum == total, "exact-length counts do not sum to the total");

            ExactCount tail = 0;
            for (int r = 0; r <= std::min(m, comp.total()); ++r)
                tail += count_T(binom, comp, r);
            ++cases;
            outcome.require(count_Q(binom, comp, 0, m) == tail,
                            "q=0 whole-system count is not the low-run tail");
        }

        for (int q = 0; q <= comp.max_count(); ++q) {
            ++cases;
            outcome.require(count_N(binom, comp, uniform_spec(comp.k(), 0, q)) ==
                                count_Q(binom, comp, q, 0),
                            "per-letter and whole-system longest runs disagree at m=0");
        }
        if (!outcome.pass)
            return outcome;
    }

    for (int r1 = 1; r1 <= 20; ++r1)
        for (int r2 = 1; r2 <= 20; ++r2) {
            ++cases;
            outcome.require(separator_F(binom, {r1, r2}) == binom.general(2, r1 - r2 + 1),
                            "two-letter separator count missed its closed form");
        }

    for (int n = 1; n <= 20; ++n)
        for (int q = 0; q <= n; ++q)
            for (int r = 1; r <= n; ++r) {
                ExactCount sum = 0;
                for (int m = 0; m <= r; ++m)
                    sum += single_exactly(binom, n, q, r, m);
                ++cases;
                outcome.require(sum == compositions(binom, n, r),
                                "exact kernels do not complete");
            }

    // The two definitions must part ways for some m > 0: find the smallest
    // witness by search rather than pinning one.
    bool found = false;
    std::string witness;
    for (int total = 2; total <= 8 && !found; ++total)
        for (int k = 2; k <= 3 && !found; ++k) {
            std::vector<std::vector<int>> comps;
            std::vector<int> prefix;
            if (total >= k)
                compositions_into(prefix, total, k, comps);
            for (const std::vector<int>& counts : comps) {
                const Composition comp(counts);
                for (int m = 1; m <= 3 && !found; ++m)
                    for (int q = 0; q <= comp.max_count() && !found; ++q) {
                        const ExactCount n_val =
                            count_N(binom, comp, uniform_spec(comp.k(), m, q));
                        const ExactCount q_val = count_Q(binom, comp, q, m);
                        if (n_val != q_val) {
                            found = true;
                            std::ostringstream note;
                            note << "witness: counts=(";
                            for (std::size_t i = 0; i < counts.size(); ++i)
                                note << (i ? "," : "") << counts[i];
                            note << "), m=" << m << ", q=" << q << ": per-letter " << n_val
                                 << " vs whole " << q_val;
                            witness = note.str();
                        }
                    }
                if (found)
                    break;
            }
        }
    ++cases;
    outcome.require(found, "no divergence witness found for m > 0");
    outcome.detail = std::to_string(cases) + " identities; " + witness;
    return outcome;
}

// --- 6: Monte Carlo consistency ----------------------------------------------

Outcome criterion_monte_carlo() {
    Outcome outcome;
    const BinomialCache& binom = shared_binomials(110);
    const Composition comp({50, 50});
    const int draws = 100000;
    const std::uint64_t seed = 20260819;

    std::vector<long> at_most(13, 0); // at_most[q]: samples with longest run <= q
    ProfileSampler sampler(comp, seed);
    for (int i = 0; i < draws; ++i) {
        const int longest = sampler.next().whole_level(0);
        for (int q = 3; q <= 12; ++q)
            if (longest <= q)
                ++at_most[static_cast<std::size_t>(q)];
    }

    const ExactCount total = multinomial({50, 50});
    for (int q = 3; q <= 12; ++q) {
        const Probability exact(count_Q(binom, comp, q, 0), total);
        const Rational p = exact.value();
        const Rational empirical = Rational(at_most[static_cast<std::size_t>(q)], draws);
        const Rational diff = empirical - p;
        // within 4 standard errors: diff^2 <= 16 p (1-p) / draws, exactly
        const Rational bound = Rational(16) * p * (Rational(1) - p) / draws;
        outcome.require(diff * diff <= bound,
                        "q=" + std::to_string(q) + ": empirical " + decimal_sig(empirical, 5) +
                            " vs exact " + decimal_sig(p, 5) + " is beyond 4 standard errors");
    }
    if (outcome.pass)
        outcome.detail = "100000 seeded draws, all ten thresholds within 4 standard errors";
    return outcome;
}

// --- 7: distribution series emitted for plotting are unimodal and narrow -----

Outcome criterion_plot_series() {
    Outcome outcome;
    const BinomialCache& binom = shared_binomials(510);
    const Composition comp({200, 300});

    Rational previous_variance;
    for (int m = 0; m <= 3; ++m) {
        const DistributionTable table =
            pmf_table(binom, comp, Definition::whole_system, {m});

        // Exact unimodality: nondecreasing up to a peak, nonincreasing after.
        int direction = 1;
        bool unimodal = true;
        for (std::size_t i = 1; i < table.rows.size() && unimodal; ++i) {
            const Rational& a = table.rows[i - 1].pmf.value();
            const Rational& b = table.rows[i].pmf.value();
            if (direction == 1 && b < a)
                direction = -1;
            else if (direction == -1 && b > a)
                unimodal = false;
        }
        outcome.require(unimodal, "series m=" + std::to_string(m) + " is not unimodal");

        const MomentSummary summary = moments(table);
        if (m > 0)
            outcome.require(summary.variance < previous_variance,
                            "variance did not shrink at m=" + std::to_string(m));
        previous_variance = summary.variance;

        // The CLI must emit exactly this series in plot form.
        std::ostringstream out, err;
        const int code = runlong::cli::run_args({"pmf", "--counts", "200,300", "--m",
                                                 std::to_string(m), "--format", "plot"},
                                                out, err);
        outcome.require(code == 0, "plot emission failed for m=" + std::to_string(m));
        std::istringstream lines(out.str());
        std::string line;
        std::getline(lines, line);
        outcome.require(line == "# q probability", "plot header is wrong");
        for (const DistributionRow& row : table.rows) {
            std::getline(lines, line);
            outcome.require(line == std::to_string(row.q) + " " + row.pmf.decimal(6),
                            "plot row mismatch at q=" + std::to_string(row.q));
        }
        outcome.require(!std::getline(lines, line), "plot has trailing rows");
        if (!outcome.pass)
            return outcome;
    }
    outcome.detail = "four series, exact unimodality and strictly shrinking variance";
    return outcome;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"reference p-values (17-element two-letter system)", criterion_reference_pvalues},
        {"moment table for counts 200,300 to 3 decimal places", criterion_moment_table},
        {"closed forms equal enumeration (total <= 12, k <= 3)", criterion_oracle_grid},
        {"naive and collapsed assemblies agree on random instances", criterion_naive_vs_collapsed},
        {"exact identity suite", criterion_identities},
        {"Monte Carlo consistency for counts 50,50", criterion_monte_carlo},
        {"plot series are unimodal with shrinking variance", criterion_plot_series},
    };

    int failures = 0;
    const int total = static_cast<int>(sizeof(criteria) / sizeof(criteria[0]));
    for (int i = 0; i < total; ++i) {
        const auto start = std::chrono::steady_clock::now();
        const Outcome outcome = criteria[i].run();
        const double elapsed = seconds_since(start);
        if (!outcome.pass)
            ++failures;
        std::printf("[%d/%d] %s: %s (%.2f s)%s%s\n", i + 1, total,
                    outcome.pass ? "PASS" : "FAIL", criteria[i].name, elapsed,
                    outcome.detail.empty() ? "" : " - ", outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", total - failures, total);
    return failures == 0 ? 0 : 1;
}
