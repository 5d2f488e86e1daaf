#include "runlong/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

namespace runlong::cli {

namespace {

using json = nlohmann::ordered_json;

// Validation failure with a machine-readable code for the error record.
struct CliError : std::runtime_error {
    CliError(std::string code_, const std::string& message, int exit_code_ = 2)
        : std::runtime_error(message), code(std::move(code_)), exit_code(exit_code_) {}

    std::string code;
    int exit_code;
};

int emit_error(std::ostream& out, std::ostream& err, const std::string& code,
               const std::string& message, int exit_code) {
    json record;
    record["error"] = {{"code", code}, {"message", message}};
    out << record.dump(2) << "\n";
    err << "error (" << code << "): " << message << "\n";
    return exit_code;
}

std::string definition_name(Definition d) {
    return d == Definition::per_letter ? "per-letter" : "whole";
}

std::string ratio_string(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

json rational_node(const Rational& x, int digits) {
    return {{"ratio", ratio_string(x)}, {"decimal", decimal_sig(x, digits)}};
}

json probability_node(const Probability& p, int digits) {
    return {{"ratio", p.ratio_string()}, {"decimal", p.decimal(digits)}};
}

int scalar_of(const std::vector<int>& v, const char* flag) {
    if (v.size() != 1)
        throw CliError("invalid_arity", std::string(flag) + " must be a single value here");
    return v[0];
}

std::vector<int> vector_of(const std::vector<int>& v, int k, const char* flag) {
    if (static_cast<int>(v.size()) != k)
        throw CliError("invalid_arity", std::string(flag) + " needs one entry per letter (k = " +
                                            std::to_string(k) + ", got " +
                                            std::to_string(v.size()) + ")");
    return v;
}

// m defaults to zeros of the arity the command needs; q never defaults.
std::vector<int> m_or_default(const std::vector<int>& m_vec, int arity, const char* flag) {
    if (m_vec.empty())
        return std::vector<int>(static_cast<std::size_t>(arity), 0);
    return vector_of(m_vec, arity, flag);
}

const std::vector<int>& require_given(const std::vector<int>& v, const char* flag) {
    if (v.empty())
        throw CliError("bad_arguments", std::string(flag) + " is required for this command");
    return v;
}

void check_counts(const JobConfig& cfg) {
    if (cfg.counts.empty())
        throw CliError("invalid_arity", "--counts needs at least one letter count");
    for (int n : cfg.counts)
        if (n < 1)
            throw CliError("empty_letter", "letter counts must be positive; got " +
                                               std::to_string(n));
}

// The result of one command: a JSON document plus tabular and plot views.
struct CommandOutput {
    json payload;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> cells;
    std::vector<std::pair<int, std::string>> plot_points;
    bool plot_ok = false;
    int exit_code = 0;
};

// ---------------------------------------------------------------- count ----

CommandOutput cmd_count(const JobConfig& cfg, const BinomialCache& binom) {
    check_counts(cfg);
    Composition comp(cfg.counts);
    std::string stat = cfg.stat;
    std::transform(stat.begin(), stat.end(), stat.begin(),
                   [](unsigned char c) { return std::toupper(c); });

    CommandOutput result;
    result.payload["command"] = "count";
    result.payload["statistic"] = stat;
    result.payload["counts"] = cfg.counts;

    const ExactCount total = multinomial(cfg.counts);
    ExactCount value;

    if (stat == "N" || stat == "L" || (stat == "W" && cfg.definition == Definition::per_letter)) {
        PerLetterSpec spec;
        spec.m_vec = m_or_default(cfg.m_vec, comp.k(), "--m");
        spec.q_vec = vector_of(require_given(cfg.q_vec, "--q"), comp.k(), "--q");
        result.payload["definition"] = "per-letter";
        result.payload["m"] = spec.m_vec;
        result.payload["q"] = spec.q_vec;
        if (stat == "N")
            value = count_N(binom, comp, spec);
        else if (stat == "L")
            value = count_L(binom, comp, spec);
        else
            value = count_W_per_letter(binom, comp, spec);
    } else if (stat == "Z") {
        const int m = scalar_of(m_or_default(cfg.m_vec, 1, "--m"), "--m");
        const int q = scalar_of(require_given(cfg.q_vec, "--q"), "--q");
        if (cfg.letter < 1 || cfg.letter > comp.k())
            throw CliError("bad_arguments", "--letter must be between 1 and k");
        result.payload["definition"] = "per-letter";
        result.payload["letter"] = cfg.letter;
        result.payload["m"] = m;
        result.payload["q"] = q;
        value = count_Z(binom, comp.with_letter_first(cfg.letter - 1), q, m);
    } else if (stat == "Q" || stat == "W") {
        const int m = scalar_of(m_or_default(cfg.m_vec, 1, "--m"), "--m");
        const int q = scalar_of(require_given(cfg.q_vec, "--q"), "--q");
        result.payload["definition"] = "whole";
        result.payload["m"] = m;
        result.payload["q"] = q;
        value = stat == "Q" ? count_Q(binom, comp, q, m) : count_W_whole(binom, comp, q, m);
    } else if (stat == "T") {
        if (cfg.run_count < 0)
            throw CliError("bad_arguments", "--stat T needs --r, the total run count");
        result.payload["r"] = cfg.run_count;
        value = count_T(binom, comp, cfg.run_count);
    } else {
        throw CliError("bad_arguments", "--stat must be one of N, L, W, Z, Q, T");
    }

    const Probability prob(value, total);
    result.payload["count"] = value.get_str();
    result.payload["total"] = total.get_str();
    result.payload["probability"] = probability_node(prob, cfg.digits);

    result.columns = {"statistic", "count", "total", "ratio", "decimal"};
    result.cells.push_back(
        {stat, value.get_str(), total.get_str(), prob.ratio_string(), prob.decimal(cfg.digits)});
    return result;
}

// ------------------------------------------------------ pmf, cdf, moments ----

std::vector<int> distribution_m(const JobConfig& cfg, const Composition& comp) {
    const int arity = cfg.definition == Definition::per_letter ? comp.k() : 1;
    return m_or_default(cfg.m_vec, arity, "--m");
}

void put_m_field(json& payload, const JobConfig& cfg, const std::vector<int>& m_vec) {
    if (cfg.definition == Definition::per_letter)
        payload["m"] = m_vec;
    else
        payload["m"] = m_vec[0];
}

CommandOutput cmd_distribution(const JobConfig& cfg, const BinomialCache& binom, bool want_cdf) {
    check_counts(cfg);
    Composition comp(cfg.counts);
    const std::vector<int> m_vec = distribution_m(cfg, comp);
    const DistributionTable table = pmf_table(binom, comp, cfg.definition, m_vec);

    CommandOutput result;
    result.payload["command"] = want_cdf ? "cdf" : "pmf";
    result.payload["counts"] = cfg.counts;
    result.payload["definition"] = definition_name(cfg.definition);
    put_m_field(result.payload, cfg, m_vec);
    result.payload["support_max"] = table.support_max;
    result.payload["total"] = table.total.get_str();

    json rows = json::array();
    result.columns = {"q", "pmf_ratio", "pmf_decimal", "cdf_ratio", "cdf_decimal"};
    for (const DistributionRow& row : table.rows) {
        rows.push_back({{"q", row.q},
                        {"pmf", probability_node(row.pmf, cfg.digits)},
                        {"cdf", probability_node(row.cdf, cfg.digits)}});
        result.cells.push_back({std::to_string(row.q), row.pmf.ratio_string(),
                                row.pmf.decimal(cfg.digits), row.cdf.ratio_string(),
                                row.cdf.decimal(cfg.digits)});
        const Probability& plotted = want_cdf ? row.cdf : row.pmf;
        result.plot_points.emplace_back(row.q, plotted.decimal(cfg.digits));
    }
    result.payload["rows"] = std::move(rows);
    result.plot_ok = true;
    return result;
}

CommandOutput cmd_moments(const JobConfig& cfg, const BinomialCache& binom) {
    check_counts(cfg);
    Composition comp(cfg.counts);
    const std::vector<int> m_vec = distribution_m(cfg, comp);
    const MomentSummary summary = moments(pmf_table(binom, comp, cfg.definition, m_vec));

    CommandOutput result;
    result.payload["command"] = "moments";
    result.payload["counts"] = cfg.counts;
    result.payload["definition"] = definition_name(cfg.definition);
    put_m_field(result.payload, cfg, m_vec);
    result.payload["mean"] = rational_node(summary.mean, cfg.digits);
    result.payload["second_moment"] = rational_node(summary.second_moment, cfg.digits);
    result.payload["variance"] = rational_node(summary.variance, cfg.digits);

    result.columns = {"statistic", "ratio", "decimal"};
    result.cells = {
        {"mean", ratio_string(summary.mean), decimal_sig(summary.mean, cfg.digits)},
        {"second_moment", ratio_string(summary.second_moment),
         decimal_sig(summary.second_moment, cfg.digits)},
        {"variance", ratio_string(summary.variance), decimal_sig(summary.variance, cfg.digits)},
    };
    return result;
}

// --------------------------------------------------------------- pvalue ----

CommandOutput cmd_pvalue(const JobConfig& cfg, const BinomialCache& binom) {
    check_counts(cfg);
    Composition comp(cfg.counts);
    const int m = scalar_of(m_or_default(cfg.m_vec, 1, "--m"), "--m");
    const int observed = scalar_of(require_given(cfg.q_vec, "--q"), "--q");

    Composition tested = comp;
    if (cfg.definition == Definition::per_letter) {
        if (cfg.letter < 1 || cfg.letter > comp.k())
            throw CliError("bad_arguments", "--letter must be between 1 and k");
        tested = comp.with_letter_first(cfg.letter - 1);
    }

    const TestResult test =
        p_value_at_least(binom, tested, cfg.definition, m, observed, cfg.alpha);
    const std::string name =
        (cfg.definition == Definition::per_letter ? "letter" + std::to_string(cfg.letter)
                                                  : std::string("whole")) +
        "_l" + std::to_string(m);

    CommandOutput result;
    result.payload["command"] = "pvalue";
    result.payload["statistic"] = name;
    result.payload["counts"] = cfg.counts;
    result.payload["definition"] = definition_name(cfg.definition);
    if (cfg.definition == Definition::per_letter)
        result.payload["letter"] = cfg.letter;
    result.payload["m"] = m;
    result.payload["q"] = observed;
    result.payload["p_value"] = probability_node(test.p_value, cfg.digits);
    result.payload["alpha"] = rational_node(test.alpha, cfg.digits);
    result.payload["reject"] = test.reject;

    result.columns = {"statistic", "observed_q", "p_ratio", "p_decimal", "alpha", "reject"};
    result.cells.push_back({name, std::to_string(observed), test.p_value.ratio_string(),
                            test.p_value.decimal(cfg.digits), ratio_string(test.alpha),
                            test.reject ? "true" : "false"});
    return result;
}

// ---------------------------------------------------------------- table ----

CommandOutput cmd_table(const JobConfig& cfg, const BinomialCache& binom) {
    check_counts(cfg);
    if (cfg.definition != Definition::whole_system)
        throw CliError("bad_arguments", "the moment table is defined for --definition whole");
    if (cfg.m_max < 0)
        throw CliError("bad_arguments", "--m-max must be nonnegative");
    Composition comp(cfg.counts);
    const std::vector<MomentSummary> report = narrowing_report(binom, comp, cfg.m_max);

    CommandOutput result;
    result.payload["command"] = "table";
    result.payload["counts"] = cfg.counts;
    result.payload["definition"] = "whole";
    result.payload["m_max"] = cfg.m_max;

    json rows = json::array();
    result.columns = {"m",
                      "mean_ratio",
                      "mean_decimal",
                      "second_moment_ratio",
                      "second_moment_decimal",
                      "variance_ratio",
                      "variance_decimal"};
    for (int m = 0; m <= cfg.m_max; ++m) {
        const MomentSummary& s = report[static_cast<std::size_t>(m)];
        rows.push_back({{"m", m},
                        {"mean", rational_node(s.mean, cfg.digits)},
                        {"second_moment", rational_node(s.second_moment, cfg.digits)},
                        {"variance", rational_node(s.variance, cfg.digits)}});
        result.cells.push_back({std::to_string(m), ratio_string(s.mean),
                                decimal_sig(s.mean, cfg.digits), ratio_string(s.second_moment),
                                decimal_sig(s.second_moment, cfg.digits),
                                ratio_string(s.variance), decimal_sig(s.variance, cfg.digits)});
    }
    result.payload["rows"] = std::move(rows);
    return result;
}

// --------------------------------------------------------------- verify ----

struct IdentityResult {
    std::string name;
    long cases = 0;
    bool pass = true;

    void check(bool ok) {
        ++cases;
        if (!ok)
            pass = false;
    }
};

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

std::vector<std::vector<int>> verify_grid(int max_total, int max_k) {
    std::vector<std::vector<int>> grid;
    std::vector<int> prefix;
    for (int k = 1; k <= max_k; ++k)
        for (int total = k; total <= max_total; ++total)
            compositions_into(prefix, total, k, grid);
    return grid;
}

CommandOutput cmd_verify(const JobConfig& cfg, const BinomialCache& binom) {
    if (cfg.max_total < 1 || cfg.max_k < 1)
        throw CliError("bad_arguments", "--max-total and --max-k must be positive");

    constexpr int kWholeM = 3;    // whole-system ranks checked: 0..3
    constexpr int kLetterM = 1;   // per-letter ranks checked: 0..1
    constexpr int kSamples = 200; // sampler draws

    IdentityResult id_q{"count_Q matches enumeration"};
    IdentityResult id_w_whole{"count_W_whole matches enumeration"};
    IdentityResult id_t{"count_T matches enumeration"};
    IdentityResult id_z{"count_Z matches enumeration"};
    IdentityResult id_n{"count_N matches enumeration"};
    IdentityResult id_l{"count_L matches enumeration"};
    IdentityResult id_w_letter{"count_W_per_letter matches enumeration"};
    IdentityResult id_w_sum{"count_W_whole sums to the arrangement total"};
    IdentityResult id_tail{"count_Q at q=0 equals the run-count tail"};
    IdentityResult id_nq{"count_N at m=0 equals count_Q"};
    IdentityResult id_f{"pairwise separator count matches its closed form"};
    IdentityResult id_kernel{"exact kernels sum to all compositions"};
    IdentityResult id_naive{"naive and collapsed assemblies agree"};
    IdentityResult id_sampler{"sampler yields valid arrangements"};

    const std::vector<std::vector<int>> grid = verify_grid(cfg.max_total, cfg.max_k);

    for (const std::vector<int>& counts : grid) {
        const Composition comp(counts);
        const int n = comp.total();
        const int k = comp.k();
        const int maxq = comp.max_count();

        // One enumeration pass per composition; every identity below reads
        // from these tallies.
        std::vector<std::vector<long>> whole_hist(
            kWholeM + 1, std::vector<long>(static_cast<std::size_t>(maxq) + 1, 0));
        std::vector<std::vector<long>> letter_max_hist(
            kLetterM + 1, std::vector<long>(static_cast<std::size_t>(maxq) + 1, 0));
        std::vector<std::vector<long>> letter_eq_hist(
            kLetterM + 1, std::vector<long>(static_cast<std::size_t>(maxq) + 1, 0));
        std::vector<long> runs_hist(static_cast<std::size_t>(n) + 1, 0);
        std::vector<std::vector<long>> z_tally(
            kLetterM + 1, std::vector<long>(static_cast<std::size_t>(maxq) + 1, 0));
        long profiles = 0;

        enumerate_profiles(
            comp,
            [&](const RunProfile& p) {
                ++profiles;
                for (int m = 0; m <= kWholeM; ++m)
                    ++whole_hist[static_cast<std::size_t>(m)]
                                [static_cast<std::size_t>(p.whole_level(m))];
                runs_hist[static_cast<std::size_t>(p.total_runs)] += 1;
                for (int m = 0; m <= kLetterM; ++m) {
                    int max_level = 0;
                    bool all_equal = true;
                    const int first = p.letter_level(0, m);
                    for (int i = 0; i < k; ++i) {
                        const int level = p.letter_level(i, m);
                        max_level = std::max(max_level, level);
                        all_equal = all_equal && level == first;
                    }
                    ++letter_max_hist[static_cast<std::size_t>(m)]
                                     [static_cast<std::size_t>(max_level)];
                    if (all_equal)
                        ++letter_eq_hist[static_cast<std::size_t>(m)]
                                        [static_cast<std::size_t>(first)];
                    for (int q = 1; q <= maxq; ++q)
                        if (predicates::letter1_at_least(p, q, m))
                            z_tally[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)] += 1;
                }
            },
            cfg.cap);

        const ExactCount total = multinomial(counts);
        id_sampler.check(profiles == total);

        // Whole-system identities.
        for (int m = 0; m <= kWholeM; ++m) {
            long cum = 0;
            ExactCount w_sum = 0;
            for (int q = 0; q <= maxq; ++q) {
                cum += whole_hist[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)];
                id_q.check(count_Q(binom, comp, q, m) == cum);
                const ExactCount w = count_W_whole(binom, comp, q, m);
                id_w_whole.check(
                    w == whole_hist[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)]);
                w_sum += w;
                if (m <= 2)
                    id_naive.check(count_Q_naive(binom, comp, q, m) ==
                                   count_Q(binom, comp, q, m));
            }
            id_w_sum.check(w_sum == total);

            ExactCount tail = 0;
            for (int r = 0; r <= std::min(m, n); ++r)
                tail += count_T(binom, comp, r);
            id_tail.check(count_Q(binom, comp, 0, m) == tail);
        }

        for (int r = 0; r <= n; ++r)
            id_t.check(count_T(binom, comp, r) == runs_hist[static_cast<std::size_t>(r)]);

        // Per-letter identities with uniform bounds.
        for (int m = 0; m <= kLetterM; ++m) {
            PerLetterSpec spec;
            spec.m_vec.assign(static_cast<std::size_t>(k), m);
            spec.q_vec.assign(static_cast<std::size_t>(k), 0);
            long cum = 0;
            for (int q = 0; q <= maxq; ++q) {
                spec.q_vec.assign(static_cast<std::size_t>(k), q);
                cum += letter_max_hist[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)];
                const ExactCount n_count = count_N(binom, comp, spec);
                id_n.check(n_count == cum);
                id_l.check(count_L(binom, comp, spec) ==
                           letter_max_hist[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)]);
                id_w_letter.check(
                    count_W_per_letter(binom, comp, spec) ==
                    letter_eq_hist[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)]);
                id_naive.check(count_N_naive(binom, comp, spec) == n_count);
                if (m == 0)
                    id_nq.check(n_count == count_Q(binom, comp, q, 0));
            }
            for (int q = 1; q <= maxq; ++q)
                id_z.check(count_Z(binom, comp, q, m) ==
                           z_tally[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)]);
        }
    }

    // Formula-level identities, independent of any composition.
    for (int r1 = 1; r1 <= cfg.max_total; ++r1)
        for (int r2 = 1; r2 <= cfg.max_total; ++r2)
            id_f.check(separator_F(binom, {r1, r2}) == binom.general(2, r1 - r2 + 1));

    for (int n = 1; n <= cfg.max_total; ++n)
        for (int q = 0; q <= n; ++q)
            for (int r = 1; r <= n; ++r) {
                ExactCount sum = 0;
                for (int m = 0; m <= r; ++m)
                    sum += single_exactly(binom, n, q, r, m);
                id_kernel.check(sum == compositions(binom, n, r));
            }

    // Seeded sampling: profiles must validate, and a fixed seed must
    // reproduce the same first draw.
    {
        std::vector<int> counts(static_cast<std::size_t>(cfg.max_k), 0);
        int left = cfg.max_total;
        for (int i = 0; left > 0; i = (i + 1) % cfg.max_k) {
            ++counts[static_cast<std::size_t>(i)];
            --left;
        }
        counts.erase(std::remove(counts.begin(), counts.end(), 0), counts.end());
        const Composition comp(counts);
        const std::uint64_t seed = cfg.seed.value_or(12345);
        ProfileSampler sampler(comp, seed);
        bool ok = true;
        try {
            for (int i = 0; i < kSamples; ++i)
                sampler.next().validate(comp);
        } catch (const std::logic_error&) {
            ok = false;
        }
        ProfileSampler replay_a(comp, seed), replay_b(comp, seed);
        const RunProfile first_a = replay_a.next();
        const RunProfile first_b = replay_b.next();
        ok = ok && first_a.whole_sorted == first_b.whole_sorted &&
             first_a.per_letter_sorted == first_b.per_letter_sorted;
        id_sampler.cases += kSamples + 1;
        if (!ok)
            id_sampler.pass = false;
    }

    const std::vector<IdentityResult> identities = {
        id_q,   id_w_whole, id_t,    id_z,      id_n,     id_l,      id_w_letter,
        id_w_sum, id_tail,  id_nq,   id_f,      id_kernel, id_naive, id_sampler};

    CommandOutput result;
    result.payload["command"] = "verify";
    result.payload["max_total"] = cfg.max_total;
    result.payload["max_k"] = cfg.max_k;
    result.payload["cap"] = cfg.cap;
    result.payload["seed"] = cfg.seed.value_or(12345);

    bool all_pass = true;
    json rows = json::array();
    result.columns = {"identity", "cases", "pass"};
    for (const IdentityResult& id : identities) {
        rows.push_back({{"name", id.name}, {"cases", id.cases}, {"pass", id.pass}});
        result.cells.push_back({id.name, std::to_string(id.cases), id.pass ? "true" : "false"});
        all_pass = all_pass && id.pass;
    }
    result.payload["identities"] = std::move(rows);
    result.payload["all_pass"] = all_pass;
    result.exit_code = all_pass ? 0 : 1;
    return result;
}

// ------------------------------------------------------------- rendering ----

std::string join_cells(const std::vector<std::string>& cells, char sep) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0)
            line += sep;
        line += cells[i];
    }
    return line;
}

std::string render(const JobConfig& cfg, const CommandOutput& output) {
    switch (cfg.format) {
    case Format::json:
        return output.payload.dump(2) + "\n";
    case Format::csv:
    case Format::tsv: {
        const char sep = cfg.format == Format::csv ? ',' : '\t';
        std::string text = join_cells(output.columns, sep) + "\n";
        for (const std::vector<std::string>& row : output.cells)
            text += join_cells(row, sep) + "\n";
        return text;
    }
    case Format::plot: {
        if (!output.plot_ok)
            throw CliError("bad_arguments", "--format plot is only available for pmf and cdf");
        std::string text = "# q probability\n";
        for (const auto& [q, p] : output.plot_points)
            text += std::to_string(q) + " " + p + "\n";
        return text;
    }
    }
    throw CliError("bad_arguments", "unknown output format");
}

int cache_rows_needed(const JobConfig& cfg) {
    int need = 64;
    if (cfg.command == Command::verify) {
        need = std::max(need, cfg.max_total + 2);
    } else {
        long total = 0;
        for (int n : cfg.counts)
            total += std::max(n, 0);
        if (total > 1'000'000)
            throw CliError("bad_arguments", "total sequence length is too large");
        need = std::max(need, static_cast<int>(total) + 2);
    }
    if (const char* env = std::getenv("RUNLONG_CACHE_ROWS")) {
        char* end = nullptr;
        const long rows = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && rows > need && rows <= 2'000'000)
            need = static_cast<int>(rows);
    }
    return need;
}

} // namespace

int run(const JobConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.digits < 1 || config.digits > 50)
            throw CliError("bad_arguments", "--digits must be between 1 and 50");

        const BinomialCache& binom = shared_binomials(cache_rows_needed(config));

        CommandOutput output;
        switch (config.command) {
        case Command::count:
            output = cmd_count(config, binom);
            break;
        case Command::pmf:
            output = cmd_distribution(config, binom, false);
            break;
        case Command::cdf:
            output = cmd_distribution(config, binom, true);
            break;
        case Command::moments:
            output = cmd_moments(config, binom);
            break;
        case Command::pvalue:
            output = cmd_pvalue(config, binom);
            break;
        case Command::verify:
            output = cmd_verify(config, binom);
            break;
        case Command::table:
            output = cmd_table(config, binom);
            break;
        }

        const std::string text = render(config, output);
        if (!config.out_path.empty()) {
            std::ofstream file(config.out_path, std::ios::binary);
            if (!file)
                throw CliError("bad_arguments", "cannot open output file: " + config.out_path);
            file << text;
            if (!file.flush())
                throw CliError("bad_arguments", "cannot write output file: " + config.out_path);
        } else {
            out << text;
        }
        return output.exit_code;
    } catch (const EnumerationCapExceeded& e) {
        return emit_error(out, err, "cap_exceeded", e.what(), 3);
    } catch (const CliError& e) {
        return emit_error(out, err, e.code, e.what(), e.exit_code);
    } catch (const std::exception& e) {
        return emit_error(out, err, "bad_arguments", e.what(), 2);
    }
}

namespace {

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
    std::vector<int> values;
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            std::size_t used = 0;
            const int value = std::stoi(token, &used);
            if (used != token.size())
                throw std::invalid_argument(token);
            values.push_back(value);
        } catch (const std::exception&) {
            throw CliError("bad_arguments", std::string(flag) + ": invalid integer '" + token + "'");
        }
    }
    if (values.empty())
        throw CliError("bad_arguments", std::string(flag) + ": empty value list");
    return values;
}

Rational parse_rational(const std::string& text, const char* flag) {
    try {
        const std::size_t dot = text.find('.');
        if (dot == std::string::npos) {
            Rational r(text); // handles "3" and "1/20"
            if (sgn(r.get_den()) == 0)
                throw std::invalid_argument(text);
            r.canonicalize();
            return r;
        }
        const std::string head = text.substr(0, dot);
        const std::string frac = text.substr(dot + 1);
        if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument(text);
        const std::string digits = (head.empty() ? "0" : head) + frac;
        ExactInt num(digits, 10);
        ExactInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Rational r(num, den);
        r.canonicalize();
        return r;
    } catch (const CliError&) {
        throw;
    } catch (const std::exception&) {
        throw CliError("bad_arguments", std::string(flag) + ": invalid rational '" + text + "'");
    }
}

Definition parse_definition(const std::string& text) {
    if (text == "per-letter")
        return Definition::per_letter;
    if (text == "whole")
        return Definition::whole_system;
    throw CliError("bad_arguments", "--definition must be 'per-letter' or 'whole'");
}

Format parse_format(const std::string& text) {
    if (text == "json")
        return Format::json;
    if (text == "csv")
        return Format::csv;
    if (text == "tsv")
        return Format::tsv;
    if (text == "plot")
        return Format::plot;
    throw CliError("bad_arguments", "--format must be json, csv, tsv, or plot");
}

std::uint64_t parse_seed(const std::string& text) {
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
        return static_cast<std::uint64_t>(value);
    } catch (const std::exception&) {
        throw CliError("bad_arguments", "--seed: invalid unsigned integer '" + text + "'");
    }
}

} // namespace

int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact distributions of longest-run statistics in random sequences"};
    app.require_subcommand(1);

    std::string counts_str, m_str, q_str, alpha_str, def_str = "whole", fmt_str = "json";
    std::string seed_str, stat_str, out_path;
    int digits = 6, run_count = -1, letter = 1, m_max = 3, max_total = 8, max_k = 3;
    long cap = kDefaultEnumerationCap;

    const auto add_output_flags = [&](CLI::App* sub) {
        sub->add_option("--format", fmt_str, "Output format: json, csv, tsv, plot");
        sub->add_option("--digits", digits, "Significant digits for decimal fields");
        sub->add_option("--out", out_path, "Write the output document to a file");
    };

    CLI::App* c_count = app.add_subcommand("count", "One exact count and its probability");
    c_count->add_option("--counts", counts_str, "Letter counts, e.g. 10,7")->required();
    c_count->add_option("--stat", stat_str, "Statistic: N, L, W, Z, Q, or T")->required();
    c_count->add_option("--definition", def_str, "per-letter or whole (selects the W flavor)");
    c_count->add_option("--m", m_str, "Rank(s) m; vector for per-letter statistics");
    c_count->add_option("--q", q_str, "Run-length bound(s)");
    c_count->add_option("--r", run_count, "Total run count (stat T only)");
    c_count->add_option("--letter", letter, "Target letter, 1-based (stat Z only)");
    add_output_flags(c_count);

    CLI::App* c_pmf = app.add_subcommand("pmf", "Exact distribution of the run statistic");
    CLI::App* c_cdf = app.add_subcommand("cdf", "Exact cumulative distribution");
    CLI::App* c_moments = app.add_subcommand("moments", "Exact mean, second moment, variance");
    for (CLI::App* sub : {c_pmf, c_cdf, c_moments}) {
        sub->add_option("--counts", counts_str, "Letter counts, e.g. 10,7")->required();
        sub->add_option("--definition", def_str, "per-letter or whole");
        sub->add_option("--m", m_str, "Rank(s) m; vector for per-letter");
        add_output_flags(sub);
    }

    CLI::App* c_pvalue = app.add_subcommand("pvalue", "Exact exceedance test for one statistic");
    c_pvalue->add_option("--counts", counts_str, "Letter counts, e.g. 10,7")->required();
    c_pvalue->add_option("--definition", def_str, "per-letter or whole");
    c_pvalue->add_option("--letter", letter, "Tested letter, 1-based (per-letter only)");
    c_pvalue->add_option("--m", m_str, "Rank m of the tested run");
    c_pvalue->add_option("--q", q_str, "Observed run length")->required();
    c_pvalue->add_option("--alpha", alpha_str, "Significance level, e.g. 1/20 or 0.05");
    add_output_flags(c_pvalue);

    CLI::App* c_verify = app.add_subcommand("verify", "Check the closed forms against brute force");
    c_verify->add_option("--max-total", max_total, "Largest sequence length in the grid");
    c_verify->add_option("--max-k", max_k, "Largest letter-type count in the grid");
    c_verify->add_option("--cap", cap, "Enumeration cap per composition");
    c_verify->add_option("--seed", seed_str, "Seed for the sampling check");
    add_output_flags(c_verify);

    CLI::App* c_table = app.add_subcommand("table", "Moment report for m = 0..m_max");
    c_table->add_option("--counts", counts_str, "Letter counts, e.g. 200,300")->required();
    c_table->add_option("--definition", def_str, "Must be whole");
    c_table->add_option("--m-max", m_max, "Largest rank m in the report");
    add_output_flags(c_table);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("runlong");
    for (const std::string& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        return emit_error(out, err, "bad_arguments", e.what(), 2);
    }

    JobConfig cfg;
    try {
        if (app.got_subcommand(c_count))
            cfg.command = Command::count;
        else if (app.got_subcommand(c_pmf))
            cfg.command = Command::pmf;
        else if (app.got_subcommand(c_cdf))
            cfg.command = Command::cdf;
        else if (app.got_subcommand(c_moments))
            cfg.command = Command::moments;
        else if (app.got_subcommand(c_pvalue))
            cfg.command = Command::pvalue;
        else if (app.got_subcommand(c_verify))
            cfg.command = Command::verify;
        else
            cfg.command = Command::table;

        if (!counts_str.empty())
            cfg.counts = parse_int_list(counts_str, "--counts");
        cfg.definition = parse_definition(def_str);
        if (!m_str.empty())
            cfg.m_vec = parse_int_list(m_str, "--m");
        if (!q_str.empty())
            cfg.q_vec = parse_int_list(q_str, "--q");
        if (!alpha_str.empty())
            cfg.alpha = parse_rational(alpha_str, "--alpha");
        cfg.format = parse_format(fmt_str);
        cfg.digits = digits;
        if (!seed_str.empty())
            cfg.seed = parse_seed(seed_str);
        cfg.stat = stat_str;
        cfg.run_count = run_count;
        cfg.letter = letter;
        cfg.m_max = m_max;
        cfg.max_total = max_total;
        cfg.max_k = max_k;
        cfg.cap = cap;
        cfg.out_path = out_path;
    } catch (const CliError& e) {
        return emit_error(out, err, e.code, e.what(), e.exit_code);
    }

    return run(cfg, out, err);
}

} // namespace runlong::cli
