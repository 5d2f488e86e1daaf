#include "runlong/assembly.hpp"

#include <algorithm>
#include <map>

namespace runlong {

namespace {

void check_cache(const BinomialCache& binom, int needed, const char* which) {
    if (binom.max_n() < needed)
        throw std::domain_error(std::string(which) + ": binomial cache smaller than total count");
}

// Folds per-letter tables into a distribution over the total lower index.
// tables[i][p] holds letter i's term for p runs collapsed (p = 1..n_i, entry 0
// unused); any alternating sign is already inside the table values. Returns
// dp with dp[s] = sum over all (p_1..p_k) with sum s of
// multinom(s; p_1..p_k) * prod_i tables[i][p_i].
std::vector<ExactInt> fold_letters(const BinomialCache& binom,
                                   const std::vector<std::vector<ExactInt>>& tables) {
    std::vector<ExactInt> dp = tables.front();
    for (std::size_t t = 1; t < tables.size(); ++t) {
        const auto& g = tables[t];
        std::vector<ExactInt> next(dp.size() + g.size() - 1);
        for (std::size_t s = 1; s < dp.size(); ++s) {
            if (sgn(dp[s]) == 0)
                continue;
            for (std::size_t p = 1; p < g.size(); ++p) {
                if (sgn(g[p]) == 0)
                    continue;
                next[s + p] += dp[s] * g[p] * binom.at(static_cast<int>(s + p), static_cast<int>(p));
            }
        }
        dp = std::move(next);
    }
    return dp;
}

ExactCount sum_to_count(const std::vector<ExactInt>& dp, const char* which) {
    ExactInt acc = 0;
    for (const auto& v : dp)
        acc += v;
    if (sgn(acc) < 0)
        throw std::logic_error(std::string(which) + " produced a negative count");
    return acc;
}

// Memoized separator counts, keyed by the sorted run-count vector; F is
// symmetric in its arguments, so the naive assemblies share values across
// permuted run vectors.
class SeparatorMemo {
public:
    explicit SeparatorMemo(const BinomialCache& binom) : binom_(binom) {}

    const ExactCount& value(const std::vector<int>& r_vec) {
        key_.assign(r_vec.begin(), r_vec.end());
        std::sort(key_.begin(), key_.end());
        auto it = memo_.find(key_);
        if (it == memo_.end())
            it = memo_.emplace(key_, separator_F(binom_, key_)).first;
        return it->second;
    }

private:
    const BinomialCache& binom_;
    std::vector<int> key_;
    std::map<std::vector<int>, ExactCount> memo_;
};

// Per-letter term table of the collapsed whole-system sum for q >= 1: for
// each p, the inner index j ranges over the window where both binomial
// factors are classically nonzero, and the stored value carries the (-1)^p
// sign. The (-1)^((q+1) j) sign and the C(j-1, m) weight couple letters
// together, so they are applied after the fold, over the summed j.
struct WholeTermTable {
    int n = 0;
    int j_max = 0;
    std::vector<std::vector<std::pair<int, ExactInt>>> by_p; // [p] -> (j, term)
};

WholeTermTable whole_terms(const BinomialCache& binom, int n, int q) {
    WholeTermTable t;
    t.n = n;
    t.j_max = n / (q + 1);
    t.by_p.resize(n + 1);
    for (int p = 1; p <= n; ++p) {
        const int lo = (n - p + q) / (q + 1); // ceil((n - p) / (q + 1))
        const int hi = std::min((n - p) / q, n / (q + 1));
        for (int j = lo; j <= hi; ++j) {
            ExactInt a = binom.at(n - q * j - 1, p - 1) * binom.at(p, n - (q + 1) * j);
            if (p % 2 != 0)
                a = -a;
            t.by_p[p].emplace_back(j, std::move(a));
        }
    }
    return t;
}

// State of the two-dimensional fold: rows indexed by the partial sum of p,
// columns by the partial sum of j, with a conservative nonzero column window
// per row to keep the sweep near the true support.
struct WholeFold {
    std::vector<std::vector<ExactInt>> dp; // [P][J]
    std::vector<int> j_lo, j_hi;           // per-row nonzero window, lo > hi when empty
};

WholeFold fold_whole(const BinomialCache& binom, const Composition& comp, int q) {
    std::vector<WholeTermTable> tables;
    tables.reserve(comp.k());
    for (int n : comp.counts())
        tables.push_back(whole_terms(binom, n, q));

    WholeFold f;
    int p_max = tables[0].n;
    int j_cap = tables[0].j_max;
    f.dp.assign(p_max + 1, std::vector<ExactInt>(j_cap + 1));
    f.j_lo.assign(p_max + 1, j_cap + 1);
    f.j_hi.assign(p_max + 1, -1);
    for (int p = 1; p <= p_max; ++p)
        for (const auto& [j, a] : tables[0].by_p[p]) {
            f.dp[p][j] = a;
            f.j_lo[p] = std::min(f.j_lo[p], j);
            f.j_hi[p] = std::max(f.j_hi[p], j);
        }

    ExactInt tmp;
    for (std::size_t t = 1; t < tables.size(); ++t) {
        const auto& g = tables[t];
        const int np_max = p_max + g.n;
        const int nj_cap = j_cap + g.j_max;
        WholeFold nf;
        nf.dp.assign(np_max + 1, std::vector<ExactInt>(nj_cap + 1));
        nf.j_lo.assign(np_max + 1, nj_cap + 1);
        nf.j_hi.assign(np_max + 1, -1);
        for (int p2 = 1; p2 <= g.n; ++p2) {
            if (g.by_p[p2].empty())
                continue;
            for (int P = 1; P <= p_max; ++P) {
                if (f.j_lo[P] > f.j_hi[P])
                    continue;
                const ExactCount& factor = binom.at(P + p2, p2);
                auto& out_lo = nf.j_lo[P + p2];
                auto& out_hi = nf.j_hi[P + p2];
                auto& out_row = nf.dp[P + p2];
                const auto& in_row = f.dp[P];
                for (const auto& [j2, a] : g.by_p[p2]) {
                    tmp = a * factor;
                    for (int J = f.j_lo[P]; J <= f.j_hi[P]; ++J) {
                        if (sgn(in_row[J]) == 0)
                            continue;
                        out_row[J + j2] += in_row[J] * tmp;
                    }
                    out_lo = std::min(out_lo, f.j_lo[P] + j2);
                    out_hi = std::max(out_hi, f.j_hi[P] + j2);
                }
            }
        }
        f = std::move(nf);
        p_max = np_max;
        j_cap = nj_cap;
    }

    return f;
}

// Collapses the fold over rows: U[J] = sum_P dp[P][J].
std::vector<ExactInt> whole_fold_columns(const BinomialCache& binom, const Composition& comp,
                                         int q) {
    WholeFold f = fold_whole(binom, comp, q);
    std::vector<ExactInt> u(f.dp.empty() ? 1 : f.dp[0].size());
    for (std::size_t P = 0; P < f.dp.size(); ++P) {
        if (f.j_lo[P] > f.j_hi[P])
            continue;
        for (int J = f.j_lo[P]; J <= f.j_hi[P]; ++J)
            u[J] += f.dp[P][J];
    }
    return u;
}

ExactCount whole_from_columns(const BinomialCache& binom, const std::vector<ExactInt>& u,
                              int n, int q, int m) {
    ExactInt acc = 0;
    for (std::size_t J = 0; J < u.size(); ++J) {
        if (sgn(u[J]) == 0)
            continue;
        ExactInt w = binom.general(static_cast<long>(J) - 1, m);
        if (sgn(w) == 0)
            continue;
        w *= u[J];
        if ((q + 1) * static_cast<long>(J) % 2 != 0)
            w = -w;
        acc += w;
    }
    if ((n + m) % 2 != 0)
        acc = -acc;
    if (sgn(acc) < 0)
        throw std::logic_error("count_Q produced a negative count");
    return acc;
}

// Shared table for the q = 0 closed forms of Q and T: the per-letter factor
// (-1)^p C(n_i - 1, p - 1) folded over all letters.
std::vector<ExactInt> runs_only_fold(const BinomialCache& binom, const Composition& comp) {
    std::vector<std::vector<ExactInt>> tables;
    tables.reserve(comp.k());
    for (int n : comp.counts()) {
        std::vector<ExactInt> g(n + 1);
        for (int p = 1; p <= n; ++p) {
            g[p] = binom.at(n - 1, p - 1);
            if (p % 2 != 0)
                g[p] = -g[p];
        }
        tables.push_back(std::move(g));
    }
    return fold_letters(binom, tables);
}

void check_whole_args(const Composition& comp, int m, const char* which) {
    if (comp.k() < 1)
        throw std::domain_error(std::string(which) + ": empty composition");
    if (m < 0)
        throw std::domain_error(std::string(which) + ": m must be nonnegative");
}

} // namespace

Composition::Composition(std::vector<int> counts) : counts_(std::move(counts)) {
    if (counts_.empty())
        throw std::domain_error("composition needs at least one letter type");
    for (int n : counts_) {
        if (n < 1)
            throw std::domain_error("composition parts must be positive; drop absent letters");
        total_ += n;
        max_count_ = std::max(max_count_, n);
    }
}

Composition Composition::with_letter_first(int letter) const {
    if (letter < 0 || letter >= k())
        throw std::domain_error("letter index outside composition");
    std::vector<int> reordered;
    reordered.reserve(counts_.size());
    reordered.push_back(counts_[letter]);
    for (int i = 0; i < k(); ++i)
        if (i != letter)
            reordered.push_back(counts_[i]);
    return Composition(reordered);
}

void PerLetterSpec::validate(const Composition& comp) const {
    if (static_cast<int>(m_vec.size()) != comp.k() || static_cast<int>(q_vec.size()) != comp.k())
        throw std::domain_error("per-letter spec arity does not match composition");
    for (int m : m_vec)
        if (m < 0)
            throw std::domain_error("per-letter m must be nonnegative");
    for (int q : q_vec)
        if (q < -1)
            throw std::domain_error("per-letter q must be >= -1");
}

ExactCount separator_F(const BinomialCache& binom, const std::vector<int>& r_vec) {
    if (r_vec.empty())
        throw std::domain_error("separator_F of no letters");
    int r_total = 0;
    for (int r : r_vec) {
        if (r < 1)
            throw std::domain_error("separator_F needs positive run counts");
        r_total += r;
    }
    check_cache(binom, r_total, "separator_F");

    std::vector<std::vector<ExactInt>> tables;
    tables.reserve(r_vec.size());
    for (int r : r_vec) {
        std::vector<ExactInt> g(r + 1);
        for (int p = 1; p <= r; ++p) {
            g[p] = binom.at(r - 1, p - 1);
            if ((r - p) % 2 != 0)
                g[p] = -g[p];
        }
        tables.push_back(std::move(g));
    }
    return sum_to_count(fold_letters(binom, tables), "separator_F");
}

ExactCount assemble_generic(const BinomialCache& binom, const Composition& comp,
                            const RestrictionSet& restr) {
    check_cache(binom, comp.total(), "assemble_generic");
    std::vector<bool> seen(comp.k(), false);
    for (const auto& e : restr.entries) {
        if (e.letter < 0 || e.letter >= comp.k())
            throw std::domain_error("assemble_generic: restricted letter outside composition");
        if (seen[e.letter])
            throw std::domain_error("assemble_generic: letter restricted twice");
        if (!e.kernel)
            throw std::domain_error("assemble_generic: missing kernel");
        seen[e.letter] = true;
    }

    // Restricted letters enter through their signed run-collapsed transform;
    // each unrestricted letter collapses to a single block of n_i in the
    // multinomial, so it just shifts the fold by n_i.
    std::vector<ExactInt> dp{ExactInt(0), ExactInt(1)};
    bool first = true;
    for (const auto& e : restr.entries) {
        const int n = comp.count(e.letter);
        std::vector<ExactInt> g(n + 1);
        for (int p = 1; p <= n; ++p) {
            ExactInt acc = 0;
            for (int r = p; r <= n; ++r) {
                ExactInt term = binom.at(r - 1, p - 1) * e.kernel(n, r);
                if ((r - p) % 2 == 0)
                    acc += term;
                else
                    acc -= term;
            }
            g[p] = std::move(acc);
        }
        if (first) {
            dp = std::move(g);
            first = false;
        } else {
            dp = fold_letters(binom, {std::move(dp), std::move(g)});
        }
    }
    if (first)
        dp = {ExactInt(1)}; // no restrictions: fold starts from the empty sum

    for (int i = 0; i < comp.k(); ++i) {
        if (seen[i])
            continue;
        const int n = comp.count(i);
        std::vector<ExactInt> shifted(dp.size() + n);
        for (std::size_t s = 0; s < dp.size(); ++s) {
            if (sgn(dp[s]) == 0)
                continue;
            shifted[s + n] = dp[s] * binom.at(static_cast<int>(s) + n, n);
        }
        dp = std::move(shifted);
    }

    ExactInt acc = 0;
    for (const auto& v : dp)
        acc += v;
    if (sgn(acc) < 0)
        throw std::logic_error("assemble_generic produced a negative count");
    return acc;
}

ExactCount count_N(const BinomialCache& binom, const Composition& comp,
                   const PerLetterSpec& spec) {
    spec.validate(comp);
    check_cache(binom, comp.total(), "count_N");
    for (int q : spec.q_vec)
        if (q == -1)
            return 0; // no run length is <= -1, and every letter has a run

    std::vector<std::vector<ExactInt>> tables;
    tables.reserve(comp.k());
    for (int i = 0; i < comp.k(); ++i) {
        const int n = comp.count(i);
        std::vector<ExactInt> g(n + 1);
        for (int p = 1; p <= n; ++p) {
            g[p] = collapsed_at_most(binom, n, spec.q_vec[i], p, spec.m_vec[i]);
            if (p % 2 != 0)
                g[p] = -g[p];
        }
        tables.push_back(std::move(g));
    }
    return sum_to_count(fold_letters(binom, tables), "count_N");
}

ExactCount count_N_naive(const BinomialCache& binom, const Composition& comp,
                         const PerLetterSpec& spec) {
    spec.validate(comp);
    check_cache(binom, comp.total(), "count_N_naive");
    for (int q : spec.q_vec)
        if (q == -1)
            return 0;

    std::vector<std::vector<ExactCount>> h(comp.k());
    for (int i = 0; i < comp.k(); ++i) {
        const int n = comp.count(i);
        h[i].resize(n + 1);
        for (int r = 1; r <= n; ++r)
            h[i][r] = single_at_most(binom, n, spec.q_vec[i], r, spec.m_vec[i]);
    }

    SeparatorMemo memo(binom);
    std::vector<int> r_vec(comp.k());
    ExactInt acc = 0;
    auto sweep = [&](auto&& self, int letter, const ExactCount& partial) -> void {
        if (letter == comp.k()) {
            acc += partial * memo.value(r_vec);
            return;
        }
        for (int r = 1; r <= comp.count(letter); ++r) {
            if (sgn(h[letter][r]) == 0)
                continue;
            r_vec[letter] = r;
            self(self, letter + 1, partial * h[letter][r]);
        }
    };
    sweep(sweep, 0, ExactCount(1));
    if (sgn(acc) < 0)
        throw std::logic_error("count_N_naive produced a negative count");
    return acc;
}

ExactCount count_L(const BinomialCache& binom, const Composition& comp,
                   const PerLetterSpec& spec) {
    spec.validate(comp);
    PerLetterSpec lower = spec;
    for (int& q : lower.q_vec)
        if (q >= 0)
            --q;
    ExactInt diff = count_N(binom, comp, spec) - count_N(binom, comp, lower);
    if (sgn(diff) < 0)
        throw std::logic_error("count_L produced a negative count");
    return diff;
}

ExactCount count_W_per_letter(const BinomialCache& binom, const Composition& comp,
                              const PerLetterSpec& spec) {
    spec.validate(comp);
    check_cache(binom, comp.total(), "count_W_per_letter");
    for (int q : spec.q_vec)
        if (q == -1)
            return 0;

    std::vector<std::vector<ExactInt>> tables;
    tables.reserve(comp.k());
    for (int i = 0; i < comp.k(); ++i) {
        const int n = comp.count(i);
        const int q = spec.q_vec[i];
        const int m = spec.m_vec[i];
        std::vector<ExactInt> g(n + 1);
        for (int p = 1; p <= n; ++p) {
            g[p] = collapsed_at_most(binom, n, q, p, m);
            if (q >= 1)
                g[p] -= collapsed_at_most(binom, n, q - 1, p, m);
            if (p % 2 != 0)
                g[p] = -g[p];
        }
        tables.push_back(std::move(g));
    }
    return sum_to_count(fold_letters(binom, tables), "count_W_per_letter");
}

ExactCount count_Z(const BinomialCache& binom, const Composition& comp, int q, int m) {
    check_whole_args(comp, m, "count_Z");
    if (q < 1)
        throw std::domain_error("count_Z needs q >= 1; every arrangement has runs of length >= 0");
    check_cache(binom, comp.total(), "count_Z");

    const int n = comp.total();
    const int n1 = comp.count(0);
    ExactCount rest = 1;
    if (comp.k() > 1)
        rest = multinomial(std::vector<int>(comp.counts().begin() + 1, comp.counts().end()));

    // Terms beyond j = floor(n1 / q) vanish: they would need more letter-1
    // elements than exist, and C(n - qj, n - n1) is classically zero there.
    const int hi = std::min({n - n1 + 1, n / q, n1 / q});
    ExactInt acc = 0;
    for (int j = std::max(1, m + 1); j <= hi; ++j) {
        ExactInt term = binom.at(j - 1, m) * binom.at(n - n1 + 1, j);
        term *= binom.at(n - q * j, n - n1);
        if ((m + j + 1) % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    acc *= rest;
    if (sgn(acc) < 0)
        throw std::logic_error("count_Z produced a negative count");
    return acc;
}

ExactCount count_Q(const BinomialCache& binom, const Composition& comp, int q, int m) {
    check_whole_args(comp, m, "count_Q");
    check_cache(binom, comp.total(), "count_Q");
    if (q < 0)
        return 0;
    if (q >= comp.max_count())
        return multinomial(comp.counts());
    const int n = comp.total();
    if (q == 0) {
        if (m >= n)
            return multinomial(comp.counts());
        std::vector<ExactInt> dp = runs_only_fold(binom, comp);
        ExactInt acc = 0;
        for (std::size_t P = 1; P < dp.size(); ++P) {
            if (sgn(dp[P]) == 0)
                continue;
            acc += dp[P] * binom.general(n - static_cast<long>(P) - 1, m - static_cast<long>(P));
        }
        if (m % 2 != 0)
            acc = -acc;
        if (sgn(acc) < 0)
            throw std::logic_error("count_Q produced a negative count");
        return acc;
    }
    return whole_from_columns(binom, whole_fold_columns(binom, comp, q), n, q, m);
}

std::vector<ExactCount> count_Q_batch(const BinomialCache& binom, const Composition& comp,
                                      int q, int m_max) {
    check_whole_args(comp, m_max, "count_Q_batch");
    check_cache(binom, comp.total(), "count_Q_batch");
    std::vector<ExactCount> out(m_max + 1);
    if (q < 0)
        return out;
    if (q >= 1 && q < comp.max_count()) {
        const std::vector<ExactInt> u = whole_fold_columns(binom, comp, q);
        for (int m = 0; m <= m_max; ++m)
            out[m] = whole_from_columns(binom, u, comp.total(), q, m);
        return out;
    }
    for (int m = 0; m <= m_max; ++m)
        out[m] = count_Q(binom, comp, q, m);
    return out;
}

ExactCount count_Q_naive(const BinomialCache& binom, const Composition& comp, int q, int m) {
    check_whole_args(comp, m, "count_Q_naive");
    if (q < 0)
        throw std::domain_error("count_Q_naive needs q >= 0");
    check_cache(binom, comp.total(), "count_Q_naive");

    // hb[i][mi][r]: letter i in r runs with exactly mi of them longer than q.
    std::vector<std::vector<std::vector<ExactCount>>> hb(comp.k());
    for (int i = 0; i < comp.k(); ++i) {
        const int n = comp.count(i);
        hb[i].assign(m + 1, std::vector<ExactCount>(n + 1));
        for (int mi = 0; mi <= m; ++mi)
            for (int r = 1; r <= n; ++r)
                hb[i][mi][r] = single_exactly(binom, n, q, r, mi);
    }

    SeparatorMemo memo(binom);
    std::vector<int> r_vec(comp.k());
    std::vector<int> m_vec(comp.k());
    ExactInt acc = 0;
    auto sweep_r = [&](auto&& self, int letter, const ExactCount& partial) -> void {
        if (letter == comp.k()) {
            acc += partial * memo.value(r_vec);
            return;
        }
        const auto& table = hb[letter][m_vec[letter]];
        for (int r = 1; r <= comp.count(letter); ++r) {
            if (sgn(table[r]) == 0)
                continue;
            r_vec[letter] = r;
            self(self, letter + 1, partial * table[r]);
        }
    };
    // Distribute at most m long runs among the letters in every possible way.
    auto sweep_m = [&](auto&& self, int letter, int budget) -> void {
        if (letter == comp.k()) {
            sweep_r(sweep_r, 0, ExactCount(1));
            return;
        }
        for (int mi = 0; mi <= budget; ++mi) {
            m_vec[letter] = mi;
            self(self, letter + 1, budget - mi);
        }
    };
    sweep_m(sweep_m, 0, m);
    if (sgn(acc) < 0)
        throw std::logic_error("count_Q_naive produced a negative count");
    return acc;
}

ExactCount count_W_whole(const BinomialCache& binom, const Composition& comp, int q, int m) {
    check_whole_args(comp, m, "count_W_whole");
    if (q < 0)
        throw std::domain_error("count_W_whole needs q >= 0");
    ExactInt diff = count_Q(binom, comp, q, m) - count_Q(binom, comp, q - 1, m);
    if (sgn(diff) < 0)
        throw std::logic_error("count_W_whole produced a negative count");
    return diff;
}

ExactCount count_T(const BinomialCache& binom, const Composition& comp, int r) {
    if (comp.k() < 1)
        throw std::domain_error("count_T: empty composition");
    check_cache(binom, comp.total(), "count_T");
    const int n = comp.total();
    if (r < comp.k() || r > n)
        return 0;
    std::vector<ExactInt> dp = runs_only_fold(binom, comp);
    ExactInt acc = 0;
    for (std::size_t P = 1; P < dp.size(); ++P) {
        if (sgn(dp[P]) == 0)
            continue;
        acc += dp[P] * binom.general(n - static_cast<long>(P), r - static_cast<long>(P));
    }
    if (r % 2 != 0)
        acc = -acc;
    if (sgn(acc) < 0)
        throw std::logic_error("count_T produced a negative count");
    return acc;
}

} // namespace runlong
