#ifndef RUNLONG_ASSEMBLY_HPP
#define RUNLONG_ASSEMBLY_HPP

#include "runlong/kernels.hpp"

#include <functional>
#include <vector>

namespace runlong {

// Multi-letter assembly. A sequence is described by its composition
// n = (n_1, ..., n_k): how many elements of each letter type it contains. All
// multinomial(n) distinct arrangements are treated as equally likely. The
// counting functions below combine the single-letter kernels into whole-system
// counts, either through the separator count F (the naive forms, kept as
// cross-checks) or through the collapsed closed forms (the fast forms).
//
// Every operation takes the binomial cache explicitly; it must cover at least
// comp.total() rows.

/// Letter multiplicities of the sequence; every letter present at least once.
class Composition {
public:
    explicit Composition(std::vector<int> counts);

    int k() const { return static_cast<int>(counts_.size()); }
    int total() const { return total_; }
    int max_count() const { return max_count_; }
    int count(int letter) const { return counts_.at(letter); }
    const std::vector<int>& counts() const { return counts_; }

    /// Same multiset of letters with the given letter moved to the front;
    /// used to point letter-1-specific counts at another letter.
    Composition with_letter_first(int letter) const;

private:
    std::vector<int> counts_;
    int total_ = 0;
    int max_count_ = 0;
};

/// Per-letter thresholds: letter i is required to have its (m_i+1)-th longest
/// run of length <= q_i. q_i = -1 encodes an impossible bound (see count_N).
struct PerLetterSpec {
    std::vector<int> m_vec;
    std::vector<int> q_vec;

    void validate(const Composition& comp) const;
};

/// Whole-system threshold: the (m+1)-th longest run over all letters.
struct WholeSpec {
    int m = 0;
    int q = 0;
};

/// Restrictions for the generic assembly engine: each entry pins one letter to
/// a kernel U(n, r) counting its single-letter arrangements into exactly r
/// runs under that letter's restriction. Unlisted letters are unrestricted.
struct RestrictionSet {
    struct Entry {
        int letter;
        std::function<ExactCount(int n, int r)> kernel;
    };
    std::vector<Entry> entries;
};

/// F(r): the number of ways to line up r_1, ..., r_k blocks of k letter types
/// with no two same-letter blocks adjacent. The glue of the two-step method.
ExactCount separator_F(const BinomialCache& binom, const std::vector<int>& r_vec);

/// Generic restricted count: arrangements where every restricted letter
/// satisfies its kernel, all other letters free. An empty restriction set
/// gives multinomial(n).
ExactCount assemble_generic(const BinomialCache& binom, const Composition& comp,
                            const RestrictionSet& restr);

/// N: arrangements with l^(i)_{m_i} <= q_i for every letter i, by the
/// collapsed product form. Any q_i = -1 gives 0 (a run length cannot be
/// negative, and letter i always has at least one run).
ExactCount count_N(const BinomialCache& binom, const Composition& comp,
                   const PerLetterSpec& spec);

/// N again, assembled run-count by run-count through F; cubic per letter and
/// kept as an independent cross-check of count_N.
ExactCount count_N_naive(const BinomialCache& binom, const Composition& comp,
                         const PerLetterSpec& spec);

/// L: arrangements where every letter is within its bound and at least one
/// letter attains it exactly, N(q) - N(q - 1).
ExactCount count_L(const BinomialCache& binom, const Composition& comp,
                   const PerLetterSpec& spec);

/// W (per letter): arrangements where every letter's (m_i+1)-th longest run
/// is exactly q_i.
ExactCount count_W_per_letter(const BinomialCache& binom, const Composition& comp,
                              const PerLetterSpec& spec);

/// Z: arrangements with at least m+1 runs of letter 1 of length >= q. Fixed
/// to letter 1; permute the composition to target other letters. Requires
/// q >= 1 (at q = 0 every arrangement qualifies trivially).
ExactCount count_Z(const BinomialCache& binom, const Composition& comp, int q, int m);

/// Q: arrangements of the whole system with l_m <= q, all run lengths sorted
/// together regardless of letter type. q < 0 gives 0, q >= max count gives
/// multinomial(n).
ExactCount count_Q(const BinomialCache& binom, const Composition& comp, int q, int m);

/// count_Q for m = 0..m_max at one q, sharing the expensive inner fold.
std::vector<ExactCount> count_Q_batch(const BinomialCache& binom, const Composition& comp,
                                      int q, int m_max);

/// Q assembled through F and the exact-count kernels, summing over every
/// split of at most m long runs among the letters; the cross-check for
/// count_Q. Requires q >= 0.
ExactCount count_Q_naive(const BinomialCache& binom, const Composition& comp, int q, int m);

/// W (whole system): arrangements with l_m exactly q, Q(q) - Q(q - 1).
/// Requires q >= 0.
ExactCount count_W_whole(const BinomialCache& binom, const Composition& comp, int q, int m);

/// T: arrangements with exactly r maximal runs in total; 0 outside [k, n].
ExactCount count_T(const BinomialCache& binom, const Composition& comp, int r);

} // namespace runlong

#endif
