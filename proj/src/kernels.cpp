#include "runlong/kernels.hpp"

namespace runlong {

namespace {

void check_args(const BinomialCache& binom, int n, int q, int rp, int m, const char* which) {
    if (n < 1)
        throw std::domain_error(std::string(which) + ": n must be positive");
    if (q < 0)
        throw std::domain_error(std::string(which) + ": q must be nonnegative");
    if (rp < 1 || rp > n)
        throw std::domain_error(std::string(which) + ": run index outside [1, n]");
    if (m < 0)
        throw std::domain_error(std::string(which) + ": m must be nonnegative");
    if (binom.max_n() < n)
        throw std::domain_error(std::string(which) + ": binomial cache too small");
}

} // namespace

ExactCount single_exactly(const BinomialCache& binom, int n, int q, int r, int m) {
    check_args(binom, n, q, r, m, "single_exactly");
    if (q == 0)
        return r == m ? binom.at(n - 1, r - 1) : ExactCount(0);
    if (m > r)
        return 0;
    ExactCount acc = 0;
    // Inclusion-exclusion over a set of j runs forced above q; a composition
    // with exactly m long runs is counted with weight (-1)^(m+j) C(j, m).
    const int hi = std::min(r, (n - r) / q);
    for (int j = m; j <= hi; ++j) {
        ExactCount term = binom.at(j, m) * binom.at(r, j);
        term *= binom.at(n - j * q - 1, r - 1);
        if ((m + j) % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    if (sgn(acc) < 0)
        throw std::logic_error("single_exactly produced a negative count");
    return acc;
}

ExactCount single_at_most(const BinomialCache& binom, int n, int q, int r, int m) {
    check_args(binom, n, q, r, m, "single_at_most");
    if (q == 0)
        return r <= m ? binom.at(n - 1, r - 1) : ExactCount(0);
    // The j = 0 boundary term carries C(-1, m) = (-1)^m, which cancels the
    // (-1)^m in the alternating weight; terms 1 <= j <= m vanish.
    ExactCount acc = binom.at(n - 1, r - 1);
    const int hi = std::min(r, (n - r) / q);
    for (int j = m + 1; j <= hi; ++j) {
        ExactCount term = binom.at(j - 1, m) * binom.at(r, j);
        term *= binom.at(n - j * q - 1, r - 1);
        if ((m + j) % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    if (sgn(acc) < 0)
        throw std::logic_error("single_at_most produced a negative count");
    return acc;
}

ExactCount compositions(const BinomialCache& binom, int n, int r) {
    if (n < 1)
        throw std::domain_error("compositions: n must be positive");
    if (binom.max_n() < n)
        throw std::domain_error("compositions: binomial cache too small");
    if (r < 1 || r > n)
        return 0;
    return binom.at(n - 1, r - 1);
}

ExactInt collapsed_at_most(const BinomialCache& binom, int n, int q, int p, int m) {
    check_args(binom, n, q, p, m, "collapsed_at_most");
    if (q == 0) {
        // Both the saturated case n <= m and the truncated case n > m reduce
        // to one expression under the extended binomial: at p = n the factor
        // C(n - p - 1, m - p) becomes C(-1, m - n), which is (-1)^(m-n) when
        // the runs saturate and 0 otherwise.
        ExactInt v = binom.at(n - 1, p - 1) * binom.general(n - p - 1, m - p);
        return m % 2 == 0 ? v : ExactInt(-v);
    }
    ExactInt acc = 0;
    const int lo = (n - p + q) / (q + 1); // ceil((n - p) / (q + 1))
    const int hi = std::min((n - p) / q, n / (q + 1));
    for (int j = lo; j <= hi; ++j) {
        ExactInt term = binom.general(j - 1, m);
        if (sgn(term) == 0)
            continue;
        term *= binom.at(n - j * q - 1, p - 1);
        term *= binom.at(p, n - j * (q + 1));
        if ((n + m + j * (q + 1)) % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

ExactInt collapsed_exactly(const BinomialCache& binom, int n, int q, int p, int m) {
    check_args(binom, n, q, p, m, "collapsed_exactly");
    if (q == 0) {
        ExactInt v = binom.general(m - 1, p - 1) * binom.general(n - 1, m - 1);
        return m % 2 == 0 ? v : ExactInt(-v);
    }
    ExactInt acc = 0;
    const int lo = (n - p + q) / (q + 1);
    const int hi = std::min((n - p) / q, n / (q + 1));
    for (int j = std::max(lo, m); j <= hi; ++j) {
        ExactInt term = binom.at(j, m) * binom.at(n - j * q - 1, p - 1);
        term *= binom.at(p, n - j * (q + 1));
        if ((n + m + j * (q + 1)) % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

} // namespace runlong
