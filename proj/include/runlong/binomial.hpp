#ifndef RUNLONG_BINOMIAL_HPP
#define RUNLONG_BINOMIAL_HPP

#include "runlong/exact.hpp"

#include <vector>

namespace runlong {

/// Binomial coefficient extended to any integer upper argument via the falling
/// factorial: C(a, b) = a (a-1) ... (a-b+1) / b! for b >= 0, and 0 for b < 0.
/// In particular C(-1, m) = (-1)^m and C(a, b) = 0 for 0 <= a < b. The
/// alternating closed forms below rely on these conventions at their boundary
/// terms, so this is the single definition used everywhere.
ExactInt binomial_general(long a, long b);

/// Multinomial coefficient (sum parts)! / prod(part_i!). Parts may be zero.
ExactCount multinomial(const std::vector<int>& parts);

/// Pascal triangle rows 0..max_n, built once and immutable afterwards, so a
/// single instance can be shared freely across threads. at() is the fast path
/// for arguments known to be in classical range; general() falls back to
/// binomial_general outside the table.
class BinomialCache {
public:
    explicit BinomialCache(int max_n);

    int max_n() const { return max_n_; }

    /// Classical C(a, b) for 0 <= b <= a <= max_n. Out of range throws.
    const ExactCount& at(int a, int b) const {
        if (a < 0 || a > max_n_ || b < 0 || b > a)
            throw std::out_of_range("BinomialCache::at(" + std::to_string(a) + ", " +
                                    std::to_string(b) + ") with max_n " +
                                    std::to_string(max_n_));
        return rows_[a][b];
    }

    /// C(a, b) under the extended convention, served from the table when the
    /// arguments land in it.
    ExactInt general(long a, long b) const {
        if (b < 0)
            return 0;
        if (a >= 0 && a <= max_n_)
            return b > a ? ExactInt(0) : ExactInt(rows_[a][b]);
        return binomial_general(a, b);
    }

private:
    int max_n_;
    std::vector<std::vector<ExactCount>> rows_;
};

/// Process-wide cache registry: returns a cache with max_n() >= min_n,
/// building a larger one if needed. Previously returned references stay valid
/// for the life of the process.
const BinomialCache& shared_binomials(int min_n);

} // namespace runlong

#endif
