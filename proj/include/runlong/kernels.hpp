#ifndef RUNLONG_KERNELS_HPP
#define RUNLONG_KERNELS_HPP

#include "runlong/binomial.hpp"

namespace runlong {

// Single-letter kernels. Everything here counts compositions of n identical
// letters into r runs (ordered positive parts), classified by how many runs
// exceed a length threshold q. The collapsed forms aggregate the run count r
// away with alternating binomial weights; they are the per-letter factors of
// the multi-letter assembly and are signed by construction.
//
// All kernels require n >= 1, q >= 0, m >= 0 and the relevant 1 <= r <= n or
// 1 <= p <= n, and throw std::domain_error otherwise. The cache must cover n.

/// Number of compositions of n into r parts with exactly m parts > q.
ExactCount single_exactly(const BinomialCache& binom, int n, int q, int r, int m);

/// Number of compositions of n into r parts with at most m parts > q.
ExactCount single_at_most(const BinomialCache& binom, int n, int q, int r, int m);

/// Number of compositions of n into r parts, C(n-1, r-1); 0 when r is outside
/// [1, n] so assembly loops need no edge checks.
ExactCount compositions(const BinomialCache& binom, int n, int r);

/// Signed aggregate sum over r of (-1)^r C(r-1, p-1) single_at_most(n, q, r, m),
/// evaluated by closed form.
ExactInt collapsed_at_most(const BinomialCache& binom, int n, int q, int p, int m);

/// Signed aggregate sum over r of (-1)^r C(r-1, p-1) single_exactly(n, q, r, m),
/// evaluated by closed form.
ExactInt collapsed_exactly(const BinomialCache& binom, int n, int q, int p, int m);

} // namespace runlong

#endif
