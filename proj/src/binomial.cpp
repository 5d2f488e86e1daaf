#include "runlong/binomial.hpp"

#include <memory>
#include <mutex>

namespace runlong {

ExactInt binomial_general(long a, long b) {
    if (b < 0)
        return 0;
    if (a >= 0 && b > a)
        return 0;
    // mpz_bin_ui implements the falling-factorial extension for negative a.
    ExactInt r, top(a);
    mpz_bin_ui(r.get_mpz_t(), top.get_mpz_t(), static_cast<unsigned long>(b));
    return r;
}

ExactCount multinomial(const std::vector<int>& parts) {
    if (parts.empty())
        throw std::domain_error("multinomial of no parts");
    ExactCount r = 1;
    long total = 0;
    ExactCount step;
    for (int p : parts) {
        if (p < 0)
            throw std::domain_error("multinomial with negative part");
        total += p;
        mpz_bin_uiui(step.get_mpz_t(), static_cast<unsigned long>(total),
                     static_cast<unsigned long>(p));
        r *= step;
    }
    return r;
}

BinomialCache::BinomialCache(int max_n) : max_n_(max_n) {
    if (max_n < 0)
        throw std::domain_error("BinomialCache with negative size");
    rows_.resize(max_n + 1);
    rows_[0] = {1};
    for (int a = 1; a <= max_n; ++a) {
        auto& row = rows_[a];
        const auto& prev = rows_[a - 1];
        row.resize(a + 1);
        row[0] = 1;
        row[a] = 1;
        for (int b = 1; b < a; ++b)
            row[b] = prev[b - 1] + prev[b];
    }
}

const BinomialCache& shared_binomials(int min_n) {
    static std::mutex mu;
    static std::vector<std::unique_ptr<BinomialCache>> pool;
    std::lock_guard<std::mutex> lock(mu);
    if (!pool.empty() && pool.back()->max_n() >= min_n)
        return *pool.back();
    pool.push_back(std::make_unique<BinomialCache>(std::max(min_n, 64)));
    return *pool.back();
}

} // namespace runlong
