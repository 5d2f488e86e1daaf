#include "runlong/exact.hpp"

namespace runlong {

namespace {

ExactInt pow10z(unsigned long k) {
    ExactInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, k);
    return p;
}

// Floor-divides num by den (den > 0) and rounds the quotient half to even
// based on the remainder.
ExactInt div_round_half_even(const ExactInt& num, const ExactInt& den) {
    ExactInt q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const ExactInt twice = r * 2;
    const int c = cmp(twice, den);
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t())))
        ++q;
    return q;
}

} // namespace

std::string decimal_fixed(const Rational& x, int places) {
    if (places < 0)
        throw std::invalid_argument("decimal_fixed: negative digit count");
    Rational v = x;
    v.canonicalize();
    const bool neg = sgn(v) < 0;
    ExactInt n = abs(v.get_num());
    const ExactInt d = v.get_den();

    ExactInt q = div_round_half_even(n * pow10z(places), d);

    std::string s = q.get_str();
    if (places > 0) {
        if (static_cast<int>(s.size()) <= places)
            s.insert(0, places + 1 - s.size(), '0');
        s.insert(s.size() - places, ".");
    }
    if (neg && sgn(q) != 0)
        s.insert(0, "-");
    return s;
}

std::string decimal_sig(const Rational& x, int digits) {
    if (digits < 1)
        throw std::invalid_argument("decimal_sig: digit count must be positive");
    Rational v = x;
    v.canonicalize();
    if (sgn(v) == 0)
        return "0";
    const bool neg = sgn(v) < 0;
    ExactInt n = abs(v.get_num());
    const ExactInt d = v.get_den();

    // Decimal exponent e with 10^(e-1) <= |x| < 10^e.
    int e;
    if (n >= d) {
        ExactInt q0 = n / d;
        e = static_cast<int>(mpz_sizeinbase(q0.get_mpz_t(), 10));
        if (q0 < pow10z(e - 1))
            --e; // sizeinbase may report one digit too many
    } else {
        int t = 0;
        ExactInt m = n;
        while (m < d) {
            m *= 10;
            ++t;
        }
        e = 1 - t;
    }

    // Round |x| * 10^(digits - e) to an integer of exactly `digits` digits.
    const int places = digits - e;
    ExactInt rounded = places >= 0 ? div_round_half_even(n * pow10z(places), d)
                                   : div_round_half_even(n, d * pow10z(-places));
    if (rounded == pow10z(digits)) {
        rounded = pow10z(digits - 1); // rounding carried into the next decade
        ++e;
    }

    std::string digs = rounded.get_str();
    std::string s;
    if (e >= digits) {
        s = digs + std::string(e - digits, '0');
    } else if (e >= 1) {
        s = digs.substr(0, e) + "." + digs.substr(e);
    } else {
        s = "0." + std::string(-e, '0') + digs;
    }
    if (s.find('.') != std::string::npos) {
        s.erase(s.find_last_not_of('0') + 1);
        if (s.back() == '.')
            s.pop_back();
    }
    if (neg)
        s.insert(0, "-");
    return s;
}

} // namespace runlong
