#ifndef RUNLONG_EXACT_HPP
#define RUNLONG_EXACT_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace runlong {

// Unbounded integers back every count in the library. Counts of arrangements
// overflow 64 bits already around n = 60, so the exact types are used from the
// innermost kernels outward and numbers are only rounded when rendered.
using ExactInt = mpz_class;   // signed, used for alternating sums
using ExactCount = mpz_class; // by convention nonnegative (checked at API boundaries)
using Rational = mpq_class;   // exact rational, canonical form

/// Renders x as a plain decimal string with `places` digits after the point,
/// rounding half to even. Trailing zeros are kept ("2.006", "0.050").
std::string decimal_fixed(const Rational& x, int places);

/// Renders x with `digits` significant digits, rounding half to even, as a
/// plain decimal string (no exponent notation). Trailing fractional zeros are
/// stripped, so exact values stay short ("0.5", "19448").
std::string decimal_sig(const Rational& x, int digits);

/// A probability: exact rational confined to [0, 1], kept in lowest terms.
class Probability {
public:
    Probability() : v_(0) {}

    Probability(ExactInt num, ExactInt den) : v_(std::move(num), std::move(den)) {
        if (sgn(v_.get_den()) == 0)
            throw std::domain_error("probability with zero denominator");
        v_.canonicalize();
        check_range();
    }

    explicit Probability(Rational v) : v_(std::move(v)) {
        v_.canonicalize();
        check_range();
    }

    const Rational& value() const { return v_; }
    ExactInt numerator() const { return v_.get_num(); }
    ExactInt denominator() const { return v_.get_den(); }

    /// "num/den" in lowest terms, e.g. "120/2431". Integers render as "0/1", "1/1".
    std::string ratio_string() const {
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    std::string decimal(int sig_digits) const { return decimal_sig(v_, sig_digits); }
    std::string decimal_places(int places) const { return decimal_fixed(v_, places); }
    double approx() const { return v_.get_d(); }

    Probability complement() const { return Probability(Rational(1) - v_); }

    friend bool operator==(const Probability& a, const Probability& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Probability& a, const Probability& b) { return a.v_ != b.v_; }
    friend bool operator<(const Probability& a, const Probability& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Probability& a, const Probability& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Probability& a, const Probability& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Probability& a, const Probability& b) { return a.v_ >= b.v_; }

private:
    void check_range() {
        if (v_ < 0 || v_ > 1)
            throw std::domain_error("probability outside [0, 1]: " + v_.get_str());
    }

    Rational v_;
};

} // namespace runlong

#endif
