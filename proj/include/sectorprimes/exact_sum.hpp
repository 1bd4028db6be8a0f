#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sp {

// Fixed-point accumulator with 80 fractional bits. Every double term is
// quantized once (exactly for |v| >= 2^-27), after which addition is integer
// addition: sums are independent of order, blocking and thread count.
class ExactSum {
public:
    static constexpr int kFracBits = 80;

    static __int128 quantize(double v)
    {
        if (v == 0.0) return 0;
        if (!std::isfinite(v)) throw std::domain_error("ExactSum: non-finite term");
        int e = 0;
        const double m = std::frexp(v, &e);  // v = m 2^e, 0.5 <= |m| < 1
        const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
        const int shift = e - 53 + kFracBits;
        if (shift >= 0) {
            if (shift > 125 - 53) throw std::overflow_error("ExactSum: term too large");
            return static_cast<__int128>(mant) << shift;
        }
        if (shift <= -64) return 0;
        // round half away from zero
        const __int128 a = mant < 0 ? -static_cast<__int128>(mant) : static_cast<__int128>(mant);
        const __int128 q = (a + (static_cast<__int128>(1) << (-shift - 1))) >> (-shift);
        return mant < 0 ? -q : q;
    }

    void add(double v) { acc_ += quantize(v); }
    void add_raw(__int128 q) { acc_ += q; }
    ExactSum& operator+=(const ExactSum& o)
    {
        acc_ += o.acc_;
        return *this;
    }
    ExactSum& operator-=(const ExactSum& o)
    {
        acc_ -= o.acc_;
        return *this;
    }

    __int128 raw() const { return acc_; }
    double value() const { return static_cast<double>(std::ldexp(static_cast<long double>(acc_), -kFracBits)); }

    bool operator==(const ExactSum& o) const { return acc_ == o.acc_; }
    bool operator<(const ExactSum& o) const { return acc_ < o.acc_; }
    bool operator<=(const ExactSum& o) const { return acc_ <= o.acc_; }

private:
    __int128 acc_ = 0;
};

}  // namespace sp
