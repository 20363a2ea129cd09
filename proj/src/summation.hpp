#pragma once

#include <cmath>

namespace expderiv::detail {

// Neumaier compensated sum; order of add() calls fixes the result bit for bit.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

} // namespace expderiv::detail
