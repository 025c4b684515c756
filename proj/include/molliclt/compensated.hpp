#pragma once

#include <cmath>
#include <complex>

namespace molliclt {

// Neumaier summation.
struct CompensatedSum {
    double sum = 0;
    double comp = 0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct CompensatedComplexSum {
    CompensatedSum re, im;

    void add(std::complex<double> v) {
        re.add(v.real());
        im.add(v.imag());
    }
    void merge(const CompensatedComplexSum& o) {
        re.add(o.re.sum);
        re.add(o.re.comp);
        im.add(o.im.sum);
        im.add(o.im.comp);
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace molliclt
