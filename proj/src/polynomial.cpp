#include "molliclt/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "molliclt/io.hpp"

namespace molliclt {

cplx DirichletPolynomial::coefficient(u64 n) const {
    auto it = std::lower_bound(support.begin(), support.end(), n);
    if (it == support.end() || *it != n) return 0.0;
    return coeff[static_cast<std::size_t>(it - support.begin())];
}

cplx DirichletPolynomial::evaluate(const CharacterTable& t, u64 a) const {
    cplx s = 0;
    for (std::size_t i = 0; i < support.size(); ++i)
        s += coeff[i] * chi(t, a, support[i]) / std::sqrt(static_cast<double>(support[i]));
    return s;
}

std::vector<cplx> DirichletPolynomial::evaluate_all(const CharacterTable& t) const {
    return batch_character_sums(t, scaled_terms());
}

std::vector<std::pair<u64, cplx>> DirichletPolynomial::scaled_terms() const {
    std::vector<std::pair<u64, cplx>> out;
    out.reserve(support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
        out.emplace_back(support[i], coeff[i] / std::sqrt(static_cast<double>(support[i])));
    return out;
}

DirichletPolynomial make_polynomial(std::vector<std::pair<u64, cplx>> terms) {
    std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    DirichletPolynomial p;
    for (auto& [n, c] : terms) {
        if (!p.support.empty() && p.support.back() == n) {
            p.coeff.back() += c;
        } else {
            p.support.push_back(n);
            p.coeff.push_back(c);
        }
    }
    return p;
}

DirichletPolynomial multiply(const DirichletPolynomial& a, const DirichletPolynomial& b) {
    std::vector<std::pair<u64, cplx>> terms;
    terms.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            u64 n;
            if (__builtin_mul_overflow(a.support[i], b.support[j], &n))
                throw std::overflow_error("multiply: support product overflows");
            terms.emplace_back(n, a.coeff[i] * b.coeff[j]);
        }
    return make_polynomial(std::move(terms));
}

DirichletPolynomial power(const DirichletPolynomial& p, unsigned k) {
    DirichletPolynomial out = make_polynomial({{1, 1.0}});
    for (unsigned i = 0; i < k; ++i) out = multiply(out, p);
    return out;
}

std::string polynomial_csv(const DirichletPolynomial& p) {
    std::string out = "n,coeff_re,coeff_im\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        out += std::to_string(p.support[i]);
        out += ',' + format_double(p.coeff[i].real()) + ',' + format_double(p.coeff[i].imag()) + '\n';
    }
    return out;
}

}  // namespace molliclt
