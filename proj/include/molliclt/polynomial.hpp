#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "molliclt/characters.hpp"

namespace molliclt {

// sum_n coeff(n) chi(n) / sqrt(n); the 1/sqrt(n) stays outside the stored coefficients.
struct DirichletPolynomial {
    std::vector<u64> support;  // ascending
    std::vector<cplx> coeff;
    std::vector<mpq_class> exact;  // parallel to support when the coefficients are exact rationals

    std::size_t size() const { return support.size(); }
    u64 length() const { return support.empty() ? 0 : support.back(); }
    bool is_exact() const { return !exact.empty(); }

    cplx coefficient(u64 n) const;
    cplx evaluate(const CharacterTable& t, u64 a) const;
    std::vector<cplx> evaluate_all(const CharacterTable& t) const;
    // Terms (n, coeff(n)/sqrt(n)) for batch transforms and the random model.
    std::vector<std::pair<u64, cplx>> scaled_terms() const;
};

// Sorts by n and merges duplicates.
DirichletPolynomial make_polynomial(std::vector<std::pair<u64, cplx>> terms);

// Dirichlet convolution of the stored coefficients (1/sqrt(n) is multiplicative, so this is the product).
DirichletPolynomial multiply(const DirichletPolynomial& a, const DirichletPolynomial& b);
DirichletPolynomial power(const DirichletPolynomial& p, unsigned k);

std::string polynomial_csv(const DirichletPolynomial& p);

}  // namespace molliclt
