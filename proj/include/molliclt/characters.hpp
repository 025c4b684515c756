#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "molliclt/arith.hpp"

namespace molliclt {

using cplx = std::complex<double>;

// Characters mod a prime q: chi_a(n) = e(a ind(n) / (q-1)).
struct CharacterTable {
    u64 q = 0;
    u64 g = 0;
    std::vector<std::uint32_t> ind;  // ind[n] for n in [1, q-1]; ind[0] unused
    std::vector<std::uint32_t> pow;  // pow[k] = g^k mod q
    std::vector<cplx> roots;         // roots[k] = e(k/(q-1))

    u64 order() const { return q - 1; }
    u64 conj_index(u64 a) const { return a == 0 ? 0 : q - 1 - a; }
};

enum class Parity { even, odd };
enum class TransformMethod { automatic, direct, fft };

inline constexpr u64 kDirectTransformBelow = 20'000;

CharacterTable build_table(u64 q);
u64 primitive_root(u64 q);

cplx chi(const CharacterTable& t, u64 a, u64 n);
Parity parity(const CharacterTable& t, u64 a);
cplx gauss_sum(const CharacterTable& t, u64 a);
// tau(chi_a) for every a (entry 0 is the principal sum, -1).
std::vector<cplx> gauss_sums_all(const CharacterTable& t);

// S[a] = sum_n coeffs[n] chi_a(n), coeffs indexed by residue n in [0, q-1] (entry 0 ignored).
std::vector<cplx> batch_character_sums(const CharacterTable& t, const std::vector<cplx>& coeffs,
                                       TransformMethod method = TransformMethod::automatic);

// Sparse input: integers n >= 1 (reduced mod q, multiples of q dropped).
std::vector<cplx> batch_character_sums(const CharacterTable& t,
                                       const std::vector<std::pair<u64, cplx>>& terms,
                                       TransformMethod method = TransformMethod::automatic);

}  // namespace molliclt
