#pragma once

#include <array>
#include <gmpxx.h>
#include <stdexcept>
#include <vector>

namespace pstark {

// 2x2 integer matrix (a b; c d)
struct Mat2 {
    mpz_class a, b, c, d;

    mpz_class det() const { return a * d - b * c; }
    Mat2 mul(const Mat2& o) const {
        return Mat2{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
                    c * o.b + d * o.d};
    }
    Mat2 inv_unimodular() const { // det must be +-1
        mpz_class dt = det();
        if (dt == 1) return Mat2{d, -b, -c, a};
        if (dt == -1) return Mat2{-d, b, c, -a};
        throw std::runtime_error("inv_unimodular: determinant not a unit");
    }
};

// cusp num/den, den = 0 encodes infinity
struct Cusp {
    mpz_class num, den;
};

// unimodular-path decomposition: {r} - {infty} = sum sign_t * g_t({0} - {infty})
std::vector<std::pair<Mat2, int>> cusp_paths(const Cusp& r);
// {r} - {s}
std::vector<std::pair<Mat2, int>> divisor_paths(const Cusp& r, const Cusp& s);

// Manin coset data for Gamma_0(N p): P^1(Z/M), S and T actions, SL_2 lifts,
// generator/relation structure used to build symbols
struct ManinData {
    long N = 0, p = 0, M = 0;
    std::vector<std::pair<long, long>> reps; // canonical (c : d)
    std::vector<long> table;                 // (c*M + d) -> index, -1 invalid
    std::vector<long> sstar, tstar;          // right action of S, T on cosets
    std::vector<Mat2> lift;                  // SL2(Z) lift per coset

    long size() const { return (long)reps.size(); }
    long index(const mpz_class& c, const mpz_class& d) const {
        mpz_class cc = c % M, dd = d % M;
        if (cc < 0) cc += M;
        if (dd < 0) dd += M;
        long t = table[cc.get_si() * M + dd.get_si()];
        if (t < 0) throw std::runtime_error("ManinData: invalid coset");
        return t;
    }
    long index_of_matrix(const Mat2& g) const { return index(g.c, g.d); }
};

ManinData build_manin_data(long N, long p);

} // namespace pstark
