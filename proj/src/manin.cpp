#include "pstark/manin.hpp"

#include <numeric>

namespace pstark {

std::vector<std::pair<Mat2, int>> cusp_paths(const Cusp& r) {
    std::vector<std::pair<Mat2, int>> out;
    if (r.den == 0) return out; // {infty} - {infty} = 0
    // continued fraction convergents of num/den with floor division
    mpz_class a = r.num, b = r.den;
    if (b < 0) { a = -a; b = -b; }
    std::vector<mpz_class> ps, qs;
    mpz_class pm1 = 1, qm1 = 0; // p_{-1}/q_{-1} = infty
    mpz_class pm2 = 0, qm2 = 1;
    while (true) {
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_class pk = q * pm1 + pm2;
        mpz_class qk = q * qm1 + qm2;
        ps.push_back(pk);
        qs.push_back(qk);
        pm2 = pm1; qm2 = qm1;
        pm1 = pk; qm1 = qk;
        a = b;
        b = rem;
        if (rem == 0) break;
    }
    // paths g_i with g_i(infty) = p_i/q_i, g_i(0) = p_{i-1}/q_{i-1}
    mpz_class prevp = 1, prevq = 0;
    for (size_t i = 0; i < ps.size(); i++) {
        Mat2 g{ps[i], prevp, qs[i], prevq};
        if (g.det() == -1) { g.b = -g.b; g.d = -g.d; }
        if (g.det() != 1) throw std::runtime_error("cusp_paths: bad determinant");
        // g({0}-{infty}) = {p_{i-1}/q_{i-1}} - {p_i/q_i}; sum over i telescopes
        // to {infty} - {r}, so {r} - {infty} carries sign -1
        out.push_back({g, -1});
        prevp = ps[i];
        prevq = qs[i];
    }
    return out;
}

std::vector<std::pair<Mat2, int>> divisor_paths(const Cusp& r, const Cusp& s) {
    auto out = cusp_paths(r);
    for (auto& [g, sg] : cusp_paths(s)) out.push_back({g, -sg});
    return out;
}

ManinData build_manin_data(long N, long p) {
    if (N <= 1) throw std::invalid_argument("build_manin_data: level N must be > 1");
    if (p < 3) throw std::invalid_argument("build_manin_data: p must be an odd prime");
    if (N % p == 0) throw std::invalid_argument("build_manin_data: p must not divide N");
    ManinData md;
    md.N = N;
    md.p = p;
    long M = N * p;
    md.M = M;
    md.table.assign(M * M, -1);

    // units mod M
    std::vector<long> units;
    for (long u = 1; u < M; u++)
        if (std::gcd(u, M) == 1) units.push_back(u);

    // canonical representative = lexicographically least unit multiple
    std::vector<long> canon(M * M, -1);
    for (long c = 0; c < M; c++)
        for (long d = 0; d < M; d++) {
            if (std::gcd(std::gcd(c, d), M) != 1) continue;
            if (canon[c * M + d] >= 0) continue;
            long bc = M, bd = M;
            for (long u : units) {
                long cc = (c * u) % M, dd = (d * u) % M;
                if (cc < bc || (cc == bc && dd < bd)) { bc = cc; bd = dd; }
            }
            for (long u : units) {
                long cc = (c * u) % M, dd = (d * u) % M;
                canon[cc * M + dd] = bc * M + bd;
            }
        }

    // index the canonical representatives
    for (long c = 0; c < M; c++)
        for (long d = 0; d < M; d++) {
            long key = c * M + d;
            if (canon[key] != key) continue;
            md.table[key] = (long)md.reps.size();
            md.reps.push_back({c, d});
        }
    for (long key = 0; key < M * M; key++) {
        if (canon[key] < 0) continue;
        md.table[key] = md.table[canon[key]];
    }

    // S, T right actions on bottom rows: (c,d)S = (d,-c); (c,d)T = (d,-c-d)
    long n = md.size();
    md.sstar.resize(n);
    md.tstar.resize(n);
    for (long i = 0; i < n; i++) {
        auto [c, d] = md.reps[i];
        md.sstar[i] = md.index(d, -c);
        md.tstar[i] = md.index(d, -c - d);
    }

    // SL2 lifts
    md.lift.resize(n);
    for (long i = 0; i < n; i++) {
        auto [c, d] = md.reps[i];
        // choose c1 = c, d1 = d + kM with gcd(c1, d1) = 1
        mpz_class c1 = c, d1 = d;
        if (c1 == 0) {
            c1 = M; // (0 : d) with gcd(d, M) = 1; lift bottom row (M, d1)
        }
        for (long k = 0;; k++) {
            mpz_class cand = d + (mpz_class)k * M;
            mpz_class g = gcd(c1, cand);
            if (g == 1) { d1 = cand; break; }
            if (k > 4 * M + 10) throw std::runtime_error("lift: no coprime lift found");
        }
        mpz_class g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), d1.get_mpz_t(),
                   c1.get_mpz_t());
        // a*d1 - b*c1 = 1 with a = x, b = -y
        Mat2 gm{x, -y, c1, d1};
        if (gm.det() != 1) throw std::runtime_error("lift: determinant error");
        md.lift[i] = gm;
    }
    return md;
}

} // namespace pstark
