#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pstark/distribution.hpp"
#include "pstark/rng.hpp"

using namespace pstark;

namespace {
Dist random_dist(const DistCtx& C, Rng& rng) {
    Dist d(C.nmom);
    for (long j = 0; j < C.nmom; j++) {
        mpz_class v = 0;
        for (int k = 0; k < 3; k++)
            v = v * mpz_class(1L << 30) + mpz_class((unsigned long)(rng.next() % (1L << 30)));
        d[j] = v % C.pw;
    }
    return d;
}
} // namespace

TEST_CASE("identity and composition of the weight action") {
    DistCtx C = DistCtx::make(5, -1, 10, 12);
    Rng rng(3);
    Dist mu = random_dist(C, rng);

    Mat2 id{1, 0, 0, 1};
    CHECK(act_matrix(C, id, mu) == mu);

    // composition: mu|(gh) = (mu|g)|h for g, h in Sigma_0(p) with unit dets
    Mat2 g{1, 2, 5, 1}, h{2, 1, 15, 8}; // dets 1 - 10 = -9, 16 - 15 = 1
    REQUIRE(in_sigma0p(C, g));
    REQUIRE(in_sigma0p(C, h));
    Dist lhs = act_matrix(C, g.mul(h), mu);
    Dist rhs = act_matrix(C, h, act_matrix(C, g, mu));
    // filtration: agreement of moment j mod p^(nmom - j)
    Dist diff = dist_sub(C, lhs, rhs);
    CHECK(dist_filtration_defect(C, diff) >= C.nmom);
}

TEST_CASE("binomial shift oracle at k = 0") {
    DistCtx C = DistCtx::make(5, 0, 8, 10);
    Rng rng(5);
    Dist mu = random_dist(C, rng);
    // gamma = (1 1; 0 1): new moment j = mu((1+z)^j) = sum_i C(j,i) mu_i
    Mat2 g{1, 1, 0, 1};
    Dist got = act_matrix(C, g, mu);
    for (long j = 0; j < C.nmom; j++) {
        mpz_class expect = 0;
        for (long i = 0; i <= j; i++) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), (unsigned long)j, (unsigned long)i);
            expect += b * mu[i];
        }
        mpz_mod(expect.get_mpz_t(), expect.get_mpz_t(), C.pw.get_mpz_t());
        CHECK(got[j] == expect);
    }
    // total mass is preserved by upper-triangular matrices at k = 0
    CHECK(got[0] == mu[0]);
}

TEST_CASE("k = -1 action matches direct series expansion") {
    DistCtx C = DistCtx::make(5, -1, 7, 9);
    Rng rng(11);
    Dist mu = random_dist(C, rng);
    Mat2 g{2, 3, 5, 4}; // det 8 - 15 = -7, a=2 unit, c=5
    REQUIRE(in_sigma0p(C, g));
    Dist got = act_matrix(C, g, mu);
    // oracle: expand (3 + 4z)^j (2 + 5z)^(-1-j) as a power series directly
    // (2 + 5z)^(-1) = (1/2) sum_n (-5/2)^n z^n
    mpz_class pw = C.pw;
    mpz_class half = inv_mod(2, pw);
    for (long j = 0; j < C.nmom; j++) {
        // series for (2+5z)^(-1-j): start from power -1 and multiply j times
        std::vector<mpz_class> inv1(C.nmom, 0);
        for (long n = 0; n < C.nmom; n++) {
            mpz_class t = half;
            for (long i = 0; i < n; i++) t = t * (pw - 5) % pw * half % pw;
            inv1[n] = t;
        }
        std::vector<mpz_class> acc = inv1;
        for (long rep = 0; rep < j; rep++) {
            std::vector<mpz_class> nxt(C.nmom, 0);
            for (long u = 0; u < C.nmom; u++)
                for (long v = 0; u + v < C.nmom; v++)
                    nxt[u + v] = (nxt[u + v] + acc[u] * inv1[v]) % pw;
            acc = nxt;
        }
        // multiply by (3 + 4z)^j
        std::vector<mpz_class> num(C.nmom, 0);
        num[0] = 1;
        for (long rep = 0; rep < j; rep++) {
            std::vector<mpz_class> nxt(C.nmom, 0);
            for (long u = 0; u < C.nmom; u++) {
                nxt[u] = (nxt[u] + num[u] * 3) % pw;
                if (u + 1 < C.nmom) nxt[u + 1] = (nxt[u + 1] + num[u] * 4) % pw;
            }
            num = nxt;
        }
        std::vector<mpz_class> série(C.nmom, 0);
        for (long u = 0; u < C.nmom; u++)
            for (long v = 0; u + v < C.nmom; v++)
                série[u + v] = (série[u + v] + num[u] * acc[v]) % pw;
        mpz_class expect = 0;
        for (long i = 0; i < C.nmom; i++) expect = (expect + série[i] * mu[i]) % pw;
        // truncation differs beyond the filtration; compare with slack
        mpz_class diff = (got[j] - expect) % pw;
        if (diff < 0) diff += pw;
        long v = diff == 0 ? C.W : vp_mpz(diff, C.p, C.W);
        CHECK(v + j >= C.nmom);
    }
}

TEST_CASE("iota is an involution") {
    DistCtx C = DistCtx::make(5, -1, 9, 9);
    Rng rng(7);
    Dist mu = random_dist(C, rng);
    CHECK(act_iota(C, act_iota(C, mu)) == mu);
}

TEST_CASE("difference equation") {
    DistCtx C = DistCtx::make(5, -1, 9, 12);
    Rng rng(13);
    // boundary = 0 -> nu = 0 admissible
    Dist z = dist_zero(C);
    CHECK(solve_difference_equation(C, z) == z);

    // round-trip on a genuine boundary: b = nu0|(1 1; 0 1) - nu0; solving
    // recovers nu0 up to the kernel (the top moment) and applying the
    // difference again returns b to filtration precision
    Mat2 g{1, 1, 0, 1};
    Dist nu0 = random_dist(C, rng);
    Dist b = dist_sub(C, act_matrix(C, g, nu0), nu0);
    REQUIRE(b[0] == 0);
    Dist nu = solve_difference_equation(C, b);
    for (long j = 0; j + 1 < C.nmom; j++) {
        mpz_class d = (nu[j] - nu0[j]) % C.pw;
        if (d < 0) d += C.pw;
        long v = d == 0 ? C.W : vp_mpz(d, C.p, C.W);
        CHECK(v + j >= C.nmom - 3);
    }
    Dist back = dist_sub(C, act_matrix(C, g, nu), nu);
    Dist diff = dist_sub(C, back, b);
    CHECK(dist_filtration_defect(C, diff) + 3 >= C.nmom);

    // nonzero total measure rejected
    Dist bad = random_dist(C, rng);
    bad[0] = 1;
    CHECK_THROWS(solve_difference_equation(C, bad));
}
