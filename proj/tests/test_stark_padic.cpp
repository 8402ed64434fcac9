#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pstark/stark_padic.hpp"

using namespace pstark;

namespace {
// the degree-9 Stark-unit minimal polynomial for d = -31, p = 3
AlgebraicPolynomial ex3_poly() {
    AlgebraicPolynomial P;
    P.disc = 0;
    std::vector<long> c{-27, 5022, -7371, 25704, 117180, 60156, -71640, -1143, -306, 1};
    for (long x : c) P.coeffs.push_back({x, 0});
    return P;
}
} // namespace

TEST_CASE("polynomial roots: synthetic product") {
    PadicRing R({5, 2, 2, 8});
    // P = (x - c) for a single known element
    Elem c = R.add(R.from_int(3), R.pi());
    std::vector<Elem> P{R.neg(c), R.one()};
    auto roots = poly_roots(R, P);
    REQUIRE(roots.size() == 1);
    CHECK(R.val_pi(R.sub(roots[0], c)) >= R.cap_pi() - 6 * R.e());

    // product of several distinct roots, including a non-unit one
    std::vector<Elem> rs{R.from_int(2), R.mul(R.pi(), R.from_int(3)),
                         R.add(R.unram_gen(), R.one()), R.from_int(11)};
    std::vector<Elem> Q{R.one()};
    for (auto& r : rs) {
        std::vector<Elem> nxt(Q.size() + 1, R.zero());
        for (size_t t = 0; t < Q.size(); t++) {
            nxt[t + 1] = R.add(nxt[t + 1], Q[t]);
            nxt[t] = R.sub(nxt[t], R.mul(Q[t], r));
        }
        Q = std::move(nxt);
    }
    auto roots2 = poly_roots(R, Q);
    CHECK(roots2.size() == 4);
    CHECK(product_check(R, Q, roots2) >= R.cap_pi() - 6 * R.e());
    // valuations sum to the valuation of the constant term
    long vsum = 0;
    for (auto& r : roots2) vsum += R.val_pi(r);
    CHECK(vsum == R.val_pi(Q[0]));
}

TEST_CASE("alpha projection") {
    PadicRing R({5, 2, 2, 8});
    Elem r = R.from_int(7); // fixed by frobenius
    CHECK(R.eq(alpha_projection(R, r, 1), R.from_int(49)));
    CHECK(R.eq(alpha_projection(R, r, -1), R.one()));
    // |delta_p(r)|_alpha = |r|_alpha for alpha = 1, inverse for alpha = -1
    Elem s = R.add(R.unram_gen(), R.from_int(3));
    Elem fs = R.frobenius(s);
    CHECK(R.eq(alpha_projection(R, fs, 1), alpha_projection(R, s, 1)));
    CHECK(R.eq(alpha_projection(R, fs, -1), R.inv(alpha_projection(R, s, -1))));
}

TEST_CASE("example 3 roots and Galois labeling") {
    PadicRing R({3, 2, 2, 14});
    AlgebraicPolynomial P = ex3_poly();
    auto Pe = embed_polynomial(R, P, R.zero());
    auto roots = poly_roots(R, Pe);
    REQUIRE(roots.size() == 9);
    long floor_pi = R.cap_pi() - 8 * R.e();
    CHECK(product_check(R, Pe, roots) >= floor_pi);

    auto lab = label_roots(R, roots, 3, floor_pi);
    // frobenius stabilizes the roots of a rational polynomial and has order 2
    REQUIRE(lab.frob_perm.has_value());
    {
        auto& fp = *lab.frob_perm;
        bool nontrivial = false;
        for (long i = 0; i < 9; i++) {
            CHECK(fp[fp[i]] == i);
            if (fp[i] != i) nontrivial = true;
        }
        CHECK(nontrivial);
    }
    // certified generators of the order-3 part exist; together with gamma they
    // generate a commuting group of order 9
    REQUIRE(!lab.delta_perms.empty());
    auto& dp = lab.delta_perms[0];
    auto compose = [&](const std::vector<long>& a, const std::vector<long>& b) {
        std::vector<long> c(a.size());
        for (size_t i = 0; i < a.size(); i++) c[i] = a[b[i]];
        return c;
    };
    // commutation with gamma
    CHECK(compose(dp, lab.gamma_perm) == compose(lab.gamma_perm, dp));
    // group closure of order 9
    std::vector<std::vector<long>> group;
    std::vector<long> idp(9);
    for (long i = 0; i < 9; i++) idp[i] = i;
    for (long a = 0; a < 3; a++)
        for (long b = 0; b < 3; b++) {
            std::vector<long> g = idp;
            for (long t = 0; t < a; t++) g = compose(dp, g);
            for (long t = 0; t < b; t++) g = compose(lab.gamma_perm, g);
            for (auto& other : group) CHECK(g != other);
            group.push_back(g);
        }
    CHECK(group.size() == 9);
    // every certified permutation is Galois-certified by construction; the
    // gamma action is too
    CHECK(certify_galois(R, roots, lab.gamma_perm, floor_pi));
    // a transposition of two roots in the same frobenius orbit is generally
    // not Galois
    {
        std::vector<long> bad = idp;
        std::swap(bad[0], bad[1]);
        CHECK(!certify_galois(R, roots, bad, floor_pi));
    }

    // Stark sums: nonvanishing, and ratio invariances under relabeling
    Dirichlet psi = Dirichlet::psi_standard(3);
    StarkSums s0 = stark_sums(R, roots, lab.gamma_perm, dp, 0, 3, 1, psi, -1);
    for (long i = 1; i < 3; i++) CHECK(R.val_pi(s0.S[i]) < floor_pi);
    // delta-translate of the base root leaves S_i/S_j unchanged
    StarkSums s1 = stark_sums(R, roots, lab.gamma_perm, dp, dp[0], 3, 1, psi, -1);
    Elem r0 = R.div(s0.S[1], s0.S[2]);
    Elem r1 = R.div(s1.S[1], s1.S[2]);
    CHECK(R.val_pi(R.sub(r0, r1)) >= floor_pi - 3 * R.e());
    // gamma-translate multiplies the ratio by a p-th root of unity
    StarkSums s2 = stark_sums(R, roots, lab.gamma_perm, dp, lab.gamma_perm[0], 3, 1,
                              psi, -1);
    Elem r2 = R.div(s2.S[1], s2.S[2]);
    Elem q = R.div(r2, r0);
    CHECK(R.val_pi(R.sub(R.pow(q, 3), R.one())) >= floor_pi - 3 * R.e());
}
