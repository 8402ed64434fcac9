#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pstark/manin.hpp"

#include <map>

using namespace pstark;

namespace {
// formal divisor accumulation over cusps
using Div = std::map<std::pair<std::string, std::string>, long>;
std::pair<std::string, std::string> cusp_key(const mpz_class& n, const mpz_class& d) {
    if (d == 0) return {"1", "0"};
    mpz_class g = gcd(n, d);
    mpz_class nn = n / g, dd = d / g;
    if (dd < 0) { nn = -nn; dd = -dd; }
    return {nn.get_str(), dd.get_str()};
}
void add_path_divisor(Div& dv, const Mat2& g, int sign) {
    // g({0} - {infty}) = {b/d} - {a/c}
    dv[cusp_key(g.b, g.d)] += sign;
    dv[cusp_key(g.a, g.c)] -= sign;
}
} // namespace

TEST_CASE("unimodular path decomposition telescopes") {
    for (auto [num, den] : std::vector<std::pair<long, long>>{
             {0, 1}, {1, 1}, {7, 25}, {-3, 115}, {22, 7}, {-100, 9}, {1, 340}}) {
        Cusp r{num, den};
        Div dv;
        for (auto& [g, s] : cusp_paths(r)) {
            CHECK(g.det() == 1);
            add_path_divisor(dv, g, s);
        }
        // expect {r} - {infty}
        dv[cusp_key(num, den)] -= 1;
        dv[cusp_key(1, 0)] += 1;
        for (auto& [k, v] : dv) CHECK(v == 0);
    }
    // divisor {r} - {s}
    Cusp r{3, 7}, s{-1, 4};
    Div dv;
    for (auto& [g, sg] : divisor_paths(r, s)) add_path_divisor(dv, g, sg);
    dv[cusp_key(3, 7)] -= 1;
    dv[cusp_key(-1, 4)] += 1;
    for (auto& [k, v] : dv) CHECK(v == 0);
}

TEST_CASE("coset counts match |P^1(Z/M)|") {
    ManinData md1 = build_manin_data(23, 5);
    CHECK(md1.size() == 144);
    ManinData md2 = build_manin_data(31, 3);
    CHECK(md2.size() == 128);
    ManinData md3 = build_manin_data(68, 5);
    CHECK(md3.size() == 648);
    ManinData md4 = build_manin_data(11, 5);
    CHECK(md4.size() == 72); // 55 * (1+1/5)(1+1/11)
    CHECK_THROWS(build_manin_data(1, 5));
    CHECK_THROWS(build_manin_data(10, 5));
}

TEST_CASE("S and T orbit structure") {
    ManinData md = build_manin_data(23, 5);
    long n2 = 0, n3 = 0;
    for (long i = 0; i < md.size(); i++) {
        // S^2 = -1 acts trivially on cosets
        CHECK(md.sstar[md.sstar[i]] == i);
        CHECK(md.tstar[md.tstar[md.tstar[i]]] == i);
        if (md.sstar[i] == i) n2++;
        if (md.tstar[i] == i) n3++;
    }
    CHECK(n2 == 0); // no 2-torsion at 115
    CHECK(n3 == 0); // no 3-torsion at 115

    ManinData md3 = build_manin_data(31, 3);
    long t3 = 0;
    for (long i = 0; i < md3.size(); i++)
        if (md3.tstar[i] == i) t3++;
    CHECK(t3 == 2); // two elliptic points of order 3 on Gamma_0(93)
}

TEST_CASE("SL2 lifts and coset lookup") {
    ManinData md = build_manin_data(23, 5);
    for (long i = 0; i < md.size(); i++) {
        const Mat2& g = md.lift[i];
        CHECK(g.det() == 1);
        CHECK(md.index_of_matrix(g) == i);
    }
    // right action consistency: class(g * S) = sstar[class(g)]
    Mat2 S{0, -1, 1, 0}, T{0, -1, 1, -1};
    for (long i = 0; i < md.size(); i += 7) {
        CHECK(md.index_of_matrix(md.lift[i].mul(S)) == md.sstar[i]);
        CHECK(md.index_of_matrix(md.lift[i].mul(T)) == md.tstar[i]);
    }
}
