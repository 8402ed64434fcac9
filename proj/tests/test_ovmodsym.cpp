#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pstark/ovmodsym.hpp"

using namespace pstark;

namespace {

SymbolSpace make_space_11_5(long k, long nmom, long W) {
    ManinData md = build_manin_data(11, 5);
    DistCtx C = DistCtx::make(5, k, nmom, W);
    std::vector<int> eps(11, 0);
    for (long r = 1; r < 11; r++) eps[r] = 1; // trivial character
    return SymbolSpace(std::move(md), C, eps);
}

SymbolSpace make_space_23_5(long nmom, long W) {
    ManinData md = build_manin_data(23, 5);
    DistCtx C = DistCtx::make(5, -1, nmom, W);
    std::vector<int> eps(23, 0);
    for (long r = 1; r < 23; r++) eps[r] = kronecker(-23, r);
    return SymbolSpace(std::move(md), C, eps);
}

long symbol_defect(const SymbolSpace& S, const OvSymbol& a) {
    long best = S.ctx().nmom + S.ctx().W;
    for (auto& v : a.V) best = std::min(best, dist_filtration_defect(S.ctx(), v));
    return best;
}

} // namespace

TEST_CASE("random symbols satisfy the Manin relations") {
    SymbolSpace S = make_space_11_5(0, 8, 10);
    Rng rng(1234);
    for (int t = 0; t < 3; t++) {
        OvSymbol phi = S.random_symbol(rng);
        CHECK(S.verify_relations(phi) >= S.ctx().nmom);
        CHECK(!S.is_zero(phi));
    }
    // weight -1 with nontrivial character, including a 3-torsion level
    SymbolSpace S23 = make_space_23_5(8, 10);
    OvSymbol phi = S23.random_symbol(rng);
    CHECK(S23.verify_relations(phi) >= S23.ctx().nmom);

    ManinData md93 = build_manin_data(31, 3);
    DistCtx C93 = DistCtx::make(3, -1, 8, 10);
    std::vector<int> eps31(31, 0);
    for (long r = 1; r < 31; r++) eps31[r] = kronecker(-31, r);
    SymbolSpace S93(std::move(md93), C93, eps31);
    OvSymbol phi93 = S93.random_symbol(rng);
    CHECK(S93.verify_relations(phi93) >= S93.ctx().nmom);
}

TEST_CASE("iota is an involution and operators commute") {
    SymbolSpace S = make_space_11_5(0, 7, 9);
    Rng rng(77);
    OvSymbol phi = S.random_symbol(rng);

    OvSymbol i2 = S.apply_iota(S.apply_iota(phi));
    CHECK(symbol_defect(S, S.sub(i2, phi)) >= S.ctx().nmom);

    // U_p and T_2 commute to filtration precision
    OvSymbol a = S.apply_tl(S.apply_up(phi), 2);
    OvSymbol b = S.apply_up(S.apply_tl(phi, 2));
    CHECK(symbol_defect(S, S.sub(a, b)) >= S.ctx().nmom - 1);

    // minus projection is idempotent and iota acts by -1 on it
    OvSymbol m = S.minus_projection(phi);
    CHECK(symbol_defect(S, S.sub(S.minus_projection(m), m)) >= S.ctx().nmom);
    CHECK(symbol_defect(S, S.add(S.apply_iota(m), m)) >= S.ctx().nmom);
}

TEST_CASE("evaluation is consistent with stored values") {
    SymbolSpace S = make_space_11_5(0, 7, 9);
    Rng rng(99);
    OvSymbol phi = S.random_symbol(rng);
    // gamma_x({0} - {infty}) evaluated through the generic path equals V_x
    for (long x = 0; x < S.ncosets(); x += 17) {
        const Mat2& g = S.manin().lift[x];
        Cusp r{g.b, g.d}, s{g.a, g.c};
        Dist v = S.evaluate(phi, r, s);
        Dist diff = dist_sub(S.ctx(), v, phi.V[x]);
        CHECK(dist_filtration_defect(S.ctx(), diff) >= S.ctx().nmom);
    }
}

TEST_CASE("specialization at weight 0 intertwines U_p") {
    SymbolSpace S = make_space_11_5(0, 7, 9);
    Rng rng(55);
    OvSymbol phi = S.random_symbol(rng);
    auto sp = S.specialize(phi, 0);
    std::vector<mpz_class> v0(S.ncosets());
    for (long x = 0; x < S.ncosets(); x++) v0[x] = sp[x][0];

    OvSymbol up = S.apply_up(phi);
    auto sp_up = S.specialize(up, 0);
    auto up_sp = S.apply_up_weight0(v0);
    for (long x = 0; x < S.ncosets(); x++) {
        mpz_class d = (sp_up[x][0] - up_sp[x]) % S.ctx().pw;
        if (d < 0) d += S.ctx().pw;
        long vv = d == 0 ? S.ctx().W : vp_mpz(d, 5, S.ctx().W);
        CHECK(vv >= S.ctx().nmom - 1);
    }
}

TEST_CASE("weight-2 oracle: the 5-ordinary eigensymbol at level 55") {
    // X_0(11) newform: a_2 = -2, a_3 = -1, a_7 = -2, a_13 = 4; U_5 eigenvalue
    // is the unit root of x^2 - x + 5
    long nmom = 9, W = 11;
    SymbolSpace S = make_space_11_5(0, nmom, W);
    PadicRing Zp({5, 1, 0, W});
    auto roots = quadratic_roots_zp(Zp, 1, 5);
    REQUIRE(roots.size() == 2);
    Elem alpha0 = Zp.val_pi(roots[0]) == 0 ? roots[0] : roots[1];

    EigenformData f;
    f.N = 11;
    f.p = 5;
    f.alpha = alpha0.c[0];
    f.a_ell[2] = -2;
    f.a_ell[3] = -1;
    f.eps_table.assign(11, 1);
    f.eps_table[0] = 0;
    for (long r = 1; r < 11; r++) f.eps_table[r] = 1;

    EigenResult res = ordinary_eigensymbol(S, f, 42);
    CHECK(res.up_defect >= nmom - 2);
    CHECK(res.tl_defect[2] >= nmom - 2);
    CHECK(res.tl_defect[3] >= nmom - 2);
    CHECK(res.relation_defect >= nmom - 2);
    // further eigenvalues come along for free
    CHECK(S.eigen_defect_tl(res.phi, 7, -2) >= nmom - 2);
    CHECK(S.eigen_defect_tl(res.phi, 13, 4) >= nmom - 2);
    // wrong eigenvalue has a small defect
    CHECK(S.eigen_defect_tl(res.phi, 7, 3) < 4);
}

TEST_CASE("weight -1 eigensymbol for d = -23, p = 5, alpha = -1") {
    long nmom = 9, W = 11;
    SymbolSpace S = make_space_23_5(nmom, W);
    EigenformData f;
    f.N = 23;
    f.p = 5;
    f.alpha = -1;
    f.a_ell[2] = -1;
    f.a_ell[3] = -1;
    f.eps_table.assign(23, 0);
    for (long r = 1; r < 23; r++) f.eps_table[r] = kronecker(-23, r);

    EigenResult res = ordinary_eigensymbol(S, f, 7);
    CHECK(res.up_defect >= nmom - 2);
    CHECK(res.tl_defect[2] >= nmom - 2);
    CHECK(res.relation_defect >= nmom - 2);
    // T_13 = -1 comes along
    CHECK(S.eigen_defect_tl(res.phi, 13, -1) >= nmom - 2);

    // two seeds give proportional symbols
    EigenResult res2 = ordinary_eigensymbol(S, f, 1789);
    // find a unit coordinate of res at moment 0
    long x0 = -1;
    for (long x = 0; x < S.ncosets() && x0 < 0; x++)
        if (res.phi.V[x][0] % 5 != 0) x0 = x;
    REQUIRE(x0 >= 0);
    mpz_class c = res2.phi.V[x0][0] * inv_mod(res.phi.V[x0][0], S.ctx().pw) % S.ctx().pw;
    OvSymbol diff = S.sub(res2.phi, S.scale(res.phi, c));
    CHECK(symbol_defect(S, diff) >= nmom - 2);
}
