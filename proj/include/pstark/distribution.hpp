#pragma once

#include "pstark/manin.hpp"
#include "pstark/padic.hpp"

namespace pstark {

// moment-truncated distribution context: moments mu(z^j), j < nmom, all stored
// mod p^W; moment j is meaningful mod p^(nmom - j) (the standard filtration)
struct DistCtx {
    long p = 0;
    long k = 0;    // weight of the Sigma_0(p) action
    long nmom = 0; // number of moments
    long W = 0;    // working modulus exponent
    mpz_class pw;  // p^W

    static DistCtx make(long p, long k, long nmom, long W);
};

using Dist = std::vector<mpz_class>;

Dist dist_zero(const DistCtx& C);
Dist dist_add(const DistCtx& C, const Dist& a, const Dist& b);
Dist dist_sub(const DistCtx& C, const Dist& a, const Dist& b);
Dist dist_neg(const DistCtx& C, const Dist& a);
Dist dist_scale(const DistCtx& C, const Dist& a, const mpz_class& s);
bool dist_is_zero(const DistCtx& C, const Dist& a);
// filtration defect: min over j of (v_p(a_j) + j), capped at nmom
long dist_filtration_defect(const DistCtx& C, const Dist& a);

// weight-k action matrix of gamma = (a b; c d) in Sigma_0(p):
// (mu|gamma)(z^j) = mu((b + d z)^j (a + c z)^(k - j))
struct ActionMatrix {
    long nmom = 0;
    std::vector<mpz_class> A; // row-major: out_j = sum_i A[j*nmom + i] * mu_i
};

ActionMatrix weight_action_matrix(const DistCtx& C, const Mat2& g);
Dist act(const DistCtx& C, const ActionMatrix& A, const Dist& mu);
Dist act_matrix(const DistCtx& C, const Mat2& g, const Dist& mu);
bool in_sigma0p(const DistCtx& C, const Mat2& g);

// iota: moments j -> (-1)^j mu_j (action of diag(1, -1))
Dist act_iota(const DistCtx& C, const Dist& mu);

// solve nu|(1 1; 0 1) - nu = boundary; boundary must have zero total measure;
// the top moment of nu is normalized to 0
Dist solve_difference_equation(const DistCtx& C, const Dist& boundary);

} // namespace pstark
