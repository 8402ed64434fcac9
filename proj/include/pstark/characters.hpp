#pragma once

#include "pstark/padic.hpp"

namespace pstark {

// Dirichlet character of p-power modulus p^m, in the canonical decomposition
// chi(a) = teich(a)^s * zeta_{p^(m-1)}^(t * ind(a)), where ind is the index of
// <a> = a/omega(a) with respect to the base 1+p in (1+pZ)/(1+p^m Z).
struct Dirichlet {
    long p = 0;
    long m = 0; // modulus p^m; m = 0 means the trivial character of modulus 1
    long s = 0; // Teichmuller exponent, mod p-1
    long t = 0; // wild exponent, mod p^(m-1)

    long modulus() const {
        long r = 1;
        for (long i = 0; i < m; i++) r *= p;
        return r;
    }
    long order() const;
    long conductor() const;     // as an integer p^k
    long conductor_exp() const; // the k
    bool is_primitive() const { return conductor() == modulus(); }
    bool is_trivial() const;

    Dirichlet power(long k) const;
    Dirichlet inverse() const { return power(-1); }
    Dirichlet times(const Dirichlet& o) const; // same p required

    // the paper's psi: psi(g) = zeta_p for g the minimal positive generator
    // of (Z/p^2)^x
    static Dirichlet psi_standard(long p);
    static Dirichlet omega(long p); // Teichmuller character mod p
    static Dirichlet trivial(long p) { return Dirichlet{p, 0, 0, 0}; }

    bool even(/* chi(-1) == 1 */) const;
};

// minimal positive generator of (Z/p^m)^x
long minimal_generator(long p, long m);
// index of a unit a in (1+pZ/p^mZ) base 1+p, after projecting out mu_{p-1}
long wild_index(long p, long m, long a);

// chi(a) as an element of R (which must contain zeta_{p^(m-1)})
Elem char_eval(const PadicRing& R, const Dirichlet& chi, const mpz_class& a);

// Gauss sum tau(chi) = sum_{a mod p^m} chi(a) zeta_{p^m}^a, chi primitive
Elem gauss_sum(const PadicRing& R, const Dirichlet& chi);

// weight-space character z -> finite(z) <z>^(s-1), s an integer here
struct WeightChar {
    Dirichlet finite;
    mpz_class s = 0;
};

// evaluation at an integer unit z; exact integer-power route
Elem weight_char_eval(const PadicRing& R, const WeightChar& k, const mpz_class& z);
// same value through exp_p((s-1) log <z>); cross-check route
Elem weight_char_eval_explog(const PadicRing& R, const WeightChar& k, const mpz_class& z);

} // namespace pstark
