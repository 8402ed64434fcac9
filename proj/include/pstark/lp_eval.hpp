#pragma once

#include "pstark/characters.hpp"
#include "pstark/ovmodsym.hpp"

namespace pstark {

// measure of the U_p-eigensymbol on the coset a + p^m Z_p: pairing a locally
// analytic f against `moments` of phi({a/p^m} - {infty}) composed with
// z -> a + p^m z, scaled by alpha^{-m}
struct CosetMeasure {
    long a = 0;
    long m = 0;
    Dist moments;
};

CosetMeasure coset_restriction(const SymbolSpace& S, const OvSymbol& phi, long a, long m);

// integral of f over the coset for polynomial f given by coefficients in R
Elem coset_pair_poly(const PadicRing& R, const SymbolSpace& S, const CosetMeasure& cm,
                     const std::vector<Elem>& coeffs, const mpz_class& alpha);

// Lambda_k(phi)(kappa) = int_{Z_p^x} kappa(z) dmu_phi(z), kappa = finite <.>^(s-1);
// depth 0 means the conductor depth of the finite part
Elem mellin_value(const PadicRing& R, const SymbolSpace& S, const OvSymbol& phi,
                  const WeightChar& kappa, const mpz_class& alpha, long depth = 0);

// Lambda(psi^-i omega^-1 <.>^(s-1)) / Lambda(psi^-j omega^-1 <.>^(s-1))
Elem lp_ratio(const PadicRing& R, const SymbolSpace& S, const OvSymbol& phi,
              const Dirichlet& psi, long i, long j, const mpz_class& s_val,
              const mpz_class& alpha);

// (1 - beta psi_i(p))(1 - psi_i^{-1}(p)/(alpha p)) tau(psi^-i)/p^(n_i+1), divided
// by the same expression for j; with p-power conductors the Euler factors are 1
Elem rhs_prefactor(const PadicRing& R, const Dirichlet& psi, long i, long j,
                   long alpha);

} // namespace pstark
