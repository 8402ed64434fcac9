#pragma once

#include "pstark/characters.hpp"
#include "pstark/padic.hpp"

#include <optional>

namespace pstark {

// monic polynomial with coefficients x + y*w over the integral basis {1, w}
// of O_F (disc = 0 or y = 0 throughout means rational coefficients)
struct AlgebraicPolynomial {
    mpz_class disc; // discriminant of the coefficient field; 0 for Q
    std::vector<std::pair<mpz_class, mpz_class>> coeffs; // ascending, size deg+1

    long degree() const { return (long)coeffs.size() - 1; }
};

// roots of w's minimal polynomial in the unramified part of R (the embeddings
// of the coefficient field)
std::vector<Elem> coefficient_embeddings(const PadicRing& R, const mpz_class& disc);

std::vector<Elem> embed_polynomial(const PadicRing& R, const AlgebraicPolynomial& P,
                                   const Elem& w_image);

Elem poly_eval(const PadicRing& R, const std::vector<Elem>& P, const Elem& x);

// all roots in R by residue enumeration, digit descent and Newton refinement;
// throws on repeated roots to precision
std::vector<Elem> poly_roots(const PadicRing& R, const std::vector<Elem>& P);

// residual valuation of prod (x - r_i) - P, coefficientwise minimum
long product_check(const PadicRing& R, const std::vector<Elem>& P,
                   const std::vector<Elem>& roots);

// |a|_alpha = a * delta_p(a) for alpha = +1, a / delta_p(a) for alpha = -1;
// delta_p is the residue Frobenius (its own inverse in the order-2 cases)
Elem alpha_projection(const PadicRing& R, const Elem& a, long alpha);

// match images to roots; empty result when some image is not a root
std::optional<std::vector<long>> match_permutation(const PadicRing& R,
                                                   const std::vector<Elem>& roots,
                                                   const std::vector<Elem>& images,
                                                   long floor_pi);

// interpolation certificate: the permutation comes from a field automorphism
// over F iff the Lagrange polynomial mapping r_i -> r_{perm(i)} has
// coefficients in the unramified part (F is dense there)
bool certify_galois(const PadicRing& R, const std::vector<Elem>& roots,
                    const std::vector<long>& perm, long floor_pi);

struct GaloisLabeledRoots {
    std::vector<Elem> roots;
    std::vector<long> gamma_perm;               // cyclotomic_aut(1 + p)
    std::optional<std::vector<long>> frob_perm; // empty if not root-stable
    std::vector<std::vector<long>> delta_perms; // certified generators of the
                                                // prime-to-p part
};

GaloisLabeledRoots label_roots(const PadicRing& R, const std::vector<Elem>& roots,
                               long h, long floor_pi);

// S_i = sum over sigma of chi psi^i(sigma) log |sigma(u1)|_alpha for the
// labeling determined by (delta_perm, base_root, chi(delta) = zeta_h^chi_e)
struct StarkSums {
    std::vector<Elem> S; // indexed by i = 0..p-2 (i >= 1 used)
};

StarkSums stark_sums(const PadicRing& R, const std::vector<Elem>& roots,
                     const std::vector<long>& gamma_perm,
                     const std::vector<long>& delta_perm, long base_root, long h,
                     long chi_e, const Dirichlet& psi, long alpha);

Elem root_of_unity(const PadicRing& R, long n);

} // namespace pstark
