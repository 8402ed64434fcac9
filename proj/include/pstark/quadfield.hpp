#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <vector>

namespace pstark {

enum class SplitType { Split, Inert, Ramified };

// quadratic field of fundamental discriminant d (d < 0 imaginary, d > 0 real)
struct QuadField {
    mpz_class d;

    bool imaginary() const { return d < 0; }
    // integral basis {1, w}: w = (1+sqrt(d))/2 if d odd, sqrt(d)/2... d/4 case
    bool d_odd() const { return mpz_odd_p(d.get_mpz_t()); }
    // trace and norm of w
    mpz_class w_trace() const { return d_odd() ? 1 : 0; }
    mpz_class w_norm() const {
        if (d_odd()) return mpz_class((1 - d) / 4);
        return mpz_class(-d / 4);
    }
};

bool is_fundamental_discriminant(const mpz_class& d);
SplitType splitting_type(const QuadField& F, const mpz_class& ell);
int kronecker(const mpz_class& a, const mpz_class& b);

// element x + y*w of O_F
struct QElem {
    mpz_class x, y;
};
QElem qmul(const QuadField& F, const QElem& a, const QElem& b);
QElem qconj(const QuadField& F, const QElem& a);
mpz_class qnorm(const QuadField& F, const QElem& a);

// integral ideal in HNF [a, b + c*w], c | a, c | b
struct Ideal {
    mpz_class a, b, c;

    mpz_class norm() const { return a * c; }
};

Ideal ideal_from_zbasis(const QuadField& F, const QElem& g1, const QElem& g2);
Ideal ideal_from_gens(const QuadField& F, const std::vector<QElem>& gens);
Ideal ideal_principal(const QuadField& F, const QElem& g);
Ideal ideal_whole(const QuadField& F);
Ideal ideal_mul(const QuadField& F, const Ideal& A, const Ideal& B);
Ideal ideal_conj(const QuadField& F, const Ideal& A);
bool ideal_eq(const Ideal& A, const Ideal& B);
bool ideal_contains(const QuadField& F, const Ideal& A, const QElem& g);

// primitive positive-definite binary quadratic form of discriminant d < 0
struct QForm {
    mpz_class a, b, c;
};
QForm reduce_form(QForm f);
bool form_eq(const QForm& f, const QForm& g);
std::vector<QForm> reduced_forms(const mpz_class& d); // class group, d < 0
QForm ideal_to_form(const QuadField& F, const Ideal& A); // reduced, d < 0
// does the form represent the prime ell
bool form_represents(const QForm& f, const mpz_class& ell);

// prime ideals above ell: one for inert/ramified, two conjugates for split
std::vector<Ideal> primes_above(const QuadField& F, const mpz_class& ell);

// ---- Gaussian integers, used by the Kummer-character route ----
struct GInt {
    mpz_class x, y; // x + y i
};
GInt gmul(const GInt& a, const GInt& b);
GInt gconj(const GInt& a);
mpz_class gnorm(const GInt& a);
GInt gmod(const GInt& a, const GInt& q); // remainder of a by q, small norm
// quadratic residue symbol beta^((N(q)-1)/2) mod q in {+1,-1,0}, q an odd
// Gaussian prime given by its generator
int gauss_quadratic_symbol(const GInt& beta, const GInt& q);

} // namespace pstark
