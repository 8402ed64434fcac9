#pragma once

#include "pstark/padic.hpp"
#include "pstark/quadfield.hpp"

#include <map>
#include <optional>

namespace pstark {

// element of Z[zeta_h] as exponent counts; enough to assemble a_n values
struct CycInt {
    long h = 1;
    std::vector<mpz_class> c; // value = sum c[i] zeta_h^i

    static CycInt zero(long h) { return CycInt{h, std::vector<mpz_class>(h, 0)}; }
    static CycInt unit(long h, long e) {
        CycInt r = zero(h);
        r.c[((e % h) + h) % h] = 1;
        return r;
    }
    CycInt add(const CycInt& o) const;
    CycInt mul(const CycInt& o) const;
    // asserts the value is a rational integer and returns it
    mpz_class as_integer() const;
};

// ray class character specs sufficient for the examples
struct ClassGroupCharSpec {
    QuadField F;
    long h = 1;                 // character order
    std::vector<QForm> classes; // reduced forms of disc d
    std::vector<long> chi_exp;  // chi(classes[i]) = zeta_h^(chi_exp[i])

    long class_index(const Ideal& A) const;
    long chi_exp_on(const Ideal& A) const { return chi_exp[class_index(A)]; }
};

struct KummerCharSpec { // quadratic character of Q(i): q -> (beta/q)
    GInt beta;          // the Kummer generator
    GInt cond_prime;    // odd prime dividing the conductor (character is 0 there)
    int value_at_1pi;   // value at (1+i)

    int value_on_prime(const GInt& q) const; // q an odd prime generator
};

struct EigenformSpec {
    // exactly one of these is active
    std::optional<ClassGroupCharSpec> class_char;
    std::optional<KummerCharSpec> kummer;
    std::map<long, long> table; // explicit a_ell table fallback

    mpz_class an(long n) const; // integer a_n (asserted integral)
    int eps_prime(long ell) const;
    mpz_class disc() const;
};

// Hecke data handed to the symbol machinery
struct EigenformData {
    long N = 0;
    long p = 0;
    mpz_class a_p = 0;
    int eps_p = 0;             // epsilon(p) = +-1
    mpz_class alpha;           // chosen unit stabilization root (often +-1)
    std::map<long, mpz_class> a_ell;
    std::vector<int> eps_table; // eps(r) for r mod N; 0 if gcd(r, N) > 1

    int eps(const mpz_class& d) const {
        mpz_class r = d % N;
        if (r < 0) r += N;
        return eps_table[r.get_si()];
    }
};

// eps table for r mod N by multiplicativity from prime values
std::vector<int> build_eps_table(const EigenformSpec& spec, long N);

// both roots of x^2 - b x + c over Z_p (simple roots only); Hensel lifted
std::vector<Elem> quadratic_roots_zp(const PadicRing& R, const mpz_class& b,
                                     const mpz_class& c);
// the two stabilization roots, unit ones first; throws if the roots collide mod p
std::pair<Elem, Elem> stabilization_roots(const PadicRing& R, const mpz_class& a_p,
                                          const mpz_class& eps_p);

EigenformData build_eigenform(const EigenformSpec& spec, long N, long p, long alpha,
                              const std::vector<long>& ells);

// ---- CM family coefficients ----
// F_q(z) = exp_p(log_gamma(1 + gamma z) * log_p(lambda_q)), gamma = 1+p
Elem cm_family_Fq(const PadicRing& R, const Elem& lambda_q, const Elem& z);

struct CMPrimeLocal {
    SplitType st;
    Elem lambda_q, lambda_qbar; // principal units
    Elem chi_q, chi_qbar;       // character values in the ring
};

// A_n(z) = sum over ideals of norm n of chi(a) F_a(z), assembled multiplicatively
Elem cm_family_An(const PadicRing& R, const std::map<long, CMPrimeLocal>& data,
                  long n, const Elem& z);

} // namespace pstark
