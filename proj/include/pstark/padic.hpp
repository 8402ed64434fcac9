#pragma once

#include <gmpxx.h>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pstark {

// Describes Q_{p^f}(zeta_{p^m}) at a fixed working precision (p-adic digits).
struct FieldDesc {
    long p = 0;   // odd prime
    long f = 1;   // unramified degree
    long m = 0;   // cyclotomic level: field contains zeta_{p^m}
    long prec = 1;

    long ram() const { // ramification index e
        if (m == 0) return 1;
        long e = p - 1;
        for (long i = 1; i < m; i++) e *= p;
        return e;
    }
    long dim() const { return ram() * f; }
};

// Element of the local field: value = (sum c_ij pi^i u^j) / p^denom, with
// pi = zeta_{p^m} - 1 and u a Teichmuller generator of the unramified part.
// Coordinates are residues mod p^prec. `trust` is the absolute precision:
// the value is known modulo pi^trust. Divisions lower trust; the floor used
// in assertions is the element's trust.
struct Elem {
    std::vector<mpz_class> c;
    long denom = 0;
    long trust = 0;
};

// Digit expansion sum d_i pi^i over the totally ramified subfield.
struct PadicDigits {
    std::vector<std::pair<long, long>> terms; // (exponent, digit), digit in 0..p-1
    long trunc = 0;                           // expansion valid below pi^trunc

    std::string to_string() const; // "2 + pi^5 + 4pi^21 + O(pi^trunc)"
};

class PadicRing {
public:
    explicit PadicRing(FieldDesc d);

    const FieldDesc& desc() const { return d_; }
    long p() const { return d_.p; }
    long e() const { return e_; }
    long f() const { return d_.f; }
    long dim() const { return n_; }
    long prec() const { return d_.prec; }
    const mpz_class& pw() const { return pw_; } // p^prec
    long cap_pi() const { return e_ * d_.prec; }

    Elem zero() const;
    Elem one() const;
    Elem from_int(const mpz_class& a) const;
    Elem from_coords(const std::vector<mpz_class>& c) const;
    Elem pi() const;
    Elem zeta() const;          // zeta_{p^m} = 1 + pi
    Elem zeta_pk(long k) const; // zeta_{p^k}, k <= m
    Elem unram_gen() const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem mul_int(const Elem& a, const mpz_class& k) const;
    Elem pow(const Elem& a, const mpz_class& n) const; // n >= 0
    Elem inv(const Elem& a) const;                     // any nonzero element
    Elem div(const Elem& a, const Elem& b) const;
    Elem shift_p(const Elem& a, long k) const;  // value / p^k
    Elem shift_pi(const Elem& a, long t) const; // value / pi^t, t may be negative

    bool is_zero(const Elem& a) const;
    bool eq(const Elem& a, const Elem& b) const;
    long val_pi(const Elem& a) const; // capped at trust
    long trust_of(const Elem& a) const { return a.trust; }

    Elem teichmuller(const Elem& a) const;
    Elem teichmuller_int(const mpz_class& a) const;
    Elem frobenius(const Elem& a) const;
    Elem frobenius_iter(const Elem& a, long k) const;
    Elem cyclotomic_aut(const Elem& a, long c) const;
    Elem iwasawa_log(const Elem& a) const; // branch log p = 0
    Elem exp_p(const Elem& a) const;       // v(a) > e/(p-1)

    PadicDigits digits(const Elem& a) const;
    Elem from_digits(const PadicDigits& d) const;
    bool is_totally_ramified_rational(const Elem& a) const;

    std::string to_string(const Elem& a) const;

private:
    FieldDesc d_;
    long e_, n_;
    mpz_class pw_;
    std::vector<mpz_class> eis_;
    std::vector<std::vector<mpz_class>> xpow_;
    std::vector<mpz_class> hpoly_;
    std::vector<std::vector<mpz_class>> upow_;
    std::vector<std::vector<mpz_class>> frobu_;
    mutable std::map<long, std::vector<std::vector<mpz_class>>> cyc_cache_;
    std::vector<mpz_class> pi_e_unit_inv_; // inverse of pi^e/p (m >= 1)
    mutable Elem log_pi_;
    mutable bool log_pi_ready_ = false;

    long ceiling(long denom) const { return e_ * (d_.prec - denom); }
    void clamp(Elem& a) const;
    void align_denom(Elem& a, long d) const;
    void normalize(Elem& a) const;
    long val_coords(const Elem& a) const;
    std::vector<mpz_class> mul_raw(const std::vector<mpz_class>& a,
                                   const std::vector<mpz_class>& b) const;
    std::vector<mpz_class> strip_pi_coords(const std::vector<mpz_class>& c, long t) const;
    Elem inv_unit_integral(const Elem& a) const;
    Elem log_unit(const Elem& a) const;
    Elem log_principal(const Elem& a) const;
    const std::vector<std::vector<mpz_class>>& cyc_table(long c) const;
    void build_unramified();
    void build_eisenstein();
    void build_log_pi() const;
    std::vector<long> residue(const Elem& a) const;
};

mpz_class pow_mpz(const mpz_class& b, unsigned long e);
long vp_mpz(const mpz_class& a, long p, long cap);
mpz_class inv_mod(const mpz_class& a, const mpz_class& mod);

} // namespace pstark
