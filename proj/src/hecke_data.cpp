#include "pstark/hecke_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pstark {

CycInt CycInt::add(const CycInt& o) const {
    CycInt r = *this;
    for (long i = 0; i < h; i++) r.c[i] += o.c[i];
    return r;
}

CycInt CycInt::mul(const CycInt& o) const {
    CycInt r = zero(h);
    for (long i = 0; i < h; i++) {
        if (c[i] == 0) continue;
        for (long j = 0; j < h; j++) {
            if (o.c[j] == 0) continue;
            r.c[(i + j) % h] += c[i] * o.c[j];
        }
    }
    return r;
}

mpz_class CycInt::as_integer() const {
    // integral iff all nontrivial zeta-components agree (1 + zeta + ... = 0)
    for (long i = 2; i < h; i++)
        if (c[i] != c[1]) throw std::runtime_error("CycInt: value is not an integer");
    if (h == 1) return c[0];
    return c[0] - c[1];
}

long ClassGroupCharSpec::class_index(const Ideal& A) const {
    QForm f = ideal_to_form(F, A);
    for (size_t i = 0; i < classes.size(); i++)
        if (form_eq(classes[i], f)) return (long)i;
    throw std::runtime_error("class_index: form not in class list");
}

int KummerCharSpec::value_on_prime(const GInt& q) const {
    // associates of the conductor prime evaluate to 0
    mpz_class nq = gnorm(q);
    if (nq == gnorm(cond_prime)) {
        GInt r = gmod(cond_prime, q);
        if (r.x == 0 && r.y == 0) return 0;
    }
    if (nq == 2) return value_at_1pi;
    return gauss_quadratic_symbol(beta, q);
}

namespace {

std::vector<std::pair<long, long>> factorize(long n) {
    std::vector<std::pair<long, long>> fs;
    for (long q = 2; q * q <= n; q++) {
        if (n % q) continue;
        long k = 0;
        while (n % q == 0) { n /= q; k++; }
        fs.push_back({q, k});
    }
    if (n > 1) fs.push_back({n, 1});
    return fs;
}

// split ell = q qbar in Z[i], q = a+bi with a odd, b even, a+b = 1 mod 4 say;
// any fixed choice works, conjugate is the other
GInt gaussian_prime_above(long ell) {
    for (long a = 1; a * a <= ell; a++) {
        long b2 = ell - a * a;
        long b = (long)std::sqrt((double)b2);
        while (b * b < b2) b++;
        if (b * b == b2) return GInt{a, b};
    }
    throw std::runtime_error("gaussian_prime_above: not a sum of two squares");
}

CycInt local_factor_class(const ClassGroupCharSpec& spec, long ell, long k) {
    SplitType st = splitting_type(spec.F, ell);
    long h = spec.h;
    if (st == SplitType::Inert) {
        if (k % 2) return CycInt::zero(h);
        Ideal L = ideal_principal(spec.F, QElem{ell, 0});
        long e = spec.chi_exp_on(L);
        return CycInt::unit(h, e * (k / 2));
    }
    if (st == SplitType::Ramified) {
        Ideal q = primes_above(spec.F, ell)[0];
        long e = spec.chi_exp_on(q);
        return CycInt::unit(h, e * k);
    }
    auto qs = primes_above(spec.F, ell);
    long e1 = spec.chi_exp_on(qs[0]);
    long e2 = spec.chi_exp_on(qs[1]);
    CycInt s = CycInt::zero(h);
    for (long i = 0; i <= k; i++)
        s = s.add(CycInt::unit(h, e1 * i + e2 * (k - i)));
    return s;
}

long ipow_pm(int v, long k) { // v^k for v in {-1, 0, +1}
    if (k == 0) return 1;
    if (v == 0) return 0;
    return (v == -1 && (k % 2)) ? -1 : 1;
}

mpz_class local_factor_kummer(const KummerCharSpec& spec, long ell, long k) {
    if (ell == 2) {
        // ideals of norm 2^k are (1+i)^k
        return ipow_pm(spec.value_at_1pi, k);
    }
    if (ell % 4 == 3) {
        // inert: only (ell)^(k/2) has norm ell^k
        if (k % 2) return 0;
        int v = spec.value_on_prime(GInt{ell, 0});
        return ipow_pm(v, k / 2);
    }
    GInt q = gaussian_prime_above(ell);
    GInt qb = gconj(q);
    int v1 = spec.value_on_prime(q);
    int v2 = spec.value_on_prime(qb);
    mpz_class s = 0;
    for (long i = 0; i <= k; i++) s += ipow_pm(v1, i) * ipow_pm(v2, k - i);
    return s;
}

} // namespace

mpz_class EigenformSpec::an(long n) const {
    if (n <= 0) throw std::invalid_argument("an: n >= 1");
    if (!table.empty()) {
        // explicit tables carry prime eigenvalues; extend multiplicatively only
        // when asked at primes
        auto it = table.find(n);
        if (it != table.end()) return it->second;
        if (n == 1) return 1;
        throw std::runtime_error("an: value not in explicit table");
    }
    if (class_char) {
        CycInt r = CycInt::unit(class_char->h, 0);
        for (auto& [q, k] : factorize(n))
            r = r.mul(local_factor_class(*class_char, q, k));
        return r.as_integer();
    }
    if (kummer) {
        mpz_class r = 1;
        for (auto& [q, k] : factorize(n)) r *= local_factor_kummer(*kummer, q, k);
        return r;
    }
    throw std::runtime_error("an: empty eigenform spec");
}

int EigenformSpec::eps_prime(long ell) const {
    if (class_char) {
        int k = kronecker(class_char->F.d, ell);
        // chi on the principal ideal (ell) is trivial for an unramified character
        Ideal L = ideal_principal(class_char->F, QElem{ell, 0});
        long e = class_char->chi_exp_on(L);
        if (e % class_char->h != 0)
            throw std::runtime_error("eps: unexpected nontrivial value on (ell)");
        return k;
    }
    if (kummer) {
        int k = kronecker(-4, ell);
        int chi_ell;
        if (ell == 2) chi_ell = 1; // (2) = (1+i)^2 up to units
        else if (ell % 4 == 3) chi_ell = kummer->value_on_prime(GInt{ell, 0});
        else {
            GInt q = gaussian_prime_above(ell);
            chi_ell = kummer->value_on_prime(q) * kummer->value_on_prime(gconj(q));
        }
        return k * chi_ell;
    }
    throw std::runtime_error("eps: spec has no character");
}

mpz_class EigenformSpec::disc() const {
    if (class_char) return class_char->F.d;
    if (kummer) return -4;
    return 0;
}

std::vector<int> build_eps_table(const EigenformSpec& spec, long N) {
    std::vector<int> t(N, 0);
    for (long r = 0; r < N; r++) {
        if (std::gcd(r, N) != 1) continue;
        if (r == 1 % N) { t[r] = 1; continue; }
        // prime representative of r mod N
        long ell = 0;
        for (long k = 0;; k++) {
            long cand = r + k * N;
            if (cand < 2) continue;
            bool prime = true;
            for (long q = 2; q * q <= cand; q++)
                if (cand % q == 0) { prime = false; break; }
            if (prime) { ell = cand; break; }
        }
        t[r] = spec.eps_prime(ell);
    }
    return t;
}

std::vector<Elem> quadratic_roots_zp(const PadicRing& R, const mpz_class& b,
                                     const mpz_class& c) {
    if (R.desc().m != 0 || R.f() != 1)
        throw std::invalid_argument("quadratic_roots_zp: needs plain Z_p");
    long p = R.p();
    std::vector<Elem> roots;
    for (long r0 = 0; r0 < p; r0++) {
        mpz_class fr = (mpz_class(r0) * r0 - b * r0 + c) % p;
        if (fr % p != 0) continue;
        mpz_class dfr = (2 * mpz_class(r0) - b) % p;
        if (dfr % p == 0) continue; // repeated root mod p: not simple
        // Newton: x <- x - f(x)/f'(x)
        Elem x = R.from_int(r0);
        for (long it = 0; it < 64; it++) {
            Elem fx = R.add(R.sub(R.mul(x, x), R.mul_int(x, b)), R.from_int(c));
            if (R.is_zero(fx)) break;
            Elem dfx = R.sub(R.mul_int(x, 2), R.from_int(b));
            x = R.sub(x, R.div(fx, dfx));
        }
        roots.push_back(x);
    }
    return roots;
}

std::pair<Elem, Elem> stabilization_roots(const PadicRing& R, const mpz_class& a_p,
                                          const mpz_class& eps_p) {
    auto roots = quadratic_roots_zp(R, a_p, eps_p);
    if (roots.size() != 2)
        throw std::runtime_error(
            "stabilization_roots: Hecke polynomial has no distinct roots over Z_p");
    // unit root(s) first
    if (R.val_pi(roots[0]) > 0) std::swap(roots[0], roots[1]);
    // alpha * beta = eps(p), alpha + beta = a_p
    Elem s = R.add(roots[0], roots[1]);
    Elem pr = R.mul(roots[0], roots[1]);
    if (!R.eq(s, R.from_int(a_p)) || !R.eq(pr, R.from_int(eps_p)))
        throw std::runtime_error("stabilization_roots: Vieta check failed");
    return {roots[0], roots[1]};
}

EigenformData build_eigenform(const EigenformSpec& spec, long N, long p, long alpha,
                              const std::vector<long>& ells) {
    EigenformData d;
    d.N = N;
    d.p = p;
    d.a_p = spec.an(p);
    d.eps_p = spec.eps_prime(p);
    if (d.a_p != 0 || d.eps_p != -1)
        throw std::runtime_error("build_eigenform: expected Hecke polynomial x^2 - 1");
    if (alpha != 1 && alpha != -1)
        throw std::invalid_argument("build_eigenform: alpha must be +-1");
    d.alpha = alpha;
    for (long ell : ells) {
        if (ell == p || N % ell == 0) continue;
        d.a_ell[ell] = spec.an(ell);
    }
    d.eps_table = build_eps_table(spec, N);
    return d;
}

Elem cm_family_Fq(const PadicRing& R, const Elem& lambda_q, const Elem& z) {
    long p = R.p();
    Elem gamma = R.from_int(1 + p);
    Elem arg = R.add(R.one(), R.mul(gamma, z));
    Elem lg = R.iwasawa_log(arg);
    Elem lgam = R.iwasawa_log(gamma);
    Elem ll = R.iwasawa_log(lambda_q);
    // exp_p( log(1+gamma z) * log(lambda)/log(gamma) )
    Elem t = R.div(R.mul(lg, ll), lgam);
    return R.exp_p(t);
}

Elem cm_family_An(const PadicRing& R, const std::map<long, CMPrimeLocal>& data,
                  long n, const Elem& z) {
    if (n < 1) throw std::invalid_argument("cm_family_An: n >= 1");
    Elem acc = R.one();
    long m = n;
    for (long q = 2; q * q <= m; q++) {
        if (m % q) continue;
        long k = 0;
        while (m % q == 0) { m /= q; k++; }
        auto it = data.find(q);
        if (it == data.end()) throw std::runtime_error("cm_family_An: missing prime data");
        const CMPrimeLocal& L = it->second;
        Elem loc = R.zero();
        if (L.st == SplitType::Inert) {
            if (k % 2) return R.zero();
            Elem F = cm_family_Fq(R, L.lambda_q, z);
            loc = R.mul(R.pow(L.chi_q, k / 2), R.pow(F, k / 2));
        } else if (L.st == SplitType::Ramified) {
            Elem F = cm_family_Fq(R, L.lambda_q, z);
            loc = R.mul(R.pow(L.chi_q, k), R.pow(F, k));
        } else {
            Elem F1 = cm_family_Fq(R, L.lambda_q, z);
            Elem F2 = cm_family_Fq(R, L.lambda_qbar, z);
            for (long i = 0; i <= k; i++) {
                Elem t = R.mul(R.mul(R.pow(L.chi_q, i), R.pow(F1, i)),
                               R.mul(R.pow(L.chi_qbar, k - i), R.pow(F2, k - i)));
                loc = R.add(loc, t);
            }
        }
        acc = R.mul(acc, loc);
    }
    if (m > 1) {
        auto it = data.find(m);
        if (it == data.end()) throw std::runtime_error("cm_family_An: missing prime data");
        const CMPrimeLocal& L = it->second;
        Elem loc = R.zero();
        if (L.st == SplitType::Inert) return R.zero();
        if (L.st == SplitType::Ramified) loc = R.mul(L.chi_q, cm_family_Fq(R, L.lambda_q, z));
        else
            loc = R.add(R.mul(L.chi_q, cm_family_Fq(R, L.lambda_q, z)),
                        R.mul(L.chi_qbar, cm_family_Fq(R, L.lambda_qbar, z)));
        acc = R.mul(acc, loc);
    }
    return acc;
}

} // namespace pstark
