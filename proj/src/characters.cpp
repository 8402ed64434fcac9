#include "pstark/characters.hpp"

#include <numeric>

namespace pstark {

namespace {
long mod_pm(long p, long m) {
    long r = 1;
    for (long i = 0; i < m; i++) r *= p;
    return r;
}
long powmod(long b, long e, long mod) {
    long r = 1 % mod;
    b %= mod;
    if (b < 0) b += mod;
    while (e > 0) {
        if (e & 1) r = (long)(((__int128)r * b) % mod);
        b = (long)(((__int128)b * b) % mod);
        e >>= 1;
    }
    return r;
}
} // namespace

long minimal_generator(long p, long m) {
    long pm = mod_pm(p, m);
    long ord = pm / p * (p - 1); // phi(p^m)
    std::vector<long> qs;
    {
        long o = ord;
        for (long q = 2; q * q <= o; q++)
            if (o % q == 0) {
                qs.push_back(q);
                while (o % q == 0) o /= q;
            }
        if (o > 1) qs.push_back(o);
    }
    for (long g = 2; g < pm; g++) {
        if (g % p == 0) continue;
        bool ok = true;
        for (long q : qs)
            if (powmod(g, ord / q, pm) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::runtime_error("no generator found");
}

long wild_index(long p, long m, long a) {
    if (m <= 1) return 0;
    long pm = mod_pm(p, m);
    long aa = ((a % pm) + pm) % pm;
    if (aa % p == 0) throw std::invalid_argument("wild_index: non-unit");
    // (1+pZ)/(1+p^mZ) is cyclic of order p^(m-1) on the base 1+p;
    // ind(a) solves a^(p-1) = (1+p)^(ind*(p-1)).
    long x = powmod(aa, p - 1, pm);
    long base = powmod(1 + p, p - 1, pm);
    long pm1 = 1;
    for (long i = 1; i < m; i++) pm1 *= p;
    long cur = 1;
    for (long k = 0; k < pm1; k++) {
        if (cur == x) return k;
        cur = (long)(((__int128)cur * base) % pm);
    }
    throw std::runtime_error("wild_index: dlog failed");
}

long Dirichlet::order() const {
    if (m == 0) return 1;
    long ss = ((s % (p - 1)) + (p - 1)) % (p - 1);
    long o1 = ss == 0 ? 1 : (p - 1) / std::gcd(p - 1, ss);
    long pm1 = 1;
    for (long i = 1; i < m; i++) pm1 *= p;
    long tt = m <= 1 ? 0 : ((t % pm1) + pm1) % pm1;
    long o2 = tt == 0 ? 1 : pm1 / std::gcd(pm1, tt);
    return std::lcm(o1, o2);
}

long Dirichlet::conductor_exp() const {
    if (m == 0) return 0;
    long ss = ((s % (p - 1)) + (p - 1)) % (p - 1);
    long pm1 = 1;
    for (long i = 1; i < m; i++) pm1 *= p;
    long tt = m <= 1 ? 0 : ((t % pm1) + pm1) % pm1;
    if (tt == 0) return ss == 0 ? 0 : 1;
    long v = 0, x = tt;
    while (x % p == 0) { x /= p; v++; }
    return m - v;
}

long Dirichlet::conductor() const { return mod_pm(p, conductor_exp()); }

bool Dirichlet::is_trivial() const { return conductor_exp() == 0; }

Dirichlet Dirichlet::power(long k) const {
    Dirichlet r = *this;
    long pm1 = 1;
    for (long i = 1; i < m; i++) pm1 *= p;
    long kk = k;
    r.s = (((s * kk) % (p - 1)) + (p - 1)) % (p - 1);
    r.t = m <= 1 ? 0 : (((t * kk) % pm1) + pm1) % pm1;
    return r;
}

Dirichlet Dirichlet::times(const Dirichlet& o) const {
    if (p != o.p) throw std::invalid_argument("character product: different p");
    long mm = std::max(m, o.m);
    Dirichlet r{p, mm, 0, 0};
    long pm1 = 1;
    for (long i = 1; i < mm; i++) pm1 *= p;
    r.s = (((s + o.s) % (p - 1)) + (p - 1)) % (p - 1);
    r.t = mm <= 1 ? 0 : (((t + o.t) % pm1) + pm1) % pm1;
    return r;
}

Dirichlet Dirichlet::psi_standard(long p) {
    long g = minimal_generator(p, 2);
    long ind = wild_index(p, 2, g);
    long tinv = 1;
    while ((tinv * ind) % p != 1) tinv++;
    return Dirichlet{p, 2, 0, tinv};
}

Dirichlet Dirichlet::omega(long p) { return Dirichlet{p, 1, 1, 0}; }

bool Dirichlet::even() const {
    if (m == 0) return true;
    return s % 2 == 0;
}

Elem char_eval(const PadicRing& R, const Dirichlet& chi, const mpz_class& a) {
    if (chi.m == 0) return R.one();
    long pm = chi.modulus();
    mpz_class am = a % pm;
    if (am < 0) am += pm;
    long av = am.get_si();
    if (av % chi.p == 0) return R.zero();
    Elem v = R.one();
    long ss = ((chi.s % (chi.p - 1)) + (chi.p - 1)) % (chi.p - 1);
    if (ss != 0) {
        Elem w = R.teichmuller_int(av);
        v = R.mul(v, R.pow(w, ss));
    }
    if (chi.m >= 2) {
        long pm1 = pm / chi.p;
        long tt = ((chi.t % pm1) + pm1) % pm1;
        if (tt != 0) {
            long ind = wild_index(chi.p, chi.m, av);
            Elem z = R.zeta_pk(chi.m - 1);
            long ex = (long)(((__int128)tt * ind) % pm1);
            v = R.mul(v, R.pow(z, ex));
        }
    }
    return v;
}

Elem gauss_sum(const PadicRing& R, const Dirichlet& chi) {
    if (chi.m == 0) return R.one();
    if (!chi.is_primitive())
        throw std::invalid_argument("gauss_sum: character is not primitive");
    long pm = chi.modulus();
    if (R.desc().m < chi.m)
        throw std::invalid_argument("gauss_sum: ring lacks zeta_{p^m}");
    Elem z = R.zeta_pk(chi.m);
    Elem sum = R.zero();
    for (long a = 1; a < pm; a++) {
        if (a % chi.p == 0) continue;
        Elem term = R.mul(char_eval(R, chi, a), R.pow(z, a));
        sum = R.add(sum, term);
    }
    return sum;
}

Elem weight_char_eval(const PadicRing& R, const WeightChar& k, const mpz_class& z) {
    mpz_class zp = z % R.pw();
    if (zp < 0) zp += R.pw();
    if (zp % R.p() == 0) throw std::invalid_argument("weight char: non-unit argument");
    Elem fin = char_eval(R, k.finite, z);
    Elem gap = R.div(R.from_int(zp), R.teichmuller_int(zp));
    mpz_class ex = k.s - 1;
    Elem g;
    if (ex >= 0) g = R.pow(gap, ex);
    else g = R.pow(R.inv(gap), -ex);
    return R.mul(fin, g);
}

Elem weight_char_eval_explog(const PadicRing& R, const WeightChar& k, const mpz_class& z) {
    mpz_class zp = z % R.pw();
    if (zp < 0) zp += R.pw();
    Elem fin = char_eval(R, k.finite, z);
    Elem gap = R.div(R.from_int(zp), R.teichmuller_int(zp));
    Elem lg = R.iwasawa_log(gap);
    Elem g = R.exp_p(R.mul_int(lg, k.s - 1));
    return R.mul(fin, g);
}

} // namespace pstark
