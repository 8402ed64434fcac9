#include "pstark/padic.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace pstark {

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

long vp_mpz(const mpz_class& a, long p, long cap) {
    if (a == 0) return cap;
    mpz_class t = a;
    long v = 0;
    while (v < cap && mpz_divisible_ui_p(t.get_mpz_t(), p)) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
        v++;
    }
    return v;
}

mpz_class inv_mod(const mpz_class& a, const mpz_class& mod) {
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()))
        throw std::runtime_error("inv_mod: not invertible");
    return r;
}

// ---- F_p[x] helpers for constructing the unramified part ----
namespace {

using Poly = std::vector<long>;

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& mod, long p) {
    std::vector<long> t(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); i++)
        for (size_t j = 0; j < b.size(); j++)
            t[i + j] = (t[i + j] + a[i] * b[j]) % p;
    long d = (long)mod.size() - 1;
    for (long k = (long)t.size() - 1; k >= d; k--) {
        long c = t[k] % p;
        if (c == 0) continue;
        for (long i = 0; i < d; i++)
            t[k - d + i] = ((t[k - d + i] - c * mod[i]) % p + p) % p;
        t[k] = 0;
    }
    t.resize(d);
    while (t.size() > 1 && t.back() == 0) t.pop_back();
    return t;
}

Poly poly_pow_mod(Poly base, mpz_class n, const Poly& mod, long p) {
    Poly r{1};
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) r = poly_mul_mod(r, base, mod, p);
        base = poly_mul_mod(base, base, mod, p);
        n >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, long p) {
    auto deg = [](const Poly& q) { return (long)q.size() - 1; };
    auto norm = [&](Poly& q) { while (q.size() > 1 && q.back() == 0) q.pop_back(); };
    norm(a); norm(b);
    while (!(b.size() == 1 && b[0] == 0)) {
        long db = deg(b);
        long binv = 1;
        {
            long lc = b[db], x = 1;
            while ((lc * x) % p != 1) x++;
            binv = x;
        }
        while (deg(a) >= db && !(a.size() == 1 && a[0] == 0)) {
            long da = deg(a);
            long c = (a[da] * binv) % p;
            if (c != 0)
                for (long i = 0; i <= db; i++)
                    a[da - db + i] = ((a[da - db + i] - c * b[i]) % p + p) % p;
            norm(a);
            if (deg(a) == da) break;
        }
        std::swap(a, b);
    }
    return a;
}

bool poly_irreducible(const Poly& g, long p) {
    long f = (long)g.size() - 1;
    Poly x{0, 1};
    Poly xp = x;
    for (long k = 0; k < f; k++) xp = poly_pow_mod(xp, p, g, p);
    Poly diff = xp;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    while (diff.size() > 1 && diff.back() == 0) diff.pop_back();
    if (!(diff.size() == 1 && diff[0] == 0)) return false;
    for (long q = 2; q <= f; q++) {
        if (f % q != 0) continue;
        bool prime = true;
        for (long r = 2; r * r <= q; r++) if (q % r == 0) prime = false;
        if (!prime) continue;
        Poly xq = x;
        for (long k = 0; k < f / q; k++) xq = poly_pow_mod(xq, p, g, p);
        Poly d2 = xq;
        d2.resize(std::max<size_t>(d2.size(), 2), 0);
        d2[1] = ((d2[1] - 1) % p + p) % p;
        while (d2.size() > 1 && d2.back() == 0) d2.pop_back();
        Poly gc = poly_gcd(d2, g, p);
        if (!(gc.size() == 1)) return false;
    }
    return true;
}

struct ZPoly {
    std::vector<mpz_class> c;
};

ZPoly zp_mul(const ZPoly& a, const ZPoly& b, const std::vector<mpz_class>& mod,
             const mpz_class& pw) {
    long d = (long)mod.size() - 1;
    std::vector<mpz_class> t(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); i++)
        for (size_t j = 0; j < b.c.size(); j++)
            t[i + j] += a.c[i] * b.c[j];
    for (long k = (long)t.size() - 1; k >= d; k--) {
        if (t[k] == 0) continue;
        for (long i = 0; i < d; i++) t[k - d + i] -= t[k] * mod[i];
        t[k] = 0;
    }
    t.resize(d);
    for (auto& x : t) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw.get_mpz_t());
    return ZPoly{t};
}

ZPoly zp_pow(ZPoly base, mpz_class n, const std::vector<mpz_class>& mod,
             const mpz_class& pw) {
    ZPoly r; r.c = {1};
    r.c.resize(mod.size() - 1, 0);
    base.c.resize(mod.size() - 1, 0);
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) r = zp_mul(r, base, mod, pw);
        base = zp_mul(base, base, mod, pw);
        n >>= 1;
    }
    return r;
}

} // namespace

// ---- PadicRing ----

PadicRing::PadicRing(FieldDesc d) : d_(d) {
    if (d_.p < 3) throw std::invalid_argument("PadicRing: p must be an odd prime");
    if (d_.prec < 1) throw std::invalid_argument("PadicRing: prec >= 1 required");
    if (d_.m < 0 || d_.f < 1) throw std::invalid_argument("PadicRing: bad descriptor");
    e_ = d_.ram();
    n_ = e_ * d_.f;
    pw_ = pow_mpz(d_.p, (unsigned long)d_.prec);
    build_unramified();
    build_eisenstein();
    if (d_.m >= 1) {
        // pi^e = p * w with w a unit; cache w^(-1)
        std::vector<mpz_class> w(n_, 0);
        for (long i = 0; i < e_; i++) {
            mpz_class v = -eis_[i];
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pw_.get_mpz_t());
            if (!mpz_divisible_ui_p(v.get_mpz_t(), d_.p))
                throw std::runtime_error("Eisenstein polynomial is not Eisenstein");
            w[i * d_.f] = v / d_.p;
        }
        Elem we{w, 0, cap_pi()};
        pi_e_unit_inv_ = inv_unit_integral(we).c;
    }
}

void PadicRing::build_unramified() {
    long p = d_.p, f = d_.f;
    if (f == 1) {
        hpoly_ = {mpz_class(pw_ - 1), mpz_class(1)};
        frobu_ = {{mpz_class(1)}};
        return;
    }
    Poly g0;
    {
        mpz_class ord = pow_mpz(p, (unsigned long)f) - 1;
        std::vector<mpz_class> qs;
        {
            mpz_class t = ord;
            for (mpz_class q = 2; q * q <= t; q++) {
                if (t % q == 0) {
                    qs.push_back(q);
                    while (t % q == 0) t /= q;
                }
            }
            if (t > 1) qs.push_back(t);
        }
        auto is_primitive = [&](const Poly& g) {
            if (!poly_irreducible(g, p)) return false;
            Poly x{0, 1};
            for (auto& q : qs) {
                Poly r = poly_pow_mod(x, ord / q, g, p);
                if (r.size() == 1 && r[0] == 1) return false;
            }
            return true;
        };
        bool found = false;
        for (long tries = 0; !found; tries++) {
            Poly g(f + 1, 0);
            long t = tries;
            for (long i = 0; i < f; i++) { g[i] = t % p; t /= p; }
            g[f] = 1;
            if (is_primitive(g)) { g0 = g; found = true; }
            if (tries > 1000000) throw std::runtime_error("no primitive polynomial found");
        }
    }
    std::vector<mpz_class> g0z(g0.size());
    for (size_t i = 0; i < g0.size(); i++) g0z[i] = g0[i];
    mpz_class pf = pow_mpz(d_.p, (unsigned long)f);
    ZPoly tau; tau.c.resize(f, 0); tau.c[1] = 1;
    for (long k = 0; k < d_.prec + 2; k++) tau = zp_pow(tau, pf, g0z, pw_);
    std::vector<ZPoly> conj(f);
    conj[0] = tau;
    for (long k = 1; k < f; k++) conj[k] = zp_pow(conj[k - 1], d_.p, g0z, pw_);
    std::vector<ZPoly> hc(f + 1);
    for (auto& z : hc) z.c.assign(f, 0);
    hc[0].c[0] = 1;
    long deg = 0;
    for (long k = 0; k < f; k++) {
        for (long i = deg + 1; i >= 1; i--) {
            ZPoly shifted = hc[i - 1];
            ZPoly prod = zp_mul(hc[i], conj[k], g0z, pw_);
            for (long j = 0; j < f; j++) {
                mpz_class v = shifted.c[j] - prod.c[j];
                mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pw_.get_mpz_t());
                hc[i].c[j] = v;
            }
        }
        ZPoly prod0 = zp_mul(hc[0], conj[k], g0z, pw_);
        for (long j = 0; j < f; j++) {
            mpz_class v = -prod0.c[j];
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pw_.get_mpz_t());
            hc[0].c[j] = v;
        }
        deg++;
    }
    hpoly_.resize(f + 1);
    for (long i = 0; i <= f; i++) {
        for (long j = 1; j < f; j++)
            if (hc[i].c[j] != 0)
                throw std::runtime_error("Teichmuller minimal polynomial not rational");
        hpoly_[i] = hc[i].c[0];
    }
    upow_.assign(std::max<long>(f - 1, 1), std::vector<mpz_class>(f, 0));
    std::vector<mpz_class> cur(f);
    for (long i = 0; i < f; i++) {
        mpz_class v = -hpoly_[i];
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pw_.get_mpz_t());
        cur[i] = v;
    }
    upow_[0] = cur;
    for (long s = 1; s < f - 1; s++) {
        std::vector<mpz_class> nxt(f, 0);
        for (long i = 0; i < f - 1; i++) nxt[i + 1] = cur[i];
        if (cur[f - 1] != 0)
            for (long i = 0; i < f; i++) nxt[i] += cur[f - 1] * upow_[0][i];
        for (auto& x : nxt) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
        upow_[s] = nxt;
        cur = nxt;
    }
    std::vector<mpz_class> up(f, 0);
    {
        ZPoly b; b.c.assign(f, 0); b.c[1] = 1;
        ZPoly r = zp_pow(b, d_.p, hpoly_, pw_);
        up = r.c;
    }
    frobu_.assign(f, std::vector<mpz_class>(f, 0));
    frobu_[0][0] = 1;
    ZPoly acc; acc.c.assign(f, 0); acc.c[0] = 1;
    ZPoly upz; upz.c = up;
    for (long j = 1; j < f; j++) {
        acc = zp_mul(acc, upz, hpoly_, pw_);
        frobu_[j] = acc.c;
    }
}

void PadicRing::build_eisenstein() {
    if (d_.m == 0) {
        eis_.clear();
        xpow_.clear();
        return;
    }
    long p = d_.p;
    long pm1 = 1;
    for (long i = 1; i < d_.m; i++) pm1 *= p;
    eis_.assign(e_ + 1, 0);
    for (long k = 0; k < p; k++) {
        long ex = k * pm1;
        for (long i = 0; i <= ex; i++) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), (unsigned long)ex, (unsigned long)i);
            eis_[i] += b;
        }
    }
    for (auto& x : eis_) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
    xpow_.assign(std::max<long>(e_ - 1, 1), std::vector<mpz_class>(e_, 0));
    std::vector<mpz_class> cur(e_);
    for (long i = 0; i < e_; i++) {
        mpz_class v = -eis_[i];
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pw_.get_mpz_t());
        cur[i] = v;
    }
    xpow_[0] = cur;
    for (long t = 1; t < e_ - 1; t++) {
        std::vector<mpz_class> nxt(e_, 0);
        for (long i = 0; i < e_ - 1; i++) nxt[i + 1] = cur[i];
        if (cur[e_ - 1] != 0)
            for (long i = 0; i < e_; i++) nxt[i] += cur[e_ - 1] * xpow_[0][i];
        for (auto& x : nxt) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
        xpow_[t] = nxt;
        cur = nxt;
    }
}

void PadicRing::clamp(Elem& a) const { a.trust = std::min(a.trust, ceiling(a.denom)); }

void PadicRing::align_denom(Elem& a, long d) const {
    if (a.denom >= d) return;
    mpz_class pk = pow_mpz(d_.p, (unsigned long)(d - a.denom));
    for (auto& x : a.c) {
        x *= pk;
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
    }
    a.denom = d;
    clamp(a);
}

void PadicRing::normalize(Elem& a) const {
    while (a.denom > 0) {
        bool div = true;
        for (auto& x : a.c)
            if (!mpz_divisible_ui_p(x.get_mpz_t(), d_.p)) { div = false; break; }
        if (!div) break;
        for (auto& x : a.c) mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), d_.p);
        a.denom--;
    }
}

Elem PadicRing::zero() const { return Elem{std::vector<mpz_class>(n_, 0), 0, cap_pi()}; }

Elem PadicRing::one() const {
    Elem a = zero();
    a.c[0] = 1;
    return a;
}

Elem PadicRing::from_int(const mpz_class& v) const {
    Elem a = zero();
    mpz_class r = v;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), pw_.get_mpz_t());
    a.c[0] = r;
    return a;
}

Elem PadicRing::from_coords(const std::vector<mpz_class>& c) const {
    if ((long)c.size() != n_) throw std::invalid_argument("from_coords: size mismatch");
    Elem a{c, 0, cap_pi()};
    for (auto& x : a.c) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
    return a;
}

Elem PadicRing::pi() const {
    Elem a = zero();
    if (d_.m == 0) a.c[0] = d_.p;
    else a.c[1 * d_.f + 0] = 1;
    return a;
}

Elem PadicRing::zeta() const {
    Elem a = pi();
    a.c[0] += 1;
    return a;
}

Elem PadicRing::zeta_pk(long k) const {
    if (k > d_.m || k < 0) throw std::invalid_argument("zeta_pk: level too deep");
    Elem z = zeta();
    mpz_class ex = 1;
    for (long i = 0; i < d_.m - k; i++) ex *= d_.p;
    return pow(z, ex);
}

Elem PadicRing::unram_gen() const {
    Elem a = zero();
    if (d_.f == 1) a.c[0] = 1;
    else a.c[1] = 1;
    return a;
}

Elem PadicRing::add(const Elem& a, const Elem& b) const {
    Elem x = a, y = b;
    long dd = std::max(a.denom, b.denom);
    align_denom(x, dd);
    align_denom(y, dd);
    Elem r{std::vector<mpz_class>(n_), dd, std::min(x.trust, y.trust)};
    for (long i = 0; i < n_; i++) {
        r.c[i] = x.c[i] + y.c[i];
        if (r.c[i] >= pw_) r.c[i] -= pw_;
    }
    normalize(r);
    clamp(r);
    return r;
}

Elem PadicRing::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

Elem PadicRing::neg(const Elem& a) const {
    Elem r{std::vector<mpz_class>(n_), a.denom, a.trust};
    for (long i = 0; i < n_; i++)
        r.c[i] = a.c[i] == 0 ? mpz_class(0) : pw_ - a.c[i];
    return r;
}

std::vector<mpz_class> PadicRing::mul_raw(const std::vector<mpz_class>& a,
                                          const std::vector<mpz_class>& b) const {
    long e = e_, f = d_.f;
    long we = 2 * e - 1, wf = 2 * f - 1;
    std::vector<mpz_class> t((size_t)we * wf, 0);
    for (long i1 = 0; i1 < e; i1++)
        for (long j1 = 0; j1 < f; j1++) {
            const mpz_class& x = a[i1 * f + j1];
            if (x == 0) continue;
            for (long i2 = 0; i2 < e; i2++)
                for (long j2 = 0; j2 < f; j2++) {
                    const mpz_class& y = b[i2 * f + j2];
                    if (y == 0) continue;
                    t[(size_t)(i1 + i2) * wf + (j1 + j2)] += x * y;
                }
        }
    for (long s = wf - 1; s >= f; s--) {
        for (long i = 0; i < we; i++) {
            mpz_class& v = t[(size_t)i * wf + s];
            if (v == 0) continue;
            for (long j = 0; j < f; j++)
                t[(size_t)i * wf + j] += upow_[s - f][j] * v;
            v = 0;
        }
    }
    for (long i = we - 1; i >= e; i--) {
        for (long j = 0; j < f; j++) {
            mpz_class& v = t[(size_t)i * wf + j];
            if (v == 0) continue;
            for (long i2 = 0; i2 < e; i2++)
                t[(size_t)i2 * wf + j] += xpow_[i - e][i2] * v;
            v = 0;
        }
    }
    std::vector<mpz_class> out(n_);
    for (long i = 0; i < e; i++)
        for (long j = 0; j < f; j++) {
            mpz_class v = t[(size_t)i * wf + j];
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pw_.get_mpz_t());
            out[i * f + j] = v;
        }
    return out;
}

Elem PadicRing::mul(const Elem& a, const Elem& b) const {
    long va = std::min(val_coords(a) - e_ * a.denom, a.trust);
    long vb = std::min(val_coords(b) - e_ * b.denom, b.trust);
    Elem r{mul_raw(a.c, b.c), a.denom + b.denom,
           std::min(a.trust + vb, b.trust + va)};
    normalize(r);
    clamp(r);
    return r;
}

Elem PadicRing::mul_int(const Elem& a, const mpz_class& k) const {
    Elem r{std::vector<mpz_class>(n_), a.denom, a.trust};
    for (long i = 0; i < n_; i++) {
        r.c[i] = a.c[i] * k;
        mpz_mod(r.c[i].get_mpz_t(), r.c[i].get_mpz_t(), pw_.get_mpz_t());
    }
    normalize(r);
    clamp(r);
    return r;
}

Elem PadicRing::pow(const Elem& a, const mpz_class& n) const {
    if (n < 0) throw std::invalid_argument("pow: negative exponent");
    Elem r = one();
    Elem b = a;
    mpz_class k = n;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = mul(r, b);
        k >>= 1;
        if (k > 0) b = mul(b, b);
    }
    return r;
}

long PadicRing::val_coords(const Elem& a) const {
    long best = cap_pi();
    for (long i = 0; i < e_; i++)
        for (long j = 0; j < d_.f; j++) {
            const mpz_class& c = a.c[i * d_.f + j];
            if (c == 0) continue;
            long v = (d_.m == 0 ? 0 : i) + e_ * vp_mpz(c, d_.p, d_.prec);
            best = std::min(best, v);
        }
    return best;
}

long PadicRing::val_pi(const Elem& a) const {
    return std::min(val_coords(a) - e_ * a.denom, a.trust);
}

bool PadicRing::is_zero(const Elem& a) const {
    return val_coords(a) - e_ * a.denom >= a.trust;
}

bool PadicRing::eq(const Elem& a, const Elem& b) const { return is_zero(sub(a, b)); }

Elem PadicRing::shift_p(const Elem& a, long k) const {
    if (k == 0) return a;
    Elem r = a;
    if (k > 0) {
        r.denom += k;
        r.trust -= e_ * k;
        normalize(r);
        clamp(r);
    } else {
        mpz_class pk = pow_mpz(d_.p, (unsigned long)(-k));
        long red = std::min<long>(-k, r.denom);
        r.denom -= red;
        long mulk = -k - red;
        if (mulk > 0) {
            mpz_class pm = pow_mpz(d_.p, (unsigned long)mulk);
            for (auto& x : r.c) {
                x *= pm;
                mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
            }
        }
        r.trust += e_ * (-k);
        clamp(r);
    }
    return r;
}

std::vector<mpz_class> PadicRing::strip_pi_coords(const std::vector<mpz_class>& cin,
                                                  long t) const {
    std::vector<mpz_class> c = cin;
    long f = d_.f;
    if (d_.m == 0) {
        mpz_class pt = pow_mpz(d_.p, (unsigned long)t);
        for (auto& x : c) {
            if (!mpz_divisible_p(x.get_mpz_t(), pt.get_mpz_t()))
                throw std::runtime_error("strip_pi: not divisible");
            x /= pt;
        }
        return c;
    }
    for (long s = 0; s < t; s++) {
        std::vector<mpz_class> r(n_, 0);
        for (long j = 0; j < f; j++) {
            for (long i = 1; i < e_; i++) r[(i - 1) * f + j] = c[i * f + j];
            mpz_class c0 = c[j];
            if (c0 != 0) {
                if (!mpz_divisible_ui_p(c0.get_mpz_t(), d_.p))
                    throw std::runtime_error("strip_pi: valuation too small");
                mpz_class q = c0 / d_.p;
                for (long i = 1; i < e_; i++) r[(i - 1) * f + j] -= q * eis_[i];
                r[(e_ - 1) * f + j] -= q;
            }
        }
        for (auto& x : r) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
        c = r;
    }
    return c;
}

Elem PadicRing::shift_pi(const Elem& a, long t) const {
    if (t == 0) return a;
    if (d_.m == 0) return shift_p(a, t); // pi = p
    if (t < 0) {
        Elem r = mul(a, pow(pi(), mpz_class(-t)));
        r.trust = std::min(a.trust - t, ceiling(r.denom));
        return r;
    }
    long vc = val_coords(a);
    if (vc >= t) { // exact strip on the integral part
        Elem r{strip_pi_coords(a.c, t), a.denom, a.trust - t};
        normalize(r);
        clamp(r);
        return r;
    }
    // general route: pi^{-e} = w^{-1}/p with pi^e = p w
    long q = t / e_, r0 = t % e_;
    Elem x = a;
    if (r0 > 0) {
        x = mul(x, pow(pi(), mpz_class(e_ - r0)));
        q += 1;
    }
    Elem winv{pi_e_unit_inv_, 0, cap_pi()};
    x = mul(x, pow(winv, mpz_class(q)));
    x = shift_p(x, q);
    x.trust = std::min(x.trust, a.trust - t);
    clamp(x);
    return x;
}

std::vector<long> PadicRing::residue(const Elem& a) const {
    std::vector<long> r(d_.f);
    for (long j = 0; j < d_.f; j++) {
        mpz_class v = a.c[j] % d_.p;
        r[j] = v.get_si();
    }
    return r;
}

Elem PadicRing::inv_unit_integral(const Elem& a) const {
    long p = d_.p, f = d_.f;
    std::vector<long> r = residue(a);
    Poly rp(r.begin(), r.end());
    while (rp.size() > 1 && rp.back() == 0) rp.pop_back();
    if (rp.size() == 1 && rp[0] == 0) throw std::runtime_error("inv: not a unit");
    Poly hm(hpoly_.size());
    for (size_t i = 0; i < hpoly_.size(); i++) {
        mpz_class v = hpoly_[i] % p;
        hm[i] = ((v.get_si() % p) + p) % p;
    }
    mpz_class ex = pow_mpz(p, (unsigned long)f) - 2;
    Poly ri = poly_pow_mod(rp, ex, hm, p);
    Elem x = zero();
    for (size_t j = 0; j < ri.size(); j++) x.c[j] = ri[j];
    x.trust = a.trust;
    long iters = 2;
    while ((1L << iters) < cap_pi() + 2) iters++;
    Elem two = from_int(2);
    for (long k = 0; k <= iters; k++) {
        Elem err = sub(mul(a, x), one());
        if (is_zero(err)) break;
        x = mul(x, sub(two, mul(a, x)));
    }
    x.trust = a.trust;
    clamp(x);
    return x;
}

Elem PadicRing::inv(const Elem& a) const {
    if (is_zero(a)) throw std::runtime_error("inv: zero to precision");
    long vc = val_coords(a);
    Elem u{strip_pi_coords(a.c, vc), 0, a.trust + e_ * a.denom - vc};
    clamp(u);
    Elem iu = inv_unit_integral(u);
    Elem r = shift_pi(iu, vc);
    r = shift_p(r, -a.denom);
    // relative precision of the input bounds the result
    long v = vc - e_ * a.denom;
    r.trust = std::min(r.trust, a.trust - 2 * v);
    clamp(r);
    return r;
}

Elem PadicRing::div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

Elem PadicRing::teichmuller(const Elem& a) const {
    if (val_pi(a) != 0) throw std::runtime_error("teichmuller: non-unit input");
    Elem x = a;
    if (x.denom > 0) {
        // unit with denominator: integral part has valuation e*denom; strip it
        long vc = val_coords(x);
        Elem u{strip_pi_coords(x.c, vc), 0, x.trust};
        // value = u * pi^vc / p^denom = u * w^denom with vc = e*denom
        if (vc != e_ * x.denom) throw std::runtime_error("teichmuller: non-unit input");
        std::vector<mpz_class> wc(n_, 0);
        for (long i = 0; i < e_; i++) {
            mpz_class v = -eis_[i];
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pw_.get_mpz_t());
            wc[i * d_.f] = v / d_.p;
        }
        Elem we{wc, 0, cap_pi()};
        x = mul(u, pow(we, mpz_class(x.denom)));
    }
    mpz_class pf = pow_mpz(d_.p, (unsigned long)d_.f);
    for (long k = 0; k < cap_pi() + 2; k++) {
        Elem nx = pow(x, pf);
        if (eq(nx, x)) { x = nx; break; }
        x = nx;
    }
    return x;
}

Elem PadicRing::teichmuller_int(const mpz_class& a) const { return teichmuller(from_int(a)); }

Elem PadicRing::frobenius(const Elem& a) const {
    long f = d_.f;
    if (f == 1) return a;
    Elem r{std::vector<mpz_class>(n_, 0), a.denom, a.trust};
    for (long i = 0; i < e_; i++)
        for (long j = 0; j < f; j++) {
            const mpz_class& c = a.c[i * f + j];
            if (c == 0) continue;
            for (long j2 = 0; j2 < f; j2++) r.c[i * f + j2] += c * frobu_[j][j2];
        }
    for (auto& x : r.c) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
    return r;
}

Elem PadicRing::frobenius_iter(const Elem& a, long k) const {
    Elem r = a;
    long kk = ((k % d_.f) + d_.f) % d_.f;
    for (long i = 0; i < kk; i++) r = frobenius(r);
    return r;
}

const std::vector<std::vector<mpz_class>>& PadicRing::cyc_table(long c) const {
    long pm = 1;
    for (long i = 0; i < d_.m; i++) pm *= d_.p;
    long cc = ((c % pm) + pm) % pm;
    if (cc % d_.p == 0) throw std::invalid_argument("cyclotomic_aut: c not coprime to p");
    auto it = cyc_cache_.find(cc);
    if (it != cyc_cache_.end()) return it->second;

    auto xmul = [&](const std::vector<mpz_class>& a,
                    const std::vector<mpz_class>& b) {
        std::vector<mpz_class> t(2 * e_ - 1, 0);
        for (long i = 0; i < e_; i++) {
            if (a[i] == 0) continue;
            for (long j = 0; j < e_; j++)
                if (b[j] != 0) t[i + j] += a[i] * b[j];
        }
        for (long i = 2 * e_ - 2; i >= e_; i--) {
            if (t[i] == 0) continue;
            for (long i2 = 0; i2 < e_; i2++) t[i2] += xpow_[i - e_][i2] * t[i];
            t[i] = 0;
        }
        t.resize(e_);
        for (auto& x : t) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
        return t;
    };
    std::vector<mpz_class> onepx(e_, 0), z;
    onepx[0] = 1;
    if (e_ > 1) onepx[1] = 1;
    std::vector<mpz_class> acc(e_, 0);
    acc[0] = 1;
    std::vector<mpz_class> base = onepx;
    long k = cc;
    while (k > 0) {
        if (k & 1) acc = xmul(acc, base);
        base = xmul(base, base);
        k >>= 1;
    }
    z = acc;
    z[0] -= 1;
    mpz_mod(z[0].get_mpz_t(), z[0].get_mpz_t(), pw_.get_mpz_t());

    std::vector<std::vector<mpz_class>> tab(e_);
    tab[0].assign(e_, 0);
    tab[0][0] = 1;
    for (long i = 1; i < e_; i++) tab[i] = xmul(tab[i - 1], z);
    auto res = cyc_cache_.emplace(cc, std::move(tab));
    return res.first->second;
}

Elem PadicRing::cyclotomic_aut(const Elem& a, long c) const {
    if (d_.m == 0) return a;
    const auto& tab = cyc_table(c);
    long f = d_.f;
    Elem r{std::vector<mpz_class>(n_, 0), a.denom, a.trust};
    for (long i = 0; i < e_; i++)
        for (long j = 0; j < f; j++) {
            const mpz_class& v = a.c[i * f + j];
            if (v == 0) continue;
            const auto& row = tab[i];
            for (long i2 = 0; i2 < e_; i2++)
                if (row[i2] != 0) r.c[i2 * f + j] += v * row[i2];
        }
    for (auto& x : r.c) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pw_.get_mpz_t());
    return r;
}

Elem PadicRing::log_principal(const Elem& a) const {
    Elem w = sub(a, one());
    long v = val_pi(w);
    long conv = d_.m >= 1 ? e_ / (d_.p - 1) : 0;
    if (v <= conv) throw std::runtime_error("log: argument outside convergence region");
    Elem sum = zero();
    Elem wn = one();
    long cap = cap_pi();
    for (long n = 1;; n++) {
        wn = mul(wn, w);
        long vp_n = vp_mpz(n, d_.p, 62);
        Elem term = shift_p(wn, vp_n);
        mpz_class nu = mpz_class(n) / pow_mpz(d_.p, (unsigned long)vp_n);
        if (nu != 1) term = mul_int(term, inv_mod(nu, pw_));
        if (n % 2 == 0) sum = sub(sum, term);
        else sum = add(sum, term);
        if ((n + 1) * v - e_ * (vp_mpz(n + 1, d_.p, 62) + 2) >= cap) break;
        if (n > 8 * cap + 64) throw std::runtime_error("log: series did not terminate");
    }
    return sum;
}

Elem PadicRing::log_unit(const Elem& a) const {
    mpz_class pf1 = pow_mpz(d_.p, (unsigned long)d_.f) - 1;
    Elem z = pow(a, pf1);
    long conv = d_.m >= 1 ? e_ / (d_.p - 1) : 0;
    long t2 = 0;
    Elem w = z;
    while (val_pi(sub(w, one())) <= conv) {
        w = pow(w, d_.p);
        t2++;
        if (t2 > d_.m + 40) throw std::runtime_error("log: p-power reduction failed");
    }
    Elem L = log_principal(w);
    if (t2 > 0) L = shift_p(L, t2);
    L = mul_int(L, inv_mod(pf1, pw_));
    return L;
}

void PadicRing::build_log_pi() const {
    if (d_.m == 0) {
        log_pi_ = zero(); // log p = 0
        log_pi_ready_ = true;
        return;
    }
    long pm = 1;
    for (long i = 0; i < d_.m; i++) pm *= d_.p;
    Elem s = zero();
    Elem piel = pi();
    for (long c = 2; c < pm; c++) {
        if (c % d_.p == 0) continue;
        Elem sc = cyclotomic_aut(piel, c);
        Elem ratio = div(sc, piel);
        s = add(s, log_unit(ratio));
    }
    s = neg(s);
    long vpe = vp_mpz(e_, d_.p, 62);
    s = shift_p(s, vpe);
    mpz_class eu = mpz_class(e_) / pow_mpz(d_.p, (unsigned long)vpe);
    s = mul_int(s, inv_mod(eu, pw_));
    log_pi_ = s;
    log_pi_ready_ = true;
}

Elem PadicRing::iwasawa_log(const Elem& a) const {
    if (is_zero(a)) throw std::runtime_error("log: zero to precision");
    long vc = val_coords(a);
    // log(a) = log(integral unit part) + vc * log(pi); p-power part is killed
    Elem y{strip_pi_coords(a.c, vc), 0, std::min(a.trust + e_ * a.denom - vc, cap_pi())};
    clamp(y);
    Elem L = log_unit(y);
    if (vc != 0) {
        if (!log_pi_ready_) build_log_pi();
        L = add(L, mul_int(log_pi_, vc));
    }
    return L;
}

Elem PadicRing::exp_p(const Elem& a) const {
    long v = val_pi(a);
    long conv = d_.m >= 1 ? e_ / (d_.p - 1) : 0;
    if (v <= conv) throw std::runtime_error("exp: argument outside convergence domain");
    Elem sum = one();
    Elem term = one();
    long cap = cap_pi();
    for (long n = 1;; n++) {
        term = mul(term, a);
        long vp_n = vp_mpz(n, d_.p, 62);
        term = shift_p(term, vp_n);
        mpz_class nu = mpz_class(n) / pow_mpz(d_.p, (unsigned long)vp_n);
        if (nu != 1) term = mul_int(term, inv_mod(nu, pw_));
        sum = add(sum, term);
        if (val_pi(term) >= term.trust) break;
        if (n > 8 * cap + 64) throw std::runtime_error("exp: series did not terminate");
    }
    return sum;
}

bool PadicRing::is_totally_ramified_rational(const Elem& a) const {
    for (long i = 0; i < e_; i++)
        for (long j = 1; j < d_.f; j++) {
            const mpz_class& c = a.c[i * d_.f + j];
            if (c == 0) continue;
            if (e_ * vp_mpz(c, d_.p, d_.prec) + i - e_ * a.denom < a.trust) return false;
        }
    return true;
}

PadicDigits PadicRing::digits(const Elem& a) const {
    if (!is_totally_ramified_rational(a))
        throw std::runtime_error("digits: element has unramified components");
    PadicDigits out;
    out.trunc = a.trust;
    Elem y = a;
    normalize(y);
    long offset = -e_ * y.denom; // coords represent value * p^denom
    long shift = 0;
    while (true) {
        long v = val_coords(y);
        if (shift + v + offset >= out.trunc || v >= cap_pi()) break;
        y.c = strip_pi_coords(y.c, v);
        shift += v;
        std::vector<long> r = residue(y);
        for (long j = 1; j < d_.f; j++)
            if (((r[j] % d_.p) + d_.p) % d_.p != 0)
                throw std::runtime_error("digits: element has unramified components");
        long dgt = ((r[0] % d_.p) + d_.p) % d_.p;
        if (dgt == 0) throw std::runtime_error("digits: internal valuation error");
        out.terms.push_back({shift + offset, dgt});
        mpz_class dz = dgt;
        if (y.c[0] >= dz) y.c[0] -= dz;
        else y.c[0] += pw_ - dz;
    }
    return out;
}

Elem PadicRing::from_digits(const PadicDigits& dg) const {
    Elem s = zero();
    for (auto& [i, d] : dg.terms) {
        Elem t = shift_pi(from_int(d), -i);
        s = add(s, t);
    }
    return s;
}

std::string PadicDigits::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [i, d] : terms) {
        if (!first) os << " + ";
        first = false;
        if (i == 0) os << d;
        else {
            if (d != 1) os << d;
            os << "pi^" << i;
        }
    }
    if (!first) os << " + ";
    os << "O(pi^" << trunc << ")";
    return os.str();
}

std::string PadicRing::to_string(const Elem& a) const {
    std::ostringstream os;
    os << "[";
    for (long i = 0; i < n_; i++) {
        if (i) os << ",";
        os << a.c[i].get_str();
    }
    os << "]/p^" << a.denom << " (trust " << a.trust << ")";
    return os.str();
}

} // namespace pstark
