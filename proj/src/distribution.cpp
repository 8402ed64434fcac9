#include "pstark/distribution.hpp"

namespace pstark {

DistCtx DistCtx::make(long p, long k, long nmom, long W) {
    DistCtx C;
    C.p = p;
    C.k = k;
    C.nmom = nmom;
    C.W = W;
    C.pw = pow_mpz(p, (unsigned long)W);
    return C;
}

Dist dist_zero(const DistCtx& C) { return Dist(C.nmom, 0); }

Dist dist_add(const DistCtx& C, const Dist& a, const Dist& b) {
    Dist r(C.nmom);
    for (long i = 0; i < C.nmom; i++) {
        r[i] = a[i] + b[i];
        if (r[i] >= C.pw) r[i] -= C.pw;
    }
    return r;
}

Dist dist_sub(const DistCtx& C, const Dist& a, const Dist& b) {
    Dist r(C.nmom);
    for (long i = 0; i < C.nmom; i++) {
        r[i] = a[i] - b[i];
        if (r[i] < 0) r[i] += C.pw;
    }
    return r;
}

Dist dist_neg(const DistCtx& C, const Dist& a) {
    Dist r(C.nmom);
    for (long i = 0; i < C.nmom; i++) r[i] = a[i] == 0 ? mpz_class(0) : C.pw - a[i];
    return r;
}

Dist dist_scale(const DistCtx& C, const Dist& a, const mpz_class& s) {
    Dist r(C.nmom);
    for (long i = 0; i < C.nmom; i++) {
        r[i] = a[i] * s;
        mpz_mod(r[i].get_mpz_t(), r[i].get_mpz_t(), C.pw.get_mpz_t());
    }
    return r;
}

bool dist_is_zero(const DistCtx& C, const Dist& a) {
    for (auto& x : a)
        if (x != 0) return false;
    return true;
}

long dist_filtration_defect(const DistCtx& C, const Dist& a) {
    long best = C.nmom + C.W;
    for (long j = 0; j < C.nmom; j++) {
        if (a[j] == 0) continue;
        long v = vp_mpz(a[j], C.p, C.W) + j;
        if (v < best) best = v;
    }
    return best;
}

bool in_sigma0p(const DistCtx& C, const Mat2& g) {
    return g.a % C.p != 0 && g.c % C.p == 0 && g.det() != 0;
}

ActionMatrix weight_action_matrix(const DistCtx& C, const Mat2& g) {
    if (!in_sigma0p(C, g))
        throw std::invalid_argument("weight_action_matrix: matrix not in Sigma_0(p)");
    long M = C.nmom, k = C.k;
    ActionMatrix out;
    out.nmom = M;
    out.A.assign((size_t)M * M, 0);
    mpz_class a = g.a % C.pw, b = g.b % C.pw, c = g.c % C.pw, d = g.d % C.pw;
    if (a < 0) a += C.pw;
    if (b < 0) b += C.pw;
    if (c < 0) c += C.pw;
    if (d < 0) d += C.pw;
    mpz_class ainv = inv_mod(a, C.pw);

    // powers of a^{-1} and a
    std::vector<mpz_class> apow(2 * M + std::abs(k) + 2), anpow(2 * M + std::abs(k) + 2);
    apow[0] = 1;
    anpow[0] = 1;
    for (size_t i = 1; i < apow.size(); i++) {
        apow[i] = apow[i - 1] * a % C.pw;
        anpow[i] = anpow[i - 1] * ainv % C.pw;
    }
    auto apow_of = [&](long e) { return e >= 0 ? apow[e] : anpow[-e]; };

    // bpow, dpow, cpow
    std::vector<mpz_class> bpow(M + 1), dpow(M + 1), cpow(M + 1);
    bpow[0] = dpow[0] = cpow[0] = 1;
    for (long i = 1; i <= M; i++) {
        bpow[i] = bpow[i - 1] * b % C.pw;
        dpow[i] = dpow[i - 1] * d % C.pw;
        cpow[i] = cpow[i - 1] * c % C.pw;
    }

    // binomials C(j, t) up to M
    std::vector<std::vector<mpz_class>> binj(M);
    for (long j = 0; j < M; j++) {
        binj[j].resize(j + 1);
        for (long t = 0; t <= j; t++) {
            mpz_class v;
            mpz_bin_uiui(v.get_mpz_t(), (unsigned long)j, (unsigned long)t);
            binj[j][t] = v % C.pw;
        }
    }
    // generalized binomial C(k - j, s) for s < M
    auto gen_binom_row = [&](long kj) {
        std::vector<mpz_class> row(M, 0);
        row[0] = 1;
        // C(kj, s) = C(kj, s-1) * (kj - s + 1) / s; build over Q exactly with mpz
        mpz_class num = 1, den = 1;
        for (long s = 1; s < M; s++) {
            num *= (kj - s + 1);
            den *= s;
            if (num == 0) { row[s] = 0; continue; }
            mpz_class q = num / den; // integer binomial
            if (q * den != num) throw std::runtime_error("binomial: not integral");
            mpz_class qq = q % C.pw;
            if (qq < 0) qq += C.pw;
            row[s] = qq;
        }
        return row;
    };

    // (b + dz)^j (a + cz)^(k-j): coefficient of z^i:
    // sum_{t<=min(i,j)} C(j,t) b^(j-t) d^t * C(k-j, i-t) a^(k-j-(i-t)) c^(i-t)
    for (long j = 0; j < M; j++) {
        auto gb = gen_binom_row(k - j);
        for (long i = 0; i < M; i++) {
            mpz_class acc = 0;
            long tmax = std::min(i, j);
            for (long t = 0; t <= tmax; t++) {
                long s = i - t;
                const mpz_class& g1 = binj[j][t];
                const mpz_class& g2 = gb[s];
                if (g2 == 0 || (s > 0 && c == 0)) {
                    if (s > 0) continue;
                }
                if (g2 == 0) continue;
                mpz_class term = g1 * bpow[j - t] % C.pw;
                term = term * dpow[t] % C.pw;
                term = term * g2 % C.pw;
                term = term * apow_of(k - j - s) % C.pw;
                if (s > 0) term = term * cpow[s] % C.pw;
                acc += term;
            }
            mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), C.pw.get_mpz_t());
            out.A[(size_t)j * M + i] = acc;
        }
    }
    return out;
}

Dist act(const DistCtx& C, const ActionMatrix& A, const Dist& mu) {
    long M = C.nmom;
    Dist r(M);
    for (long j = 0; j < M; j++) {
        mpz_class acc = 0;
        const mpz_class* row = &A.A[(size_t)j * M];
        for (long i = 0; i < M; i++) {
            if (mu[i] == 0 || row[i] == 0) continue;
            acc += row[i] * mu[i];
        }
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), C.pw.get_mpz_t());
        r[j] = acc;
    }
    return r;
}

Dist act_matrix(const DistCtx& C, const Mat2& g, const Dist& mu) {
    return act(C, weight_action_matrix(C, g), mu);
}

Dist act_iota(const DistCtx& C, const Dist& mu) {
    Dist r = mu;
    for (long j = 1; j < C.nmom; j += 2) r[j] = r[j] == 0 ? mpz_class(0) : C.pw - r[j];
    return r;
}

Dist solve_difference_equation(const DistCtx& C, const Dist& boundary) {
    // (nu|(1 1; 0 1) - nu)(z^j) = sum_{i<j} C(j,i) nu_i = boundary_j
    if (boundary[0] != 0)
        throw std::runtime_error("solve_difference_equation: nonzero total measure");
    long M = C.nmom;
    Dist nu(M, 0);
    for (long j = 1; j < M; j++) {
        mpz_class rhs = boundary[j];
        for (long i = 0; i + 1 < j; i++) {
            mpz_class bin;
            mpz_bin_uiui(bin.get_mpz_t(), (unsigned long)j, (unsigned long)i);
            rhs -= bin * nu[i];
        }
        mpz_mod(rhs.get_mpz_t(), rhs.get_mpz_t(), C.pw.get_mpz_t());
        // nu_{j-1} = rhs / j
        long v = vp_mpz(j, C.p, 62);
        mpz_class ju = mpz_class(j) / pow_mpz(C.p, (unsigned long)v);
        if (v > 0) {
            mpz_class pv = pow_mpz(C.p, (unsigned long)v);
            if (!mpz_divisible_p(rhs.get_mpz_t(), pv.get_mpz_t()))
                throw std::runtime_error("solve_difference_equation: obstruction at p | j");
            rhs /= pv;
        }
        nu[j - 1] = rhs * inv_mod(ju, C.pw) % C.pw;
    }
    return nu;
}

} // namespace pstark
