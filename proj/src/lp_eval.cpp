#include "pstark/lp_eval.hpp"

namespace pstark {

CosetMeasure coset_restriction(const SymbolSpace& S, const OvSymbol& phi, long a,
                               long m) {
    if (m < 1) throw std::invalid_argument("coset_restriction: m >= 1");
    long p = S.manin().p;
    long pm = 1;
    for (long i = 0; i < m; i++) pm *= p;
    long aa = ((a % pm) + pm) % pm;
    if (aa % p == 0) throw std::invalid_argument("coset_restriction: a not a unit");
    Dist mom = S.evaluate(phi, Cusp{aa, pm}, Cusp{1, 0});
    return CosetMeasure{aa, m, std::move(mom)};
}

Elem coset_pair_poly(const PadicRing& R, const SymbolSpace& S, const CosetMeasure& cm,
                     const std::vector<Elem>& coeffs, const mpz_class& alpha) {
    // f(z) = sum coeffs[n] z^n on the coset: substitute z = a + p^m t and pair
    // against the moments in t
    const DistCtx& C = S.ctx();
    long p = C.p;
    mpz_class pm = pow_mpz(p, (unsigned long)cm.m);
    // expand sum_n c_n (a + p^m t)^n = sum_k t^k p^{mk} sum_{n>=k} c_n C(n,k) a^{n-k}
    long N = (long)coeffs.size();
    Elem acc = R.zero();
    for (long k = 0; k < std::min<long>(N, C.nmom); k++) {
        Elem inner = R.zero();
        for (long n = k; n < N; n++) {
            mpz_class bin;
            mpz_bin_uiui(bin.get_mpz_t(), (unsigned long)n, (unsigned long)k);
            mpz_class an = pow_mpz(cm.a, (unsigned long)(n - k));
            inner = R.add(inner, R.mul_int(coeffs[n], bin * an));
        }
        mpz_class scale = pow_mpz(p, (unsigned long)(cm.m * k));
        acc = R.add(acc, R.mul_int(R.mul_int(inner, scale), cm.moments[k]));
    }
    // alpha^{-m}
    Elem ai = R.inv(R.from_int(alpha));
    return R.mul(acc, R.pow(ai, cm.m));
}

Elem mellin_value(const PadicRing& R, const SymbolSpace& S, const OvSymbol& phi,
                  const WeightChar& kappa, const mpz_class& alpha, long depth) {
    const DistCtx& C = S.ctx();
    long p = C.p;
    long m = std::max<long>(kappa.finite.conductor_exp(), 1);
    if (depth > m) m = depth;
    long pm = 1;
    for (long i = 0; i < m; i++) pm *= p;
    mpz_class pmz = pm;

    // binomial coefficients C(s-1, n) as exact integers
    std::vector<mpz_class> sbin(C.nmom);
    sbin[0] = 1;
    for (long n = 1; n < C.nmom; n++)
        sbin[n] = sbin[n - 1] * (kappa.s - n) / n; // C(s-1,n) = C(s-1,n-1)(s-n)/n

    Elem total = R.zero();
    for (long a = 1; a < pm; a++) {
        if (a % p == 0) continue;
        Elem fin = char_eval(R, kappa.finite, a);
        if (R.is_zero(fin)) continue;
        CosetMeasure cm = coset_restriction(S, phi, a, m);
        // <a + p^m t>^{s-1} = <a>^{s-1} (1 + p^m t / a)^{s-1}
        Elem gap = R.div(R.from_int(a), R.teichmuller_int(a));
        Elem gap_pow;
        {
            mpz_class ex = kappa.s - 1;
            if (ex >= 0) gap_pow = R.pow(gap, ex);
            else gap_pow = R.pow(R.inv(gap), -ex);
        }
        // series sum_n C(s-1,n) (p^m / a)^n mu_n
        mpz_class ainv = inv_mod(a, R.pw());
        Elem series = R.zero();
        mpz_class fac = 1; // (p^m / a)^n accumulated
        for (long n = 0; n < C.nmom; n++) {
            if (cm.moments[n] != 0 && sbin[n] != 0) {
                mpz_class t = sbin[n] % R.pw() * fac % R.pw() * cm.moments[n] % R.pw();
                series = R.add(series, R.from_int(t));
            }
            fac = fac * pmz % R.pw() * ainv % R.pw();
        }
        total = R.add(total, R.mul(R.mul(fin, gap_pow), series));
    }
    Elem ai = R.inv(R.from_int(alpha));
    return R.mul(total, R.pow(ai, m));
}

Elem lp_ratio(const PadicRing& R, const SymbolSpace& S, const OvSymbol& phi,
              const Dirichlet& psi, long i, long j, const mpz_class& s_val,
              const mpz_class& alpha) {
    Dirichlet om = Dirichlet::omega(psi.p);
    WeightChar ki{psi.power(-i).times(om.inverse()), s_val};
    WeightChar kj{psi.power(-j).times(om.inverse()), s_val};
    Elem num = mellin_value(R, S, phi, ki, alpha);
    Elem den = mellin_value(R, S, phi, kj, alpha);
    if (R.is_zero(den))
        throw std::runtime_error("lp_ratio: denominator vanishes to precision");
    return R.div(num, den);
}

Elem rhs_prefactor(const PadicRing& R, const Dirichlet& psi, long i, long j,
                   long alpha) {
    auto one_side = [&](long k) {
        Dirichlet chik = psi.power(k);
        Dirichlet chik_inv = chik.inverse();
        // (1 - beta chi(p))(1 - chi^{-1}(p)/(alpha p)); chi(p) = 0 for p-power
        // conductor, so both factors are 1, but evaluate them anyway
        Elem eu1 = R.sub(R.one(), R.mul_int(char_eval(R, chik, psi.p), -alpha));
        Elem pa = R.mul_int(R.from_int(psi.p), alpha);
        Elem eu2 = R.sub(R.one(), R.div(char_eval(R, chik_inv, psi.p), pa));
        Elem tau = gauss_sum(R, chik_inv);
        Elem t = R.shift_p(tau, chik.conductor_exp());
        return R.mul(R.mul(eu1, eu2), t);
    };
    return R.div(one_side(i), one_side(j));
}

} // namespace pstark
