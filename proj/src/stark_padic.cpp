#include "pstark/stark_padic.hpp"

#include <algorithm>
#include <functional>

namespace pstark {

std::vector<Elem> coefficient_embeddings(const PadicRing& R, const mpz_class& disc) {
    if (disc == 0) return {R.zero()};
    // w satisfies w^2 - tr w + nm = 0 with tr, nm from the integral basis
    mpz_class tr, nm;
    if (mpz_odd_p(disc.get_mpz_t())) {
        tr = 1;
        nm = (1 - disc) / 4;
    } else {
        tr = 0;
        nm = -disc / 4;
    }
    // roots in the unramified part by residue search + Newton
    std::vector<Elem> roots;
    long p = R.p(), f = R.f();
    long pf = 1;
    for (long i = 0; i < f; i++) pf *= p;
    // enumerate residue candidates in the unramified residue field
    std::vector<long> digits(f, 0);
    for (long code = 0; code < pf; code++) {
        long c = code;
        Elem r0 = R.zero();
        Elem u = R.unram_gen();
        Elem upow = R.one();
        for (long j = 0; j < f; j++) {
            long d = c % p;
            c /= p;
            if (d != 0) r0 = R.add(r0, R.mul_int(upow, d));
            upow = R.mul(upow, u);
        }
        Elem val = R.add(R.sub(R.mul(r0, r0), R.mul_int(r0, tr)), R.from_int(nm));
        if (R.val_pi(val) < R.e()) continue;
        Elem dval = R.sub(R.mul_int(r0, 2), R.from_int(tr));
        if (R.val_pi(dval) != 0) continue; // need a simple root
        Elem x = r0;
        for (int it = 0; it < 64; it++) {
            Elem fx = R.add(R.sub(R.mul(x, x), R.mul_int(x, tr)), R.from_int(nm));
            if (R.is_zero(fx)) break;
            Elem dfx = R.sub(R.mul_int(x, 2), R.from_int(tr));
            x = R.sub(x, R.div(fx, dfx));
        }
        bool dup = false;
        for (auto& r : roots)
            if (R.eq(r, x)) dup = true;
        if (!dup) roots.push_back(x);
    }
    if (roots.size() != 2)
        throw std::runtime_error("coefficient_embeddings: field does not embed");
    return roots;
}

std::vector<Elem> embed_polynomial(const PadicRing& R, const AlgebraicPolynomial& P,
                                   const Elem& w_image) {
    std::vector<Elem> out;
    for (auto& [x, y] : P.coeffs) {
        Elem c = R.from_int(x);
        if (y != 0) c = R.add(c, R.mul_int(w_image, y));
        out.push_back(c);
    }
    return out;
}

Elem poly_eval(const PadicRing& R, const std::vector<Elem>& P, const Elem& x) {
    Elem acc = R.zero();
    for (long i = (long)P.size() - 1; i >= 0; i--) acc = R.add(R.mul(acc, x), P[i]);
    return acc;
}

namespace {

std::vector<Elem> poly_derivative(const PadicRing& R, const std::vector<Elem>& P) {
    std::vector<Elem> d;
    for (size_t i = 1; i < P.size(); i++) d.push_back(R.mul_int(P[i], (long)i));
    return d;
}

// residue-field representatives 0..p^f-1 encoded on the u-power basis
Elem residue_rep(const PadicRing& R, long code) {
    long p = R.p();
    Elem r0 = R.zero();
    Elem u = R.unram_gen();
    Elem upow = R.one();
    long c = code;
    for (long j = 0; j < R.f(); j++) {
        long d = c % p;
        c /= p;
        if (d != 0) r0 = R.add(r0, R.mul_int(upow, d));
        upow = R.mul(upow, u);
    }
    return r0;
}

} // namespace

namespace {

// unit roots of a polynomial whose residue reduction is nonzero
std::vector<Elem> unit_roots(const PadicRing& R, const std::vector<Elem>& P) {
    std::vector<Elem> roots;
    std::vector<Elem> dP = poly_derivative(R, P);
    long pf = 1;
    for (long i = 0; i < R.f(); i++) pf *= R.p();
    long floor_ok = R.cap_pi() - 6 * R.e();

    struct Node {
        Elem base;
        long level;
    };
    std::vector<Node> stack;
    for (long code = 1; code < pf; code++) { // nonzero residues only
        Elem r = residue_rep(R, code);
        if (R.val_pi(poly_eval(R, P, r)) >= 1) stack.push_back({r, 1});
    }
    long max_level = R.cap_pi() - 8;
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        Elem fx = poly_eval(R, P, nd.base);
        Elem dfx = poly_eval(R, dP, nd.base);
        long vf = R.val_pi(fx);
        long vd = R.val_pi(dfx);
        if (vf >= floor_ok || vf > 2 * vd) {
            Elem x = nd.base;
            for (int it = 0; it < 300; it++) {
                Elem v = poly_eval(R, P, x);
                if (R.val_pi(v) >= floor_ok) break;
                Elem d = poly_eval(R, dP, x);
                x = R.sub(x, R.div(v, d));
            }
            if (R.val_pi(poly_eval(R, P, x)) < floor_ok) continue;
            bool dup = false;
            for (auto& r : roots)
                if (R.val_pi(R.sub(r, x)) >= floor_ok) dup = true;
            if (!dup) roots.push_back(x);
            continue;
        }
        if (nd.level > max_level)
            throw std::runtime_error("poly_roots: repeated root to precision");
        Elem pil = R.pow(R.pi(), nd.level);
        for (long code = 0; code < pf; code++) {
            Elem cand = R.add(nd.base, R.mul(pil, residue_rep(R, code)));
            if (R.val_pi(poly_eval(R, P, cand)) >= nd.level + 1)
                stack.push_back({cand, nd.level + 1});
        }
    }
    return roots;
}

} // namespace

std::vector<Elem> poly_roots(const PadicRing& R, const std::vector<Elem>& P) {
    // Newton polygon: group roots by pi-adic valuation, transform each slope
    // segment to unit roots
    long deg = (long)P.size() - 1;
    std::vector<long> vi(deg + 1);
    for (long i = 0; i <= deg; i++) vi[i] = R.val_pi(P[i]);
    // lower convex hull of (i, vi) from i = 0 to deg
    std::vector<long> hull; // indices
    for (long i = 0; i <= deg; i++) {
        if (vi[i] >= R.cap_pi() - 2) continue; // treat as +infinity
        while (hull.size() >= 2) {
            long a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            // keep lower hull: slope(a,b) < slope(b,i)
            if ((vi[b] - vi[a]) * (i - b) >= (vi[i] - vi[b]) * (b - a)) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    std::vector<Elem> all;
    for (size_t t = 0; t + 1 < hull.size(); t++) {
        long i0 = hull[t], i1 = hull[t + 1];
        long dv = vi[i0] - vi[i1], di = i1 - i0;
        if (dv < 0) continue; // roots of negative valuation: none for monic integral input
        if (dv % di != 0) {
            // fractional slope: those roots are not in R
            continue;
        }
        long v = dv / di; // root valuation in pi-units
        // Q(y) = P(pi^v y) / pi^(min_i (vi + i v))
        long m0 = vi[i0] + i0 * v;
        std::vector<Elem> Q(deg + 1, R.zero());
        for (long i = 0; i <= deg; i++) {
            long sh = i * v - m0;
            Q[i] = R.shift_pi(P[i], -sh);
        }
        auto ur = unit_roots(R, Q);
        for (auto& y : ur) {
            Elem x = R.mul(y, R.pow(R.pi(), v));
            bool dup = false;
            for (auto& r : all)
                if (R.val_pi(R.sub(r, x)) >= R.cap_pi() - 6 * R.e()) dup = true;
            if (!dup) all.push_back(x);
        }
    }
    return all;
}

long product_check(const PadicRing& R, const std::vector<Elem>& P,
                   const std::vector<Elem>& roots) {
    std::vector<Elem> prod{R.one()};
    for (auto& r : roots) {
        std::vector<Elem> nxt(prod.size() + 1, R.zero());
        for (size_t i = 0; i < prod.size(); i++) {
            nxt[i + 1] = R.add(nxt[i + 1], prod[i]);
            nxt[i] = R.sub(nxt[i], R.mul(prod[i], r));
        }
        prod = std::move(nxt);
    }
    long best = R.cap_pi();
    for (size_t i = 0; i < P.size(); i++) {
        Elem d = R.sub(prod[i], P[i]);
        best = std::min(best, R.val_pi(d));
    }
    return best;
}

Elem alpha_projection(const PadicRing& R, const Elem& a, long alpha) {
    Elem fr = R.frobenius(a);
    if (alpha == 1) return R.mul(a, fr);
    if (alpha == -1) return R.div(a, fr);
    throw std::invalid_argument("alpha_projection: alpha must be +-1");
}

std::optional<std::vector<long>> match_permutation(const PadicRing& R,
                                                   const std::vector<Elem>& roots,
                                                   const std::vector<Elem>& images,
                                                   long floor_pi) {
    std::vector<long> perm(roots.size(), -1);
    std::vector<char> used(roots.size(), 0);
    for (size_t i = 0; i < images.size(); i++) {
        long hit = -1;
        for (size_t k = 0; k < roots.size(); k++) {
            if (used[k]) continue;
            if (R.val_pi(R.sub(images[i], roots[k])) >= floor_pi) { hit = (long)k; break; }
        }
        if (hit < 0) return std::nullopt;
        perm[i] = hit;
        used[hit] = 1;
    }
    return perm;
}

bool certify_galois(const PadicRing& R, const std::vector<Elem>& roots,
                    const std::vector<long>& perm, long floor_pi) {
    // Lagrange interpolation of r_i -> r_{perm(i)}: g = sum target_i * L_i(x)
    long n = (long)roots.size();
    // accumulate coefficients of g
    std::vector<Elem> g(n, R.zero());
    for (long i = 0; i < n; i++) {
        // numerator polynomial prod_{k != i} (x - r_k), built once per i
        std::vector<Elem> num{R.one()};
        Elem denom = R.one();
        for (long k = 0; k < n; k++) {
            if (k == i) continue;
            std::vector<Elem> nxt(num.size() + 1, R.zero());
            for (size_t t = 0; t < num.size(); t++) {
                nxt[t + 1] = R.add(nxt[t + 1], num[t]);
                nxt[t] = R.sub(nxt[t], R.mul(num[t], roots[k]));
            }
            num = std::move(nxt);
            denom = R.mul(denom, R.sub(roots[i], roots[k]));
        }
        Elem scale = R.div(roots[perm[i]], denom);
        for (long t = 0; t < n; t++) g[t] = R.add(g[t], R.mul(num[t], scale));
    }
    // coefficients must lie in the unramified part (the closure of F)
    for (auto& c : g) {
        // strip the pi-coordinates and compare
        Elem cc = c;
        // an element is unramified-rational iff all coordinates with X-power
        // >= 1 vanish to the requested precision
        long e = R.e(), f = R.f();
        for (long i = 1; i < e; i++)
            for (long j = 0; j < f; j++) {
                const mpz_class& x = cc.c[i * f + j];
                if (x == 0) continue;
                long v = i + e * vp_mpz(x, R.p(), R.prec()) - e * cc.denom;
                if (v < std::min(floor_pi, cc.trust)) return false;
            }
    }
    return true;
}

GaloisLabeledRoots label_roots(const PadicRing& R, const std::vector<Elem>& roots,
                               long h, long floor_pi) {
    GaloisLabeledRoots out;
    out.roots = roots;
    long n = (long)roots.size();
    long p = R.p();
    if (n != h * p) throw std::invalid_argument("label_roots: degree != h p");

    // gamma: cyclotomic automorphism action, pinned by the embedding
    {
        std::vector<Elem> im;
        for (auto& r : roots) im.push_back(R.cyclotomic_aut(r, 1 + p));
        auto perm = match_permutation(R, roots, im, floor_pi);
        if (!perm)
            throw std::runtime_error("label_roots: cyclotomic action does not permute roots");
        out.gamma_perm = *perm;
        // order p
        std::vector<long> q(n);
        for (long i = 0; i < n; i++) q[i] = i;
        for (long k = 0; k < p; k++)
            for (long i = 0; i < n; i++) q[i] = out.gamma_perm[q[i]];
        // q = gamma^p must be identity... recompute properly below
    }
    {
        // check gamma has order p
        std::vector<long> q(n);
        for (long i = 0; i < n; i++) q[i] = i;
        for (long k = 0; k < p; k++) {
            std::vector<long> nq(n);
            for (long i = 0; i < n; i++) nq[i] = out.gamma_perm[q[i]];
            q = nq;
        }
        for (long i = 0; i < n; i++)
            if (q[i] != i) throw std::runtime_error("label_roots: gamma order is not p");
    }

    // frobenius permutation (if the root set is stable)
    {
        std::vector<Elem> im;
        for (auto& r : roots) im.push_back(R.frobenius(r));
        out.frob_perm = match_permutation(R, roots, im, floor_pi);
    }

    // gamma orbits
    std::vector<long> orbit(n, -1);
    long orbits = 0;
    for (long i = 0; i < n; i++) {
        if (orbit[i] >= 0) continue;
        long cur = i;
        while (orbit[cur] < 0) {
            orbit[cur] = orbits;
            cur = out.gamma_perm[cur];
        }
        orbits++;
    }
    if (orbits != h) throw std::runtime_error("label_roots: unexpected gamma orbit count");

    // candidate delta generators: commute with gamma, permute orbits cyclically,
    // have order h; determined by images of one root per orbit step
    std::vector<std::vector<long>> orbit_members(h);
    for (long i = 0; i < n; i++) orbit_members[orbit[i]].push_back(i);

    std::vector<std::vector<long>> cands;
    long base = 0;
    // enumerate images of base along a chain of h - 1 choices
    std::vector<long> chain(h, -1); // chain[k] = delta^k(base)
    chain[0] = base;
    std::function<void(long)> rec = [&](long k) {
        if (k == h) {
            // close the cycle: delta(chain[h-1]) must be base
            // build the full permutation via commuting with gamma
            std::vector<long> perm(n, -1);
            // positions within orbits: index roots by gamma-power from chain[k]
            for (long kk = 0; kk < h; kk++) {
                long src = chain[kk];
                long dst = chain[(kk + 1) % h];
                long s = src, d = dst;
                for (long t = 0; t < p; t++) {
                    perm[s] = d;
                    s = out.gamma_perm[s];
                    d = out.gamma_perm[d];
                }
            }
            for (long i = 0; i < n; i++)
                if (perm[i] < 0) return;
            // order h check
            std::vector<long> q(n);
            for (long i = 0; i < n; i++) q[i] = i;
            for (long t = 0; t < h; t++) {
                std::vector<long> nq(n);
                for (long i = 0; i < n; i++) nq[i] = perm[q[i]];
                q = nq;
            }
            for (long i = 0; i < n; i++)
                if (q[i] != i) return;
            if (certify_galois(R, roots, perm, floor_pi)) cands.push_back(perm);
            return;
        }
        for (long img = 0; img < n; img++) {
            bool seen = false;
            for (long t = 0; t < k; t++)
                if (orbit[chain[t]] == orbit[img]) seen = true;
            if (seen) continue;
            chain[k] = img;
            rec(k + 1);
            chain[k] = -1;
        }
    };
    if (h > 1) rec(1);
    out.delta_perms = cands;
    return out;
}

Elem root_of_unity(const PadicRing& R, long n) {
    if (n <= 0) throw std::invalid_argument("root_of_unity: n >= 1");
    long p = R.p();
    long nw = 1;
    long nt = n;
    while (nt % p == 0) {
        nt /= p;
        nw *= p;
    }
    long pf1 = 1;
    for (long i = 0; i < R.f(); i++) pf1 *= p;
    pf1 -= 1;
    if (pf1 % nt != 0)
        throw std::invalid_argument("root_of_unity: order not available in ring");
    Elem z = R.one();
    if (nt > 1) z = R.mul(z, R.pow(R.unram_gen(), pf1 / nt));
    if (nw > 1) {
        long k = 0;
        long t = nw;
        while (t > 1) { t /= p; k++; }
        z = R.mul(z, R.zeta_pk(k));
    }
    return z;
}

StarkSums stark_sums(const PadicRing& R, const std::vector<Elem>& roots,
                     const std::vector<long>& gamma_perm,
                     const std::vector<long>& delta_perm, long base_root, long h,
                     long chi_e, const Dirichlet& psi, long alpha) {
    long p = R.p();
    Elem zh = root_of_unity(R, h);
    // psi value on the Galois generator matching cyclotomic_aut(1+p)
    Elem psi_g = char_eval(R, psi, 1 + p);

    // logs of |sigma(u1)|_alpha indexed by (a, b)
    StarkSums out;
    out.S.assign(p, R.zero());
    std::vector<std::vector<Elem>> logs(h);
    long cur = base_root;
    std::vector<long> delta_chain(h);
    delta_chain[0] = base_root;
    for (long a = 1; a < h; a++) delta_chain[a] = delta_perm[delta_chain[a - 1]];
    for (long a = 0; a < h; a++) {
        long idx = delta_chain[a];
        logs[a].resize(p);
        for (long b = 0; b < p; b++) {
            Elem v = alpha_projection(R, roots[idx], alpha);
            logs[a][b] = R.iwasawa_log(v);
            idx = gamma_perm[idx];
        }
    }
    (void)cur;
    for (long i = 1; i < p; i++) {
        Elem acc = R.zero();
        for (long a = 0; a < h; a++) {
            Elem chi_val = R.pow(zh, ((chi_e * a) % h + h) % h);
            for (long b = 0; b < p; b++) {
                Elem psival = R.pow(psi_g, ((long)(i * b)) % p);
                acc = R.add(acc, R.mul(R.mul(chi_val, psival), logs[a][b]));
            }
        }
        out.S[i] = acc;
    }
    return out;
}

} // namespace pstark
