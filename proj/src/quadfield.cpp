#include "pstark/quadfield.hpp"

#include <algorithm>

namespace pstark {

int kronecker(const mpz_class& a, const mpz_class& b) {
    return mpz_kronecker(a.get_mpz_t(), b.get_mpz_t());
}

bool is_fundamental_discriminant(const mpz_class& d) {
    if (d == 1 || d == 0) return false;
    mpz_class r = d % 4;
    if (r < 0) r += 4;
    if (r == 1) {
        // squarefree check
        mpz_class ad = abs(d);
        for (mpz_class q = 2; q * q <= ad; q++)
            if (ad % (q * q) == 0) return false;
        return true;
    }
    if (r == 0) {
        mpz_class m = d / 4;
        mpz_class rm = m % 4;
        if (rm < 0) rm += 4;
        if (rm == 1) return false; // then d/4 = 1 mod 4 would itself be a discriminant
        mpz_class am = abs(m);
        for (mpz_class q = 2; q * q <= am; q++)
            if (am % (q * q) == 0) return false;
        return true;
    }
    return false;
}

SplitType splitting_type(const QuadField& F, const mpz_class& ell) {
    int k = kronecker(F.d, ell);
    if (k == 0) return SplitType::Ramified;
    return k == 1 ? SplitType::Split : SplitType::Inert;
}

QElem qmul(const QuadField& F, const QElem& a, const QElem& b) {
    // w^2 = tr*w - nm
    mpz_class tr = F.w_trace(), nm = F.w_norm();
    mpz_class yy = a.y * b.y;
    return QElem{a.x * b.x - nm * yy, a.x * b.y + a.y * b.x + tr * yy};
}

QElem qconj(const QuadField& F, const QElem& a) {
    // conj(w) = tr - w
    return QElem{a.x + F.w_trace() * a.y, -a.y};
}

mpz_class qnorm(const QuadField& F, const QElem& a) {
    QElem c = qconj(F, a);
    QElem pr = qmul(F, a, c);
    if (pr.y != 0) throw std::runtime_error("qnorm: internal error");
    return pr.x;
}

namespace {
// HNF of the Z-module spanned by rows (x_i, y_i) in basis {1, w}:
// returns [a, 0; b, c] with the module = Z(a) + Z(b + c w), 0 <= b < a scaled
Ideal hnf_rows(std::vector<QElem> rows) {
    // reduce on the y column first
    mpz_class g = 0;
    for (auto& r : rows) g = gcd(g, r.y);
    Ideal out;
    if (g == 0) throw std::runtime_error("hnf: rank deficient");
    // find combination with y = g via iterated gcd
    QElem v{0, 0};
    {
        mpz_class cur = 0;
        for (auto& r : rows) {
            if (r.y == 0) continue;
            if (cur == 0) { v = r; cur = r.y; continue; }
            mpz_class s, t, gg;
            mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), cur.get_mpz_t(),
                       r.y.get_mpz_t());
            v = QElem{s * v.x + t * r.x, gg};
            cur = gg;
        }
    }
    // eliminate y from all rows
    mpz_class a = 0;
    for (auto& r : rows) {
        mpz_class k = r.y / g;
        mpz_class x = r.x - k * v.x;
        a = gcd(a, x);
    }
    if (a == 0) throw std::runtime_error("hnf: rank deficient");
    a = abs(a);
    mpz_class b = v.x % a;
    if (b < 0) b += a;
    out.a = a;
    out.b = b;
    out.c = abs(g);
    return out;
}
} // namespace

Ideal ideal_from_zbasis(const QuadField& F, const QElem& g1, const QElem& g2) {
    (void)F;
    return hnf_rows({g1, g2});
}

Ideal ideal_from_gens(const QuadField& F, const std::vector<QElem>& gens) {
    std::vector<QElem> rows;
    QElem w{0, 1};
    for (auto& g : gens) {
        rows.push_back(g);
        rows.push_back(qmul(F, g, w));
    }
    return hnf_rows(rows);
}

Ideal ideal_principal(const QuadField& F, const QElem& g) {
    return ideal_from_gens(F, {g});
}

Ideal ideal_whole(const QuadField& F) {
    (void)F;
    return Ideal{1, 0, 1};
}

Ideal ideal_mul(const QuadField& F, const Ideal& A, const Ideal& B) {
    QElem a1{A.a, 0}, a2{A.b, A.c};
    QElem b1{B.a, 0}, b2{B.b, B.c};
    std::vector<QElem> rows{qmul(F, a1, b1), qmul(F, a1, b2), qmul(F, a2, b1),
                            qmul(F, a2, b2)};
    // products of Z-bases span the product as a Z-module
    std::vector<QElem> all = rows;
    return hnf_rows(all);
}

Ideal ideal_conj(const QuadField& F, const Ideal& A) {
    QElem g1{A.a, 0}, g2{A.b, A.c};
    return ideal_from_zbasis(F, qconj(F, g1), qconj(F, g2));
}

bool ideal_eq(const Ideal& A, const Ideal& B) {
    return A.a == B.a && A.b == B.b && A.c == B.c;
}

bool ideal_contains(const QuadField& F, const Ideal& A, const QElem& g) {
    (void)F;
    if (!mpz_divisible_p(g.y.get_mpz_t(), A.c.get_mpz_t())) return false;
    mpz_class k = g.y / A.c;
    mpz_class x = g.x - k * A.b;
    return mpz_divisible_p(x.get_mpz_t(), A.a.get_mpz_t());
}

QForm reduce_form(QForm f) {
    while (true) {
        // normalize: -a < b <= a
        if (!(f.b > -f.a && f.b <= f.a)) {
            mpz_class r = f.b % (2 * f.a);
            if (r > f.a) r -= 2 * f.a;
            if (r <= -f.a) r += 2 * f.a;
            mpz_class k = (f.b - r) / (2 * f.a);
            // c' = c - k*b + k^2 a
            f.c = f.c - k * f.b + k * k * f.a;
            f.b = r;
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0) {
            f.b = -f.b;
            continue;
        }
        break;
    }
    return f;
}

bool form_eq(const QForm& f, const QForm& g) {
    return f.a == g.a && f.b == g.b && f.c == g.c;
}

std::vector<QForm> reduced_forms(const mpz_class& d) {
    if (d >= 0) throw std::invalid_argument("reduced_forms: d must be negative");
    std::vector<QForm> out;
    for (mpz_class a = 1; 3 * a * a <= -d; a++) {
        for (mpz_class b = -a + 1; b <= a; b++) {
            mpz_class num = b * b - d;
            if (num % (4 * a) != 0) continue;
            mpz_class c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            // primitive
            mpz_class g = gcd(gcd(a, abs(b)), c);
            if (g != 1) continue;
            out.push_back(QForm{a, b, c});
        }
    }
    return out;
}

QForm ideal_to_form(const QuadField& F, const Ideal& A) {
    // Q(x, y) = N(x*a + y*(b + c w)) / N(A)
    QElem g1{A.a, 0}, g2{A.b, A.c};
    mpz_class NA = A.a * A.c;
    mpz_class qa = qnorm(F, g1) / NA;
    mpz_class qc = qnorm(F, g2) / NA;
    // cross term: N(g1+g2) - N(g1) - N(g2)
    QElem s{g1.x + g2.x, g1.y + g2.y};
    mpz_class qb = (qnorm(F, s) - qnorm(F, g1) - qnorm(F, g2)) / NA;
    QForm f{qa, qb, qc};
    if (f.a < 0) { f.a = -f.a; f.b = -f.b; f.c = -f.c; }
    return reduce_form(f);
}

bool form_represents(const QForm& f, const mpz_class& ell) {
    // positive definite: y^2 |D| <= 4 a ell
    mpz_class D = 4 * f.a * f.c - f.b * f.b; // = |disc|
    for (mpz_class y = 0; y * y * D <= 4 * f.a * ell; y++) {
        for (int ys = -1; ys <= 1; ys += 2) {
            if (y == 0 && ys == 1) continue;
            mpz_class yy = ys * y;
            mpz_class B = f.b * yy, C = f.c * yy * yy - ell;
            mpz_class disc = B * B - 4 * f.a * C;
            if (disc < 0) continue;
            mpz_class r;
            mpz_sqrt(r.get_mpz_t(), disc.get_mpz_t());
            if (r * r != disc) continue;
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                mpz_class num = -B + sgn * r;
                if (num % (2 * f.a) == 0) return true;
            }
        }
    }
    return false;
}

std::vector<Ideal> primes_above(const QuadField& F, const mpz_class& ell) {
    SplitType st = splitting_type(F, ell);
    if (st == SplitType::Inert) {
        return {ideal_principal(F, QElem{ell, 0})};
    }
    // find root of the minimal polynomial of w mod ell: x^2 - tr x + nm = 0
    mpz_class tr = F.w_trace(), nm = F.w_norm();
    std::vector<mpz_class> roots;
    for (mpz_class r = 0; r < ell; r++) {
        if ((r * r - tr * r + nm) % ell == 0) roots.push_back(r);
        if ((long)roots.size() == 2) break;
    }
    if (roots.empty()) throw std::runtime_error("primes_above: no root found");
    std::vector<Ideal> out;
    for (auto& r : roots) {
        out.push_back(ideal_from_gens(F, {QElem{ell, 0}, QElem{-r, 1}}));
    }
    if (st == SplitType::Split && out.size() == 1) {
        // double root would mean ramified; must have two roots
        throw std::runtime_error("primes_above: split prime with one root");
    }
    if (st == SplitType::Ramified) out.resize(1);
    return out;
}

// ---- Gaussian integers ----

GInt gmul(const GInt& a, const GInt& b) {
    return GInt{a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x};
}

GInt gconj(const GInt& a) { return GInt{a.x, -a.y}; }

mpz_class gnorm(const GInt& a) { return a.x * a.x + a.y * a.y; }

GInt gmod(const GInt& a, const GInt& q) {
    mpz_class n = gnorm(q);
    GInt t = gmul(a, gconj(q)); // a * conj(q); divide by n with rounding
    auto rounddiv = [&](const mpz_class& u) {
        mpz_class qq, rr;
        mpz_fdiv_qr(qq.get_mpz_t(), rr.get_mpz_t(), u.get_mpz_t(), n.get_mpz_t());
        if (2 * rr > n) qq += 1;
        return qq;
    };
    GInt k{rounddiv(t.x), rounddiv(t.y)};
    GInt kq = gmul(k, q);
    return GInt{a.x - kq.x, a.y - kq.y};
}

int gauss_quadratic_symbol(const GInt& beta, const GInt& q) {
    mpz_class nq = gnorm(q);
    GInt r = gmod(beta, q);
    if (r.x == 0 && r.y == 0) return 0;
    // beta^((Nq-1)/2) mod q by square and multiply
    mpz_class e = (nq - 1) / 2;
    GInt acc{1, 0}, base = r;
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) acc = gmod(gmul(acc, base), q);
        base = gmod(gmul(base, base), q);
        k >>= 1;
    }
    // acc must be +1 or -1 mod q
    GInt plus = gmod(GInt{acc.x - 1, acc.y}, q);
    if (plus.x == 0 && plus.y == 0) return 1;
    GInt minus = gmod(GInt{acc.x + 1, acc.y}, q);
    if (minus.x == 0 && minus.y == 0) return -1;
    throw std::runtime_error("gauss_quadratic_symbol: unexpected value");
}

} // namespace pstark
