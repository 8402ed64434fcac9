#include "pstark/ovmodsym.hpp"

#include <algorithm>
#include <thread>
#include <cstdio>
#include <cstdlib>

namespace pstark {

SymbolSpace::SymbolSpace(ManinData md, DistCtx ctx, std::vector<int> eps_mod_N,
                         long threads)
    : md_(std::move(md)), C_(ctx), eps_(std::move(eps_mod_N)), threads_(threads) {
    if ((long)eps_.size() != md_.N)
        throw std::invalid_argument("SymbolSpace: eps table size != N");
    // consistency: -I acts by eps(-1) * (-1)^k = +1
    long em1 = eps_[((-1) % md_.N + md_.N) % md_.N];
    long sk = (C_.k % 2 + 2) % 2 == 0 ? 1 : -1;
    if (em1 * sk != 1)
        throw std::invalid_argument("SymbolSpace: eps(-1) must equal (-1)^k");
    build_relations();
    // U_p plan
    std::vector<std::pair<Mat2, int>> ops;
    for (long a = 0; a < md_.p; a++) ops.push_back({Mat2{1, a, 0, md_.p}, 1});
    up_plan_ = build_plan(ops);
    iota_plan_ = build_plan({{Mat2{1, 0, 0, -1}, 1}});
}

int SymbolSpace::eps_of_gamma(const Mat2& delta) const {
    mpz_class r = delta.d % md_.N;
    if (r < 0) r += md_.N;
    int e = eps_[r.get_si()];
    if (e == 0) throw std::runtime_error("eps_of_gamma: non-unit diagonal");
    return e;
}

long SymbolSpace::intern_matrix(const Mat2& g) {
    mpz_class pw = C_.pw;
    auto key = [&](const Mat2& m) {
        auto red = [&](const mpz_class& x) {
            mpz_class r = x % pw;
            if (r < 0) r += pw;
            return r.get_str();
        };
        return std::array<std::string, 4>{red(m.a), red(m.b), red(m.c), red(m.d)};
    };
    auto k = key(g);
    auto it = mat_index_.find(k);
    if (it != mat_index_.end()) return it->second;
    long id = (long)mats_.size();
    mats_.push_back(g);
    mat_cache_.push_back(std::nullopt);
    mat_index_.emplace(k, id);
    return id;
}

const ActionMatrix& SymbolSpace::matrix(long id) const {
    auto& slot = const_cast<std::optional<ActionMatrix>&>(mat_cache_[id]);
    if (!slot) slot = weight_action_matrix(C_, mats_[id]);
    return *slot;
}

SymbolSpace::Plan SymbolSpace::build_plan(const std::vector<std::pair<Mat2, int>>& ops) {
    Plan plan(md_.size());
    for (long x = 0; x < md_.size(); x++) {
        for (auto& [m, extra] : ops) {
            Mat2 g = m.mul(md_.lift[x]);
            Cusp r{g.b, g.d}, s{g.a, g.c}; // g(0), g(infty)
            for (auto& [h, sign] : divisor_paths(r, s)) {
                long y = md_.index_of_matrix(h);
                Mat2 delta = h.mul(md_.lift[y].inv_unimodular());
                if (delta.c % md_.M != 0 || delta.det() != 1)
                    throw std::runtime_error("build_plan: transport not in Gamma_0(M)");
                Mat2 act_mat = delta.inv_unimodular().mul(m);
                if (!in_sigma0p(C_, act_mat))
                    throw std::runtime_error("build_plan: matrix not in Sigma_0(p)");
                int sc = sign * eps_of_gamma(delta) * extra;
                plan[x].push_back({y, sc, intern_matrix(act_mat)});
            }
        }
    }
    return plan;
}

const SymbolSpace::Plan& SymbolSpace::tl_plan(long ell) const {
    auto it = tl_plans_.find(ell);
    if (it != tl_plans_.end()) return it->second;
    if (ell == md_.p || md_.N % ell == 0)
        throw std::invalid_argument("tl_plan: ell must be coprime to N p");
    std::vector<std::pair<Mat2, int>> ops;
    for (long a = 0; a < ell; a++) ops.push_back({Mat2{1, a, 0, ell}, 1});
    long rN = ell % md_.N;
    ops.push_back({Mat2{ell, 0, 0, 1}, eps_[rN]});
    auto* self = const_cast<SymbolSpace*>(this);
    auto plan = self->build_plan(ops);
    auto res = self->tl_plans_.emplace(ell, std::move(plan));
    return res.first->second;
}

OvSymbol SymbolSpace::apply_plan(const Plan& plan, const OvSymbol& phi) const {
    OvSymbol out;
    out.V.assign(md_.size(), dist_zero(C_));
    auto work = [&](long x0, long x1) {
        for (long x = x0; x < x1; x++) {
            Dist acc = dist_zero(C_);
            for (auto& t : plan[x]) {
                Dist v = act(C_, matrix(t.mat), phi.V[t.y]);
                if (t.scalar == 1) acc = dist_add(C_, acc, v);
                else if (t.scalar == -1) acc = dist_sub(C_, acc, v);
                else acc = dist_add(C_, acc, dist_scale(C_, v, t.scalar));
            }
            out.V[x] = std::move(acc);
        }
    };
    long n = md_.size();
    if (threads_ <= 1) {
        work(0, n);
    } else {
        // matrices must be materialized before threading (lazy cache is not
        // synchronized)
        for (long x = 0; x < n; x++)
            for (auto& t : plan[x]) matrix(t.mat);
        std::vector<std::thread> th;
        long chunk = (n + threads_ - 1) / threads_;
        for (long i = 0; i < threads_; i++) {
            long a = i * chunk, b = std::min(n, a + chunk);
            if (a >= b) break;
            th.emplace_back(work, a, b);
        }
        for (auto& t : th) t.join();
    }
    return out;
}

OvSymbol SymbolSpace::zero_symbol() const {
    OvSymbol s;
    s.V.assign(md_.size(), dist_zero(C_));
    return s;
}

OvSymbol SymbolSpace::add(const OvSymbol& a, const OvSymbol& b) const {
    OvSymbol r = zero_symbol();
    for (long x = 0; x < md_.size(); x++) r.V[x] = dist_add(C_, a.V[x], b.V[x]);
    return r;
}

OvSymbol SymbolSpace::sub(const OvSymbol& a, const OvSymbol& b) const {
    OvSymbol r = zero_symbol();
    for (long x = 0; x < md_.size(); x++) r.V[x] = dist_sub(C_, a.V[x], b.V[x]);
    return r;
}

OvSymbol SymbolSpace::scale(const OvSymbol& a, const mpz_class& s) const {
    OvSymbol r = zero_symbol();
    for (long x = 0; x < md_.size(); x++) r.V[x] = dist_scale(C_, a.V[x], s);
    return r;
}

bool SymbolSpace::is_zero(const OvSymbol& a) const {
    for (auto& v : a.V)
        if (!dist_is_zero(C_, v)) return false;
    return true;
}

void SymbolSpace::build_relations() {
    long n = md_.size();
    Mat2 S{0, -1, 1, 0}, T{0, -1, 1, -1};
    // edges = S-orbits
    edge_of_.assign(n, -1);
    flip_mat_.assign(n, -1);
    flip_eps_.assign(n, 0);
    for (long x = 0; x < n; x++) {
        if (edge_of_[x] >= 0) continue;
        long y = md_.sstar[x];
        long e = (long)edge_rep_.size();
        edge_rep_.push_back(x);
        edge_of_[x] = e;
        if (y == x) {
            // self-paired: constraint V = P V with P(v) = -eps(d) v|d
            Mat2 delta = md_.lift[x].mul(S).mul(md_.lift[x].inv_unimodular());
            if (delta.c % md_.M != 0) throw std::runtime_error("2-torsion: bad transport");
            torsion2_edges_.push_back(e);
            torsion2_q_.push_back({intern_matrix(delta), eps_of_gamma(delta)});
        } else {
            edge_of_[y] = e;
            // V_y = -eps(delta) (W_x | delta), delta = lift[x] S lift[y]^(-1)
            Mat2 delta = md_.lift[x].mul(S).mul(md_.lift[y].inv_unimodular());
            if (delta.c % md_.M != 0) throw std::runtime_error("edge flip: bad transport");
            flip_mat_[y] = intern_matrix(delta);
            flip_eps_[y] = eps_of_gamma(delta);
        }
    }
    // triangles = T-orbits
    std::vector<char> seen(n, 0);
    for (long x = 0; x < n; x++) {
        if (seen[x]) continue;
        long x1 = md_.tstar[x], x2 = md_.tstar[x1];
        seen[x] = 1;
        if (x1 == x) {
            // 3-torsion: (1 + Q + Q^2) V_x = 0, Q(v) = eps(d1) v|d1^(-1)
            Mat2 d1 = md_.lift[x].mul(T).mul(md_.lift[x].inv_unimodular());
            if (d1.c % md_.M != 0) throw std::runtime_error("3-torsion: bad transport");
            torsion3_cosets_.push_back(x);
            torsion3_q_.push_back(
                {intern_matrix(d1.inv_unimodular()), eps_of_gamma(d1)});
            continue;
        }
        seen[x1] = 1;
        seen[x2] = 1;
        Triangle tri;
        Mat2 Tt{1, 0, 0, 1};
        std::array<long, 3> cos{x, x1, x2};
        for (long t = 0; t < 3; t++) {
            Mat2 delta = md_.lift[x].mul(Tt).mul(md_.lift[cos[t]].inv_unimodular());
            if (delta.c % md_.M != 0) throw std::runtime_error("triangle: bad transport");
            // term_t = eps(delta) V_{cos[t]} | delta^(-1)
            int sc = eps_of_gamma(delta);
            Mat2 m = delta.inv_unimodular();
            long c = cos[t];
            long e = edge_of_[c];
            if (edge_rep_[e] != c) {
                // V_c = -flip_eps * (W | flip_mat)
                sc = -sc * flip_eps_[c];
                m = mats_[flip_mat_[c]].mul(m);
            }
            if (!in_sigma0p(C_, m)) throw std::runtime_error("triangle: slot matrix");
            tri.slots.push_back({e, sc, intern_matrix(m), intern_matrix(m.inv_unimodular())});
            Tt = Tt.mul(T);
        }
        triangles_.push_back(std::move(tri));
    }
}

Dist SymbolSpace::edge_value_at(const OvSymbol& phi, long coset) const {
    long e = edge_of_[coset];
    long rep = edge_rep_[e];
    if (rep == coset) return phi.V[coset];
    Dist v = act(C_, matrix(flip_mat_[coset]), phi.V[rep]);
    v = dist_scale(C_, v, flip_eps_[coset] == 1 ? mpz_class(-1) : mpz_class(1));
    return v;
}

OvSymbol SymbolSpace::random_symbol(Rng& rng) const {
    long n = md_.size();
    auto random_dist = [&]() {
        Dist d(C_.nmom);
        for (long j = 0; j < C_.nmom; j++) {
            mpz_class v = 0;
            for (int t = 0; t < (C_.W / 18) + 1; t++)
                v = v * mpz_class(1L << 30) +
                    mpz_class((unsigned long)(rng.next() % (1L << 30)));
            d[j] = v % C_.pw;
        }
        return d;
    };

    long ne = (long)edge_rep_.size();
    std::vector<char> det(ne, 0);
    std::vector<Dist> W(ne);

    // torsion-2 edges: W = w + P(w)
    for (size_t i = 0; i < torsion2_edges_.size(); i++) {
        long e = torsion2_edges_[i];
        auto [mid, epsv] = torsion2_q_[i];
        Dist w = random_dist();
        Dist pw = act(C_, matrix(mid), w);
        pw = dist_scale(C_, pw, epsv == 1 ? mpz_class(-1) : mpz_class(1));
        W[e] = dist_add(C_, w, pw);
        det[e] = 1;
    }
    // torsion-3 cosets: V_x = w - Q(w), translated onto the edge rep
    for (size_t i = 0; i < torsion3_cosets_.size(); i++) {
        long x = torsion3_cosets_[i];
        auto [mid, epsv] = torsion3_q_[i];
        Dist w = random_dist();
        Dist qw = act(C_, matrix(mid), w);
        if (epsv == -1) qw = dist_neg(C_, qw);
        Dist vx = dist_sub(C_, w, qw);
        long e = edge_of_[x];
        long rep = edge_rep_[e];
        if (rep == x) {
            W[e] = vx;
        } else {
            // V_x = -flip_eps (W | flip), so W = -flip_eps (V_x | flip^(-1))
            Dist t = act(C_, weight_action_matrix(C_, mats_[flip_mat_[x]].inv_unimodular()), vx);
            if (flip_eps_[x] == 1) t = dist_neg(C_, t);
            W[e] = t;
        }
        det[e] = 1;
    }

    // spanning tree of the dual graph: triangles joined along shared
    // undetermined edges; each non-root triangle solves for its parent edge,
    // every other undetermined edge is free
    long ntri = (long)triangles_.size();
    // edge -> distinct triangles using it (and whether doubled inside one)
    std::vector<std::vector<long>> edge_tris(ne);
    for (long i = 0; i < ntri; i++) {
        for (auto& sl : triangles_[i].slots) {
            auto& v = edge_tris[sl.edge];
            if (v.empty() || v.back() != i) v.push_back(i);
        }
    }
    std::vector<long> parent_edge(ntri, -1);
    std::vector<char> visited(ntri, 0);
    std::vector<long> order; // BFS order
    for (long root = 0; root < ntri; root++) {
        if (visited[root]) continue;
        visited[root] = 1;
        order.push_back(root);
        std::vector<long> queue{root};
        for (size_t qi = 0; qi < queue.size(); qi++) {
            long cur = queue[qi];
            for (auto& sl : triangles_[cur].slots) {
                long e = sl.edge;
                if (det[e]) continue;
                for (long other : edge_tris[e]) {
                    if (visited[other] || other == cur) continue;
                    // e becomes 'other''s parent edge if still available
                    bool taken = false;
                    for (long t2 : order)
                        if (parent_edge[t2] == e) taken = true;
                    if (taken) continue;
                    // the slot for e in 'other' must reference e exactly once
                    long cnt = 0;
                    for (auto& s2 : triangles_[other].slots)
                        if (s2.edge == e) cnt++;
                    if (cnt != 1) continue;
                    visited[other] = 1;
                    parent_edge[other] = e;
                    order.push_back(other);
                    queue.push_back(other);
                }
            }
        }
    }
    // free edges: everything undetermined and not a parent edge
    std::vector<char> is_free(ne, 0);
    {
        std::vector<char> is_parent(ne, 0);
        for (long i = 0; i < ntri; i++)
            if (parent_edge[i] >= 0) is_parent[parent_edge[i]] = 1;
        for (long e = 0; e < ne; e++) {
            if (det[e]) continue;
            if (is_parent[e]) { det[e] = 1; continue; } // solved by the tree pass
            W[e] = random_dist();
            det[e] = 1;
            is_free[e] = 1;
        }
    }
    // solve pass in reverse BFS order (children before parents); linear in W
    auto run_solve = [&](std::vector<Dist>& vals) {
        for (long oi = (long)order.size() - 1; oi >= 0; oi--) {
            long i = order[oi];
            long pe = parent_edge[i];
            if (pe < 0) continue;
            const Triangle& tri = triangles_[i];
            long und_slot = -1;
            for (size_t s = 0; s < tri.slots.size(); s++)
                if (tri.slots[s].edge == pe) und_slot = (long)s;
            if (und_slot < 0) throw std::runtime_error("random_symbol: missing parent slot");
            Dist rest = dist_zero(C_);
            for (size_t s = 0; s < tri.slots.size(); s++) {
                if ((long)s == und_slot) continue;
                const TriSlot& sl = tri.slots[s];
                Dist v = act(C_, matrix(sl.mat), vals[sl.edge]);
                if (sl.scalar == 1) rest = dist_add(C_, rest, v);
                else rest = dist_sub(C_, rest, v);
            }
            const TriSlot& sl = tri.slots[und_slot];
            Dist w = act(C_, matrix(sl.mat_inv), rest);
            if (sl.scalar == 1) w = dist_neg(C_, w);
            vals[sl.edge] = std::move(w);
        }
    };
    auto residual_of = [&](const std::vector<Dist>& vals, long tri_idx) {
        Dist acc = dist_zero(C_);
        for (auto& sl : triangles_[tri_idx].slots) {
            Dist v = act(C_, matrix(sl.mat), vals[sl.edge]);
            if (sl.scalar == 1) acc = dist_add(C_, acc, v);
            else acc = dist_sub(C_, acc, v);
        }
        return acc;
    };
    run_solve(W);

    // Root relations are implied only on the total-measure graded piece; the
    // higher moments need a correction on a free edge, solved linearly
    // (the difference-equation step of the standard lifting algorithm).
    for (long oi = 0; oi < (long)order.size(); oi++) {
        long rt = order[oi];
        if (parent_edge[rt] >= 0) continue;
        Dist R = residual_of(W, rt);
        if (dist_filtration_defect(C_, R) >= C_.nmom) continue;
        long M = C_.nmom;
        // Correction columns L_g(e_j) pooled over free edges; greedily select
        // columns giving unit pivots at fresh rows, then solve exactly.
        // Graded pieces with a genuine dependency never produce a pivot; their
        // residual rows must come out clean on their own.
        long n = M;
        struct Col { long g, j; std::vector<mpz_class> v; };
        std::vector<Col> chosen;
        std::vector<long> pivot_row;
        std::vector<std::vector<mpz_class>> red; // reduced copies of chosen cols
        for (long g = 0; g < ne && (long)chosen.size() < n; g++) {
            if (!is_free[g]) continue;
            std::vector<Dist> corr(ne, dist_zero(C_));
            for (long j = 0; j < M && (long)chosen.size() < n; j++) {
                corr[g] = dist_zero(C_);
                corr[g][j] = 1;
                std::vector<Dist> field = corr;
                run_solve(field);
                Dist Rj = residual_of(field, rt);
                std::vector<mpz_class> col(n);
                for (long r = 0; r < n; r++) col[r] = Rj[r];
                // reduce against chosen pivots
                std::vector<mpz_class> work = col;
                for (size_t t = 0; t < chosen.size(); t++) {
                    long prow = pivot_row[t];
                    mpz_class f = work[prow]; // red[t][prow] == 1
                    if (f == 0) continue;
                    for (long r = 0; r < n; r++) {
                        work[r] = (work[r] - f * red[t][r]) % C_.pw;
                        if (work[r] < 0) work[r] += C_.pw;
                    }
                }
                long prow = -1;
                for (long r = 0; r < n; r++) {
                    bool used = false;
                    for (long u : pivot_row)
                        if (u == r) used = true;
                    if (!used && work[r] % C_.p != 0) { prow = r; break; }
                }
                if (prow < 0) continue;
                // normalize the reduced column to have 1 at prow
                mpz_class inv = inv_mod(work[prow], C_.pw);
                for (long r = 0; r < n; r++) work[r] = work[r] * inv % C_.pw;
                // clear prow from previously reduced columns
                for (size_t t = 0; t < red.size(); t++) {
                    mpz_class f = red[t][prow];
                    if (f == 0) continue;
                    for (long r = 0; r < n; r++) {
                        red[t][r] = (red[t][r] - f * work[r]) % C_.pw;
                        if (red[t][r] < 0) red[t][r] += C_.pw;
                    }
                }
                chosen.push_back({g, j, col});
                pivot_row.push_back(prow);
                red.push_back(work);
            }
        }
        bool repaired = false;
        {
            long s = (long)chosen.size();
            // solve sum_t c_t * chosen[t].v = -R on the pivoted rows
            std::vector<std::vector<mpz_class>> A(n, std::vector<mpz_class>(s + 1));
            for (long r = 0; r < n; r++) {
                for (long t = 0; t < s; t++) A[r][t] = chosen[t].v[r];
                A[r][s] = R[r] == 0 ? mpz_class(0) : C_.pw - R[r];
            }
            bool ok = s > 0;
            for (long t = 0; t < s && ok; t++) {
                long pr = pivot_row[t];
                if (A[pr][t] % C_.p == 0) { ok = false; break; }
                mpz_class inv = inv_mod(A[pr][t], C_.pw);
                for (long c2 = 0; c2 <= s; c2++) A[pr][c2] = A[pr][c2] * inv % C_.pw;
                for (long r = 0; r < n; r++) {
                    if (r == pr || A[r][t] == 0) continue;
                    mpz_class f = A[r][t];
                    for (long c2 = 0; c2 <= s; c2++) {
                        A[r][c2] = (A[r][c2] - f * A[pr][c2]) % C_.pw;
                        if (A[r][c2] < 0) A[r][c2] += C_.pw;
                    }
                }
            }
            if (ok) {
                for (long t = 0; t < s; t++) {
                    mpz_class c = A[pivot_row[t]][s];
                    if (c == 0) continue;
                    Dist nu = dist_zero(C_);
                    nu[chosen[t].j] = c;
                    W[chosen[t].g] = dist_add(C_, W[chosen[t].g], nu);
                }
                run_solve(W);
                Dist R2 = residual_of(W, rt);
                if (dist_filtration_defect(C_, R2) >= C_.nmom) repaired = true;
            }
        }
        if (!repaired)
            throw std::runtime_error("random_symbol: root relation repair failed");
    }

    // assemble per-coset values
    OvSymbol phi = zero_symbol();
    for (long e = 0; e < ne; e++) phi.V[edge_rep_[e]] = W[e];
    for (long x = 0; x < n; x++) {
        long e = edge_of_[x];
        if (edge_rep_[e] == x) continue;
        phi.V[x] = edge_value_at(phi, x);
    }
    return phi;
}

long SymbolSpace::verify_relations(const OvSymbol& phi) const {
    long best = C_.nmom + C_.W;
    // triangles
    for (auto& tri : triangles_) {
        Dist acc = dist_zero(C_);
        for (auto& sl : tri.slots) {
            Dist v = act(C_, matrix(sl.mat), phi.V[edge_rep_[sl.edge]]);
            if (sl.scalar == 1) acc = dist_add(C_, acc, v);
            else acc = dist_sub(C_, acc, v);
        }
        best = std::min(best, dist_filtration_defect(C_, acc));
    }
    // torsion-2 constraints
    for (size_t i = 0; i < torsion2_edges_.size(); i++) {
        long e = torsion2_edges_[i];
        auto [mid, epsv] = torsion2_q_[i];
        Dist pv = act(C_, matrix(mid), phi.V[edge_rep_[e]]);
        pv = dist_scale(C_, pv, epsv == 1 ? mpz_class(-1) : mpz_class(1));
        Dist diff = dist_sub(C_, phi.V[edge_rep_[e]], pv);
        best = std::min(best, dist_filtration_defect(C_, diff));
    }
    // torsion-3 constraints
    for (size_t i = 0; i < torsion3_cosets_.size(); i++) {
        long x = torsion3_cosets_[i];
        auto [mid, epsv] = torsion3_q_[i];
        Dist v = phi.V[x];
        Dist qv = act(C_, matrix(mid), v);
        if (epsv == -1) qv = dist_neg(C_, qv);
        Dist q2v = act(C_, matrix(mid), qv);
        if (epsv == -1) q2v = dist_neg(C_, q2v);
        Dist acc = dist_add(C_, v, dist_add(C_, qv, q2v));
        best = std::min(best, dist_filtration_defect(C_, acc));
    }
    // S-flips are identities by construction; spot-check a few anyway
    for (long x = 0; x < md_.size(); x += std::max<long>(1, md_.size() / 16)) {
        Dist v = edge_value_at(phi, x);
        Dist diff = dist_sub(C_, v, phi.V[x]);
        best = std::min(best, dist_filtration_defect(C_, diff));
    }
    return best;
}

Dist SymbolSpace::evaluate(const OvSymbol& phi, const Cusp& r, const Cusp& s) const {
    Dist acc = dist_zero(C_);
    for (auto& [h, sign] : divisor_paths(r, s)) {
        long y = md_.index_of_matrix(h);
        Mat2 delta = h.mul(md_.lift[y].inv_unimodular());
        if (delta.c % md_.M != 0 || delta.det() != 1)
            throw std::runtime_error("evaluate: transport not in Gamma_0(M)");
        Dist v = act_matrix(C_, delta.inv_unimodular(), phi.V[y]);
        int sc = sign * eps_of_gamma(delta);
        if (sc == 1) acc = dist_add(C_, acc, v);
        else acc = dist_sub(C_, acc, v);
    }
    return acc;
}

OvSymbol SymbolSpace::apply_up(const OvSymbol& phi) const { return apply_plan(up_plan_, phi); }

OvSymbol SymbolSpace::apply_tl(const OvSymbol& phi, long ell) const {
    return apply_plan(tl_plan(ell), phi);
}

OvSymbol SymbolSpace::apply_iota(const OvSymbol& phi) const {
    return apply_plan(iota_plan_, phi);
}

OvSymbol SymbolSpace::minus_projection(const OvSymbol& phi) const {
    OvSymbol m = sub(phi, apply_iota(phi));
    return scale(m, inv_mod(2, C_.pw));
}

std::vector<std::vector<mpz_class>> SymbolSpace::specialize(const OvSymbol& phi,
                                                            long k) const {
    if (k < 0) throw std::invalid_argument("specialize: k >= 0 required");
    if (k >= C_.nmom) throw std::invalid_argument("specialize: not enough moments");
    std::vector<std::vector<mpz_class>> out(md_.size());
    for (long x = 0; x < md_.size(); x++) {
        std::vector<mpz_class> c(k + 1);
        for (long j = 0; j <= k; j++) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), (unsigned long)k, (unsigned long)j);
            mpz_class v = b * phi.V[x][j] % C_.pw;
            if (j % 2 == 1) v = v == 0 ? v : C_.pw - v;
            c[j] = v;
        }
        out[x] = std::move(c);
    }
    return out;
}

std::vector<mpz_class> SymbolSpace::apply_up_weight0(
    const std::vector<mpz_class>& vals) const {
    std::vector<mpz_class> out(md_.size(), 0);
    for (long x = 0; x < md_.size(); x++) {
        mpz_class acc = 0;
        for (auto& t : up_plan_[x]) {
            if (t.scalar == 1) acc += vals[t.y];
            else acc -= t.scalar == -1 ? vals[t.y] : -mpz_class(t.scalar) * vals[t.y];
        }
        mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), C_.pw.get_mpz_t());
        out[x] = acc;
    }
    return out;
}

long SymbolSpace::eigen_defect_up(const OvSymbol& phi, const mpz_class& lambda) const {
    OvSymbol d = sub(apply_up(phi), scale(phi, lambda));
    long best = C_.nmom + C_.W;
    for (auto& v : d.V) best = std::min(best, dist_filtration_defect(C_, v));
    return best;
}

long SymbolSpace::eigen_defect_tl(const OvSymbol& phi, long ell,
                                  const mpz_class& lambda) const {
    OvSymbol d = sub(apply_tl(phi, ell), scale(phi, lambda));
    long best = C_.nmom + C_.W;
    for (auto& v : d.V) best = std::min(best, dist_filtration_defect(C_, v));
    return best;
}

// ---- eigensymbol extraction ----

namespace {

// determinant by fraction-free elimination
mpz_class det_mpz(std::vector<std::vector<mpz_class>> m) {
    long n = (long)m.size();
    mpz_class det = 1;
    int sign = 1;
    mpz_class prev = 1;
    for (long k = 0; k < n - 1; k++) {
        if (m[k][k] == 0) {
            long sw = -1;
            for (long i = k + 1; i < n; i++)
                if (m[i][k] != 0) { sw = i; break; }
            if (sw < 0) return 0;
            std::swap(m[k], m[sw]);
            sign = -sign;
        }
        for (long i = k + 1; i < n; i++)
            for (long j = k + 1; j < n; j++) {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

} // namespace

namespace {
inline mpz_class K_sign_fix(const mpz_class& md, const mpz_class& v) {
    if (v == 0) return 0;
    return v % md; // dependency coefficient as stored
}
} // namespace

EigenResult ordinary_eigensymbol(const SymbolSpace& S, const EigenformData& f,
                                 uint64_t seed, const EigenOptions& opt) {
    const DistCtx& C = S.ctx();
    Rng rng(seed);
    OvSymbol w = S.random_symbol(rng);
    long rel0 = S.verify_relations(w);
    if (rel0 < C.nmom)
        throw std::runtime_error("ordinary_eigensymbol: random symbol violates relations");
    w = S.minus_projection(w);

    long B = C.nmom + opt.extra_iters;
    EigenResult res;

    std::vector<long> ells;
    for (auto& [ell, a] : f.a_ell) ells.push_back(ell);
    if (ells.empty()) throw std::invalid_argument("ordinary_eigensymbol: no T_ell data");

    long J0 = std::min<long>(2, C.nmom);
    bool dbg = getenv("PSTARK_DEBUG_EIGEN") != nullptr;

    long sym_defect_cap = C.nmom + C.W;
    auto sym_defect = [&](const OvSymbol& v) {
        long best = sym_defect_cap;
        for (auto& vv : v.V) best = std::min(best, dist_filtration_defect(C, vv));
        return best;
    };

    // coefficients expressing K[d] through K[0..d-1] at filtration precision,
    // or nothing if independent
    auto try_express = [&](const std::vector<OvSymbol>& K, long d)
        -> std::optional<std::vector<mpz_class>> {
        std::vector<long> pivots;
        std::vector<std::vector<mpz_class>> prows;
        std::vector<long> pprec;
        long cols = d + 1; // augmented with K[d]
        auto feed = [&](std::vector<mpz_class> row, long prec) {
            for (size_t t = 0; t < pivots.size(); t++) {
                mpz_class fa = row[pivots[t]];
                if (fa == 0) continue;
                prec = std::min(prec, pprec[t]);
                mpz_class md = pow_mpz(C.p, (unsigned long)prec);
                for (long c2 = 0; c2 < cols; c2++) {
                    row[c2] = (row[c2] - fa * prows[t][c2]) % md;
                    if (row[c2] < 0) row[c2] += md;
                }
            }
            long vmin = prec;
            for (long c2 = 0; c2 < cols; c2++) {
                if (row[c2] == 0) continue;
                vmin = std::min(vmin, vp_mpz(row[c2], C.p, prec));
            }
            prec -= vmin;
            if (prec <= opt.guard) return;
            if (vmin > 0) {
                mpz_class pv = pow_mpz(C.p, (unsigned long)vmin);
                mpz_class md = pow_mpz(C.p, (unsigned long)prec);
                for (long c2 = 0; c2 < cols; c2++) {
                    row[c2] /= pv;
                    row[c2] %= md;
                }
            }
            long pc = -1;
            for (long c2 = 0; c2 < cols; c2++)
                if (row[c2] % C.p != 0) { pc = c2; break; }
            if (pc < 0) return;
            mpz_class md = pow_mpz(C.p, (unsigned long)prec);
            mpz_class inv = inv_mod(row[pc], md);
            for (long c2 = 0; c2 < cols; c2++) row[c2] = row[c2] * inv % md;
            for (size_t t = 0; t < prows.size(); t++) {
                mpz_class fa = prows[t][pc];
                if (fa == 0) continue;
                long np = std::min(pprec[t], prec);
                mpz_class md2 = pow_mpz(C.p, (unsigned long)np);
                for (long c2 = 0; c2 < cols; c2++) {
                    prows[t][c2] = (prows[t][c2] - fa * row[c2]) % md2;
                    if (prows[t][c2] < 0) prows[t][c2] += md2;
                }
                pprec[t] = np;
            }
            pivots.push_back(pc);
            prows.push_back(std::move(row));
            pprec.push_back(prec);
        };
        for (long j = 0; j < J0; j++) {
            long prec = std::min(C.nmom - j, C.W);
            mpz_class md = pow_mpz(C.p, (unsigned long)prec);
            for (long x = 0; x < S.ncosets(); x++) {
                std::vector<mpz_class> row(cols);
                bool nz = false;
                for (long t = 0; t < cols; t++) {
                    mpz_class v = K[t].V[x][j] % md;
                    if (v < 0) v += md;
                    row[t] = v;
                    if (v != 0) nz = true;
                }
                if (nz) feed(std::move(row), prec);
            }
        }
        // consistent iff no pivot in the augmented column and all d columns pivoted
        std::vector<mpz_class> c(d, 0);
        std::vector<char> seen(d, 0);
        for (size_t t = 0; t < pivots.size(); t++) {
            if (pivots[t] == d) return std::nullopt; // K[d] independent
            mpz_class md = pow_mpz(C.p, (unsigned long)pprec[t]);
            c[pivots[t]] = K_sign_fix(md, prows[t][d]);
            seen[pivots[t]] = 1;
        }
        for (long i = 0; i < d; i++)
            if (!seen[i]) c[i] = 0; // column never seen: coefficient 0
        // verify the dependency at filtration precision
        OvSymbol acc = K[d];
        for (long i = 0; i < d; i++) {
            if (c[i] == 0) continue;
            acc = S.sub(acc, S.scale(K[i], c[i]));
        }
        if (sym_defect(acc) < C.nmom - opt.guard) return std::nullopt;
        return c;
    };

    // divide out (x - lambda) from the minimal polynomial of `op` on the cyclic
    // span of `start` and evaluate on the family; then finish with (op-lambda)
    // passes while the result is not yet an eigenvector
    auto minpoly_cut = [&](const OvSymbol& start, auto&& op, const mpz_class& lambda,
                           long dmax) -> std::optional<OvSymbol> {
        std::vector<OvSymbol> K{start};
        std::optional<std::vector<mpz_class>> dep;
        for (long d = 1; d <= dmax; d++) {
            K.push_back(op(K.back()));
            dep = try_express(K, d);
            if (dep) break;
        }
        if (!dep) return std::nullopt;
        long d = (long)dep->size();
        // m(x) = x^d - sum c_i x^i ; q(x) = m(x) / (x - lambda) by synthetic division
        std::vector<mpz_class> m(d + 1);
        m[d] = 1;
        for (long i = 0; i < d; i++) {
            mpz_class v = -(*dep)[i] % C.pw;
            if (v < 0) v += C.pw;
            m[i] = v;
        }
        std::vector<mpz_class> q(d, 0);
        mpz_class carry = 0;
        for (long i = d; i >= 1; i--) {
            q[i - 1] = (m[i] + carry) % C.pw;
            carry = q[i - 1] * lambda % C.pw;
        }
        OvSymbol v = S.zero_symbol();
        for (long i = 0; i < d; i++) {
            if (q[i] == 0) continue;
            v = S.add(v, S.scale(K[i], q[i]));
        }
        // collapse a generalized eigenvector to an eigenvector if needed
        for (long it = 0; it <= d; it++) {
            if (sym_defect(v) >= C.nmom - opt.guard) return std::nullopt; // vanished
            OvSymbol dv = S.sub(op(v), S.scale(v, lambda));
            if (sym_defect(dv) >= C.nmom - opt.guard) return v;
            v = dv;
        }
        return std::nullopt;
    };

    auto extract_at = [&](const OvSymbol& base) -> std::optional<OvSymbol> {
        auto apply_u = [&](const OvSymbol& a) { return S.apply_up(a); };
        auto v = minpoly_cut(base, apply_u, f.alpha, opt.krylov);
        if (!v) return std::nullopt;
        for (long ell : ells) {
            auto apply_t = [&](const OvSymbol& a) { return S.apply_tl(a, ell); };
            v = minpoly_cut(*v, apply_t, f.a_ell.at(ell), opt.krylov);
            if (!v) return std::nullopt;
        }
        return v;
    };

    // U_p contraction with checkpointed defects
    long ckp = std::max<long>(opt.checkpoints, 1);
    long step = std::max<long>(B / ckp, 1);
    long itdone = 0;
    for (long c = 0; c < ckp; c++) {
        long upto = (c == ckp - 1) ? B : std::min(B, (c + 1) * step);
        for (; itdone < upto; itdone++) w = S.apply_up(w);
        if (c + 1 < ckp) {
            auto v = extract_at(w);
            res.checkpoint_defects.push_back(v ? S.eigen_defect_up(*v, f.alpha) : 0);
        }
    }

    auto got = extract_at(w);
    if (got) {
        bool ok = S.eigen_defect_up(*got, f.alpha) >= C.nmom - opt.guard;
        for (auto& [ell, a] : f.a_ell)
            ok = ok && S.eigen_defect_tl(*got, ell, a) >= C.nmom - opt.guard;
        if (dbg)
            fprintf(stderr, "[eigen] final candidate: up=%ld ok=%d\n",
                    S.eigen_defect_up(*got, f.alpha), (int)ok);
        if (!ok) got.reset();
    }
    if (!got)
        throw std::runtime_error(
            "ordinary_eigensymbol: eigensystem not found at this level");
    res.phi = *got;
    res.up_defect = S.eigen_defect_up(res.phi, f.alpha);
    for (auto& [ell, a] : f.a_ell) res.tl_defect[ell] = S.eigen_defect_tl(res.phi, ell, a);
    res.relation_defect = S.verify_relations(res.phi);
    res.checkpoint_defects.push_back(res.up_defect);
    for (size_t i = 1; i < res.checkpoint_defects.size(); i++)
        if (res.checkpoint_defects[i] + 2 < res.checkpoint_defects[i - 1])
            throw std::runtime_error("ordinary_eigensymbol: contraction regressed");
    return res;
}

} // namespace pstark
