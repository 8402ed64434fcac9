#pragma once

#include "pstark/distribution.hpp"
#include "pstark/hecke_data.hpp"
#include "pstark/manin.hpp"
#include "pstark/rng.hpp"

#include <map>
#include <optional>

namespace pstark {

// a distribution-valued modular symbol, stored as its values on the divisors
// gamma_x({0} - {infty}) for every coset x
struct OvSymbol {
    std::vector<Dist> V;
};

class SymbolSpace {
public:
    SymbolSpace(ManinData md, DistCtx ctx, std::vector<int> eps_mod_N, long threads = 1);

    const ManinData& manin() const { return md_; }
    const DistCtx& ctx() const { return C_; }
    long ncosets() const { return md_.size(); }
    void set_threads(long t) { threads_ = t < 1 ? 1 : t; }

    int eps_of_gamma(const Mat2& delta) const;

    OvSymbol zero_symbol() const;
    OvSymbol add(const OvSymbol& a, const OvSymbol& b) const;
    OvSymbol sub(const OvSymbol& a, const OvSymbol& b) const;
    OvSymbol scale(const OvSymbol& a, const mpz_class& s) const;
    bool is_zero(const OvSymbol& a) const;

    // random symbol satisfying every Manin relation to filtration precision
    OvSymbol random_symbol(Rng& rng) const;
    // min filtration defect over all two/three-term relations (>= nmom when clean)
    long verify_relations(const OvSymbol& phi) const;

    // evaluation at an arbitrary degree-zero divisor {r} - {s}
    Dist evaluate(const OvSymbol& phi, const Cusp& r, const Cusp& s) const;

    OvSymbol apply_up(const OvSymbol& phi) const;
    OvSymbol apply_tl(const OvSymbol& phi, long ell) const;
    OvSymbol apply_iota(const OvSymbol& phi) const;
    OvSymbol minus_projection(const OvSymbol& phi) const;

    // rho_k: coefficients of int (Y - zX)^k dmu per coset, k >= 0
    std::vector<std::vector<mpz_class>> specialize(const OvSymbol& phi, long k) const;
    // classical V_0 Hecke application on specialized data (for equivariance tests)
    std::vector<mpz_class> apply_up_weight0(const std::vector<mpz_class>& vals) const;

    // filtration defect of (op - lambda) phi
    long eigen_defect_up(const OvSymbol& phi, const mpz_class& lambda) const;
    long eigen_defect_tl(const OvSymbol& phi, long ell, const mpz_class& lambda) const;

private:
    ManinData md_;
    DistCtx C_;
    std::vector<int> eps_;
    long threads_;

    struct PlanTerm {
        long y;
        int scalar;
        long mat;
    };
    using Plan = std::vector<std::vector<PlanTerm>>;

    std::vector<Mat2> mats_;
    std::vector<std::optional<ActionMatrix>> mat_cache_;
    std::map<std::array<std::string, 4>, long> mat_index_;
    Plan up_plan_;
    mutable std::map<long, Plan> tl_plans_;
    Plan iota_plan_;

    // relation structure
    std::vector<long> edge_of_;   // coset -> edge id
    std::vector<long> edge_rep_;  // edge id -> representative coset
    std::vector<long> flip_mat_;  // coset != rep: mat id of delta with
                                  // V_x = -eps(delta) * (W_rep | delta)
    std::vector<int> flip_eps_;
    struct TriSlot {
        long edge;
        int scalar;
        long mat;     // term = scalar * (W_edge | mat)
        long mat_inv; // inverse transport for solving
    };
    struct Triangle {
        std::vector<TriSlot> slots;
    };
    std::vector<Triangle> triangles_;
    std::vector<long> torsion2_edges_;              // self-paired edges
    std::vector<std::pair<long, long>> torsion2_q_; // (mat id, eps) of P
    std::vector<long> torsion3_cosets_;
    std::vector<std::pair<long, long>> torsion3_q_;

    long intern_matrix(const Mat2& g);
    const ActionMatrix& matrix(long id) const;
    Plan build_plan(const std::vector<std::pair<Mat2, int>>& ops);
    const Plan& tl_plan(long ell) const;
    OvSymbol apply_plan(const Plan& plan, const OvSymbol& phi) const;
    void build_relations();
    Dist edge_value_at(const OvSymbol& phi, long coset) const;
};

struct EigenOptions {
    long krylov = 8;
    long extra_iters = 10;
    long checkpoints = 3;
    long guard = 4;
};

struct EigenResult {
    OvSymbol phi;
    long up_defect = 0;
    std::map<long, long> tl_defect;
    long relation_defect = 0;
    std::vector<long> checkpoint_defects;
};

// random lift -> minus projection -> U_p ordinary projection -> simultaneous
// eigenproblem for (alpha, a_ell) by linear algebra mod p^W
EigenResult ordinary_eigensymbol(const SymbolSpace& S, const EigenformData& f,
                                 uint64_t seed, const EigenOptions& opt = {});

} // namespace pstark
