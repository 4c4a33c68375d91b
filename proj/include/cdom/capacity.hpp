#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cdom/numeric.hpp"
#include "cdom/params.hpp"
#include "cdom/scene.hpp"

namespace cdom {

// cap([c,d]) = (d - c)/4.
inline NumericValue interval_capacity(const NumericValue& c, const NumericValue& d) {
    if (nv_compare(c, d) >= 0) throw numeric_error("interval_capacity: needs c < d");
    return nv_div(nv_sub(d, c), NumericValue::rational(4));
}

// Per-level census of the gaps removed from the vertical unit segments.
struct CensusLevel {
    int k = 1;
    std::vector<Interval> intervals;  // explicit only at level 1
    bool count_exact = true;
    mpz_class count = 0;
    NumericValue count_value;  // log-scale when not exact
    Scalar length;             // common gap length delta_k
    bool count_bound_ok = true;  // count <= 2 N_k^k
};

struct Census {
    std::vector<CensusLevel> levels;
};

// Level 1 removes three gaps of length a_1 from each unit segment: the
// inter-block gap and the two mid-row gaps. Level k >= 2 removes
// 2(N_k - 1) gaps of length delta_k from each of the prod_{j<k} N_j images,
// giving #_k = 2 (N_k - 1) prod_{j<k} N_j <= 2 N_k^k.
inline Census removed_intervals(const std::vector<LevelParams>& params, int k_max) {
    if (k_max < 1 || k_max > static_cast<int>(params.size()))
        throw numeric_error("removed_intervals: level out of range");
    Census cen;
    for (int k = 1; k <= k_max; ++k) {
        const LevelParams& p = params[k - 1];
        CensusLevel lev;
        lev.k = k;
        lev.length = p.delta;
        if (k == 1) {
            NumericValue s = p.s.val(), a = p.a.val();
            NumericValue half_a = nv_div(a, NumericValue::rational(2));
            NumericValue one = NumericValue::rational(1);
            lev.intervals = {
                {nv_sub(s, half_a), nv_add(s, half_a)},
                {nv_mul(NumericValue::rational(2), s),
                 nv_add(nv_mul(NumericValue::rational(2), s), a)},
                {nv_sub(nv_sub(one, s), half_a), nv_add(nv_sub(one, s), half_a)}};
            lev.count = 3;
            lev.count_value = NumericValue::rational(3);
            lev.count_bound_ok = true;  // 3 <= 2 N_1 = 4
        } else {
            LogForm ln_count{M_LN2, 0, 0, false};  // ln 2
            bool exact = true;
            mpz_class prod = 1;
            for (int j = 1; j < k; ++j) {
                exact = exact && params[j - 1].n_exact;
                if (params[j - 1].n_exact) prod *= params[j - 1].N;
                ln_count = lf_add(ln_count, params[j - 1].log_N);
            }
            if (p.n_exact && exact) {
                lev.count = 2 * (p.N - 1) * prod;
                lev.count_value = NumericValue::rational(lev.count);
                mpz_class bound;
                mpz_pow_ui(bound.get_mpz_t(), p.N.get_mpz_t(), k);
                lev.count_bound_ok = lev.count <= 2 * bound;
            } else {
                lev.count_exact = false;
                // N_k - 1 ~ N_k up to a relatively negligible correction.
                ln_count = lf_add(ln_count, p.log_N);
                ln_count.absorbed = true;
                if (!lf_shallow(ln_count))
                    throw numeric_error("removed_intervals: count log exceeds binary64");
                lev.count_value = NumericValue::log_scale(
                    Sign::plus, ln_count.c0 + ln_count.c2 * p.x2_basis, true);
                // ln #_k vs ln(2 N_k^k): compare k*log_N against the product form.
                LogForm rhs = p.log_N;
                for (int j = 1; j < k; ++j) rhs = lf_add(rhs, p.log_N);
                LogForm lhs = LogForm{0, 0, 0, false};
                for (int j = 1; j < k; ++j) lhs = lf_add(lhs, params[j - 1].log_N);
                lhs = lf_add(lhs, p.log_N);
                lev.count_bound_ok = lf_compare(lhs, rhs) <= 0;
            }
        }
        cen.levels.push_back(std::move(lev));
    }
    return cen;
}

namespace detail {

// ln(delta / cap) as a (possibly log-scale) positive value, where
// ln cap is given as a linear form. ln_x3 is ln of the level-3 basis.
inline NumericValue ln_delta_over_cap(const LogForm& lncap, double x2, double ln_x3,
                                      const NumericValue& delta) {
    double ln_delta = delta.ln_abs();
    if (lf_shallow(lncap)) {
        double L = ln_delta - (lncap.c0 + lncap.c2 * x2);
        if (L <= 0) throw numeric_error("ln_delta_over_cap: piece capacity >= delta");
        return NumericValue::log_scale(Sign::plus, std::log(L), lncap.absorbed);
    }
    if (lncap.c3 >= 0) throw numeric_error("ln_delta_over_cap: expected a tiny capacity");
    // ln(delta) - lncap ~ |c3| X3; lower-order terms are relatively exp(-huge).
    return NumericValue::log_scale(Sign::plus, std::log(-lncap.c3) + ln_x3, true);
}

}  // namespace detail

// Union bound via 1/ln(delta/cap(union)) <= sum_l count_l / ln(delta/cap_l):
// returns delta * exp(-1/S). Natural logs throughout.
inline NumericValue subadditive_capacity_bound(const std::vector<Interval>& pieces,
                                               const NumericValue& delta) {
    if (pieces.empty()) throw numeric_error("subadditive_capacity_bound: empty family");
    double ln_delta = delta.ln_abs();
    double S = 0.0;
    for (const auto& iv : pieces) {
        NumericValue cap = interval_capacity(iv.lo, iv.hi);
        double L = ln_delta - cap.ln_abs();
        if (L <= 0)
            throw numeric_error("subadditive_capacity_bound: piece diameter not below delta");
        S += 1.0 / L;
    }
    return NumericValue::log_scale(Sign::plus, ln_delta - 1.0 / S);
}

struct CapacitySeries {
    NumericValue S;                    // truncated sum
    NumericValue tail;                 // rigorous bound on the dropped terms
    NumericValue bound;                // delta * exp(-1/S), delta = 2
    bool verdict = false;              // bound < cap([0,1]) = 1/4
    std::vector<NumericValue> terms;   // per level
};

enum class SeriesMode { formula, actual };

// Series bound on cap([0,1] minus the inner Cantor factor), truncated at k_max.
// formula: term_k = 2 N_k^k / (ln 8 + (2 N_k)^{2k}), the idealized gap lengths
// exp(-(2N_k)^{2k}); actual: the true census counts and gap lengths in the
// union bound with delta = 2. Note the level-1 idealized length differs from
// the true delta_1 = a_1; both evaluations are offered.
inline CapacitySeries jinta_sum(const std::vector<LevelParams>& params, int k_max,
                                SeriesMode mode) {
    if (k_max < 1 || k_max > static_cast<int>(params.size()))
        throw numeric_error("jinta_sum: level out of range");
    CapacitySeries out;
    NumericValue S = NumericValue::rational(0);
    const double ln8 = std::log(8.0);
    double x2 = 0.0, ln_x3 = 0.0;
    for (const auto& p : params) {
        if (p.x2_basis != 0.0) x2 = p.x2_basis;
        if (p.k == 3) ln_x3 = p.ln_X;
    }

    auto formula_term = [&](const LevelParams& p) {
        // ln term = ln 2 + k ln N_k - ln(ln 8 + X_k)
        double lnN = lf_shallow(p.log_N) ? (p.log_N.c0 + p.log_N.c2 * x2)
                                         : throw numeric_error("jinta_sum: N log out of range");
        double ln_den;
        if (p.k == 1)
            ln_den = std::log(ln8 + 16.0);
        else if (p.x_exact)
            ln_den = std::log(ln8 + mpz_get_d(p.X.get_mpz_t()));
        else
            ln_den = p.ln_X;  // ln 8 is relatively negligible
        return NumericValue::log_scale(Sign::plus, M_LN2 + p.k * lnN - ln_den, p.k >= 3);
    };

    if (mode == SeriesMode::formula) {
        for (int k = 1; k <= k_max; ++k) {
            NumericValue term = formula_term(params[k - 1]);
            out.terms.push_back(term);
            S = nv_add(S.promoted(), term);
        }
        // Terms decay super-geometrically: tail <= 2 * term_{k_max+1} when the
        // next level is in numeric range, else <= the last computed term.
        if (k_max < static_cast<int>(params.size())) {
            out.tail = nv_mul(NumericValue::rational(2), formula_term(params[k_max]));
        } else {
            bool extended = false;
            try {
                LevelParams nxt = next_params(params[k_max - 1]);
                if (nxt.k == 3) ln_x3 = nxt.ln_X;
                out.tail = nv_mul(NumericValue::rational(2), formula_term(nxt));
                extended = true;
            } catch (const numeric_error&) {
            }
            if (!extended) out.tail = out.terms.back();
        }
    } else {
        Census cen = removed_intervals(params, k_max);
        NumericValue delta = NumericValue::rational(2);
        for (const CensusLevel& lev : cen.levels) {
            NumericValue term;
            if (!lev.intervals.empty()) {
                double Ssub = 0.0;
                for (const auto& iv : lev.intervals) {
                    NumericValue cap = interval_capacity(iv.lo, iv.hi);
                    Ssub += 1.0 / (delta.ln_abs() - cap.ln_abs());
                }
                term = NumericValue::log_scale(Sign::plus, std::log(Ssub));
            } else {
                LogForm lncap = lf_shift(lev.length.ln, -std::log(4.0));
                NumericValue L = detail::ln_delta_over_cap(lncap, x2, ln_x3, delta);
                term = nv_div(lev.count_value, L);
            }
            out.terms.push_back(term);
            S = nv_add(S.promoted(), term);
        }
        out.tail = NumericValue::rational(0);
    }

    out.S = S;
    double s_d = std::exp(S.ln_abs());
    double tail_d = out.tail.sign() == Sign::zero
                        ? 0.0
                        : (out.tail.ln_abs() < -700 ? 0.0 : std::exp(out.tail.ln_abs()));
    out.bound = NumericValue::log_scale(Sign::plus, M_LN2 - 1.0 / (s_d + tail_d));
    out.verdict = nv_less(out.bound, NumericValue::rational(1, 4));
    return out;
}

// Independent numerical oracle: equilibrium measure on a midpoint
// discretization, constant-potential linear system, cap = exp(-Robin const).
inline double equilibrium_capacity(const std::vector<Interval>& set, int n) {
    if (set.empty()) throw numeric_error("equilibrium_capacity: empty set");
    if (n < 64) throw numeric_error("equilibrium_capacity: need n >= 64 nodes");
    struct Piece {
        double lo, len;
        int cells;
    };
    std::vector<Piece> pieces;
    double total = 0.0;
    for (const auto& iv : set) {
        double lo = iv.lo.to_double(), hi = iv.hi.to_double();
        if (!(hi > lo)) throw numeric_error("equilibrium_capacity: degenerate interval");
        pieces.push_back({lo, hi - lo, 0});
        total += hi - lo;
    }
    int assigned = 0;
    for (auto& p : pieces) {
        p.cells = std::max(2, static_cast<int>(std::lround(n * p.len / total)));
        assigned += p.cells;
    }
    pieces.back().cells += n - assigned;  // deterministic rebalance
    if (pieces.back().cells < 2) pieces.back().cells = 2;

    std::vector<double> x, h;
    for (const auto& p : pieces) {
        double step = p.len / p.cells;
        for (int i = 0; i < p.cells; ++i) {
            x.push_back(p.lo + (i + 0.5) * step);
            h.push_back(step);
        }
    }
    const int m = static_cast<int>(x.size());
    // Solve K v = 1; the equilibrium weights are w = v/(1^T v) and the Robin
    // constant is gamma = 1/(1^T v), so cap = exp(-1/(1^T v)).
    Eigen::MatrixXd K(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            // cell-averaged log kernel: exact self-energy 3/2 - ln h on the diagonal
            K(i, j) = (i == j) ? (1.5 - std::log(h[i])) : -std::log(std::abs(x[i] - x[j]));
    Eigen::VectorXd v = K.partialPivLu().solve(Eigen::VectorXd::Ones(m));
    double inv_gamma = v.sum();
    if (!std::isfinite(inv_gamma) || inv_gamma <= 0)
        throw numeric_error("equilibrium_capacity: singular system");
    return std::exp(-1.0 / inv_gamma);
}

}  // namespace cdom
