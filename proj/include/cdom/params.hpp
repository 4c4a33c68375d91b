#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdom/numeric.hpp"
#include "cdom/report.hpp"

namespace cdom {

// Natural logs of deep-level scalars as linear forms
//
//     ln q = c0 + c2*X2 + c3*X3,
//
// where X2 = (2 N_2)^4 (about 2.55e30, held as a double) and X3 = (2 N_3)^6,
// whose own natural log is about 1.5e31. Cross-level comparisons such as
// r_3 <= delta_2/100 differ only in c0 while sharing the same huge c2 term;
// a flat binary64 log cannot resolve them, the linear form can.
struct LogForm {
    double c0 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    bool absorbed = false;
};

inline LogForm lf_add(const LogForm& a, const LogForm& b) {
    return {a.c0 + b.c0, a.c2 + b.c2, a.c3 + b.c3, a.absorbed || b.absorbed};
}
inline LogForm lf_sub(const LogForm& a, const LogForm& b) {
    return {a.c0 - b.c0, a.c2 - b.c2, a.c3 - b.c3, a.absorbed || b.absorbed};
}
inline LogForm lf_neg(const LogForm& a) { return {-a.c0, -a.c2, -a.c3, a.absorbed}; }
// Multiply the underlying quantity by exp(d).
inline LogForm lf_shift(const LogForm& a, double d) { return {a.c0 + d, a.c2, a.c3, a.absorbed}; }

inline bool lf_shallow(const LogForm& f) { return f.c3 == 0.0; }

// Orders two log forms. X3 dominates any plausible multiple of X2, which in
// turn dominates any plausible c0: coefficients in the recurrences are small
// integers and |c0| stays below ~1e3.
inline int lf_compare(const LogForm& a, const LogForm& b) {
    constexpr double kCoeffTol = 1e-9;
    double d3 = a.c3 - b.c3;
    if (std::abs(d3) > kCoeffTol) return d3 > 0 ? 1 : -1;
    double d2 = a.c2 - b.c2;
    if (std::abs(d2) > kCoeffTol) return d2 > 0 ? 1 : -1;
    double d0 = a.c0 - b.c0;
    if (std::abs(d0) > kCoeffTol) return d0 > 0 ? 1 : -1;
    return 0;
}

// Positive scalar of the construction: always carries its log form; carries an
// exact/log-scale NumericValue whenever the magnitude's log fits a binary64.
struct Scalar {
    std::optional<NumericValue> value;
    LogForm ln;

    bool has_value() const { return value.has_value(); }
    const NumericValue& val() const {
        if (!value) throw numeric_error("scalar magnitude is below binary64 log range");
        return *value;
    }

    static Scalar from_rational(const NumericValue& v) {
        Scalar s;
        s.value = v;
        s.ln = {v.ln_abs(), 0.0, 0.0, v.absorbed()};
        return s;
    }
    // Materialize from a form once the basis value X2 is known.
    static Scalar from_form(const LogForm& f, double x2) {
        Scalar s;
        s.ln = f;
        if (lf_shallow(f)) {
            double lnv = f.c0 + f.c2 * x2;
            s.value = NumericValue::log_scale(Sign::plus, lnv, f.absorbed);
        }
        return s;
    }
};

struct LevelParams {
    int k = 1;
    bool conforming = true;  // false for presentation tables

    bool n_exact = true;  // N representable as an integer
    mpz_class N = 2;
    LogForm log_N;

    // X = (2N)^{2k}; exact integer while it fits, else only ln_X.
    bool x_exact = true;
    mpz_class X = 16;
    double ln_X = 0.0;

    Scalar a, s, eps, ehat, t, r, delta, scale;

    // Value of the basis X2 once level 2 exists (0 before that).
    double x2_basis = 0.0;
};

namespace detail {

inline NumericValue nv_rat(long n, long d = 1) { return NumericValue::rational(n, d); }

// s solving 2M s + (M-1) a = 1 with a = ratio * s, for exact rational ratio.
inline NumericValue block_half_length_exact(const mpz_class& M, const NumericValue& ratio) {
    NumericValue denom =
        nv_add(NumericValue::rational(mpz_class(2 * M)),
               nv_mul(NumericValue::rational(mpz_class(M - 1)), ratio));
    return nv_div(NumericValue::rational(1), denom);
}

}  // namespace detail

// Level-1 parameters: N_1 = 2, eps_1 = a_1/100 = s_1/10^5, everything exact.
inline LevelParams initial_params() {
    using detail::nv_rat;
    LevelParams p;
    p.k = 1;
    p.N = 2;
    p.n_exact = true;
    p.X = 16;  // (2*2)^2
    p.x_exact = true;
    p.ln_X = std::log(16.0);
    NumericValue s = detail::block_half_length_exact(2, nv_rat(1, 1000));  // 1000/4001
    NumericValue a = nv_mul(s, nv_rat(1, 1000));
    NumericValue eps = nv_div(a, nv_rat(100));
    p.s = Scalar::from_rational(s);
    p.a = Scalar::from_rational(a);
    p.eps = Scalar::from_rational(eps);
    p.scale = Scalar::from_rational(nv_rat(1));
    p.t = p.eps;
    p.r = p.s;
    p.delta = p.a;
    NumericValue ehat = nv_div(p.t.val(), nv_sub(p.r.val(), nv_div(p.delta.val(), nv_rat(2))));
    p.ehat = Scalar::from_rational(ehat);
    p.log_N = {std::log(2.0), 0, 0, false};
    return p;
}

// One step of the recurrence. Level 2 keeps N and X exact; level 3 exists only
// through log forms (N_3 has ~1e30 digits). Beyond that even the log of
// (2N)^{2k} overflows binary64 and the level is out of numeric range.
inline LevelParams next_params(const LevelParams& prev) {
    using detail::nv_rat;
    if (!prev.conforming)
        throw numeric_error("next_params: presentation tables have no recurrence");
    LevelParams p;
    p.k = prev.k + 1;

    if (prev.ehat.has_value() && prev.ehat.val().is_rational()) {
        // N_k = 2 * ceil(100 / ehat_{k-1}), exact.
        mpq_class q = mpq_class(100) / prev.ehat.val().rat();
        p.N = 2 * ceil_mpq(q);
        p.n_exact = true;
        p.log_N = {ln_mpz(p.N), 0, 0, false};
    } else {
        // ceil correction is relatively ~exp(-X2), far below representability
        p.n_exact = false;
        p.N = 0;
        p.log_N = lf_shift(lf_neg(prev.ehat.ln), std::log(200.0));
        p.log_N.absorbed = true;
    }

    // X = (2N)^{2k}
    double ln_2N = p.n_exact ? ln_mpz(2 * p.N) : (M_LN2 + (p.log_N.c0 + p.log_N.c2 * prev.x2_basis));
    if (!p.n_exact && !lf_shallow(p.log_N))
        throw numeric_error("level out of numeric range: log of N_k exceeds binary64");
    p.ln_X = 2.0 * p.k * ln_2N;
    if (!std::isfinite(p.ln_X) || p.ln_X > 7e307)
        throw numeric_error("level out of numeric range: (2N_k)^{2k} exceeds binary64 log range");
    if (p.n_exact) {
        mpz_class twoN = 2 * p.N;
        mpz_pow_ui(p.X.get_mpz_t(), twoN.get_mpz_t(), 2 * p.k);
        p.x_exact = true;
    } else {
        p.x_exact = false;
    }

    // Basis bookkeeping: level 2 defines X2; deeper levels use X3 = (2N_3)^6.
    double x2 = prev.x2_basis;
    LogForm lnX_form;  // ln(a_k/s_k) = -X as a form
    if (p.k == 2) {
        x2 = mpz_get_d(p.X.get_mpz_t());
        lnX_form = {0, -1, 0, false};
    } else if (p.k == 3) {
        lnX_form = {0, 0, -1, false};
    } else {
        throw numeric_error("level out of numeric range: no basis beyond level 3");
    }
    p.x2_basis = x2;

    // Block equation with M = N_k/2 rows: 2M s + (M-1) a = 1, a = s exp(-X).
    // The (M-1)a term sits exp(-X) below the 2M s term and is absorbed.
    LogForm ln_s = lf_neg(p.log_N);
    ln_s.absorbed = true;
    LogForm ln_a = lf_add(ln_s, lnX_form);

    // eps_k = min(ehat_{k-1}/100, a_k/100); a_k loses by a factor exp(-X).
    LogForm ehat_over_100 = lf_shift(prev.ehat.ln, -std::log(100.0));
    LogForm a_over_100 = lf_shift(ln_a, -std::log(100.0));
    LogForm ln_eps = lf_compare(a_over_100, ehat_over_100) <= 0 ? a_over_100 : ehat_over_100;

    // scale_k = r_{k-1} - delta_{k-1}/2 (absolute homothety factor).
    Scalar scale;
    if (prev.r.has_value() && prev.r.val().is_rational() && prev.delta.has_value() &&
        prev.delta.val().is_rational()) {
        NumericValue sc = nv_sub(prev.r.val(), nv_div(prev.delta.val(), nv_rat(2)));
        scale = Scalar::from_rational(sc);
    } else {
        // delta_{k-1}/2 sits ~exp(-X2) below r_{k-1}: absorbed.
        LogForm f = prev.r.ln;
        f.absorbed = true;
        scale = Scalar::from_form(f, x2);
    }

    p.s = Scalar::from_form(ln_s, x2);
    p.a = Scalar::from_form(ln_a, x2);
    p.eps = Scalar::from_form(ln_eps, x2);
    p.scale = scale;
    p.t = Scalar::from_form(lf_add(ln_eps, scale.ln), x2);
    p.r = Scalar::from_form(lf_add(ln_s, scale.ln), x2);
    p.delta = Scalar::from_form(lf_add(ln_a, scale.ln), x2);
    // ehat_k = t_k / (r_k - delta_k/2); the delta correction is absorbed.
    LogForm ln_ehat = lf_sub(p.t.ln, p.r.ln);
    ln_ehat.absorbed = true;
    p.ehat = Scalar::from_form(ln_ehat, x2);
    return p;
}

// Non-conforming parameter table used only to draw legible figures. All
// values exact rationals: a/s = 1/10, eps = a/10, N from the given table.
inline std::vector<LevelParams> presentation_schedule(const std::vector<long>& Ns) {
    using detail::nv_rat;
    std::vector<LevelParams> out;
    NumericValue prev_r, prev_delta, prev_t;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        long N = Ns[i];
        if (N < 2 || N % 2 != 0) throw numeric_error("presentation_schedule: N must be even >= 2");
        LevelParams p;
        p.conforming = false;
        p.k = static_cast<int>(i + 1);
        p.N = N;
        p.n_exact = true;
        p.log_N = {std::log(static_cast<double>(N)), 0, 0, false};
        mpz_class M = (i == 0) ? mpz_class(N) : mpz_class(N / 2);
        NumericValue s = detail::block_half_length_exact(M, nv_rat(1, 10));
        NumericValue a = nv_div(s, nv_rat(10));
        NumericValue eps = nv_div(a, nv_rat(10));
        NumericValue scale = (i == 0)
                                 ? nv_rat(1)
                                 : nv_sub(prev_r, nv_div(prev_delta, nv_rat(2)));
        p.s = Scalar::from_rational(s);
        p.a = Scalar::from_rational(a);
        p.eps = Scalar::from_rational(eps);
        p.scale = Scalar::from_rational(scale);
        p.t = Scalar::from_rational(nv_mul(eps, scale));
        p.r = Scalar::from_rational(nv_mul(s, scale));
        p.delta = Scalar::from_rational(nv_mul(a, scale));
        p.ehat = Scalar::from_rational(
            nv_div(p.t.val(), nv_sub(p.r.val(), nv_div(p.delta.val(), nv_rat(2)))));
        prev_r = p.r.val();
        prev_delta = p.delta.val();
        prev_t = p.t.val();
        out.push_back(std::move(p));
    }
    return out;
}

namespace detail {

inline std::string lf_str(const LogForm& f) {
    std::ostringstream os;
    os << "ln=" << f.c0;
    if (f.c2 != 0) os << (f.c2 > 0 ? "+" : "") << f.c2 << "*X2";
    if (f.c3 != 0) os << (f.c3 > 0 ? "+" : "") << f.c3 << "*X3";
    if (f.absorbed) os << " (absorbed)";
    return os.str();
}

}  // namespace detail

// Per-level inequality suite. At k = 1 the clause
// delta_1 <= exp(-(2N_1)^2) r_1 fails with the stated initial values
// (delta_1 = 1/4001 vs ~2.8e-8); it is reported as a documented discrepancy
// rather than repaired.
inline VerificationReport verify_level_inequalities(const LevelParams& cur,
                                                    const LevelParams* prev = nullptr) {
    using detail::nv_rat;
    VerificationReport rep;
    rep.suite = "params.level" + std::to_string(cur.k);
    if ((cur.k >= 2) != (prev != nullptr))
        throw numeric_error("verify_level_inequalities: prev required iff k >= 2");
    const std::string K = std::to_string(cur.k);

    auto leq_form = [&](const LogForm& a, const LogForm& b) { return lf_compare(a, b) <= 0; };

    if (cur.k == 1) {
        NumericValue t = cur.t.val(), r = cur.r.val(), d = cur.delta.val();
        rep.add("t1_le_delta1_over_100", "t_1 <= delta_1/100",
                nv_leq(t, nv_div(d, nv_rat(100))), t.str() + " vs " + d.str() + "/100");
        rep.add("delta1_over_100_le_1_over_100", "delta_1/100 <= 1/100",
                nv_leq(d, nv_rat(1)));
        // (2N_1)^2 = 16
        NumericValue bound = nv_mul(NumericValue::log_scale(Sign::plus, -16.0), r.promoted());
        bool ok = nv_leq(d, bound);
        rep.add_status("delta1_le_exp_bound_r1", "delta_1 <= exp(-(2N_1)^2) r_1",
                       ok ? CheckStatus::pass : CheckStatus::documented_discrepancy,
                       "delta_1 = " + d.str() + " ~ 2.5e-4, bound ~ exp(-16) r_1 ~ 2.8e-8; "
                       "fails as literally stated with the level-1 initial values");
        rep.add("r1_le_1", "exp(-(2N_1)^2) r_1 <= exp(-(2N_1)^2)", nv_leq(r, nv_rat(1)));
        rep.add("N1_even", "N_1 even", cur.N % 2 == 0);
        return rep;
    }

    // k >= 2: decide in log-form arithmetic.
    const LogForm hundred{std::log(100.0), 0, 0, false};
    rep.add("t" + K + "_le_delta" + K + "_over_100", "t_k <= delta_k/100",
            leq_form(cur.t.ln, lf_shift(cur.delta.ln, -hundred.c0)),
            detail::lf_str(cur.t.ln) + " vs " + detail::lf_str(cur.delta.ln) + " - ln 100");
    rep.add("delta" + K + "_le_1", "delta_k/100 <= 1/100",
            leq_form(cur.delta.ln, LogForm{}));
    // delta_k <= exp(-(2N_k)^{2k}) r_k: both sides share the same form.
    LogForm expXr = cur.k == 2 ? lf_add(LogForm{0, -1, 0, false}, cur.r.ln)
                               : lf_add(LogForm{0, 0, -1, false}, cur.r.ln);
    rep.add("delta" + K + "_le_expX_r" + K, "delta_k <= exp(-(2N_k)^{2k}) r_k",
            leq_form(cur.delta.ln, expXr));
    rep.add("r" + K + "_le_1", "exp(-(2N_k)^{2k}) r_k <= exp(-(2N_k)^{2k})",
            leq_form(cur.r.ln, LogForm{}));

    // N_k >= 20 N_{k-1}
    bool n_ok;
    std::string n_detail;
    if (cur.n_exact && prev->n_exact) {
        n_ok = cur.N >= 20 * prev->N;
        n_detail = cur.N.get_str() + " >= 20*" + prev->N.get_str();
    } else {
        n_ok = lf_compare(lf_shift(prev->log_N, std::log(20.0)), cur.log_N) <= 0;
        n_detail = detail::lf_str(cur.log_N);
    }
    rep.add("N" + K + "_ge_20N" + std::to_string(cur.k - 1), "N_k >= 20 N_{k-1}", n_ok, n_detail);
    rep.add("N" + K + "_even", "N_k even", !cur.n_exact || cur.N % 2 == 0);

    rep.add("r" + K + "_le_delta" + std::to_string(cur.k - 1) + "_over_100",
            "r_k <= delta_{k-1}/100",
            leq_form(cur.r.ln, lf_shift(prev->delta.ln, -hundred.c0)),
            detail::lf_str(cur.r.ln) + " vs " + detail::lf_str(prev->delta.ln) + " - ln 100");
    rep.add("delta" + std::to_string(cur.k - 1) + "_le_100", "delta_{k-1}/100 <= 1",
            leq_form(prev->delta.ln, hundred));
    rep.add("t" + K + "_le_t" + std::to_string(cur.k - 1) + "_over_100", "t_k <= t_{k-1}/100",
            leq_form(cur.t.ln, lf_shift(prev->t.ln, -hundred.c0)));

    // Identity t_k/t_{k-1} = eps_k/ehat_{k-1}, as forms (tolerance 1e-9).
    LogForm lhs = lf_sub(cur.t.ln, prev->t.ln);
    LogForm rhs = lf_sub(cur.eps.ln, prev->ehat.ln);
    rep.add("t_ratio_identity_" + K, "t_k/t_{k-1} = eps_k/ehat_{k-1}",
            lf_compare(lhs, rhs) == 0,
            detail::lf_str(lhs) + " vs " + detail::lf_str(rhs));
    return rep;
}

// Children of a level-(k-1) rectangle stay inside it: horizontally the block,
// shifted by +-ehat/2, must fit in the column of half-width ehat; vertically
// the block content spans [0,1] with tangency at both ends.
struct ContainmentReport {
    VerificationReport checks;
    std::optional<NumericValue> horizontal_margin;
    bool vertical_tangent = true;
};

inline ContainmentReport containment_margin(const LevelParams& cur, const LevelParams& prev) {
    using detail::nv_rat;
    if (cur.k < 2) throw numeric_error("containment_margin: needs k >= 2");
    ContainmentReport out;
    out.checks.suite = "params.containment.level" + std::to_string(cur.k);

    // ehat/2 + 2 eps_k + 2 s_k <= ehat  <=>  2 eps_k + 2 s_k <= ehat/2.
    LogForm half_ehat = lf_shift(prev.ehat.ln, -M_LN2);
    LogForm two_s = lf_shift(cur.s.ln, M_LN2);
    LogForm two_eps = lf_shift(cur.eps.ln, M_LN2);
    bool horizontal_ok =
        lf_compare(two_s, half_ehat) < 0 && lf_compare(two_eps, half_ehat) < 0;
    if (prev.ehat.has_value() && cur.s.has_value()) {
        // margin = ehat/2 - 2s - 2eps; an eps term below value range is
        // dominated by s (it is at most s/100) and absorbed.
        NumericValue margin;
        if (half_ehat.c2 == two_s.c2 && half_ehat.c3 == two_s.c3 &&
            (half_ehat.c2 != 0.0 || half_ehat.c3 != 0.0)) {
            // Both sides share a huge dominant term; the flat logs agree to
            // every representable digit and the difference lives only in the
            // exact c0 gap of the forms: margin = (ehat/2)(1 - e^{-gap}).
            double gap = half_ehat.c0 - two_s.c0;
            if (gap > 0)
                margin = NumericValue::log_scale(
                    Sign::plus, prev.ehat.val().ln_abs() - M_LN2 + std::log1p(-std::exp(-gap)),
                    true);
            else
                margin = NumericValue::log_scale(Sign::minus, two_s.c0 + M_LN2, true);
        } else {
            margin = nv_sub(nv_div(prev.ehat.val(), nv_rat(2)),
                            nv_mul(nv_rat(2), cur.s.val()));
        }
        if (cur.eps.has_value() && !margin.absorbed())
            margin = nv_sub(margin, nv_mul(nv_rat(2), cur.eps.val()));
        else
            margin = nv_mul(margin, NumericValue::log_scale(Sign::plus, 0.0, true));
        horizontal_ok = horizontal_ok && margin.sign() == Sign::plus;
        out.horizontal_margin = margin;
        out.checks.add("horizontal", "ehat/2 + 2 eps_k + 2 s_k <= ehat",
                       horizontal_ok, "margin = " + margin.str());
    } else {
        out.checks.add("horizontal", "ehat/2 + 2 eps_k + 2 s_k <= ehat", horizontal_ok,
                       detail::lf_str(two_s) + " vs " + detail::lf_str(half_ehat));
    }

    // Vertical: the block solves 2M s + (M-1) a = 1, so the bottom disk is
    // tangent to 0 and the top disk tangent to 1: margin 0, tangent.
    out.vertical_tangent = true;
    out.checks.add("vertical", "block content lies in [0,1] (tangent at both ends)", true,
                   "margin 0, tangent");
    if (!horizontal_ok)
        throw numeric_error("containment_margin: non-positive horizontal margin");
    return out;
}

}  // namespace cdom
