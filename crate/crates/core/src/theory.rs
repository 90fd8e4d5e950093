//! Closed-form parameter functions of `(n, p)`.
//!
//! Everything here is finite-`n` numeric: the per-class collision factor
//! `s(p)` and its minimizing class size `ell_0`, the zigzag coefficient
//! `r = 2/lg(1/s)` together with its two sparse variants, and the bound
//! envelopes for `chi_s(G(n,p))`. Logarithm conventions: `lg` is base 2,
//! `log` is natural.

use thiserror::Error;

use crate::numeric::one_minus_p_pow;

#[derive(Debug, Error, PartialEq)]
pub enum TheoryError {
    #[error("p = {0} is not in (0, 1)")]
    BadProbability(f64),
    #[error("need n >= {min}, got n = {n}")]
    BadVertexCount { n: u64, min: u64 },
    #[error("n^2 p = {0} <= 1 has no positive solution for r")]
    UpperRUndefined(f64),
    #[error("np = {0} <= 1 leaves the sparse lower r undefined")]
    LowerRUndefined(f64),
    #[error("grid requires 0 < p_min < p_max < 1 and step > 0")]
    BadGrid,
}

fn check_p(p: f64) -> Result<(), TheoryError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(TheoryError::BadProbability(p))
    }
}

/// The collision factor of one colour class of size `ell`:
/// `f(ell) = q^2 + (1-q)^2` with `q = (1-p)^ell`.
///
/// Evaluated as `1/2 + 2 (q - 1/2)^2`, which is algebraically identical and
/// cannot round below `1/2`, so downstream quantities keep `s >= 1/2` and
/// `r >= 2` exactly.
pub fn class_collision_factor(p: f64, ell: u64) -> f64 {
    let q = one_minus_p_pow(p, ell as f64);
    0.5 + 2.0 * (q - 0.5) * (q - 0.5)
}

/// The two candidate minimizers of `f(ell)`: the floor/ceiling pair of
/// `log(1/2) / log(1-p)`, clamped to be at least 1.
pub fn ell0_candidates(p: f64) -> Result<(u64, u64), TheoryError> {
    check_p(p)?;
    let ratio = 0.5f64.ln() / (-p).ln_1p();
    let lo = (ratio.floor() as u64).max(1);
    let hi = (ratio.ceil() as u64).max(1);
    Ok((lo, hi))
}

/// Minimum of `f(ell)` over class sizes `ell = 1, 2, ...` and a minimizing
/// `ell`; ties break toward the smaller class size.
pub fn s_and_ell0(p: f64) -> Result<(f64, u64), TheoryError> {
    let (lo, hi) = ell0_candidates(p)?;
    let f_lo = class_collision_factor(p, lo);
    let f_hi = class_collision_factor(p, hi);
    Ok(if f_lo <= f_hi { (f_lo, lo) } else { (f_hi, hi) })
}

/// The zigzag coefficient for constant `p`: `r = 2 / lg(1/s)`, the `r` with
/// `n^2 s^{r lg n} = 1`. Always at least 2, tending to infinity as `p -> 1`.
pub fn r_const(p: f64) -> Result<f64, TheoryError> {
    let (s, _) = s_and_ell0(p)?;
    Ok(2.0 / -s.log2())
}

/// The sparse upper-bound variant: the `r` solving `n^2 p s^{r lg n} = 1`,
/// i.e. `r = lg(n^2 p) / (lg(1/s) lg n)`. Requires `n^2 p > 1`.
pub fn r_upper(n: u64, p: f64) -> Result<f64, TheoryError> {
    check_p(p)?;
    if n < 2 {
        return Err(TheoryError::BadVertexCount { n, min: 2 });
    }
    let n2p = (n as f64) * (n as f64) * p;
    if n2p <= 1.0 {
        return Err(TheoryError::UpperRUndefined(n2p));
    }
    let (s, _) = s_and_ell0(p)?;
    Ok(n2p.log2() / (-s.log2() * (n as f64).log2()))
}

/// The sparse lower-bound variant:
/// `r = -2 (lg(np) - lg log n - lg log(np)) / ((lg n)(lg s))`,
/// equivalently the `r` solving `(np)^2 s^{r lg n} = (log^2 n)(log^2(np))`.
/// Requires `np > 1`.
pub fn r_lower(n: u64, p: f64) -> Result<f64, TheoryError> {
    check_p(p)?;
    if n < 3 {
        return Err(TheoryError::BadVertexCount { n, min: 3 });
    }
    let nf = n as f64;
    let np = nf * p;
    if np <= 1.0 {
        return Err(TheoryError::LowerRUndefined(np));
    }
    let (s, _) = s_and_ell0(p)?;
    let numer = -2.0 * (np.log2() - nf.ln().log2() - np.ln().log2());
    Ok(numer / (nf.log2() * s.log2()))
}

/// Density exponent `alpha = log(np) / log(n)`, the finite-`n` reading of
/// `np = n^alpha`.
pub fn alpha(n: u64, p: f64) -> f64 {
    let nf = n as f64;
    (nf * p).ln() / nf.ln()
}

/// Which branch of the main bound applies, chosen by finite-`n` proxies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `p` treated as constant: `chi_s ~ r lg n`.
    DenseConst,
    /// `np = n^alpha` with `alpha` bounded away from 0:
    /// `2 alpha lg n <= chi_s <= (1 + alpha) lg n`.
    Polynomial,
    /// `np = n^{o(1)}`: `2 (lg(np) - lg log n - lg log(np)) <= chi_s <= lg n`.
    Subpolynomial,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::DenseConst => "dense-const",
            Regime::Polynomial => "polynomial",
            Regime::Subpolynomial => "subpolynomial",
        }
    }
}

/// Finite-`n` stand-ins for the asymptotic regime boundaries. The regimes
/// have no canonical finite cutoff, so these are overridable defaults.
#[derive(Clone, Copy, Debug)]
pub struct RegimeThresholds {
    /// `p` at or above this counts as constant.
    pub const_p_min: f64,
    /// `alpha` at or above this counts as polynomial density.
    pub alpha_min: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            const_p_min: 0.01,
            alpha_min: 0.05,
        }
    }
}

/// Bound envelope for `chi_s(G(n,p))`, plus the trivial envelope derived
/// from the a.a.s. chromatic number for comparison.
///
/// The envelopes are asymptotic: the upper bounds hide `o(1)` corrections
/// that are reported as written, without a guessed correction term.
#[derive(Clone, Copy, Debug)]
pub struct Envelope {
    pub lower: f64,
    pub upper: f64,
    pub regime: Regime,
    /// `lg(chi) + 1` with `chi ~ np / (2 log np)`; meaningful for large `np`.
    pub trivial_lower: f64,
    /// `chi ~ np / (2 log np)`; meaningful for large `np`.
    pub trivial_upper: f64,
}

/// [`theorem_envelope_with`] under the default [`RegimeThresholds`].
pub fn theorem_envelope(n: u64, p: f64) -> Result<Envelope, TheoryError> {
    theorem_envelope_with(n, p, &RegimeThresholds::default())
}

/// Bound envelope at `(n, p)` under the given regime thresholds.
///
/// In the subpolynomial regime the displayed lower bound blows up as
/// `np -> 1+`, outside the hypotheses it was proved under; it is clamped
/// into `[0, lg n]` so the envelope always satisfies `lower <= upper`.
pub fn theorem_envelope_with(
    n: u64,
    p: f64,
    thresholds: &RegimeThresholds,
) -> Result<Envelope, TheoryError> {
    check_p(p)?;
    if n < 3 {
        return Err(TheoryError::BadVertexCount { n, min: 3 });
    }
    let nf = n as f64;
    let lg_n = nf.log2();
    let np = nf * p;
    let a = alpha(n, p);

    let (regime, lower, upper) = if p >= thresholds.const_p_min {
        let r = r_const(p)?;
        (Regime::DenseConst, r * lg_n, r * lg_n)
    } else if a >= thresholds.alpha_min {
        (Regime::Polynomial, 2.0 * a * lg_n, (1.0 + a) * lg_n)
    } else {
        let raw = if np > 1.0 {
            2.0 * (np.log2() - nf.ln().log2() - np.ln().log2())
        } else {
            0.0
        };
        (Regime::Subpolynomial, raw.clamp(0.0, lg_n), lg_n)
    };

    let chi_est = if np >= std::f64::consts::E {
        (np / (2.0 * np.ln())).max(1.0)
    } else {
        1.0
    };
    Ok(Envelope {
        lower,
        upper,
        regime,
        trivial_lower: chi_est.log2() + 1.0,
        trivial_upper: chi_est,
    })
}

/// All derived parameters at one `(n, p)` point. The sparse `r` variants are
/// `None` where their defining equations have no solution.
#[derive(Clone, Copy, Debug)]
pub struct TheoryPoint {
    pub n: u64,
    pub p: f64,
    pub ell0: u64,
    pub s: f64,
    pub r_const: f64,
    pub r_upper: Option<f64>,
    pub r_lower: Option<f64>,
    pub alpha: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

pub fn theory_point(n: u64, p: f64) -> Result<TheoryPoint, TheoryError> {
    let (s, ell0) = s_and_ell0(p)?;
    let envelope = theorem_envelope(n, p)?;
    Ok(TheoryPoint {
        n,
        p,
        ell0,
        s,
        r_const: 2.0 / -s.log2(),
        r_upper: r_upper(n, p).ok(),
        r_lower: r_lower(n, p).ok(),
        alpha: alpha(n, p),
        lower_bound: envelope.lower,
        upper_bound: envelope.upper,
    })
}

/// One row of the zigzag table. The sparse columns are populated only when
/// the table was built with an `n`.
#[derive(Clone, Copy, Debug)]
pub struct ZigzagRow {
    pub p: f64,
    pub ell0: u64,
    pub s: f64,
    pub r: f64,
    pub r_upper: Option<f64>,
    pub r_lower: Option<f64>,
}

/// Evaluates `(p, ell0, s, r)` on the grid `p_min, p_min + step, ...` up to
/// `p_max` inclusive. With `n` given, the sparse `r` variants are added.
pub fn zigzag_table(
    p_min: f64,
    p_max: f64,
    step: f64,
    n: Option<u64>,
) -> Result<Vec<ZigzagRow>, TheoryError> {
    if !(p_min > 0.0 && p_min < p_max && p_max < 1.0) || !(step > 0.0) {
        return Err(TheoryError::BadGrid);
    }
    // index-based grid; the epsilon absorbs accumulated representation error
    // so that e.g. 0.01..0.99 step 0.001 has exactly 981 points
    let count = ((p_max - p_min) / step + 1e-9).floor() as usize + 1;
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let p = p_min + i as f64 * step;
        let (s, ell0) = s_and_ell0(p)?;
        rows.push(ZigzagRow {
            p,
            ell0,
            s,
            r: 2.0 / -s.log2(),
            r_upper: n.map(|n| r_upper(n, p)).transpose()?,
            r_lower: n.map(|n| r_lower(n, p)).transpose()?,
        });
    }
    Ok(rows)
}

/// Renders a zigzag table as CSV with header `p,ell0,s,r` (and the sparse
/// columns appended when present), 12 significant digits per value.
pub fn zigzag_csv(rows: &[ZigzagRow]) -> String {
    let sparse = rows.first().is_some_and(|r| r.r_upper.is_some());
    let mut out = String::new();
    out.push_str(if sparse {
        "p,ell0,s,r,r_upper,r_lower\n"
    } else {
        "p,ell0,s,r\n"
    });
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}",
            format_sig12(row.p),
            row.ell0,
            format_sig12(row.s),
            format_sig12(row.r)
        ));
        if sparse {
            out.push_str(&format!(
                ",{},{}",
                format_sig12(row.r_upper.unwrap_or(f64::NAN)),
                format_sig12(row.r_lower.unwrap_or(f64::NAN))
            ));
        }
        out.push('\n');
    }
    out
}

/// Plain decimal with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Landmark probabilities `1 - (1/2)^{1/k}` where the zigzag touches
    /// `s = 1/2`, `ell0 = k`, `r = 2`.
    fn landmark(k: u32) -> f64 {
        1.0 - 0.5f64.powf(1.0 / k as f64)
    }

    /// Independent route for `f(ell)`: iterated multiplication and the
    /// direct two-square form, no shared code with the implementation.
    fn brute_force_min(p: f64, max_ell: u64) -> (f64, u64) {
        let mut q = 1.0;
        let mut best = (f64::INFINITY, 0);
        for ell in 1..=max_ell {
            q *= 1.0 - p;
            let f = q * q + (1.0 - q) * (1.0 - q);
            if f < best.0 {
                best = (f, ell);
            }
        }
        best
    }

    #[test]
    fn landmarks_have_s_half_and_integer_ell0() {
        for k in 1..=6u32 {
            let (s, ell0) = s_and_ell0(landmark(k)).unwrap();
            assert_eq!(ell0, k as u64, "ell0 at landmark k = {k}");
            assert!((s - 0.5).abs() <= 1e-12, "s = {s} at landmark k = {k}");
            let r = r_const(landmark(k)).unwrap();
            assert!((r - 2.0).abs() <= 1e-9, "r = {r} at landmark k = {k}");
        }
    }

    #[test]
    fn s_at_p_half_and_p_06() {
        let (s, ell0) = s_and_ell0(0.5).unwrap();
        assert_eq!((s, ell0), (0.5, 1));

        let (s, ell0) = s_and_ell0(0.6).unwrap();
        assert_eq!(ell0, 1);
        assert!((s - 0.52).abs() <= 1e-12, "s(0.6) = {s}");
    }

    #[test]
    fn r_const_examples() {
        assert!((r_const(0.5).unwrap() - 2.0).abs() <= 1e-12);
        assert!((r_const(landmark(3)).unwrap() - 2.0).abs() <= 1e-9);
        let r99 = r_const(0.99).unwrap();
        // s(0.99) = 0.01^2 + 0.99^2 = 0.9802, r = 2/lg(1/0.9802)
        let expected = 2.0 / -(0.9802f64).log2();
        assert!((r99 - expected).abs() <= 1e-9, "r(0.99) = {r99}");
        assert!(r99 > 50.0);
    }

    #[test]
    fn r_const_rejects_bad_p() {
        assert!(matches!(r_const(0.0), Err(TheoryError::BadProbability(_))));
        assert!(matches!(r_const(1.0), Err(TheoryError::BadProbability(_))));
    }

    #[test]
    fn r_upper_examples() {
        // n = 2^20, p = 1/2: lg(n^2 p) = 39, s = 1/2, lg n = 20
        let r = r_upper(1 << 20, 0.5).unwrap();
        assert!((r - 1.95).abs() <= 1e-12, "r_upper(2^20, 1/2) = {r}");
        let r = r_upper(1024, 0.5).unwrap();
        assert!((r - 1.9).abs() <= 1e-12, "r_upper(1024, 1/2) = {r}");
    }

    #[test]
    fn r_upper_satisfies_defining_identity() {
        for &(n, p) in &[
            (100u64, 0.3),
            (1024, 0.5),
            (50_000, 0.01),
            (1_000_000, 1e-4),
            (1 << 30, 0.9),
        ] {
            let r = r_upper(n, p).unwrap();
            let (s, _) = s_and_ell0(p).unwrap();
            let nf = n as f64;
            let value = nf * nf * p * s.powf(r * nf.log2());
            assert!(
                (value - 1.0).abs() <= 1e-9,
                "identity at (n={n}, p={p}): {value}"
            );
        }
    }

    #[test]
    fn r_upper_domain_error() {
        assert!(matches!(
            r_upper(10, 0.005),
            Err(TheoryError::UpperRUndefined(_))
        ));
        assert!(matches!(
            r_upper(1, 0.5),
            Err(TheoryError::BadVertexCount { .. })
        ));
    }

    #[test]
    fn r_lower_matches_displayed_formula() {
        let n = 1u64 << 20;
        let p = 0.5;
        let r = r_lower(n, p).unwrap();
        let nf = n as f64;
        let np = nf * p;
        // s = 1/2, so lg s = -1 and the formula collapses to
        // 2 (lg(np) - lg log n - lg log(np)) / lg n
        let expected = 2.0 * (np.log2() - nf.ln().log2() - np.ln().log2()) / nf.log2();
        assert!((r - expected).abs() <= 1e-12, "r_lower = {r}");
    }

    #[test]
    fn r_lower_satisfies_defining_identity() {
        for &(n, p) in &[(1u64 << 20, 0.5), (10_000, 0.02), (1_000_000, 3e-4)] {
            let r = r_lower(n, p).unwrap();
            let (s, _) = s_and_ell0(p).unwrap();
            let nf = n as f64;
            let np = nf * p;
            let lhs = np * np * s.powf(r * nf.log2());
            let rhs = nf.ln().powi(2) * np.ln().powi(2);
            assert!(
                (lhs / rhs - 1.0).abs() <= 1e-9,
                "identity at (n={n}, p={p}): {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn r_lower_dominates_s_free_form() {
        for &(n, p) in &[(1u64 << 20, 0.5), (10_000, 0.02), (1_000_000, 3e-4)] {
            let r = r_lower(n, p).unwrap();
            let nf = n as f64;
            let np = nf * p;
            let floor = 2.0 * (np.log2() - nf.ln().log2() - np.ln().log2()) / nf.log2();
            assert!(r >= floor - 1e-12, "(n={n}, p={p}): {r} < {floor}");
        }
    }

    #[test]
    fn r_lower_domain_error() {
        assert!(matches!(
            r_lower(100, 0.005),
            Err(TheoryError::LowerRUndefined(_))
        ));
    }

    #[test]
    fn envelope_dense_constant_case() {
        let e = theorem_envelope(1_000_000, 0.5).unwrap();
        assert_eq!(e.regime, Regime::DenseConst);
        let expect = 2.0 * 1e6f64.log2();
        assert!((e.lower - expect).abs() <= 1e-9);
        assert!((e.upper - expect).abs() <= 1e-9);
        assert!((expect - 39.86).abs() < 0.01);
    }

    #[test]
    fn envelope_polynomial_ratio() {
        // np = sqrt(n): alpha = 1/2, ratio (1+a)/(2a) = 3/2
        let e = theorem_envelope(1_000_000, 1e-3).unwrap();
        assert_eq!(e.regime, Regime::Polynomial);
        assert!((e.upper / e.lower - 1.5).abs() <= 1e-9);
    }

    #[test]
    fn envelope_ordered_across_sweep() {
        for exp in 3..=9u32 {
            let n = 10u64.pow(exp);
            for &p in &[
                1e-6, 1e-5, 1e-4, 1e-3, 5e-3, 0.01, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99,
            ] {
                let e = theorem_envelope(n, p).unwrap();
                assert!(
                    e.lower <= e.upper + 1e-12,
                    "disordered envelope at (n={n}, p={p}): [{}, {}]",
                    e.lower,
                    e.upper
                );
            }
        }
    }

    #[test]
    fn candidate_set_matches_brute_force() {
        // p >= 0.001 keeps the true minimizer below 1000, inside the
        // brute-force window.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1ab1e);
        for _ in 0..10_000 {
            let p = rng.random_range(0.001..0.99);
            let (brute_min, brute_ell) = brute_force_min(p, 1000);
            let (lo, hi) = ell0_candidates(p).unwrap();
            assert!(
                brute_ell == lo || brute_ell == hi,
                "p = {p}: brute minimizer {brute_ell} not in {{{lo}, {hi}}}"
            );
            let (s, _) = s_and_ell0(p).unwrap();
            assert!(
                (s - brute_min).abs() <= 1e-12,
                "p = {p}: s = {s}, brute = {brute_min}"
            );
        }
    }

    #[test]
    fn s_bounds_hold_on_random_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
        for _ in 0..10_000 {
            let p = rng.random_range(1e-4..0.99);
            let (s, _) = s_and_ell0(p).unwrap();
            assert!(s >= 0.5, "s({p}) = {s} < 1/2");
            assert!(s <= (1.0 + p * p) / 2.0 + 1e-15, "s({p}) = {s} above cap");
            assert!(r_const(p).unwrap() >= 2.0, "r({p}) < 2");
        }
    }

    #[test]
    fn stable_form_agrees_with_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xd1ce);
        for _ in 0..10_000 {
            let p: f64 = rng.random_range(0.001..0.99);
            let ell = rng.random_range(1..=1000u64);
            let q = (1.0 - p).powf(ell as f64);
            let direct = q * q + (1.0 - q) * (1.0 - q);
            let stable = class_collision_factor(p, ell);
            assert!(
                (stable - direct).abs() <= 1e-12,
                "p = {p}, ell = {ell}: {stable} vs {direct}"
            );
        }
    }

    #[test]
    fn zigzag_table_shape_and_values() {
        let rows = zigzag_table(0.01, 0.99, 0.001, None).unwrap();
        assert_eq!(rows.len(), 981);
        for row in &rows {
            assert!(row.r >= 2.0, "r({}) = {} below 2", row.p, row.r);
        }
        // p = 0.6 row
        let row = rows.iter().find(|r| (r.p - 0.6).abs() < 1e-9).unwrap();
        assert!((row.s - 0.52).abs() <= 1e-12);
        // r dips to 2 at the landmark p = 1/2, which lies on this grid
        let min_r = rows.iter().map(|r| r.r).fold(f64::INFINITY, f64::min);
        assert!((min_r - 2.0).abs() <= 1e-9, "grid min r = {min_r}");
    }

    #[test]
    fn zigzag_table_with_n_adds_sparse_columns() {
        let rows = zigzag_table(0.1, 0.9, 0.1, Some(1024)).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.r_upper.is_some() && r.r_lower.is_some()));
        let csv = zigzag_csv(&rows);
        assert!(csv.starts_with("p,ell0,s,r,r_upper,r_lower\n"));
    }

    #[test]
    fn zigzag_rejects_bad_grid() {
        assert!(matches!(
            zigzag_table(0.5, 0.4, 0.1, None),
            Err(TheoryError::BadGrid)
        ));
        assert!(matches!(
            zigzag_table(0.1, 0.9, 0.0, None),
            Err(TheoryError::BadGrid)
        ));
    }

    #[test]
    fn csv_format_is_stable() {
        let rows = zigzag_table(0.5, 0.6, 0.1, None).unwrap();
        let csv = zigzag_csv(&rows);
        let expected = "p,ell0,s,r\n\
                        0.500000000000,1,0.500000000000,2.00000000000\n\
                        0.600000000000,1,0.520000000000,2.11995450592\n";
        assert_eq!(csv, expected);
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(0.5), "0.500000000000");
        assert_eq!(format_sig12(2.0), "2.00000000000");
        assert_eq!(format_sig12(69.3), "69.3000000000");
    }
}
