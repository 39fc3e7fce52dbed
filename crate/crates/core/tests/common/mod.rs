//! Independent oracles and property checks shared by the property tests
//! and the acceptance runner. Everything here recomputes from the raw pmf
//! lists instead of going through the library's evaluation paths.

#![allow(dead_code)]

use std::collections::BTreeSet;

use imc::operator::{apply_lower_exact, apply_upper_exact};
use imc::state::{complement, indicator_exact, nonempty_subsets};
use imc::{CredalFamily, Rational, StateSet, UpperOperator};
use num_traits::{One, Signed, Zero};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn max_of(f: &[Rational]) -> Rational {
    f.iter().max().cloned().unwrap()
}

pub fn min_of(f: &[Rational]) -> Rational {
    f.iter().min().cloned().unwrap()
}

fn dot(p: &[Rational], f: &[Rational]) -> Rational {
    p.iter().zip(f).map(|(a, b)| a * b).fold(Rational::zero(), |s, v| s + v)
}

/// `max_p E_p f` straight from the pmf list.
pub fn brute_upper(fam: &CredalFamily, f: &[Rational]) -> Vec<Rational> {
    (0..fam.len()).map(|x| fam.pmfs(x).iter().map(|p| dot(p.mass(), f)).max().unwrap()).collect()
}

pub fn brute_lower(fam: &CredalFamily, f: &[Rational]) -> Vec<Rational> {
    (0..fam.len()).map(|x| fam.pmfs(x).iter().map(|p| dot(p.mass(), f)).min().unwrap()).collect()
}

pub fn brute_upper_n(fam: &CredalFamily, f: &[Rational], n: usize) -> Vec<Rational> {
    (0..n).fold(f.to_vec(), |g, _| brute_upper(fam, &g))
}

pub fn brute_lower_n(fam: &CredalFamily, f: &[Rational], n: usize) -> Vec<Rational> {
    (0..n).fold(f.to_vec(), |g, _| brute_lower(fam, &g))
}

/// Edge `x → y` iff some pmf at `x` charges `y`.
pub fn brute_edges(fam: &CredalFamily) -> Vec<(usize, usize)> {
    let n = fam.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if fam.pmfs(x).iter().any(|p| p.get(y).is_positive()) {
                out.push((x, y));
            }
        }
    }
    out
}

/// The family restricted by hand: keep pmfs supported in `class`.
pub fn brute_restricted_sets(fam: &CredalFamily, class: &StateSet) -> Option<Vec<BTreeSet<Vec<Rational>>>> {
    let mut out = Vec::new();
    for &x in class {
        let kept: BTreeSet<Vec<Rational>> = fam
            .pmfs(x)
            .iter()
            .filter(|p| (0..fam.len()).all(|y| class.contains(&y) || p.get(y).is_zero()))
            .map(|p| class.iter().map(|&y| p.get(y).clone()).collect())
            .collect();
        if kept.is_empty() {
            return None;
        }
        out.push(kept);
    }
    Some(out)
}

fn le(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(a: &[Rational], s: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * s).collect()
}

fn shift(a: &[Rational], s: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x + s).collect()
}

fn neg(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

pub type Check = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// The seven operator axioms, for both the upper and the lower operator
/// where they apply. `h ≥ 0` pointwise builds `g = f + h ≥ f`.
pub fn check_axioms(op: &dyn UpperOperator, f: &[Rational], g: &[Rational], h: &[Rational], lambda: &Rational, mu: &Rational) -> Check {
    let up = |v: &[Rational]| apply_upper_exact(op, v).unwrap();
    let lo = |v: &[Rational]| apply_lower_exact(op, v).unwrap();
    let (tf, tg) = (up(f), up(g));
    ensure(le(&up(&add(f, g)), &add(&tf, &tg)), || "subadditivity".into())?;
    ensure(up(&scale(f, lambda)) == scale(&tf, lambda), || "positive homogeneity".into())?;
    let (mx, mn) = (max_of(f), min_of(f));
    ensure(tf.iter().all(|v| *v <= mx), || "dominated by max".into())?;
    let lf = lo(f);
    for (name, s) in [("upper", &tf), ("lower", &lf)] {
        ensure(s.iter().all(|v| mn <= *v && *v <= mx), || format!("{name} bounds"))?;
    }
    ensure(le(&lf, &tf), || "lower above upper".into())?;
    let bigger = add(f, h);
    ensure(le(&tf, &up(&bigger)), || "upper monotonicity".into())?;
    ensure(le(&lf, &lo(&bigger)), || "lower monotonicity".into())?;
    ensure(up(&shift(f, mu)) == shift(&tf, mu), || "upper constant additivity".into())?;
    ensure(lo(&shift(f, mu)) == shift(&lf, mu), || "lower constant additivity".into())?;
    let n = f.len();
    let spread = &mx - &mn;
    for x in (0..n).filter(|&x| f[x] == mx) {
        let ind = indicator_exact(n, &[x].into_iter().collect());
        for (name, s, si) in [("upper", &tf, up(&ind)), ("lower", &lf, lo(&ind))] {
            let bound = shift(&scale(&si, &spread), &mn);
            ensure(le(&bound, s), || format!("{name} indicator lower bound at argmax {x}"))?;
        }
    }
    Ok(())
}

/// `T̲f = −T̄(−f)` against a lower operator computed without negation.
pub fn check_conjugacy(fam: &CredalFamily, f: &[Rational]) -> Check {
    let lib = apply_lower_exact(fam, f).unwrap();
    ensure(lib == brute_lower(fam, f), || "library lower differs from min over pmfs".into())?;
    ensure(lib == neg(&brute_upper(fam, &neg(f))), || "conjugacy".into())?;
    ensure(apply_upper_exact(fam, f).unwrap() == brute_upper(fam, f), || "library upper differs from max over pmfs".into())
}

/// `T̄𝟙_C = 1 − T̲𝟙_{X∖C}` for every non-empty `C`.
pub fn check_indicator_identity(op: &dyn UpperOperator) -> Check {
    let n = op.len();
    for c in nonempty_subsets(n) {
        let up = apply_upper_exact(op, &indicator_exact(n, &c)).unwrap();
        let lo = apply_lower_exact(op, &indicator_exact(n, &complement(n, &c))).unwrap();
        let rhs: Vec<Rational> = lo.iter().map(|v| Rational::one() - v).collect();
        ensure(up == rhs, || format!("indicator identity fails for {c:?}"))?;
    }
    Ok(())
}

/// `(T̄|_C)ⁿ(f|_C) ≤ (T̄ⁿf)|_C`, with equality on maximal classes, for every
/// well-defined class `C` and `n ≤ steps`.
pub fn check_restriction(fam: &CredalFamily, f: &[Rational], steps: usize) -> Check {
    let op: imc::OperatorHandle = std::sync::Arc::new(fam.clone());
    let classes = imc::communication_classes(&imc::build_graph(fam).unwrap());
    for c in nonempty_subsets(fam.len()) {
        let Some(sets) = brute_restricted_sets(fam, &c) else {
            ensure(imc::restrict(&op, &c).is_err(), || format!("{c:?} should not restrict"))?;
            continue;
        };
        let rest = imc::restrict(&op, &c).map_err(|e| format!("{c:?}: {e}"))?;
        let rf = rest.family().unwrap();
        for (i, want) in sets.iter().enumerate() {
            let got: BTreeSet<Vec<Rational>> = rf.pmfs(i).iter().map(|p| p.mass().to_vec()).collect();
            ensure(got == *want, || format!("restricted sets differ on {c:?}"))?;
        }
        let maximal = classes.iter().any(|k| k.is_maximal && k.members == c);
        let mut g = rest.restrict_fn(f);
        let mut tf = f.to_vec();
        for k in 1..=steps {
            g = brute_upper(rf, &g);
            tf = brute_upper(fam, &tf);
            let tfc = rest.restrict_fn(&tf);
            ensure(le(&g, &tfc), || format!("restriction inequality fails on {c:?} at n={k}"))?;
            if maximal {
                ensure(g == tfc, || format!("maximal-class equality fails on {c:?} at n={k}"))?;
            }
        }
    }
    Ok(())
}

/// `(T̄|_C)|_D = T̄|_D` whenever both sides are well defined.
pub fn check_nested(fam: &CredalFamily) -> Result<usize, String> {
    let mut checked = 0;
    for c in nonempty_subsets(fam.len()) {
        if brute_restricted_sets(fam, &c).is_none() {
            continue;
        }
        for d in nonempty_subsets(fam.len()).filter(|d| d.is_subset(&c)) {
            if brute_restricted_sets(fam, &d).is_none() {
                continue;
            }
            let ok = imc::nested_restriction_check(fam, &c, &d).map_err(|e| format!("{c:?} ⊇ {d:?}: {e}"))?;
            ensure(ok, || format!("nested restriction differs for {c:?} ⊇ {d:?}"))?;
            checked += 1;
        }
    }
    Ok(checked)
}

/// The iterated reachability set against `T̲ⁿ𝟙_C > 0` for `n ≤ |X|`, for
/// every closed set `C`.
pub fn check_lower_reach(fam: &CredalFamily) -> Check {
    let n = fam.len();
    for c in nonempty_subsets(n) {
        let closed = brute_upper(fam, &indicator_exact(n, &complement(n, &c)))
            .iter()
            .enumerate()
            .all(|(x, v)| !c.contains(&x) || v.is_zero());
        let lib = imc::lower_reach_set(fam, &c);
        if !closed {
            ensure(lib.is_err(), || format!("{c:?} is not closed but was accepted"))?;
            continue;
        }
        let lib = lib.map_err(|e| e.to_string())?;
        let mut brute = c.clone();
        let ind = indicator_exact(n, &c);
        for k in 1..=n {
            let v = brute_lower_n(fam, &ind, k);
            brute.extend((0..n).filter(|&x| v[x].is_positive()));
        }
        ensure(lib.set == brute, || format!("reach set of {c:?}: {:?} vs brute {brute:?}", lib.set))?;
        ensure(lib.sequence.len() <= n - c.len() + 1, || "too many reachability steps".into())?;
    }
    Ok(())
}

/// Periods by the definition: gcd of the lengths `k ≤ 2m²` with a closed
/// walk at the root.
pub fn brute_period(adj: &[Vec<usize>], class: &StateSet) -> Option<usize> {
    let m = class.len();
    let root = *class.iter().next()?;
    let mut reach: BTreeSet<usize> = [root].into();
    let mut period = 0usize;
    for k in 1..=2 * m * m {
        reach = reach
            .iter()
            .flat_map(|&u| adj[u].iter().copied().filter(|v| class.contains(v)))
            .collect();
        if reach.contains(&root) {
            period = gcd(period, k);
        }
    }
    (period > 0).then_some(period)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
