//! Fractional hypertree decompositions with a bounded fractional part.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::augment::{self, Augmented, DEFAULT_SUBEDGE_BUDGET};
use crate::decomp::{lift_to_original, DecompositionTree};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::properties;
use crate::rational::{self, Rational};
use crate::search::{Search, SearchParams, SearchStats};

/// Searches `h` itself for an FHD of width at most `k` whose bags have at
/// most `c` vertices outside the integrally covered part and which satisfies
/// the weak special condition.
pub fn fracdecomp(h: &Hypergraph, k: &Rational, c: usize, strict: bool) -> Result<(Option<DecompositionTree>, SearchStats)> {
    check_k(k)?;
    let params = SearchParams {
        k: k.clone(),
        c,
        integral: false,
        strict,
        no_integral_part: false,
    };
    let mut search = Search::new(h, params);
    let d = search.run();
    Ok((d, search.stats))
}

fn check_k(k: &Rational) -> Result<()> {
    if *k < rational::one() {
        return Err(Error::InvalidArgument(format!("k must be at least 1, got {}", rational::display(k))));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CChoice {
    Explicit(usize),
    #[default]
    Auto,
}

#[derive(Clone, Debug, Default)]
pub struct FhdOptions {
    pub c: CChoice,
    /// Cover every bag fractionally with `c = ⌊k·rank⌋` and no augmentation.
    pub rank_mode: bool,
    pub strict: bool,
    pub budget: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct FhdOutcome {
    /// FHD over the input hypergraph.
    pub decomposition: Option<DecompositionTree>,
    /// The witness before lifting, over the augmented hypergraph.
    pub augmented: Option<(Augmented, DecompositionTree)>,
    /// The `c` of the accepting run, or the last one tried.
    pub c: usize,
    pub iwidth: usize,
    pub degree: usize,
    pub rank: usize,
    /// Largest `c` tried when `c` was chosen automatically.
    pub auto_cap: Option<usize>,
    pub stats: SearchStats,
}

/// Decides whether `h` has an FHD of width at most `k` of the searched
/// shape, trying `c = 0, 1, …` up to `max(8, ⌈k·rank⌉)` in auto mode.
pub fn solve_fhd(h: &Hypergraph, k: &Rational, opts: &FhdOptions) -> Result<FhdOutcome> {
    check_k(k)?;
    let iwidth = properties::iwidth(h);
    let degree = properties::degree(h);
    let rank = properties::rank(h);
    let mut out = FhdOutcome {
        decomposition: None,
        augmented: None,
        c: 0,
        iwidth,
        degree,
        rank,
        auto_cap: None,
        stats: SearchStats::default(),
    };
    let kr = k * Rational::from_integer(rank.into());

    if opts.rank_mode {
        let c = rational::floor_usize(&kr);
        let params = SearchParams {
            k: k.clone(),
            c,
            integral: false,
            strict: opts.strict,
            no_integral_part: true,
        };
        let mut search = Search::new(h, params);
        out.decomposition = search.run();
        out.stats = search.stats;
        out.c = c;
        return Ok(out);
    }

    let cs: Vec<usize> = match opts.c {
        CChoice::Explicit(c) => vec![c],
        CChoice::Auto => {
            let cap = rational::ceil_usize(&kr).max(8);
            out.auto_cap = Some(cap);
            (0..=cap).collect()
        }
    };
    let budget = opts.budget.unwrap_or(DEFAULT_SUBEDGE_BUDGET);
    for c in cs {
        out.c = c;
        let aug = augment::augment_fractional(h, k, c, budget)?;
        let (d, stats) = fracdecomp(&aug.hypergraph, k, c, opts.strict)?;
        out.stats = stats;
        if let Some(d) = d {
            out.decomposition = Some(lift_to_original(h, &aug, &d)?);
            out.augmented = Some((aug, d));
            break;
        }
    }
    Ok(out)
}

/// The fractional-part constant for width `k`, degree `d` and intersection
/// width `i`: with `n = k·d`, `r₀ = n` and `r_{l+1} = r_l + d·i·(r_l + (d-1)·n)`,
/// the value is `k·d·r_n·i`.
pub fn c_bound(k: u64, d: u64, i: u64) -> BigUint {
    let n = k * d;
    let bn = BigUint::from(n);
    let di = BigUint::from(d) * BigUint::from(i);
    let shift = BigUint::from(d.saturating_sub(1)) * &bn;
    if di.is_zero() {
        return BigUint::zero();
    }
    let mut r = bn;
    for _ in 0..n {
        r = &r + &di * (&r + &shift);
    }
    BigUint::from(k) * BigUint::from(d) * r * BigUint::from(i)
}
