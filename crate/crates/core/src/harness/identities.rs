use std::collections::HashMap;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BoundCheck, HarnessConfig, TheoremId, VerificationReport};
use crate::cochain::{
    build_d, build_delta, build_down_laplacian, build_full_laplacian, build_side_codifferential,
    build_side_differential, build_side_down_laplacian, build_up_laplacian, inner_product, localize,
    nontrivial_projection, norm_sq, restrict, side_flip, side_indicator, Cochain, LinearOperator,
};
use crate::error::Result;
use crate::partition::Partition;
use crate::simplex::{OrderedSimplex, Simplex};
use crate::spectral::{nonzero_spectra_match, spectral_report};
use crate::weights::{factorial, verify_weight_identities, WeightedComplex};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Running maxima of residuals, in first-seen order.
#[derive(Default)]
struct Residuals(Vec<(String, f64)>);

impl Residuals {
    fn record(&mut self, name: &str, value: f64) {
        match self.0.iter_mut().find(|(n, _)| n == name) {
            Some((_, v)) => *v = v.max(value),
            None => self.0.push((name.to_string(), value)),
        }
    }
}

/// Operators on a link, built once per unordered simplex.
struct LinkData {
    link: WeightedComplex,
    d0: Option<LinearOperator>,
    delta_m1: LinearOperator,
    side_down: Vec<LinearOperator>,
}

struct Links<'a> {
    wc: &'a WeightedComplex,
    partition: Option<&'a Partition>,
    cache: HashMap<Simplex, LinkData>,
}

impl<'a> Links<'a> {
    fn get(&mut self, tau: &Simplex) -> Result<&LinkData> {
        if !self.cache.contains_key(tau) {
            let link = self.wc.link(tau)?;
            let d0 = if link.dim() >= 1 { Some(build_d(&link, 0)?) } else { None };
            let delta_m1 = build_delta(&link, -1)?;
            let side_down = match self.partition {
                Some(p) => p
                    .labels()
                    .into_iter()
                    .map(|j| build_side_down_laplacian(&link, &p.restrict(link.complex()), 0, j))
                    .collect::<Result<_>>()?,
                None => Vec::new(),
            };
            self.cache.insert(
                tau.clone(),
                LinkData {
                    link,
                    d0,
                    delta_m1,
                    side_down,
                },
            );
        }
        Ok(&self.cache[tau])
    }
}

/// Every ordering of every `j`-simplex.
fn orderings(wc: &WeightedComplex, j: isize) -> Vec<(Simplex, OrderedSimplex)> {
    wc.complex()
        .simplices(j)
        .iter()
        .flat_map(|s| {
            s.vertices()
                .iter()
                .copied()
                .permutations(s.len())
                .map(move |p| (s.clone(), OrderedSimplex::new(p).expect("distinct vertices")))
        })
        .collect()
}

/// Localization, restriction, Hodge, weight and partite identities on
/// seeded random cochains. Residuals are `|a − b| / max(|a|, |b|, 1)`.
pub fn verify_structural_identities(
    wc: &WeightedComplex,
    partition: Option<&Partition>,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(TheoremId::StructuralIdentities, None);
    r.seed = Some(cfg.seed);
    if let Some(p) = partition {
        p.validate(wc.complex())?;
    }
    let n = wc.dim() as isize;
    let x = wc.complex();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut res = Residuals::default();

    let d: Vec<LinearOperator> = (-1..n).map(|k| build_d(wc, k)).collect::<Result<_>>()?;
    let delta: Vec<LinearOperator> = (-1..n).map(|k| build_delta(wc, k)).collect::<Result<_>>()?;
    let dk = |k: isize| &d[(k + 1) as usize];
    let deltak = |k: isize| &delta[(k + 1) as usize];

    let mut dd: f64 = 0.0;
    for k in -1..n - 1 {
        dd = dd.max(dk(k + 1).compose(dk(k))?.matrix().amax());
    }

    let balance = (-1..n)
        .flat_map(|k| {
            (0..x.count(k)).map(move |i| {
                let w = wc.weights().get(k, i);
                let s: f64 = x.cofaces(k, i).iter().map(|&j| wc.weights().get(k + 1, j)).sum();
                rel(w, s)
            })
        })
        .fold(0.0, f64::max);
    res.record("balance", balance);
    res.record(
        "weight identities over k < l",
        verify_weight_identities(x, wc.weights()).max_relative_error,
    );

    let mut links = Links {
        wc,
        partition,
        cache: HashMap::new(),
    };
    let localization: Vec<Vec<(Simplex, OrderedSimplex)>> =
        (0..=n).map(|k| orderings(wc, k - 1)).collect();
    let side_down: Vec<Vec<LinearOperator>> = match partition {
        Some(p) => (0..=n)
            .map(|k| {
                p.labels()
                    .into_iter()
                    .map(|j| build_side_down_laplacian(wc, p, k, j))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let up0 = if n >= 1 { Some(build_up_laplacian(wc, 0)?) } else { None };
    let down0 = build_down_laplacian(wc, 0)?;
    let one = Cochain::constant(wc, 0, 1.0)?;

    for _ in 0..cfg.samples {
        for k in -1..n {
            let phi = Cochain::random(wc, k, &mut rng)?;
            let psi = Cochain::random(wc, k + 1, &mut rng)?;
            let a = inner_product(wc, &dk(k).apply(&phi)?, &psi)?;
            let b = inner_product(wc, &phi, &deltak(k).apply(&psi)?)?;
            res.record("adjointness <dφ,ψ> = <φ,δψ>", rel(a, b));
        }
        for k in 0..=n {
            let phi = Cochain::random(wc, k, &mut rng)?;
            let psi = Cochain::random(wc, k, &mut rng)?;
            let lap = build_full_laplacian(wc, k)?;
            let a = inner_product(wc, &lap.apply(&phi)?, &psi)?;
            let b = inner_product(wc, &phi, &lap.apply(&psi)?)?;
            res.record("full Laplacian self-adjoint", rel(a, b));

            if k <= 3 {
                let mut ordered = 0.0;
                for (s, o) in orderings(wc, k) {
                    let m = wc.weights().of(x, &s).expect("simplex of X");
                    ordered += m / factorial((k + 1) as usize) * phi.eval(wc, &o)? * psi.eval(wc, &o)?;
                }
                res.record(
                    "ordered inner product collapses to canonical",
                    rel(ordered, inner_product(wc, &phi, &psi)?),
                );
            }

            let kf = factorial(k as usize);
            let mut sum_inner = 0.0;
            let mut sum_delta = 0.0;
            let mut sum_d = 0.0;
            let mut sum_side = vec![0.0; side_down.first().map_or(0, |s| s.len())];
            for (tau, ordered) in &localization[k as usize] {
                let data = links.get(tau)?;
                let lphi = localize(wc, &data.link, &phi, ordered)?;
                let lpsi = localize(wc, &data.link, &psi, ordered)?;
                let l = &data.link;
                sum_inner += inner_product(l, &lphi, &lpsi)?;
                sum_delta += inner_product(l, &data.delta_m1.apply(&lphi)?, &data.delta_m1.apply(&lpsi)?)?;
                if let Some(d0) = &data.d0 {
                    sum_d += inner_product(l, &d0.apply(&lphi)?, &d0.apply(&lpsi)?)?;
                }
                for (acc, op) in sum_side.iter_mut().zip(&data.side_down) {
                    *acc += inner_product(l, &op.apply(&lphi)?, &lphi)?;
                }
            }
            let ip = inner_product(wc, &phi, &psi)?;
            res.record("localization: Σ_τ <φ_τ,ψ_τ> = (k+1)!<φ,ψ>", rel(factorial((k + 1) as usize) * ip, sum_inner));
            let dphi = deltak(k - 1).apply(&phi)?;
            let dpsi = deltak(k - 1).apply(&psi)?;
            res.record(
                "localization: Σ_τ <δφ_τ,δψ_τ> = k!<δφ,δψ>",
                rel(kf * inner_product(wc, &dphi, &dpsi)?, sum_delta),
            );
            if k < n {
                let dd = inner_product(wc, &dk(k).apply(&phi)?, &dk(k).apply(&psi)?)?;
                let kk = k as f64;
                res.record(
                    "localization: Σ_τ <dφ_τ,dψ_τ> - k/(k+1) Σ_τ <φ_τ,ψ_τ> = k!<dφ,dψ>",
                    rel(kf * dd, sum_d - kk / (kk + 1.0) * sum_inner),
                );
                if k >= 1 {
                    res.record("localization: Σ_τ <dφ_τ,dψ_τ> = k!<dφ,dψ> + k·k!<φ,ψ>", rel(kf * dd + kf * kk * ip, sum_d));
                }
            }
            for (j, acc) in sum_side.iter().enumerate() {
                let op = &side_down[k as usize][j];
                let lhs = kf * inner_product(wc, &op.apply(&phi)?, &phi)?;
                res.record("partite localization: Σ_τ <Δ⁻_(τ,j)φ_τ,φ_τ> = k!<Δ⁻_(k,j)φ,φ>", rel(lhs, *acc));
            }
        }

        for k in 0..n {
            let phi = Cochain::random(wc, k, &mut rng)?;
            let psi = Cochain::random(wc, k, &mut rng)?;
            let ip = inner_product(wc, &phi, &psi)?;
            for l in 0..=(n - k - 1) {
                let mut sum = 0.0;
                for tau in x.simplices(l) {
                    let data = links.get(tau)?;
                    let a = restrict(wc, &data.link, &phi, tau)?;
                    let b = restrict(wc, &data.link, &psi, tau)?;
                    sum += inner_product(&data.link, &a, &b)?;
                }
                // each of the (l+1)! orderings of τ restricts identically
                res.record("restriction: <φ,ψ> = (l+1)! Σ_τ <φ^τ,ψ^τ>", rel(ip, factorial((l + 1) as usize) * sum));
            }
        }

        let phi = Cochain::random(wc, 0, &mut rng)?;
        let psi = Cochain::random(wc, 0, &mut rng)?;
        if n >= 2 {
            let dd = inner_product(wc, &dk(0).apply(&phi)?, &dk(0).apply(&psi)?)?;
            for l in 0..=(n - 2) {
                let mut sum = 0.0;
                for tau in x.simplices(l) {
                    let data = links.get(tau)?;
                    let d0 = data.d0.as_ref().expect("link of dimension >= 1");
                    let a = d0.apply(&restrict(wc, &data.link, &phi, tau)?)?;
                    let b = d0.apply(&restrict(wc, &data.link, &psi, tau)?)?;
                    sum += inner_product(&data.link, &a, &b)?;
                }
                res.record("restriction: <dφ,dψ> = (l+1)! Σ_τ <dφ^τ,dψ^τ>", rel(dd, factorial((l + 1) as usize) * sum));
            }
        }

        let down = down0.apply(&phi)?;
        let quad = inner_product(wc, &down, &phi)?;
        res.record("degree 0: <Δ⁻φ,φ> = |δφ|²", rel(quad, norm_sq(wc, &deltak(-1).apply(&phi)?)));
        res.record("degree 0: <Δ⁻φ,φ> = |Δ⁻φ|²", rel(quad, norm_sq(wc, &down)));
        let coeff = inner_product(wc, &phi, &one)? / norm_sq(wc, &one);
        let proj = (down.values() - one.values() * coeff).amax();
        res.record("degree 0: Δ⁻φ is the projection on constants", proj / phi.values().amax().max(1.0));

        if let (Some(p), Some(up0)) = (partition, &up0) {
            let nf = n as f64;
            let mut norms = 0.0;
            let mut energy = 0.0;
            for i in p.labels() {
                let fi = side_flip(wc, p, &phi, i)?;
                norms += norm_sq(wc, &fi);
                energy += inner_product(wc, &fi, &up0.apply(&fi)?)?;
            }
            res.record("side flip norms", rel(norms, (nf * nf + nf) * norm_sq(wc, &phi)));
            let rhs = (nf + 1.0) * (nf + 1.0) * norm_sq(wc, &phi)
                - (nf + 1.0) * inner_product(wc, &phi, &up0.apply(&phi)?)?;
            res.record("side flip energies", rel(energy, rhs));

            let proj = nontrivial_projection(wc, p, &phi)?;
            let again = nontrivial_projection(wc, p, &proj)?;
            res.record("non-trivial projection idempotent", (again.values() - proj.values()).amax());
            for j in p.labels() {
                let chi = side_indicator(wc, p, j)?;
                let flipped = side_flip(wc, p, &proj, j)?;
                let scale = (norm_sq(wc, &phi) * norm_sq(wc, &chi)).sqrt().max(1.0);
                res.record(
                    "non-trivial projection orthogonal to sides",
                    inner_product(wc, &proj, &chi)?.abs() / scale,
                );
                let scale = (norm_sq(wc, &flipped) * norm_sq(wc, &chi)).sqrt().max(1.0);
                let leak = p
                    .labels()
                    .into_iter()
                    .map(|s| Ok(inner_product(wc, &flipped, &side_indicator(wc, p, s)?)?.abs()))
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(0.0, f64::max);
                res.record("side flip preserves the non-trivial space", leak / scale);
            }
            for k in -1..n {
                for j in p.labels() {
                    let dj = build_side_differential(wc, p, k, j)?;
                    let delta_j = build_side_codifferential(wc, p, k, j)?;
                    let a = Cochain::random(wc, k, &mut rng)?;
                    let b = Cochain::random(wc, k + 1, &mut rng)?;
                    res.record(
                        "side adjointness",
                        rel(
                            inner_product(wc, &dj.apply(&a)?, &b)?,
                            inner_product(wc, &a, &delta_j.apply(&b)?)?,
                        ),
                    );
                }
            }
        }
    }

    for k in 0..=n {
        let up = spectral_report(&build_up_laplacian(wc, k - 1)?, "up", cfg.zero_tolerance)?;
        let down = spectral_report(&build_down_laplacian(wc, k)?, "down", cfg.zero_tolerance)?;
        let diff = if nonzero_spectra_match(&up, &down, f64::INFINITY) {
            up.nonzero()
                .iter()
                .zip(down.nonzero())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        } else {
            r.discrepancies.push(format!("k={k}: nonzero spectra of Δ⁺_(k-1) and Δ⁻_k differ in size"));
            1.0
        };
        res.record("nonzero spectra of Δ⁺_(k-1) and Δ⁻_k agree", diff);
    }

    if let Some(p) = partition {
        let mut side_sum: f64 = 0.0;
        for k in -1..n {
            let mut acc = LinearOperator::zero(wc, k, k + 1)?;
            for j in p.labels() {
                acc = acc.add(&build_side_differential(wc, p, k, j)?)?;
            }
            side_sum = side_sum.max((acc.matrix() - dk(k).matrix()).amax());
        }
        r.check(BoundCheck::at_most("Σ_j d_(k,j) = d_k (exact)", side_sum, 0.0, 0.0));
    }

    r.check(BoundCheck::at_most("d∘d = 0 (exact)", dd, 0.0, 0.0));
    for (name, value) in res.0 {
        r.check(BoundCheck::at_most(name, value, 0.0, cfg.tolerance));
    }
    Ok(r.finish())
}
