//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits non-zero on a FAIL only when `HGD_ACCEPTANCE_STRICT` is set, so the
//! report is always printed in full under `cargo test`.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use hgd_core::approx::fhd_to_ghd_degree;
use hgd_core::augment::{self, solve_ghd, GhdMode, GhdOptions, DEFAULT_SUBEDGE_BUDGET};
use hgd_core::covers::{self, EdgeWeighting};
use hgd_core::decomp::{validate, Condition, DecompKind, DecompositionTree};
use hgd_core::fhd::{solve_fhd, FhdOptions};
use hgd_core::hardness::{gadget_h0, pad_width, reduce_3sat, witness_ghd, CnfFormula};
use hgd_core::hd::{self, solve_hd};
use hgd_core::io;
use hgd_core::oracle::{brute_value, brute_width};
use hgd_core::properties;
use hgd_core::random;
use hgd_core::rational::{int, ratio};
use hgd_core::{Hypergraph, Rational, VertexSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(edges: &[(&str, &[&str])]) -> Hypergraph {
    Hypergraph::build(edges.iter().map(|(n, vs)| (*n, vs.to_vec()))).unwrap()
}

fn triangle() -> Hypergraph {
    build(&[("e1", &["a", "b"]), ("e2", &["b", "c"]), ("e3", &["a", "c"])])
}

fn clique(n: usize) -> Hypergraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((format!("e{i}_{j}"), vec![format!("v{i}"), format!("v{j}")]));
        }
    }
    Hypergraph::build(edges).unwrap()
}

fn fixtures() -> Vec<(String, Hypergraph)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "hg"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), io::parse_hypergraph(&text).unwrap())
        })
        .collect()
}

fn show(r: &Rational) -> String {
    hgd_core::rational::display(r)
}

fn c1_clique_covers() -> Outcome {
    for n in 1..=4usize {
        let k = clique(2 * n);
        let all = k.all_vertices();
        let rho = covers::rho(&k, &all).map_err(|e| e.to_string())?;
        let rho_star = covers::rho_star(&k, &all).map_err(|e| e.to_string())?;
        if rho != n || rho_star != int(n as i64) {
            return Err(format!("K_{}: rho = {rho}, rho* = {}", 2 * n, show(&rho_star)));
        }
    }
    Ok("rho(K_2n) = rho*(K_2n) = n for n = 1..4".into())
}

fn c2_triangle_fhw() -> Outcome {
    let t = triangle();
    let opts = FhdOptions {
        rank_mode: true,
        ..Default::default()
    };
    let at = ratio(3, 2);
    let below = &at - ratio(1, 1000);
    let yes = solve_fhd(&t, &at, &opts).map_err(|e| e.to_string())?;
    let no = solve_fhd(&t, &below, &opts).map_err(|e| e.to_string())?;
    let d = yes.decomposition.ok_or("solve_fhd rejected k = 3/2")?;
    if yes.c != 3 {
        return Err(format!("rank mode used c = {}", yes.c));
    }
    if !validate(&t, &d, &at).unwrap().is_empty() {
        return Err("witness at 3/2 does not validate".into());
    }
    if no.decomposition.is_some() {
        return Err("solve_fhd accepted k = 1499/1000".into());
    }
    let b_yes = brute_width(&t, &at, DecompKind::Fhd).unwrap().is_some();
    let b_no = brute_width(&t, &below, DecompKind::Fhd).unwrap().is_some();
    if !b_yes || b_no {
        return Err(format!("oracle verdicts {b_yes}/{b_no}"));
    }
    Ok("accept at 3/2 (c = 3), reject at 1499/1000; oracle agrees".into())
}

fn c3_hd_agreement() -> Outcome {
    let mut r = rng(3);
    let mut checks = 0;
    for i in 0..120 {
        let h = random::hypergraph(&mut r, 7, 6);
        for k in 1..=3 {
            let got = solve_hd(&h, k).unwrap();
            let want = brute_width(&h, &int(k as i64), DecompKind::Hd).unwrap().is_some();
            if got.is_some() != want {
                return Err(format!("instance {i}, k = {k}: solver {}, oracle {want}", got.is_some()));
            }
            if let Some(d) = got {
                if !validate(&h, &d, &int(k as i64)).unwrap().is_empty() {
                    return Err(format!("instance {i}, k = {k}: HD does not validate"));
                }
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} verdicts on 120 hypergraphs, 0 disagreements"))
}

fn c4_ghd_agreement() -> Outcome {
    let mut r = rng(4);
    let mut checks = 0;
    for i in 0..110 {
        let h = random::hypergraph_with_iwidth(&mut r, 7, 6, 2);
        let (ghw, _) = brute_value(&h, DecompKind::Ghd).unwrap();
        let hw = int(hd::hw(&h) as i64);
        for k in 1..=3usize {
            let out = solve_ghd(&h, k, GhdMode::Bip, &GhdOptions::default()).map_err(|e| e.to_string())?;
            let want = ghw <= int(k as i64);
            if out.decomposition.is_some() != want {
                return Err(format!("instance {i}, k = {k}: solver {}, ghw = {}", !want, show(&ghw)));
            }
            if let Some(d) = &out.decomposition {
                if !validate(&h, d, &int(k as i64)).unwrap().is_empty() {
                    return Err(format!("instance {i}, k = {k}: GHD does not validate"));
                }
            }
            let set = augment::f_bip(&h, k, DEFAULT_SUBEDGE_BUDGET).map_err(|e| e.to_string())?;
            let aug = augment::augment(&h, &set);
            let hw_aug = int(hd::hw(&aug.hypergraph) as i64);
            if !(ghw <= hw_aug && hw_aug <= hw) {
                return Err(format!(
                    "instance {i}, k = {k}: ghw {} / hw(H+f) {} / hw {}",
                    show(&ghw),
                    show(&hw_aug),
                    show(&hw)
                ));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} verdicts on 110 hypergraphs with iwidth <= 2, 0 disagreements; sandwich holds"))
}

/// Checks the witness against the scheme independently of the builder.
fn check_witness(phi: &CnfFormula, sigma: &[bool]) -> std::result::Result<usize, String> {
    let (h, lay) = reduce_3sat(phi).map_err(|e| e.to_string())?;
    let d = witness_ghd(&h, &lay, sigma).map_err(|e| e.to_string())?;
    if !validate(&h, &d, &int(2)).unwrap().is_empty() || d.width() != int(2) {
        return Err("witness is not a width-2 GHD".into());
    }
    let z: VertexSet = sigma
        .iter()
        .enumerate()
        .map(|(i, &b)| h.vertex_id(&if b { format!("y_{}", i + 1) } else { format!("yp_{}", i + 1) }).unwrap())
        .collect();
    for (idx, &(i, j)) in lay.positions[..lay.positions.len() - 1].iter().enumerate() {
        let node = d.node(4 + idx);
        if !z.is_subset(&node.bag) {
            return Err(format!("Z missing from u_({i},{j})"));
        }
        let k = phi.clauses[j - 1].iter().position(|&(v, pos)| sigma[v - 1] == pos).unwrap() + 1;
        let want = vec![format!("e_{k}_0_{i}_{j}"), format!("e_{k}_1_{i}_{j}")];
        let got: Vec<String> = h.edge_names_of(&node.cover.support()).into_iter().map(String::from).collect();
        if got != want {
            return Err(format!("u_({i},{j}) uses {got:?}, expected {want:?}"));
        }
    }
    Ok(d.len())
}

fn c5_reduction_witness() -> Outcome {
    let example = CnfFormula::parse("(x1 | !x2 | x3) & (!x1 | x2 | !x3)").unwrap();
    let sigma = [true, false, false];
    let nodes = check_witness(&example, &sigma)?;
    if nodes != 25 {
        return Err(format!("example witness has {nodes} nodes"));
    }
    let (h, lay) = reduce_3sat(&example).unwrap();
    if lay.z(&sigma) != ["y_1", "yp_2", "yp_3"] {
        return Err(format!("Z = {:?}", lay.z(&sigma)));
    }
    let d = witness_ghd(&h, &lay, &sigma).unwrap();
    let u = d.node(4 + lay.positions.iter().position(|&p| p == (1, 2)).unwrap());
    if h.edge_names_of(&u.cover.support()) != ["e_3_0_1_2", "e_3_1_1_2"] {
        return Err("clause 2 does not use its third literal".into());
    }
    let mut r = rng(5);
    for t in 0..25 {
        let n = r.gen_range(1..=4);
        let m = r.gen_range(1..=3);
        let (phi, sigma) = random::satisfiable_cnf(&mut r, n, m);
        check_witness(&phi, &sigma).map_err(|e| format!("formula {t}: {e}"))?;
    }
    Ok("example: 25 nodes, Z = {y_1, yp_2, yp_3}; 25 random satisfiable formulas validate at width 2".into())
}

fn c6_gadget() -> Outcome {
    let h = gadget_h0(&["m".into()], &["mp".into()]).map_err(|e| e.to_string())?;
    let (fhw, d) = brute_value(&h, DecompKind::Fhd).unwrap();
    if fhw != int(2) {
        return Err(format!("fhw = {}", show(&fhw)));
    }
    if !validate(&h, &d, &int(2)).unwrap().is_empty() {
        return Err("oracle FHD does not validate".into());
    }
    let set = |names: &[&str]| h.vertex_set(names).unwrap();
    let qa = set(&["a1", "a2", "b1", "b2"]);
    let qb = set(&["b1", "b2", "c1", "c2", "m", "mp"]);
    let qc = set(&["c1", "c2", "d1", "d2"]);
    let holding = |q: &VertexSet| (0..d.len()).filter(|&u| q.is_subset(&d.node(u).bag)).collect::<Vec<_>>();
    let path = |mut u: usize, mut v: usize| {
        let depth = |mut x: usize| {
            let mut n = 0;
            while let Some(p) = d.node(x).parent {
                x = p;
                n += 1;
            }
            n
        };
        let mut nodes = vec![u, v];
        let (mut du, mut dv) = (depth(u), depth(v));
        while u != v {
            if du >= dv {
                u = d.node(u).parent.unwrap();
                du -= 1;
                nodes.push(u);
            } else {
                v = d.node(v).parent.unwrap();
                dv -= 1;
                nodes.push(v);
            }
        }
        nodes
    };
    let found = holding(&qa).into_iter().any(|ua| {
        holding(&qc)
            .into_iter()
            .any(|uc| holding(&qb).into_iter().any(|ub| path(ua, uc).contains(&ub)))
    });
    if !found {
        return Err("no u_A, u_B, u_C with M in B(u_B) and u_B between".into());
    }
    Ok(format!("fhw = 2; {}-node witness has the three clique nodes with M in the middle", d.len()))
}

fn c7_vc_invariant() -> Outcome {
    let mut r = rng(7);
    for i in 0..220 {
        let h = random::hypergraph(&mut r, 10, 8);
        let vc = properties::vc_dimension(&h, 16).unwrap();
        for c in [2, 3] {
            let mi = properties::c_miwidth(&h, c);
            if vc > c + mi {
                return Err(format!("instance {i}: vc = {vc} > {c} + {mi}"));
            }
        }
    }
    for n in 3..=10 {
        let h = random::complement_family(n);
        let vc = properties::vc_dimension(&h, 16).unwrap();
        if vc > 2 {
            return Err(format!("H_{n}: vc = {vc}"));
        }
        for c in [2, 3].into_iter().filter(|&c| c < n) {
            if properties::c_miwidth(&h, c) != n - c {
                return Err(format!("H_{n}: {c}-miwidth = {}", properties::c_miwidth(&h, c)));
            }
        }
    }
    Ok("220 random hypergraphs, 0 violations; H_3..H_10 match".into())
}

fn c8_degree_rounding() -> Outcome {
    let mut r = rng(8);
    let opts = FhdOptions {
        rank_mode: true,
        ..Default::default()
    };
    for i in 0..110 {
        let h = random::hypergraph(&mut r, 6, 5);
        let (fhw, _) = brute_value(&h, DecompKind::Fhd).unwrap();
        let f = solve_fhd(&h, &fhw, &opts)
            .map_err(|e| e.to_string())?
            .decomposition
            .ok_or(format!("instance {i}: solve_fhd rejected k = fhw = {}", show(&fhw)))?;
        let g = fhd_to_ghd_degree(&h, &f).map_err(|e| e.to_string())?;
        let bound = f.width() * Rational::from_integer((properties::degree(&h) as i64).into());
        if g.kind != DecompKind::Ghd || !validate(&h, &g, &bound).unwrap().is_empty() || g.width() > bound {
            return Err(format!("instance {i}: rounded GHD exceeds d * width or does not validate"));
        }
        if g.nodes().iter().zip(f.nodes()).any(|(a, b)| a.bag != b.bag || a.parent != b.parent) {
            return Err(format!("instance {i}: tree or bags changed"));
        }
    }
    Ok("110 (H, F) pairs; every rounding validates within d * width(F)".into())
}

fn c9_chain() -> Outcome {
    let mut items = fixtures();
    let n_fix = items.len();
    let mut r = rng(9);
    for i in 0..60 {
        items.push((format!("random{i}"), random::hypergraph(&mut r, 7, 6)));
    }
    for (name, h) in &items {
        let (fhw, _) = brute_value(h, DecompKind::Fhd).unwrap();
        let (ghw, _) = brute_value(h, DecompKind::Ghd).unwrap();
        let (hw, _) = brute_value(h, DecompKind::Hd).unwrap();
        if int(hd::hw(h) as i64) != hw {
            return Err(format!("{name}: solver hw differs from oracle"));
        }
        if !(fhw <= ghw && ghw <= hw) {
            return Err(format!("{name}: fhw {} ghw {} hw {}", show(&fhw), show(&ghw), show(&hw)));
        }
    }
    Ok(format!("{} fixtures and 60 random hypergraphs satisfy fhw <= ghw <= hw", n_fix))
}

fn c10_padding() -> Outcome {
    let mut bases = vec![
        ("single edge".to_string(), build(&[("e", &["a", "b"])])),
        ("triangle".to_string(), triangle()),
        ("path".to_string(), build(&[("e1", &["a", "b", "c"]), ("e2", &["c", "d"])])),
    ];
    let mut r = rng(10);
    for i in 0..2 {
        bases.push((format!("random{i}"), random::hypergraph(&mut r, 6, 4)));
    }
    let mut failures = Vec::new();
    let mut checks = 0;
    for (name, h) in &bases {
        let (base, _) = brute_value(h, DecompKind::Fhd).unwrap();
        for (l, q) in [(1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2)] {
            if q == 0 && h.num_vertices() + 2 * l > 12 {
                continue;
            }
            let p = pad_width(h, l, q).map_err(|e| e.to_string())?;
            let (padded, _) = brute_value(&p, DecompKind::Fhd).unwrap();
            let shift = if q == 0 { int(l as i64) } else { ratio(l as i64, q as i64) };
            checks += 1;
            if padded != &base + &shift {
                failures.push(format!("{name} l={l} q={q}: {} -> {}", show(&base), show(&padded)));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checks} padded instances shift by exactly l or l/q"))
    } else {
        Err(format!("{}/{checks} off: {}", failures.len(), failures.join("; ")))
    }
}

enum Mutation {
    DropVertex,
    EmptyLeaf,
    DetachedCopy,
    Inflate,
    HalfWeight,
    LeakEdge,
}

fn mutate(h: &Hypergraph, d: &DecompositionTree, m: &Mutation, r: &mut ChaCha8Rng) -> Option<(DecompositionTree, Condition)> {
    let mut t = d.clone();
    let pick = |r: &mut ChaCha8Rng, n: usize| r.gen_range(0..n);
    match m {
        Mutation::DropVertex => {
            let v = pick(r, h.num_vertices());
            for u in 0..t.len() {
                t.node_mut(u).bag.remove(v);
            }
            Some((t, Condition::EdgeCoverage))
        }
        Mutation::EmptyLeaf => {
            let u = pick(r, t.len());
            let v = t.node(u).bag.first()?;
            t.add_child(u, VertexSet::singleton(v), EdgeWeighting::new());
            Some((t, Condition::BagCover))
        }
        Mutation::DetachedCopy => {
            let v = pick(r, h.num_vertices());
            let e = h.incident(v).first()?;
            let gap = t.add_child(0, VertexSet::new(), EdgeWeighting::new());
            t.add_child(gap, VertexSet::singleton(v), EdgeWeighting::integral(&[e].into_iter().collect()));
            Some((t, Condition::Connectedness))
        }
        Mutation::Inflate => {
            let k = t.width();
            let u = (0..t.len()).find(|&u| t.node(u).cover.weight() == k)?;
            let e = (0..h.num_edges()).find(|&e| t.node(u).cover.get(e) < int(1))?;
            t.node_mut(u).cover.set(e, int(1)).unwrap();
            Some((t, Condition::Width))
        }
        Mutation::HalfWeight => {
            if d.kind == DecompKind::Fhd {
                return None;
            }
            let u = pick(r, t.len());
            let e = t.node(u).cover.support().first()?;
            t.node_mut(u).cover.set(e, ratio(1, 2)).unwrap();
            Some((t, Condition::Integrality))
        }
        Mutation::LeakEdge => {
            if d.kind != DecompKind::Hd {
                return None;
            }
            let sub = t.subtree_vertices();
            let (u, e) = (0..t.len()).find_map(|u| {
                (0..h.num_edges())
                    .find(|&e| {
                        t.node(u).cover.get(e) < int(1)
                            && !h.edge(e).vertices.intersection(&sub[u]).is_subset(&t.node(u).bag)
                    })
                    .map(|e| (u, e))
            })?;
            t.node_mut(u).cover.set(e, int(1)).unwrap();
            Some((t, Condition::Special))
        }
    }
}

fn c11_round_trip_and_fuzz() -> Outcome {
    let mut r = rng(11);
    let kinds = [DecompKind::Hd, DecompKind::Ghd, DecompKind::Fhd];
    let mutations = [
        Mutation::DropVertex,
        Mutation::EmptyLeaf,
        Mutation::DetachedCopy,
        Mutation::Inflate,
        Mutation::HalfWeight,
        Mutation::LeakEdge,
    ];
    let mut trees = Vec::new();
    for i in 0..1000 {
        let h = random::hypergraph(&mut r, 6, 5);
        let kind = kinds[i % 3];
        let (w, d) = brute_value(&h, kind).unwrap();
        let hg_text = io::write_hypergraph(&h);
        let h2 = io::parse_hypergraph(&hg_text).map_err(|e| e.to_string())?;
        if io::write_hypergraph(&h2) != hg_text {
            return Err(format!("round trip {i}: hypergraph text changed"));
        }
        let text = io::write_decomposition(&h, &d);
        let parsed = io::parse_decomposition(&h2, &text).map_err(|e| format!("round trip {i}: {e}"))?;
        if io::write_decomposition(&h2, &parsed.tree) != text || !parsed.warnings.is_empty() {
            return Err(format!("round trip {i}: decomposition text changed"));
        }
        if parsed.tree.width() != w || !validate(&h2, &parsed.tree, &w).unwrap().is_empty() {
            return Err(format!("round trip {i}: re-read tree does not validate at width {}", show(&w)));
        }
        trees.push((h, d));
    }
    let mut checked = 0;
    let mut attempt = 0;
    while checked < 500 {
        let (h, d) = &trees[attempt % trees.len()];
        let m = &mutations[attempt % mutations.len()];
        attempt += 1;
        let Some((t, expected)) = mutate(h, d, m, &mut r) else {
            continue;
        };
        let violations = validate(h, &t, &d.width()).map_err(|e| e.to_string())?;
        if !violations.iter().any(|v| v.condition == expected) {
            return Err(format!("mutation {attempt}: expected {expected:?}, got {violations:?}"));
        }
        checked += 1;
    }
    Ok(format!("1000 round trips byte-stable; {checked} mutations rejected with the expected class"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 11] = [
        ("clique covers", c1_clique_covers, Some(1)),
        ("triangle fhw", c2_triangle_fhw, Some(5)),
        ("HD oracle agreement", c3_hd_agreement, Some(300)),
        ("GHD augmentation agreement", c4_ghd_agreement, Some(600)),
        ("reduction witness", c5_reduction_witness, Some(60)),
        ("gadget", c6_gadget, Some(600)),
        ("vc invariant", c7_vc_invariant, Some(300)),
        ("degree rounding", c8_degree_rounding, Some(300)),
        ("width chain", c9_chain, None),
        ("padding", c10_padding, Some(600)),
        ("round trip and fuzz", c11_round_trip_and_fuzz, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if took > Duration::from_secs(l) => Err(format!("took {:.1}s, limit {l}s", took.as_secs_f64())),
            (r, _) => r,
        };
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{:>2}] {name}: {detail} ({:.2}s)", i + 1, took.as_secs_f64());
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 && std::env::var_os("HGD_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
