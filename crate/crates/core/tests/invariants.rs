use posetal::enumerate::{catalog_up_to, labeled_posets, CatalogKind};
use posetal::incidence::{Coalgebra, Flavor, Monomial};
use posetal::maps::pullback;
use posetal::species::{self, LINEAR_TREES, TREES};
use posetal::{
    are_isomorphic, canonical_form, catalog, enumerate_collapses, enumerate_contractions, enumerate_downsets,
    OrderMap, Relation, Subset,
};

fn subsets(n: usize) -> impl Iterator<Item = Subset> {
    (0..1u32 << n).map(Subset::from_mask)
}

fn functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|f| (0..m).map(move |y| [f.clone(), vec![y]].concat())).collect();
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn posets_up_to(n: usize) -> impl Iterator<Item = &'static Relation> {
    (1..=n).flat_map(|k| labeled_posets(k).iter())
}

/// Definitions written out directly, independent of the library's own.
mod naive {
    use super::*;

    pub fn lt(p: &Relation, a: usize, b: usize) -> bool {
        a != b && p.le(a, b)
    }

    pub fn covers(p: &Relation) -> Vec<(usize, usize)> {
        let n = p.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(p, a, b) && !(0..n).any(|c| lt(p, a, c) && lt(p, c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn convex(p: &Relation, s: &[usize]) -> bool {
        (0..p.n()).all(|z| {
            s.contains(&z) || !s.iter().any(|&a| s.iter().any(|&b| p.le(a, z) && p.le(z, b)))
        })
    }

    pub fn connected(p: &Relation, s: &[usize]) -> bool {
        let Some(&first) = s.first() else { return false };
        let mut seen = vec![first];
        let mut i = 0;
        while i < seen.len() {
            let a = seen[i];
            for &b in s {
                if !seen.contains(&b) && (p.le(a, b) || p.le(b, a)) {
                    seen.push(b);
                }
            }
            i += 1;
        }
        seen.len() == s.len()
    }

    pub fn fibre(f: &[usize], y: usize) -> Vec<usize> {
        (0..f.len()).filter(|&x| f[x] == y).collect()
    }

    pub fn monotone(p: &Relation, q: &Relation, f: &[usize]) -> bool {
        (0..p.n()).all(|a| (0..p.n()).all(|b| !p.le(a, b) || q.le(f[a], f[b])))
    }

    pub fn surjective(q: &Relation, f: &[usize]) -> bool {
        (0..q.n()).all(|y| f.contains(&y))
    }

    pub fn contraction(p: &Relation, q: &Relation, f: &[usize]) -> bool {
        monotone(p, q, f)
            && surjective(q, f)
            && (0..q.n()).all(|y| {
                let fib = fibre(f, y);
                convex(p, &fib) && connected(p, &fib)
            })
            && covers(q).iter().all(|&(y, y2)| covers(p).iter().any(|&(a, b)| f[a] == y && f[b] == y2))
    }

    pub fn collapse(p: &Relation, q: &Relation, f: &[usize]) -> bool {
        monotone(p, q, f)
            && surjective(q, f)
            && (0..p.n()).all(|a| (0..p.n()).all(|b| !lt(q, f[a], f[b]) || lt(p, a, b)))
    }

    pub fn isomorphic(a: &Relation, b: &Relation) -> bool {
        a.n() == b.n() && permutations(a.n()).iter().any(|perm| a.relabel(perm) == *b)
    }
}

#[test]
fn convex_subsets_are_closed_under_intersection() {
    for p in posets_up_to(5) {
        let convex: Vec<Subset> = subsets(p.n()).filter(|&s| p.is_convex_subset(s)).collect();
        for &s in &convex {
            assert!(naive::convex(p, &s.to_vec()));
            for &t in &convex {
                assert!(p.is_convex_subset(s.intersection(t)), "{p:?} {s:?} {t:?}");
            }
        }
    }
}

#[test]
fn automorphisms_of_a_doubled_poset() {
    for p in catalog_up_to(CatalogKind::ConnectedPoset, 4).unwrap() {
        let aut = canonical_form(&p).unwrap().aut_count();
        let doubled = canonical_form(&p.disjoint_union(&p)).unwrap().aut_count();
        assert_eq!(doubled, 2 * aut * aut, "{p:?}");
    }
}

#[test]
fn isomorphism_agrees_with_brute_force() {
    for n in 1..=5 {
        let reps = catalog_up_to(CatalogKind::Poset, n).unwrap();
        let reps: Vec<&Relation> = reps.iter().filter(|r| r.n() == n).collect();
        for p in labeled_posets(n) {
            let matches: Vec<bool> = reps.iter().map(|r| are_isomorphic(p, r).unwrap()).collect();
            assert_eq!(matches.iter().filter(|&&m| m).count(), 1, "{p:?}");
            for (r, m) in reps.iter().zip(matches) {
                if m || n <= 4 {
                    assert_eq!(naive::isomorphic(p, r), m, "{p:?} vs {r:?}");
                }
            }
        }
    }
}

#[test]
fn classification_agrees_with_brute_force() {
    for p in posets_up_to(4) {
        for q in posets_up_to(3) {
            for f in functions(p.n(), q.n()) {
                let map = OrderMap::new(p.clone(), q.clone(), f.clone()).unwrap();
                let class = map.classify();
                assert_eq!(class.monotone, naive::monotone(p, q, &f));
                assert_eq!(class.contraction, naive::contraction(p, q, &f), "{p:?} -> {q:?} by {f:?}");
                assert_eq!(class.collapse, naive::collapse(p, q, &f), "{p:?} -> {q:?} by {f:?}");
            }
        }
    }
}

fn monotone_maps(p: &Relation, q: &Relation) -> Vec<OrderMap> {
    functions(p.n(), q.n())
        .into_iter()
        .map(|f| OrderMap::new(p.clone(), q.clone(), f).unwrap())
        .filter(OrderMap::is_monotone)
        .collect()
}

#[test]
fn contractions_pull_back_along_convex_maps() {
    let mut checked = 0;
    for p in posets_up_to(4) {
        for d in enumerate_contractions(p).unwrap() {
            let f = d.to_map();
            for v in posets_up_to(3) {
                for g in monotone_maps(v, f.target()).into_iter().filter(OrderMap::is_convex) {
                    let pb = pullback(&f, &g).unwrap();
                    assert!(pb.to_right.is_contraction(), "{f:?} along {g:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

fn strictly_monotone(g: &OrderMap) -> bool {
    let (v, q) = (g.source(), g.target());
    (0..v.n()).all(|a| (0..v.n()).all(|b| !v.lt(a, b) || q.lt(g.apply(a), g.apply(b))))
}

/// Every monotone `g` is tried. The projection is a collapse whenever `g`
/// keeps strict relations strict (convex maps do), and only then can it fail.
#[test]
fn collapse_pullbacks_fail_only_along_non_strict_maps() {
    let (mut checked, mut failures) = (0, 0);
    for p in posets_up_to(4) {
        for d in enumerate_collapses(p).unwrap() {
            let f = d.to_map();
            for v in posets_up_to(3) {
                for g in monotone_maps(v, f.target()) {
                    let pb = pullback(&f, &g).unwrap();
                    checked += 1;
                    assert!(!g.is_convex() || strictly_monotone(&g));
                    if strictly_monotone(&g) {
                        assert!(pb.to_right.is_collapse(), "{f:?} along {g:?}");
                    } else if !pb.to_right.is_collapse() {
                        failures += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
    assert!(failures > 0);
}

#[test]
fn collapse_pullback_counterexample() {
    let f = OrderMap::new(Relation::discrete(2), Relation::discrete(1), vec![0, 0]).unwrap();
    let g = OrderMap::new(Relation::chain(2), Relation::discrete(1), vec![0, 0]).unwrap();
    assert!(f.is_collapse());
    let pb = pullback(&f, &g).unwrap();
    assert_eq!(pb.apex.n(), 4);
    assert!(pb.to_right.is_monotone() && pb.to_right.is_surjective());
    assert!(!pb.to_right.is_partially_reflecting());
}

#[test]
fn downsets_are_maps_to_the_two_chain() {
    let two = Relation::chain(2);
    for p in posets_up_to(5) {
        assert_eq!(enumerate_downsets(p).unwrap().len(), monotone_maps(p, &two).len(), "{p:?}");
    }
}

#[test]
fn species_nest() {
    let connected = catalog_up_to(CatalogKind::ConnectedPoset, 6).unwrap();
    let trees = species::members(&TREES, 6).unwrap();
    let linear = species::members(&LINEAR_TREES, 6).unwrap();
    assert!(linear.iter().all(|p| TREES.is_member(p)));
    assert!(trees.iter().all(|p| connected.contains(p)));
    assert_eq!(trees.len(), 1 + 1 + 2 + 4 + 9 + 20);
    assert_eq!(linear.len(), 6);
}

#[test]
fn left_sizes_are_conserved() {
    for flavor in [Flavor::K, Flavor::D, Flavor::R] {
        let c = Coalgebra::of(flavor);
        for p in catalog_up_to(CatalogKind::ConnectedPoset, 4).unwrap() {
            let m = c.monomial_of(&p).unwrap();
            for ([left, right], _) in c.delta(&m).unwrap().terms() {
                match flavor {
                    Flavor::R => assert_eq!(left.size() + right.size(), p.n()),
                    _ => assert_eq!(left.size(), p.n()),
                }
            }
        }
    }
    let a = Coalgebra::of(Flavor::A);
    for t in catalog_up_to(CatalogKind::ConnectedPreorder, 3).unwrap() {
        let m = a.monomial_of(&t).unwrap();
        for ([left, right], _) in a.delta(&m).unwrap().terms() {
            assert_eq!(left.size(), t.n());
            assert_eq!(right.size(), t.n());
        }
    }
}

#[test]
fn k_and_d_agree_on_chains_only() {
    let (k, d) = (Coalgebra::of(Flavor::K), Coalgebra::of(Flavor::D));
    for n in 1..=5 {
        let chain = Relation::chain(n);
        let dk = k.delta(&k.monomial_of(&chain).unwrap()).unwrap();
        let dd = d.delta(&d.monomial_of(&chain).unwrap()).unwrap();
        assert_eq!(dk, dd, "chain of {n}");
    }
    for n in 2..=4 {
        let discrete = Relation::discrete(n);
        let dk = k.delta(&k.monomial_of(&discrete).unwrap()).unwrap();
        let dd = d.delta(&d.monomial_of(&discrete).unwrap()).unwrap();
        assert_ne!(dk.to_json(), dd.to_json(), "discrete of {n}");
        assert!(dd.len() > dk.len());
    }
}

#[test]
fn contractions_and_collapses_are_incomparable() {
    let cherry = Relation::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
    let f = OrderMap::new(cherry, Relation::chain(2), vec![1, 0, 1]).unwrap();
    assert!(f.is_contraction() && !f.is_collapse());
    let g = OrderMap::new(Relation::discrete(2), Relation::discrete(1), vec![0, 0]).unwrap();
    assert!(g.is_collapse() && !g.is_contraction());
}

#[test]
fn outputs_are_deterministic() {
    let p = Relation::from_pairs(4, &[(0, 2), (1, 2), (1, 3)]).unwrap();
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let kernels: Vec<_> = enumerate_collapses(&p).unwrap().into_iter().map(|d| d.kernel).collect();
            let c = Coalgebra::of(Flavor::D);
            let delta = c.delta(&c.monomial_of(&p).unwrap()).unwrap().to_json().to_string();
            let keys: Vec<String> =
                catalog(CatalogKind::Poset, 4).unwrap().iter().map(|e| e.class.key()).collect();
            (kernels, delta, keys)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn unit_monomial_has_trivial_coproduct() {
    for flavor in [Flavor::K, Flavor::D, Flavor::R, Flavor::A] {
        let c = Coalgebra::of(flavor);
        let delta = c.delta(&Monomial::unit()).unwrap();
        assert_eq!(delta.len(), 1);
    }
}
