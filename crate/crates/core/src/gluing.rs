//! Gluing a contraction (or collapse) `f: P -> Q` with maps out of each of
//! its fibres into a factorization `P -> W -> Q`.

use crate::enumerate::{enumerate_collapses, enumerate_contractions};
use crate::error::{Error, Result};
use crate::maps::{CoverClass, OrderMap};
use crate::relation::Relation;

/// A factorization `g ∘ h = f` through the glued poset `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub w: Relation,
    pub h: OrderMap,
    pub g: OrderMap,
}

struct Layout {
    /// Block (element of `Q`) of each element of `W`.
    g_images: Vec<usize>,
    h_images: Vec<usize>,
    /// Order of `W` restricted to the blocks, with cross-block pairs absent.
    block_rows: Vec<u32>,
}

fn layout(f: &OrderMap, fibre_maps: &[OrderMap], class: CoverClass) -> Result<Layout> {
    if !class.admits(f) {
        return Err(Error::WrongClass(class.name()));
    }
    let q = f.target().n();
    if fibre_maps.len() != q {
        return Err(Error::Gluing(format!("{} fibre maps for {q} fibres", fibre_maps.len())));
    }
    let mut g_images = Vec::new();
    let mut block_rows = Vec::new();
    let mut h_images = vec![0; f.source().n()];
    for (b, m) in fibre_maps.iter().enumerate() {
        let fibre = f.fibre(b);
        if *m.source() != f.source().induced(fibre) {
            return Err(Error::Gluing(format!("fibre map {b} has the wrong source")));
        }
        if !class.admits(m) {
            return Err(Error::WrongClass(class.name()));
        }
        let offset = g_images.len();
        for (k, p) in fibre.iter().enumerate() {
            h_images[p] = offset + m.apply(k);
        }
        g_images.extend(std::iter::repeat_n(b, m.target().n()));
        block_rows.extend(m.target().rows().iter().map(|r| r << offset));
    }
    Ok(Layout { g_images, h_images, block_rows })
}

fn finish(f: &OrderMap, lay: Layout, w: Relation, class: CoverClass) -> Result<Gluing> {
    let h = OrderMap::new(f.source().clone(), w.clone(), lay.h_images)?;
    let g = OrderMap::new(w.clone(), f.target().clone(), lay.g_images)?;
    if !w.is_poset() {
        return Err(Error::Gluing("glued relation is not a poset".into()));
    }
    if !class.admits(&h) || !class.admits(&g) {
        return Err(Error::Gluing(format!("glued legs are not {} maps", class.name())));
    }
    if h.then(&g)?.images() != f.images() {
        return Err(Error::Gluing("glued legs do not compose to the given map".into()));
    }
    Ok(Gluing { w, h, g })
}

/// Glues a contraction with contractions out of its fibres. The order on
/// `W` is generated by the orders of the pieces and the images of the
/// relations of `P`.
pub fn glue_contractions(f: &OrderMap, fibre_maps: &[OrderMap]) -> Result<Gluing> {
    let lay = layout(f, fibre_maps, CoverClass::Contraction)?;
    let n = lay.g_images.len();
    let mut rows = lay.block_rows.clone();
    for (x, y) in f.source().pairs() {
        rows[lay.h_images[x]] |= 1 << lay.h_images[y];
    }
    let w = Relation::from_rows(n, rows).transitive_closure();
    finish(f, lay, w, CoverClass::Contraction)
}

/// Glues a collapse with collapses out of its fibres: `w < w'` within a
/// block as in the piece, across blocks iff `g(w) < g(w')`.
pub fn glue_collapses(f: &OrderMap, fibre_maps: &[OrderMap]) -> Result<Gluing> {
    let lay = layout(f, fibre_maps, CoverClass::Collapse)?;
    let n = lay.g_images.len();
    let q = f.target();
    let rows = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| q.lt(lay.g_images[a], lay.g_images[b]))
                .fold(lay.block_rows[a], |m, b| m | 1 << b)
        })
        .collect();
    finish(f, lay, Relation::from_rows(n, rows), CoverClass::Collapse)
}

pub fn glue(f: &OrderMap, fibre_maps: &[OrderMap], class: CoverClass) -> Result<Gluing> {
    match class {
        CoverClass::Contraction => glue_contractions(f, fibre_maps),
        CoverClass::Collapse => glue_collapses(f, fibre_maps),
    }
}

/// Every order on the glued element set, with the blocks fixed to the given
/// pieces, for which `W` is a poset and `h`, `g` are maps of the class.
/// Cross-block pairs are only tried when `g(w) < g(w')`, since `g` must be
/// monotone with fibres exactly the pieces.
pub fn glue_candidates(f: &OrderMap, fibre_maps: &[OrderMap], class: CoverClass) -> Result<Vec<Relation>> {
    let lay = layout(f, fibre_maps, class)?;
    let n = lay.g_images.len();
    let q = f.target();
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| q.lt(lay.g_images[a], lay.g_images[b]))
        .collect();
    if free.len() > 24 {
        return Err(Error::SizeBound { size: free.len(), bound: 24 });
    }
    let mut out = Vec::new();
    for bits in 0..1u64 << free.len() {
        let mut rows = lay.block_rows.clone();
        for (k, &(a, b)) in free.iter().enumerate() {
            if bits >> k & 1 == 1 {
                rows[a] |= 1 << b;
            }
        }
        let w = Relation::from_rows(n, rows);
        if !w.is_poset() {
            continue;
        }
        let h = OrderMap::new(f.source().clone(), w.clone(), lay.h_images.clone())?;
        let g = OrderMap::new(w.clone(), q.clone(), lay.g_images.clone())?;
        if class.admits(&h) && class.admits(&g) {
            out.push(w);
        }
    }
    out.sort();
    Ok(out)
}

/// All families of maps of the class out of the fibres of `f`, one map per
/// fibre.
pub fn fibre_map_choices(f: &OrderMap, class: CoverClass) -> Result<Vec<Vec<OrderMap>>> {
    let mut choices: Vec<Vec<OrderMap>> = vec![Vec::new()];
    for b in 0..f.target().n() {
        let piece = f.source().induced(f.fibre(b));
        let data = match class {
            CoverClass::Contraction => enumerate_contractions(&piece)?,
            CoverClass::Collapse => enumerate_collapses(&piece)?,
        };
        choices = choices
            .into_iter()
            .flat_map(|prefix| {
                data.iter().map(move |d| {
                    let mut next = prefix.clone();
                    next.push(d.to_map());
                    next
                })
            })
            .collect();
    }
    Ok(choices)
}
