//! Canonical renaming of the dummy labels of a term: sites and frozen channels.
//!
//! Two terms that differ only by a bijection of site labels and of channel
//! labels describe the same object. The canonical representative is the least
//! term over all renamings that respect a label-independent signature; a term
//! that some renaming maps to its own negative vanishes.

use std::collections::BTreeMap;

use crate::algebra::{Atom, Expr, Frozen, Term};

/// An atom with every channel label erased.
fn erase(a: &Atom) -> String {
    match a {
        Atom::Frozen(fr) => {
            let idx: Vec<String> = fr.channels.iter().map(|(_, m)| format!("{:?}", m.0.as_slice())).collect();
            let mut idx = idx;
            idx.sort();
            let inner: Vec<String> = fr.inner.raw().map(|(f, k)| format!("{}^{}", erase(&f.atom), k)).collect();
            format!("F[{}]({})", idx.join(","), inner.join("*"))
        }
        other => format!("{other:?}"),
    }
}

/// Label-free signature of each site.
fn site_signatures(t: &Term) -> BTreeMap<u32, Vec<String>> {
    let mut sig: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for (f, k) in t.raw() {
        sig.entry(f.site).or_default().push(format!("{}^{}", erase(&f.atom), k));
    }
    for v in sig.values_mut() {
        v.sort();
    }
    sig
}

fn collect_channel_uses(fr: &Frozen, context: &str, depth: usize, out: &mut BTreeMap<u32, Vec<String>>) {
    let here = erase(&Atom::Frozen(Box::new(fr.clone())));
    for (l, m) in &fr.channels {
        out.entry(*l).or_default().push(format!("{context}|{depth}|{:?}|{here}", m.0.as_slice()));
    }
    for (f, _) in fr.inner.raw() {
        if let Atom::Frozen(inner) = &f.atom {
            collect_channel_uses(inner, context, depth + 1, out);
        }
    }
}

/// Label-free signature of each channel, given the site ranks.
fn channel_signatures(t: &Term, site_rank: &BTreeMap<u32, usize>) -> BTreeMap<u32, Vec<String>> {
    let mut sig: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for (f, _) in t.raw() {
        if let Atom::Frozen(fr) = &f.atom {
            collect_channel_uses(fr, &site_rank[&f.site].to_string(), 0, &mut sig);
        }
    }
    for v in sig.values_mut() {
        v.sort();
    }
    sig
}

/// Groups labels by signature: the returned groups are in signature order.
fn tie_groups(sig: &BTreeMap<u32, Vec<String>>) -> Vec<Vec<u32>> {
    let mut by_sig: BTreeMap<&Vec<String>, Vec<u32>> = BTreeMap::new();
    for (l, s) in sig {
        by_sig.entry(s).or_default().push(*l);
    }
    by_sig.into_values().collect()
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All orderings of the labels that are consistent with the tie groups.
fn orderings(groups: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
    for g in groups {
        let perms = permutations(g);
        let mut next = Vec::with_capacity(acc.len() * perms.len());
        for a in &acc {
            for p in &perms {
                let mut v = a.clone();
                v.extend_from_slice(p);
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

fn rank_map(order: &[u32]) -> BTreeMap<u32, u32> {
    order.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect()
}

/// Canonical representative of a term under renaming of sites and channels,
/// with the sign relating it to the input; `None` if the term cancels itself.
pub fn canonicalize_term(t: &Term) -> Option<(i64, Term)> {
    let sites = t.sites();
    let channels = t.channels();
    let trivial_sites = sites.len() <= 1 && sites.first().is_none_or(|&s| s == 0);
    if trivial_sites && channels.is_empty() {
        return Some((1, t.clone()));
    }
    let ssig = site_signatures(t);
    let site_orders = orderings(&tie_groups(&ssig));
    let mut best: Option<(Term, i64)> = None;
    let mut cancels = false;
    for so in &site_orders {
        let srank = rank_map(so);
        let site_rank_usize: BTreeMap<u32, usize> = srank.iter().map(|(k, v)| (*k, *v as usize)).collect();
        let csig = channel_signatures(t, &site_rank_usize);
        let chan_orders = orderings(&tie_groups(&csig));
        let (s1, t1) = t.map_sites(&|s| srank[&s]).into_iter().next()?;
        for co in &chan_orders {
            let crank = rank_map(co);
            let Some((s2, t2)) = t1.map_channels(&|l| crank[&l]).into_iter().next() else {
                continue;
            };
            let s = s1 * s2;
            match &best {
                None => best = Some((t2, s)),
                Some((bt, bs)) => {
                    if t2 < *bt {
                        best = Some((t2, s));
                        cancels = false;
                    } else if t2 == *bt && s != *bs {
                        cancels = true;
                    }
                }
            }
        }
    }
    if cancels {
        return None;
    }
    best.map(|(t, s)| (s, t))
}

/// Renames sites and channels of every term canonically.
pub fn canonicalize_channels(e: &Expr) -> Expr {
    let mut out = Expr::zero();
    for (t, c) in e.iter() {
        if let Some((s, t2)) = canonicalize_term(t) {
            out.add_term(t2, c.scale_int(s));
        }
    }
    out
}

/// Shifts every site label by `by` (used to keep two integrals apart).
pub fn shift_sites(e: &Expr, by: u32) -> Expr {
    if by == 0 {
        return e.clone();
    }
    let mut out = Expr::zero();
    for (t, c) in e.iter() {
        out.add_scaled(c, t.map_sites(&|s| s + by));
    }
    out
}

/// Shifts every channel label by `by`.
pub fn shift_channels(e: &Expr, by: u32) -> Expr {
    if by == 0 {
        return e.clone();
    }
    let mut out = Expr::zero();
    for (t, c) in e.iter() {
        out.add_scaled(c, t.map_channels(&|l| l + by));
    }
    out
}

