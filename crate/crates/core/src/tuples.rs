//! Index-tuple combinatorics.
//!
//! Tuples index products of elementary matrices. Nonnegative tuples live in
//! `{0:h}`; negative tuples live in `{-h:-1}` and are shifted by `+h` before
//! the range-dependent tests.

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{HashSet, VecDeque};
use std::fmt;

/// Maximum number of states visited by [`csf_normalize`].
pub const CSF_STATE_LIMIT: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexTuple(Vec<i64>);

impl IndexTuple {
    pub fn new(entries: Vec<i64>) -> Self {
        IndexTuple(entries)
    }

    pub fn empty() -> Self {
        IndexTuple(Vec::new())
    }

    /// The string `(a:b)`, empty when `a > b`.
    pub fn range(a: i64, b: i64) -> Self {
        IndexTuple((a..=b).collect())
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, k: i64) -> bool {
        self.0.contains(&k)
    }

    pub fn rev(&self) -> Self {
        IndexTuple(self.0.iter().rev().copied().collect())
    }

    pub fn shift(&self, k: i64) -> Self {
        IndexTuple(self.0.iter().map(|x| x + k).collect())
    }

    pub fn neg(&self) -> Self {
        IndexTuple(self.0.iter().map(|x| -x).collect())
    }

    pub fn concat(&self, other: &IndexTuple) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        IndexTuple(v)
    }

    pub fn cat(parts: &[&IndexTuple]) -> Self {
        IndexTuple(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<i64>> for IndexTuple {
    fn from(v: Vec<i64>) -> Self {
        IndexTuple(v)
    }
}

impl From<&[i64]> for IndexTuple {
    fn from(v: &[i64]) -> Self {
        IndexTuple(v.to_vec())
    }
}

impl fmt::Debug for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for IndexTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Tuples are read from JSON integer arrays. An element may also be a string
/// `"a:b"`, which expands to the string `(a:b)`.
impl<'de> Deserialize<'de> for IndexTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Item {
            Int(i64),
            Str(String),
        }
        let items = Vec::<Item>::deserialize(d)?;
        let mut out = Vec::new();
        for it in items {
            match it {
                Item::Int(v) => out.push(v),
                Item::Str(s) => {
                    let t = parse_range(&s).map_err(serde::de::Error::custom)?;
                    out.extend(t.0);
                }
            }
        }
        Ok(IndexTuple(out))
    }
}

fn parse_range(s: &str) -> Result<IndexTuple> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::Schema(format!("bad string range {s:?}")))?;
    let a: i64 = a.trim().parse().map_err(|_| Error::Schema(format!("bad range start in {s:?}")))?;
    let b: i64 = b.trim().parse().map_err(|_| Error::Schema(format!("bad range end in {s:?}")))?;
    Ok(IndexTuple::range(a, b))
}

/// Which index range a tuple lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Empty,
    Nonnegative,
    Negative,
}

/// Classify `t` against `{0:h}` and `{-h:-1}`.
pub fn classify(t: &IndexTuple, h: i64) -> Result<Sign> {
    if t.is_empty() {
        return Ok(Sign::Empty);
    }
    if t.iter().all(|x| (0..=h).contains(&x)) {
        Ok(Sign::Nonnegative)
    } else if t.iter().all(|x| (-h..=-1).contains(&x)) {
        Ok(Sign::Negative)
    } else if t.iter().any(|x| x < 0) && t.iter().any(|x| x >= 0) {
        invalid(format!("mixed-sign tuple {t}"))
    } else {
        invalid(format!("tuple {t} leaves the range for h={h}"))
    }
}

fn to_nonnegative(t: &IndexTuple, h: i64) -> Result<(IndexTuple, i64)> {
    match classify(t, h)? {
        Sign::Negative => Ok((t.shift(h), h)),
        _ => Ok((t.clone(), 0)),
    }
}

fn sip_raw(v: &[i64]) -> bool {
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            if v[a] == v[b] {
                if !v[a + 1..b].contains(&(v[a] + 1)) {
                    return false;
                }
                // later repeats are checked from b onwards
                break;
            }
        }
    }
    true
}

/// Successor infix property.
pub fn is_sip(t: &IndexTuple, h: i64) -> Result<bool> {
    let (u, _) = to_nonnegative(t, h)?;
    Ok(sip_raw(&u.0))
}

/// Decompose into maximal strings of consecutive integers.
fn strings(v: &[i64]) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = Vec::new();
    for &x in v {
        match out.last_mut() {
            Some((_, b)) if *b + 1 == x => *b = x,
            _ => out.push((x, x)),
        }
    }
    out
}

fn csf_raw(v: &[i64]) -> bool {
    let s = strings(v);
    s.windows(2).all(|w| w[0].1 > w[1].1)
}

/// True when `t` (after the negative-range shift) is in column standard form.
pub fn is_csf(t: &IndexTuple, h: i64) -> Result<bool> {
    let (u, _) = to_nonnegative(t, h)?;
    Ok(csf_raw(&u.0))
}

/// Reach a column standard form through swaps of adjacent entries that
/// differ by more than one.
pub fn csf_normalize(t: &IndexTuple, h: i64) -> Result<IndexTuple> {
    let (u, back) = to_nonnegative(t, h)?;
    if !sip_raw(&u.0) {
        return Err(Error::Precondition(format!("{t} does not satisfy SIP")));
    }
    if csf_raw(&u.0) {
        return Ok(t.clone());
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(u.0.clone());
    queue.push_back(u.0);
    while let Some(cur) = queue.pop_front() {
        for j in 0..cur.len().saturating_sub(1) {
            if (cur[j] - cur[j + 1]).abs() <= 1 {
                continue;
            }
            let mut next = cur.clone();
            next.swap(j, j + 1);
            if seen.contains(&next) {
                continue;
            }
            if csf_raw(&next) {
                return Ok(IndexTuple(next).shift(-back));
            }
            if seen.len() >= CSF_STATE_LIMIT {
                return Err(Error::Normalization { visited: seen.len() });
            }
            seen.insert(next.clone());
            queue.push_back(next);
        }
    }
    Err(Error::Normalization { visited: seen.len() })
}

/// `c_k(t)`: length of the longest run `(k, k+1, ..., k+p)` occurring as a
/// subsequence, or -1 when `k` is absent.
pub fn consecutions(t: &IndexTuple, k: i64) -> i64 {
    let v = &t.0;
    let Some(start) = v.iter().position(|&x| x == k) else {
        return -1;
    };
    let mut p = 0;
    let mut pos = start;
    while let Some(off) = v[pos + 1..].iter().position(|&x| x == k + p + 1) {
        pos += 1 + off;
        p += 1;
    }
    p
}

/// `i_k(t)`: the descending analogue of [`consecutions`].
pub fn inversions(t: &IndexTuple, k: i64) -> i64 {
    consecutions(&t.rev(), k)
}

pub fn is_permutation_of(t: &IndexTuple, lo: i64, hi: i64) -> bool {
    let mut v = t.0.clone();
    v.sort_unstable();
    v.len() as i64 == (hi - lo + 1).max(0) && v.iter().enumerate().all(|(k, &x)| x == lo + k as i64)
}

fn positions(alpha: &IndexTuple) -> Result<Vec<usize>> {
    let m = alpha.len() as i64;
    if !is_permutation_of(alpha, 0, m - 1) {
        return invalid(format!("{alpha} is not a permutation of {{0:{}}}", m - 1));
    }
    let mut pos = vec![0; alpha.len()];
    for (k, &x) in alpha.0.iter().enumerate() {
        pos[x as usize] = k;
    }
    Ok(pos)
}

/// Adjacency labels: `true` at `j` when `j` precedes `j+1`.
fn adjacency(alpha: &IndexTuple) -> Result<Vec<bool>> {
    let pos = positions(alpha)?;
    Ok((0..pos.len().saturating_sub(1)).map(|j| pos[j] < pos[j + 1]).collect())
}

pub fn total_consecutions(alpha: &IndexTuple) -> Result<usize> {
    Ok(adjacency(alpha)?.iter().filter(|&&c| c).count())
}

pub fn total_inversions(alpha: &IndexTuple) -> Result<usize> {
    Ok(adjacency(alpha)?.iter().filter(|&&c| !c).count())
}

/// Reverse consecution-inversion structure sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rciss {
    pub pairs: Vec<(usize, usize)>,
}

impl Rciss {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Flattened `(c1, i1, ..., cl, il)`.
    pub fn flat(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(c, i)| [c, i]).collect()
    }

    /// `m_p = c_1 + ... + c_p`.
    pub fn m(&self, p: usize) -> usize {
        self.pairs[..p].iter().map(|x| x.0).sum()
    }

    /// `n_p = i_1 + ... + i_p`.
    pub fn n(&self, p: usize) -> usize {
        self.pairs[..p].iter().map(|x| x.1).sum()
    }

    /// `s_p = m_p + n_p`.
    pub fn s(&self, p: usize) -> usize {
        self.m(p) + self.n(p)
    }
}

pub fn rciss(alpha: &IndexTuple) -> Result<Rciss> {
    let adj = adjacency(alpha)?;
    let mut pairs = Vec::new();
    let (mut c, mut i) = (0usize, 0usize);
    for &cons in adj.iter().rev() {
        if cons {
            if i > 0 {
                pairs.push((c, i));
                c = 0;
                i = 0;
            }
            c += 1;
        } else {
            i += 1;
        }
    }
    pairs.push((c, i));
    Ok(Rciss { pairs })
}

/// Tuple of `{0:h}` whose csf is `(h-1:h, h-3:h-2, ..., p+1:p+2, 0:p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleTuple {
    pub h: i64,
    pub p: i64,
    pub entries: IndexTuple,
}

impl AdmissibleTuple {
    pub fn is_simple(&self) -> bool {
        self.p <= 1
    }
}

pub fn admissible(h: i64, p: i64) -> Result<AdmissibleTuple> {
    if h < 0 || p < 0 || p > h || (h - p) % 2 != 0 {
        return invalid(format!("no admissible tuple of {{0:{h}}} with index {p}"));
    }
    let mut v = Vec::new();
    let mut k = h;
    while k > p {
        v.extend([k - 1, k]);
        k -= 2;
    }
    v.extend(0..=p);
    Ok(AdmissibleTuple { h, p, entries: IndexTuple(v) })
}

pub fn simple_admissible(h: i64) -> AdmissibleTuple {
    admissible(h, h.rem_euclid(2)).expect("simple admissible tuple exists for h >= 0")
}

pub fn symmetric_complement(w: &AdmissibleTuple) -> IndexTuple {
    let mut v = Vec::new();
    let mut k = w.h - 1;
    while k > w.p {
        v.push(k);
        k -= 2;
    }
    for top in (0..w.p).rev() {
        v.extend(0..=top);
    }
    IndexTuple(v)
}

/// String ends of the canonical form for `h`: `h-2, h-4, ...`.
fn canonical_ends(h: i64) -> Vec<i64> {
    (1..=h / 2).map(|i| h - 2 * i).collect()
}

/// Canonical form for `h`. Strings `(a:b)` with `a > b` are empty.
pub fn is_canonical_form(t: &IndexTuple, h: i64) -> bool {
    fn parse(v: &[i64], ends: &[i64]) -> bool {
        match ends.split_first() {
            None => v.is_empty(),
            Some((&b, rest)) => {
                if let Some(&a) = v.first() {
                    if a >= 0 && a <= b {
                        let len = (b - a + 1) as usize;
                        if v.len() >= len
                            && v[..len].iter().enumerate().all(|(k, &x)| x == a + k as i64)
                            && parse(&v[len..], rest)
                        {
                            return true;
                        }
                    }
                }
                parse(v, rest)
            }
        }
    }
    h >= 0 && parse(&t.0, &canonical_ends(h))
}

/// Every tuple in canonical form for `h`.
pub fn canonical_forms(h: i64) -> Vec<IndexTuple> {
    let mut out = vec![Vec::new()];
    for b in canonical_ends(h) {
        let mut next = Vec::new();
        for prefix in &out {
            next.push(prefix.clone());
            for a in 0..=b {
                let mut v = prefix.clone();
                v.extend(a..=b);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(IndexTuple).collect()
}

/// Strings of the csf of a permutation of `{0:k}`, listed `b_1, b_2, ...`
/// from the bottom.
fn csf_strings_bottom_up(alpha: &IndexTuple) -> Result<Vec<(i64, i64)>> {
    let k = alpha.len() as i64 - 1;
    if !is_permutation_of(alpha, 0, k) {
        return invalid(format!("{alpha} is not a permutation of {{0:{k}}}"));
    }
    let c = csf_normalize(alpha, k.max(0))?;
    let mut s = strings(&c.0);
    s.reverse();
    Ok(s)
}

fn strings_to_tuple(bottom_up: &[(i64, i64)]) -> IndexTuple {
    IndexTuple(bottom_up.iter().rev().flat_map(|&(a, b)| a..=b).collect())
}

/// Right indices of type-1 relative to `alpha`: starts of csf strings of
/// length at least two.
pub fn type1_indices(alpha: &IndexTuple) -> Result<Vec<i64>> {
    Ok(csf_strings_bottom_up(alpha)?.into_iter().filter(|&(a, b)| a < b).map(|(a, _)| a).collect())
}

/// Simple tuple associated with `(alpha, s)`.
pub fn zr_rewrite(alpha: &IndexTuple, s: i64) -> Result<IndexTuple> {
    let mut b = csf_strings_bottom_up(alpha)?;
    let starts: Vec<usize> = (0..b.len()).filter(|&i| b[i].0 == s).collect();
    assert!(starts.len() <= 1, "csf of a permutation has distinct string starts");
    let Some(&idx) = starts.first() else {
        return Err(Error::Precondition(format!("{s} starts no string of csf({alpha})")));
    };
    let (a, e) = b[idx];
    if a >= e {
        return Err(Error::Precondition(format!("{s} is not a right index of type-1 for {alpha}")));
    }
    if idx == 0 {
        b[0] = (1, e);
        b.insert(0, (0, 0));
    } else {
        b[idx] = (a + 1, e);
        b[idx - 1].1 = a;
    }
    Ok(strings_to_tuple(&b))
}

pub fn is_type1_right(beta: &IndexTuple, alpha: &IndexTuple) -> bool {
    let mut cur = alpha.clone();
    for s in beta.iter() {
        match type1_indices(&cur) {
            Ok(ok) if ok.contains(&s) => {}
            _ => return false,
        }
        cur = match zr_rewrite(&cur, s) {
            Ok(c) => c,
            Err(_) => return false,
        };
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i64]) -> IndexTuple {
        IndexTuple::from(v)
    }

    #[test]
    fn sip_examples() {
        assert!(is_sip(&t(&[]), 3).unwrap());
        assert!(!is_sip(&t(&[1, 2, 0, 3, 0, 2]), 3).unwrap());
        assert!(is_sip(&t(&[1, 0, 2, 1, 3, 2, 4, 1, 3, 2, 1]), 4).unwrap());
        assert!(is_sip(&t(&[-3, -2, -3]), 3).unwrap());
        assert!(matches!(is_sip(&t(&[1, -1]), 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn csf_examples() {
        assert_eq!(csf_normalize(&t(&[0]), 0).unwrap(), t(&[0]));
        assert_eq!(csf_normalize(&t(&[1, 3, 0, 2, 4]), 4).unwrap(), t(&[3, 4, 1, 2, 0]));
        assert_eq!(csf_normalize(&t(&[3, 4, 1, 2, 0]), 4).unwrap(), t(&[3, 4, 1, 2, 0]));
        assert_eq!(csf_normalize(&t(&[-4, -2, -3]), 4).unwrap(), t(&[-2, -4, -3]));
        assert!(matches!(csf_normalize(&t(&[0, 0]), 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn consecution_examples() {
        assert_eq!(consecutions(&t(&[1, 0, 2, 1, 3, 2, 4, 1, 3, 2, 1]), 0), 3);
        assert_eq!(consecutions(&t(&[5]), 0), -1);
        assert_eq!(inversions(&t(&[2, 1, 0]), 0), 2);
        assert_eq!(total_consecutions(&t(&[0, 1, 2, 3])).unwrap(), 3);
        assert_eq!(total_inversions(&t(&[3, 2, 1, 0])).unwrap(), 3);
        let a = t(&[1, 0, 3, 2]);
        assert_eq!(total_consecutions(&a).unwrap() + total_inversions(&a).unwrap(), 3);
    }

    #[test]
    fn rciss_examples() {
        let a = t(&[8, 9, 10, 7, 6, 5, 2, 3, 4, 1, 0]);
        assert_eq!(rciss(&a).unwrap().flat(), vec![2, 4, 2, 2]);
        let b = t(&[10, 9, 5, 6, 7, 8, 3, 4, 2, 0, 1]);
        assert_eq!(rciss(&b).unwrap().flat(), vec![0, 2, 3, 1, 1, 2, 1, 0]);
        assert_eq!(rciss(&t(&[0, 1, 2, 3])).unwrap().flat(), vec![3, 0]);
        assert_eq!(rciss(&t(&[0])).unwrap().flat(), vec![0, 0]);
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(simple_admissible(0).entries, t(&[0]));
        assert_eq!(simple_admissible(4).entries, t(&[3, 4, 1, 2, 0]));
        assert_eq!(simple_admissible(5).entries, t(&[4, 5, 2, 3, 0, 1]));
        assert_eq!(symmetric_complement(&simple_admissible(0)), t(&[]));
        assert_eq!(symmetric_complement(&simple_admissible(4)), t(&[3, 1]));
        assert_eq!(symmetric_complement(&simple_admissible(5)), t(&[4, 2, 0]));
        assert_eq!(symmetric_complement(&admissible(3, 3).unwrap()), t(&[0, 1, 2, 0, 1, 0]));
    }

    #[test]
    fn canonical_examples() {
        assert!(is_canonical_form(&t(&[]), 1));
        assert!(is_canonical_form(&t(&[0]), 2));
        assert!(!is_canonical_form(&t(&[2, 1]), 3));
        assert!(is_canonical_form(&t(&[0, 1, 2, 3, 0, 1]), 5));
        assert!(is_canonical_form(&t(&[0, 1]), 5));
        assert!(!is_canonical_form(&t(&[0]), 1));
        assert_eq!(canonical_forms(0), vec![t(&[])]);
        assert_eq!(canonical_forms(2).len(), 2);
        for h in 0..7 {
            for c in canonical_forms(h) {
                assert!(is_canonical_form(&c, h), "{c} for {h}");
            }
        }
    }

    #[test]
    fn zr_examples() {
        assert_eq!(zr_rewrite(&t(&[1, 2, 0]), 1).unwrap(), t(&[2, 0, 1]));
        assert_eq!(zr_rewrite(&t(&[0, 1]), 0).unwrap(), t(&[1, 0]));
        assert!(is_type1_right(&t(&[]), &t(&[2, 1, 0])));
        assert!(is_type1_right(&t(&[1, 0]), &t(&[1, 2, 0])));
        assert!(!is_type1_right(&t(&[2]), &t(&[1, 2, 0])));
        assert!(zr_rewrite(&t(&[2, 1, 0]), 1).is_err());
    }

    #[test]
    fn json_ranges_expand() {
        let v: IndexTuple = serde_json::from_str(r#"["-6:-3", -6, "-5:-5"]"#).unwrap();
        assert_eq!(v, t(&[-6, -5, -4, -3, -6, -5]));
        assert_eq!(serde_json::to_string(&v).unwrap(), "[-6,-5,-4,-3,-6,-5]");
    }
}
