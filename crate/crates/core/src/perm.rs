//! Permutations of `{0, 1, ..., n-1}` with value semantics.
//!
//! Composition is left-to-right everywhere in this crate:
//! `p.compose(&q)` maps `x` to `q.apply(p.apply(x))`. All mixed-degree
//! arithmetic is an error; use [`Permutation::extend_to`] to pad with fixed
//! points explicitly before combining.
//!
//! Two interchangeable text forms are supported:
//! * disjoint-cycle notation with 0-based points, e.g. `(0 1 2)(4 5)`
//!   (the identity prints as `()`); the degree is external to this form;
//! * one-line image-array form `n: i0 i1 ... i(n-1)`.

use std::fmt;

use crate::error::{LabError, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}: {}]", self.degree(), self.cycle_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }
}

/// Cycle type of a permutation: part lengths including fixed points,
/// weakly decreasing, summing to the degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of moved points (sum of parts of length at least 2).
    pub fn support(&self) -> usize {
        self.parts.iter().filter(|&&p| p >= 2).sum()
    }
}

impl fmt::Display for CycleType {
    /// `3+2+1` form, matching the character table's partition labels.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join("+"))
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds from an image array, checking that it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let img = img as usize;
            if img >= n {
                return Err(LabError::Invalid(format!(
                    "image {img} out of range for degree {n}"
                )));
            }
            if seen[img] {
                return Err(LabError::Invalid(format!("duplicate image {img}")));
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    pub fn from_images_usize(images: &[usize]) -> Result<Self> {
        Self::from_images(images.iter().map(|&i| i as u32).collect())
    }

    /// Caller guarantees `images` is a bijection on `0..len`.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds from disjoint cycles over `0..degree`. Points may appear at
    /// most once across all cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &pt in cycle {
                if pt >= degree {
                    return Err(LabError::Invalid(format!(
                        "cycle point {pt} out of range for degree {degree}"
                    )));
                }
                if used[pt] {
                    return Err(LabError::Invalid(format!(
                        "point {pt} appears in more than one cycle"
                    )));
                }
                used[pt] = true;
            }
            if cycle.len() < 2 {
                continue;
            }
            for w in 0..cycle.len() {
                images[cycle[w]] = cycle[(w + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// Left-to-right composition: the result maps `x` to
    /// `other.apply(self.apply(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(LabError::Invalid(format!(
                "degree mismatch in compose: {} vs {}",
                self.degree(),
                other.degree()
            )));
        }
        let mut out = vec![0u32; self.degree()];
        compose_into(&self.images, &other.images, &mut out);
        Ok(Permutation { images: out })
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.degree()];
        invert_into(&self.images, &mut out);
        Permutation { images: out }
    }

    /// `self` composed with itself `k` times (`k = 0` gives the identity).
    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base).expect("same degree");
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base).expect("same degree");
            }
        }
        acc
    }

    pub fn parity(&self) -> Parity {
        let transposition_count = self.degree() - self.cycle_count();
        if transposition_count % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn cycle_count(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
            }
        }
        count
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            parts.push(len);
        }
        CycleType::new(parts)
    }

    /// Number of points moved.
    pub fn support(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &img)| i as u32 != img)
            .count()
    }

    pub fn moved_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &img)| i as u32 != img)
            .map(|(i, _)| i)
    }

    pub fn min_moved_point(&self) -> Option<usize> {
        self.moved_points().next()
    }

    /// Applies the permutation entrywise to a tuple of distinct points.
    pub fn act_on_tuple(&self, tuple: &[usize]) -> Result<Vec<usize>> {
        let mut seen = std::collections::HashSet::new();
        for &t in tuple {
            if t >= self.degree() {
                return Err(LabError::Invalid(format!(
                    "tuple entry {t} out of range for degree {}",
                    self.degree()
                )));
            }
            if !seen.insert(t) {
                return Err(LabError::Invalid(format!("tuple entry {t} repeated")));
            }
        }
        Ok(tuple.iter().map(|&t| self.apply(t)).collect())
    }

    /// Pads with fixed points up to degree `n >= self.degree()`.
    pub fn extend_to(&self, n: usize) -> Result<Permutation> {
        if n < self.degree() {
            return Err(LabError::Invalid(format!(
                "cannot extend degree {} down to {n}",
                self.degree()
            )));
        }
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..n as u32);
        Ok(Permutation { images })
    }

    /// Embeds into degree `n` acting on the window `[offset, offset+degree)`.
    pub fn embed_window(&self, offset: usize, n: usize) -> Result<Permutation> {
        if offset + self.degree() > n {
            return Err(LabError::Invalid(format!(
                "window [{offset}, {}) does not fit in degree {n}",
                offset + self.degree()
            )));
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        for (i, &img) in self.images.iter().enumerate() {
            images[offset + i] = (offset as u32) + img;
        }
        Ok(Permutation { images })
    }

    /// Nontrivial cycles in canonical order: each cycle starts at its
    /// smallest point, cycles sorted by their smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Disjoint-cycle form, e.g. `(0 1 2)(4 5)`; identity is `()`.
    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for cycle in cycles {
            out.push('(');
            let strs: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            out.push_str(&strs.join(" "));
            out.push(')');
        }
        out
    }

    /// Image-array form `n: i0 i1 ... i(n-1)`.
    pub fn image_string(&self) -> String {
        let strs: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        format!("{}: {}", self.degree(), strs.join(" "))
    }

    /// Parses disjoint-cycle form at an explicitly supplied degree.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation> {
        let s = s.trim();
        if s == "()" {
            return Ok(Permutation::identity(degree));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| LabError::Invalid(format!("expected '(' in cycle form: {s:?}")))?;
            if !rest[..open].trim().is_empty() {
                return Err(LabError::Invalid(format!(
                    "unexpected text before '(' in cycle form: {s:?}"
                )));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| LabError::Invalid(format!("unbalanced '(' in cycle form: {s:?}")))?;
            if close < open {
                return Err(LabError::Invalid(format!("unbalanced ')' in cycle form: {s:?}")));
            }
            let body = &rest[open + 1..close];
            let mut cycle = Vec::new();
            for tok in body.split_whitespace() {
                let pt: usize = tok.parse().map_err(|_| {
                    LabError::Invalid(format!("bad point {tok:?} in cycle form: {s:?}"))
                })?;
                cycle.push(pt);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = &rest[close + 1..];
        }
        Permutation::from_cycles(degree, &cycles)
    }

    /// Parses image-array form `n: i0 i1 ... i(n-1)`.
    pub fn parse_images(s: &str) -> Result<Permutation> {
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| LabError::Invalid(format!("expected 'n:' prefix in image form: {s:?}")))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| LabError::Invalid(format!("bad degree in image form: {s:?}")))?;
        let mut images = Vec::with_capacity(n);
        for tok in tail.split_whitespace() {
            let img: u32 = tok
                .parse()
                .map_err(|_| LabError::Invalid(format!("bad image {tok:?} in image form")))?;
            images.push(img);
        }
        if images.len() != n {
            return Err(LabError::Invalid(format!(
                "image form declares degree {n} but lists {} images",
                images.len()
            )));
        }
        Permutation::from_images(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

/// `out[x] = q[p[x]]`, all three of equal length.
#[inline]
pub(crate) fn compose_into(p: &[u32], q: &[u32], out: &mut [u32]) {
    for (o, &px) in out.iter_mut().zip(p.iter()) {
        *o = q[px as usize];
    }
}

#[inline]
pub(crate) fn invert_into(p: &[u32], out: &mut [u32]) {
    for (x, &px) in p.iter().enumerate() {
        out[px as usize] = x as u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(degree: usize, cycles: &[&[usize]]) -> Permutation {
        let owned: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &owned).unwrap()
    }

    #[test]
    fn compose_is_left_to_right() {
        let p = cyc(3, &[&[0, 1, 2]]);
        let q = cyc(3, &[&[0, 1]]);
        let r = p.compose(&q).unwrap();
        assert_eq!(r, cyc(3, &[&[1, 2]]));
        // Pointwise oracle: r(x) must equal q(p(x)) for every x.
        for x in 0..3 {
            assert_eq!(r.apply(x), q.apply(p.apply(x)));
        }
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let p = Permutation::identity(3);
        let q = Permutation::identity(4);
        assert!(p.compose(&q).is_err());
        assert!(p.extend_to(4).unwrap().compose(&q).is_ok());
    }

    #[test]
    fn inverse_of_three_cycle() {
        let p = cyc(3, &[&[0, 1, 2]]);
        assert_eq!(p.inverse(), cyc(3, &[&[0, 2, 1]]));
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(cyc(3, &[&[0, 1, 2]]).parity(), Parity::Even);
        assert_eq!(cyc(2, &[&[0, 1]]).parity(), Parity::Odd);
        assert_eq!(cyc(7, &[&(0..7).collect::<Vec<_>>()[..]]).parity(), Parity::Even);
        assert_eq!(Permutation::identity(5).parity(), Parity::Even);
    }

    #[test]
    fn cycle_type_and_support() {
        let p = cyc(6, &[&[0, 1, 2], &[4, 5]]);
        assert_eq!(p.cycle_type().parts(), &[3, 2, 1]);
        assert_eq!(p.support(), 5);
        assert_eq!(p.cycle_type().degree(), 6);
        assert_eq!(format!("{}", p.cycle_type()), "3+2+1");
    }

    #[test]
    fn act_on_tuple_examples() {
        let p = cyc(3, &[&[0, 1, 2]]);
        assert_eq!(p.act_on_tuple(&[0, 1]).unwrap(), vec![1, 2]);
        assert!(p.act_on_tuple(&[0, 0]).is_err());
        assert!(p.act_on_tuple(&[0, 3]).is_err());
    }

    #[test]
    fn text_forms_round_trip() {
        let p = cyc(6, &[&[0, 1, 2], &[4, 5]]);
        assert_eq!(p.cycle_string(), "(0 1 2)(4 5)");
        assert_eq!(p.image_string(), "6: 1 2 0 3 5 4");
        assert_eq!(Permutation::parse_cycles("(0 1 2)(4 5)", 6).unwrap(), p);
        assert_eq!(Permutation::parse_images("6: 1 2 0 3 5 4").unwrap(), p);
        assert_eq!(Permutation::identity(4).cycle_string(), "()");
        assert_eq!(Permutation::parse_cycles("()", 4).unwrap(), Permutation::identity(4));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Permutation::parse_cycles("(0 1", 3).is_err());
        assert!(Permutation::parse_cycles("(0 1)(1 2)", 3).is_err());
        assert!(Permutation::parse_cycles("(0 9)", 3).is_err());
        assert!(Permutation::parse_images("3: 0 1").is_err());
        assert!(Permutation::parse_images("3: 0 1 1").is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn embed_window_shifts_action() {
        let p = cyc(3, &[&[0, 1, 2]]);
        let e = p.embed_window(2, 6).unwrap();
        assert_eq!(e.cycle_string(), "(2 3 4)");
        assert!(p.embed_window(4, 6).is_err());
    }

    #[test]
    fn pow_matches_repeated_compose() {
        let p = cyc(7, &[&[0, 1, 2, 3, 4, 5, 6]]);
        assert!(p.pow(7).is_identity());
        assert_eq!(p.pow(3), p.compose(&p).unwrap().compose(&p).unwrap());
        assert!(p.pow(0).is_identity());
    }
}
