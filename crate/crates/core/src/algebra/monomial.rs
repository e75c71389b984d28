use std::cmp::Ordering;

/// A monomial in a free graded-commutative algebra.
///
/// Factors are `(generator index, exponent)` pairs sorted by index, with
/// positive exponents; odd generators never appear squared. The empty
/// monomial is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    /// Lexicographic order on exponent vectors: `a^2 > a*b > b^2`.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (self.0.iter(), other.0.iter());
        loop {
            match (i.next(), j.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(g, e)), Some(&(h, f))) => {
                    if g != h {
                        return if g < h {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    if e != f {
                        return e.cmp(&f);
                    }
                }
            }
        }
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(index: usize) -> Self {
        Monomial(vec![(index as u32, 1)])
    }

    pub fn power(index: usize, exponent: u32) -> Self {
        if exponent == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(index as u32, exponent)])
        }
    }

    /// Wraps factors that are already sorted, merged and nonzero.
    pub(crate) fn from_sorted(factors: Vec<(u32, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|f| f.1 > 0));
        Monomial(factors)
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().map(|f| f.1).sum()
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0
            .iter()
            .find(|f| f.0 as usize == index)
            .map_or(0, |f| f.1)
    }

    /// The single generator index if this monomial is a generator.
    pub fn as_generator(&self) -> Option<usize> {
        match self.0.as_slice() {
            [(g, 1)] => Some(*g as usize),
            _ => None,
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|f| f.0 as usize)
    }

    pub fn weighted_sum(&self, weight: impl Fn(usize) -> u32) -> u32 {
        self.0.iter().map(|&(g, e)| e * weight(g as usize)).sum()
    }

    /// Relabels generators through a strictly increasing map.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&(g, e)| (map(g as usize) as u32, e))
                .collect(),
        )
    }

    /// Splits at factor position `j`: the part before, the generator with
    /// its exponent, and the part after.
    pub(crate) fn split_at_factor(&self, j: usize) -> (Monomial, (u32, u32), Monomial) {
        (
            Monomial(self.0[..j].to_vec()),
            self.0[j],
            Monomial(self.0[j + 1..].to_vec()),
        )
    }
}

/// Multiplies `a * b` and reorders into canonical form.
///
/// Returns `None` when an odd generator would appear twice, otherwise the
/// product and whether the Koszul sign is negative. `odd[g]` gives the
/// parity of generator `g`.
pub fn multiply_monomials(a: &Monomial, b: &Monomial, odd: &[bool]) -> Option<(Monomial, bool)> {
    let (x, y) = (&a.0, &b.0);
    let mut out = Vec::with_capacity(x.len() + y.len());
    let mut negative = false;
    let mut odd_left_in_a: usize = x.iter().filter(|f| odd[f.0 as usize]).count();
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ord = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) => p.0.cmp(&q.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                if odd[x[i].0 as usize] {
                    odd_left_in_a -= 1;
                }
                out.push(x[i]);
                i += 1;
            }
            Ordering::Greater => {
                // y[j] moves left past every remaining factor of a.
                if odd[y[j].0 as usize] && odd_left_in_a % 2 == 1 {
                    negative = !negative;
                }
                out.push(y[j]);
                j += 1;
            }
            Ordering::Equal => {
                if odd[x[i].0 as usize] {
                    return None;
                }
                out.push((x[i].0, x[i].1 + y[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    Some((Monomial(out), negative))
}
