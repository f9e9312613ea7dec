use std::fmt;

/// A nonempty sequence of positive integers naming a model (`mu`) or a
/// state (`sigma`). `mu.m` is a refinement of `mu`; `sigma.i` a successor
/// of `sigma`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prefix(Vec<u32>);

impl Prefix {
    /// The initial prefix `1`.
    pub fn root() -> Prefix {
        Prefix(vec![1])
    }

    pub fn from_digits(digits: &[u32]) -> Option<Prefix> {
        if digits.is_empty() || digits.contains(&0) {
            None
        } else {
            Some(Prefix(digits.to_vec()))
        }
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn child(&self, index: u32) -> Prefix {
        let mut digits = self.0.clone();
        digits.push(index);
        Prefix(digits)
    }

    pub fn parent(&self) -> Option<Prefix> {
        (self.0.len() > 1).then(|| Prefix(self.0[..self.0.len() - 1].to_vec()))
    }

    /// `self ⊑ other`: `self` is an initial segment of (or equal to) `other`.
    pub fn is_prefix_of(&self, other: &Prefix) -> bool {
        other.0.starts_with(&self.0)
    }

    /// True when `other` is `self.i` for some `i`.
    pub fn is_parent_of(&self, other: &Prefix) -> bool {
        other.0.len() == self.0.len() + 1 && other.0.starts_with(&self.0)
    }

    /// Initial segments of `self`, shortest first, excluding `self`.
    pub fn proper_ancestors(&self) -> impl Iterator<Item = Prefix> + '_ {
        (1..self.0.len()).map(|n| Prefix(self.0[..n].to_vec()))
    }

    pub fn max_digit(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Prefix {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .split('.')
            .map(|d| d.parse::<u32>().map_err(|e| format!("bad prefix `{s}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Prefix::from_digits(&digits).ok_or_else(|| format!("bad prefix `{s}`"))
    }
}
