//! Rule weights, optionally depending on the span a rule derives.

use crate::scalar::Scalar;

/// Weight `ν(r, i, j)` of a rule applied to the span `[i, j]` (1-based,
/// inclusive).
#[derive(Clone, Debug, PartialEq)]
pub enum Weight<T> {
    Const(T),
    /// Dense table over spans; see [`SpanTable`].
    Span(SpanTable<T>),
    /// `start[i] + end[j]`.
    Separable { start: Vec<T>, end: Vec<T> },
}

/// Per-span weights for a chain of length `n`; spans outside the table
/// weigh zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanTable<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> SpanTable<T> {
    /// All spans start at `fill`.
    pub fn new(n: usize, fill: T) -> Self {
        SpanTable {
            n,
            values: vec![fill; (n + 2) * (n + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        (i <= self.n + 1 && j <= self.n).then(|| i * (self.n + 1) + j)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.slot(i, j)
            .map(|s| self.values[s])
            .unwrap_or_else(T::zero)
    }

    /// Panics if `(i, j)` is outside `[0, n+1] × [0, n]`.
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let slot = self.slot(i, j).expect("span outside table");
        self.values[slot] = value;
    }
}

impl<T: Scalar> Weight<T> {
    pub fn zero() -> Self {
        Weight::Const(T::zero())
    }

    #[inline]
    pub fn eval(&self, i: usize, j: usize) -> T {
        match self {
            Weight::Const(v) => *v,
            Weight::Span(table) => table.get(i, j),
            Weight::Separable { start, end } => {
                let a = start.get(i).copied().unwrap_or_else(T::zero);
                let b = end.get(j).copied().unwrap_or_else(T::zero);
                a + b
            }
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Weight::Const(_))
    }

    pub fn map<U: Scalar>(&self, map: impl Fn(T) -> U) -> Weight<U> {
        match self {
            Weight::Const(v) => Weight::Const(map(*v)),
            Weight::Span(t) => Weight::Span(SpanTable {
                n: t.n,
                values: t.values.iter().map(|&v| map(v)).collect(),
            }),
            Weight::Separable { start, end } => Weight::Separable {
                start: start.iter().map(|&v| map(v)).collect(),
                end: end.iter().map(|&v| map(v)).collect(),
            },
        }
    }
}

impl<T: Scalar> From<T> for Weight<T> {
    fn from(value: T) -> Self {
        Weight::Const(value)
    }
}
