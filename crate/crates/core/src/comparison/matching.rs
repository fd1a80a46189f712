use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

/// One side of a matched pair: a bar, by its position in the diagram's `bars`,
/// or the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Bar(usize),
    Diagonal,
}

impl Serialize for Slot {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Slot::Bar(i) => s.serialize_u64(*i as u64),
            Slot::Diagonal => s.serialize_str("diag"),
        }
    }
}

/// Witness for a bottleneck distance: every bar of either diagram (in the
/// compared degree) appears in exactly one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(Slot, Slot)>,
    pub cost: f64,
}

struct Pairs<'a>(&'a [(Slot, Slot)]);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (a, b) in self.0 {
            seq.serialize_element(&[a, b])?;
        }
        seq.end()
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Matching", 2)?;
        st.serialize_field("pairs", &Pairs(&self.pairs))?;
        // JSON has no infinity; an unmatched essential class is reported as a
        // string instead.
        if self.cost.is_finite() {
            st.serialize_field("cost", &self.cost)?;
        } else {
            st.serialize_field("cost", "inf")?;
        }
        st.end()
    }
}
