//! Gestures on a sequencer timeline and the set operations between them.
//!
//! Crisp union places two gestures end to end so their supports touch at a
//! single boundary index. Crisp intersection keeps only the overlap of two
//! layered gestures and mixes it by the number of active layers, so a
//! gesture intersected with itself is returned unchanged. Fuzzy variants
//! treat `|amplitude|` as membership and apply Zadeh max/min per sample.
//! Negation works on support masks over the timeline universe.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::buffer::SampleBuffer;
use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraError {
    RateMismatch {
        left: u32,
        right: u32,
    },
    LengthMismatch {
        left: usize,
        right: usize,
    },
    /// The two supports share no sample.
    EmptyIntersection,
    RowOutOfRange {
        row: usize,
        rows: usize,
    },
    InvalidThreshold(f64),
    UnknownGesture(String),
    PlacementOverflow {
        gesture_id: String,
        end: usize,
        length: usize,
    },
    EmptyGesture(String),
    NotMono(String),
    AmplitudeOutOfRange(String),
    UniverseMismatch {
        left: usize,
        right: usize,
    },
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::RateMismatch { left, right } => {
                write!(f, "sample rates differ: {left} Hz vs {right} Hz")
            }
            AlgebraError::LengthMismatch { left, right } => {
                write!(f, "lengths differ: {left} vs {right} samples")
            }
            AlgebraError::EmptyIntersection => write!(f, "gestures do not overlap"),
            AlgebraError::RowOutOfRange { row, rows } => {
                write!(f, "row {row} out of range for {rows} rows")
            }
            AlgebraError::InvalidThreshold(t) => write!(f, "threshold {t} must be non-negative"),
            AlgebraError::UnknownGesture(id) => write!(f, "unknown gesture '{id}'"),
            AlgebraError::PlacementOverflow {
                gesture_id,
                end,
                length,
            } => write!(
                f,
                "placement of '{gesture_id}' ends at {end}, past timeline length {length}"
            ),
            AlgebraError::EmptyGesture(id) => write!(f, "gesture '{id}' has no samples"),
            AlgebraError::NotMono(id) => write!(f, "gesture '{id}' is not mono"),
            AlgebraError::AmplitudeOutOfRange(id) => {
                write!(f, "gesture '{id}' has amplitudes outside [-1, 1]")
            }
            AlgebraError::UniverseMismatch { left, right } => {
                write!(f, "masks cover different universes: {left} vs {right}")
            }
        }
    }
}

impl core::error::Error for AlgebraError {}

/// A discrete sound object: one mono clip with amplitudes in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gesture {
    id: String,
    buffer: SampleBuffer,
}

impl Gesture {
    pub fn new(id: impl Into<String>, buffer: SampleBuffer) -> Result<Self, AlgebraError> {
        let id = id.into();
        if !buffer.is_mono() {
            return Err(AlgebraError::NotMono(id));
        }
        if buffer.is_empty() {
            return Err(AlgebraError::EmptyGesture(id));
        }
        if buffer
            .samples()
            .iter()
            .any(|x| x.is_nan() || math::abs(*x) > 1.0)
        {
            return Err(AlgebraError::AmplitudeOutOfRange(id));
        }
        Ok(Gesture { id, buffer })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn buffer(&self) -> &SampleBuffer {
        &self.buffer
    }

    pub fn samples(&self) -> &[f64] {
        self.buffer.samples()
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    pub fn rate_hz(&self) -> u32 {
        self.buffer.rate_hz()
    }

    /// The first `len` samples, or the whole gesture if it is shorter.
    pub fn truncated(&self, len: usize) -> Gesture {
        if len >= self.len() || len == 0 {
            return self.clone();
        }
        let buffer = SampleBuffer::mono(self.rate_hz(), self.samples()[..len].to_vec())
            .expect("rate already validated");
        Gesture {
            id: self.id.clone(),
            buffer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub gesture_id: String,
    pub row: usize,
    pub start: usize,
}

/// Rows of gestures laid out over a universe of `length` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    rate_hz: u32,
    length: usize,
    rows: usize,
    gestures: BTreeMap<String, Gesture>,
    placements: Vec<Placement>,
}

impl Timeline {
    pub fn new(rate_hz: u32, length: usize) -> Self {
        Timeline {
            rate_hz,
            length,
            rows: 0,
            gestures: BTreeMap::new(),
            placements: Vec::new(),
        }
    }

    /// Registers a gesture, replacing any earlier one with the same id.
    pub fn add_gesture(&mut self, gesture: Gesture) -> Result<(), AlgebraError> {
        if gesture.rate_hz() != self.rate_hz {
            return Err(AlgebraError::RateMismatch {
                left: self.rate_hz,
                right: gesture.rate_hz(),
            });
        }
        self.gestures.insert(gesture.id.clone(), gesture);
        Ok(())
    }

    pub fn place(&mut self, placement: Placement) -> Result<(), AlgebraError> {
        let gesture = self
            .gestures
            .get(&placement.gesture_id)
            .ok_or_else(|| AlgebraError::UnknownGesture(placement.gesture_id.clone()))?;
        let end = placement.start.saturating_add(gesture.len());
        if end > self.length {
            return Err(AlgebraError::PlacementOverflow {
                gesture_id: placement.gesture_id,
                end,
                length: self.length,
            });
        }
        self.rows = self.rows.max(placement.row + 1);
        self.placements.push(placement);
        Ok(())
    }

    /// Makes rows `0..rows` addressable even if some stay empty.
    pub fn ensure_rows(&mut self, rows: usize) {
        self.rows = self.rows.max(rows);
    }

    pub fn rate_hz(&self) -> u32 {
        self.rate_hz
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn gestures(&self) -> &BTreeMap<String, Gesture> {
        &self.gestures
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    fn active_span<'a>(&'a self, p: &'a Placement) -> (usize, &'a [f64]) {
        (p.start, self.gestures[&p.gesture_id].samples())
    }
}

/// One membership bit per sample of a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMask {
    bits: Vec<bool>,
}

impl SupportMask {
    pub fn empty(len: usize) -> Self {
        SupportMask {
            bits: vec![false; len],
        }
    }

    pub fn full(len: usize) -> Self {
        SupportMask {
            bits: vec![true; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        SupportMask { bits }
    }

    /// Mask that is true on `[start, end)`.
    pub fn interval(len: usize, start: usize, end: usize) -> Self {
        let mut m = Self::empty(len);
        for b in &mut m.bits[start.min(len)..end.min(len)] {
            *b = true;
        }
        m
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn union(&self, other: &SupportMask) -> Result<SupportMask, AlgebraError> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &SupportMask) -> Result<SupportMask, AlgebraError> {
        self.zip_with(other, |a, b| a && b)
    }

    /// Zeroes every sample outside the mask.
    pub fn gate(&self, samples: &[f64]) -> Result<Vec<f64>, AlgebraError> {
        if samples.len() != self.len() {
            return Err(AlgebraError::LengthMismatch {
                left: self.len(),
                right: samples.len(),
            });
        }
        Ok(samples
            .iter()
            .zip(&self.bits)
            .map(|(&x, &on)| if on { x } else { 0.0 })
            .collect())
    }

    fn zip_with(
        &self,
        other: &SupportMask,
        op: impl Fn(bool, bool) -> bool,
    ) -> Result<SupportMask, AlgebraError> {
        if self.len() != other.len() {
            return Err(AlgebraError::UniverseMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(SupportMask {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }
}

/// Outcome of comparing an intersection's dimension with its operands'.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmostDisjointVerdict {
    pub dim_a: f64,
    pub dim_b: f64,
    pub dim_intersection: f64,
    pub is_almost_disjoint: bool,
    /// `min(dim_a, dim_b) - dim_intersection`.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuzzyMode {
    Union,
    Intersect,
}

fn same_rate(a: &Gesture, b: &Gesture) -> Result<(), AlgebraError> {
    if a.rate_hz() != b.rate_hz() {
        return Err(AlgebraError::RateMismatch {
            left: a.rate_hz(),
            right: b.rate_hz(),
        });
    }
    Ok(())
}

/// `a` followed immediately by `b`.
pub fn union_adjacent(a: &Gesture, b: &Gesture) -> Result<SampleBuffer, AlgebraError> {
    same_rate(a, b)?;
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a.samples());
    out.extend_from_slice(b.samples());
    Ok(SampleBuffer::mono(a.rate_hz(), out).expect("rate already validated"))
}

/// The overlap of `a` with `b` shifted by `offset` samples (positive: `b`
/// starts later). Each output sample is the mean of the two layers.
pub fn intersect_overlay(
    a: &Gesture,
    b: &Gesture,
    offset: i64,
) -> Result<SampleBuffer, AlgebraError> {
    same_rate(a, b)?;
    let (len_a, len_b) = (a.len() as i64, b.len() as i64);
    let start = offset.max(0);
    let end = len_a.min(offset.saturating_add(len_b));
    if start >= end {
        return Err(AlgebraError::EmptyIntersection);
    }
    let out = (start..end)
        .map(|i| (a.samples()[i as usize] + b.samples()[(i - offset) as usize]) / 2.0)
        .collect();
    Ok(SampleBuffer::mono(a.rate_hz(), out).expect("rate already validated"))
}

/// Complement within the universe the mask covers.
pub fn negate_support(mask: &SupportMask) -> SupportMask {
    SupportMask {
        bits: mask.bits.iter().map(|b| !b).collect(),
    }
}

/// Samples of the universe covered by placements on `row`. With a positive
/// `threshold`, only samples whose magnitude reaches it count.
pub fn support_mask(t: &Timeline, row: usize, threshold: f64) -> Result<SupportMask, AlgebraError> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(AlgebraError::InvalidThreshold(threshold));
    }
    if row >= t.rows {
        return Err(AlgebraError::RowOutOfRange { row, rows: t.rows });
    }
    let mut mask = SupportMask::empty(t.length);
    for p in t.placements.iter().filter(|p| p.row == row) {
        let (start, samples) = t.active_span(p);
        for (bit, &x) in mask.bits[start..start + samples.len()]
            .iter_mut()
            .zip(samples)
        {
            if threshold == 0.0 || math::abs(x) >= threshold {
                *bit = true;
            }
        }
    }
    Ok(mask)
}

/// Zadeh combination of two equal-length gestures under membership `|x|`.
/// The winning sample keeps its sign; ties go to `a`.
pub fn fuzzy_combine(
    a: &Gesture,
    b: &Gesture,
    mode: FuzzyMode,
) -> Result<SampleBuffer, AlgebraError> {
    same_rate(a, b)?;
    if a.len() != b.len() {
        return Err(AlgebraError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let out = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let (mx, my) = (math::abs(x), math::abs(y));
            let take_b = match mode {
                FuzzyMode::Union => my > mx,
                FuzzyMode::Intersect => my < mx,
            };
            if take_b {
                y
            } else {
                x
            }
        })
        .collect();
    Ok(SampleBuffer::mono(a.rate_hz(), out).expect("rate already validated"))
}

/// Almost-disjoint test: the intersection must sit more than `tolerance`
/// below the smaller operand dimension.
pub fn is_almost_disjoint(
    dim_a: f64,
    dim_b: f64,
    dim_intersection: f64,
    tolerance: f64,
) -> AlmostDisjointVerdict {
    let floor = dim_a.min(dim_b);
    AlmostDisjointVerdict {
        dim_a,
        dim_b,
        dim_intersection,
        is_almost_disjoint: dim_intersection < floor - tolerance,
        margin: floor - dim_intersection,
    }
}

/// Mixes every placement into one mono buffer of the timeline's length,
/// dividing each sample by the number of layers active there.
pub fn render_timeline(t: &Timeline) -> SampleBuffer {
    let mut sum = vec![0.0; t.length];
    let mut layers = vec![0u32; t.length];
    for p in &t.placements {
        let (start, samples) = t.active_span(p);
        let span = start..start + samples.len();
        for ((acc, n), &x) in sum[span.clone()]
            .iter_mut()
            .zip(&mut layers[span])
            .zip(samples)
        {
            *acc += x;
            *n += 1;
        }
    }
    let out = sum
        .into_iter()
        .zip(layers)
        .map(|(s, n)| if n > 1 { s / n as f64 } else { s })
        .collect();
    SampleBuffer::mono(t.rate_hz, out).expect("timeline rate is positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(id: &str, samples: &[f64]) -> Gesture {
        Gesture::new(id, SampleBuffer::mono(100, samples.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn gesture_validation() {
        let stereo = SampleBuffer::new(100, vec![vec![0.0], vec![0.0]]).unwrap();
        assert!(matches!(
            Gesture::new("s", stereo),
            Err(AlgebraError::NotMono(_))
        ));
        let empty = SampleBuffer::mono(100, vec![]).unwrap();
        assert!(matches!(
            Gesture::new("e", empty),
            Err(AlgebraError::EmptyGesture(_))
        ));
        let loud = SampleBuffer::mono(100, vec![1.5]).unwrap();
        assert!(matches!(
            Gesture::new("l", loud),
            Err(AlgebraError::AmplitudeOutOfRange(_))
        ));
    }

    #[test]
    fn union_concatenates() {
        let a = g("a", &[0.1, 0.2, 0.3, 0.4]);
        let b = g("b", &[-0.1, -0.2, -0.3, -0.4]);
        let u = union_adjacent(&a, &b).unwrap();
        assert_eq!(u.len(), 8);
        assert_eq!(&u.samples()[..4], a.samples());
        assert_eq!(&u.samples()[4..], b.samples());
        let aa = union_adjacent(&a, &a).unwrap();
        assert_eq!(aa.samples(), &[0.1, 0.2, 0.3, 0.4, 0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn rate_mismatch() {
        let a = g("a", &[0.1]);
        let b = Gesture::new("b", SampleBuffer::mono(200, vec![0.1]).unwrap()).unwrap();
        assert!(matches!(
            union_adjacent(&a, &b),
            Err(AlgebraError::RateMismatch { .. })
        ));
        assert!(matches!(
            intersect_overlay(&a, &b, 0),
            Err(AlgebraError::RateMismatch { .. })
        ));
        assert!(matches!(
            fuzzy_combine(&a, &b, FuzzyMode::Union),
            Err(AlgebraError::RateMismatch { .. })
        ));
    }

    #[test]
    fn overlay_regions() {
        let a = g("a", &[0.5, -0.25, 0.75, 0.125, 0.0, 0.3, -0.3, 1.0]);
        assert_eq!(intersect_overlay(&a, &a, 0).unwrap().samples(), a.samples());
        let b = g("b", &[0.5; 8]);
        let part = intersect_overlay(&a, &b, 4).unwrap();
        assert_eq!(part.len(), 4);
        assert_eq!(part.samples()[0], (0.0 + 0.5) / 2.0);
        let neg = intersect_overlay(&a, &b, -6).unwrap();
        assert_eq!(neg.len(), 2);
        assert_eq!(neg.samples()[0], (0.5 + 0.5) / 2.0);
        assert_eq!(
            intersect_overlay(&a, &b, 8),
            Err(AlgebraError::EmptyIntersection)
        );
        assert_eq!(
            intersect_overlay(&a, &b, -8),
            Err(AlgebraError::EmptyIntersection)
        );
    }

    #[test]
    fn negation() {
        let m = SupportMask::interval(10, 0, 5);
        let n = negate_support(&m);
        assert_eq!(n, SupportMask::interval(10, 5, 10));
        assert_eq!(negate_support(&n), m);
        assert_eq!(negate_support(&SupportMask::full(4)), SupportMask::empty(4));
    }

    #[test]
    fn mask_combinators() {
        let a = SupportMask::interval(6, 0, 4);
        let b = SupportMask::interval(6, 2, 6);
        assert_eq!(a.union(&b).unwrap(), SupportMask::full(6));
        assert_eq!(a.intersection(&b).unwrap(), SupportMask::interval(6, 2, 4));
        assert!(a.union(&SupportMask::full(3)).is_err());
        assert_eq!(
            a.gate(&[1.0; 6]).unwrap(),
            vec![1.0, 1.0, 1.0, 1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn support_from_placements() {
        let mut t = Timeline::new(100, 20);
        t.add_gesture(g("x", &[0.5, 0.0, -0.8])).unwrap();
        t.place(Placement {
            gesture_id: "x".into(),
            row: 1,
            start: 4,
        })
        .unwrap();
        assert_eq!(t.rows(), 2);
        assert_eq!(support_mask(&t, 0, 0.0).unwrap(), SupportMask::empty(20));
        let m = support_mask(&t, 1, 0.0).unwrap();
        assert_eq!(m, SupportMask::interval(20, 4, 7));
        assert_eq!(m.count(), 3);
        assert_eq!(support_mask(&t, 1, 0.6).unwrap().count(), 1);
        assert_eq!(support_mask(&t, 1, 1.1).unwrap(), SupportMask::empty(20));
        assert!(matches!(
            support_mask(&t, 2, 0.0),
            Err(AlgebraError::RowOutOfRange { row: 2, rows: 2 })
        ));
        assert!(matches!(
            support_mask(&t, 0, -1.0),
            Err(AlgebraError::InvalidThreshold(_))
        ));
    }

    #[test]
    fn timeline_rejects_bad_placements() {
        let mut t = Timeline::new(100, 4);
        t.add_gesture(g("x", &[0.5, 0.5, 0.5])).unwrap();
        assert!(matches!(
            t.place(Placement {
                gesture_id: "x".into(),
                row: 0,
                start: 2
            }),
            Err(AlgebraError::PlacementOverflow { end: 5, .. })
        ));
        assert!(matches!(
            t.place(Placement {
                gesture_id: "y".into(),
                row: 0,
                start: 0
            }),
            Err(AlgebraError::UnknownGesture(_))
        ));
        let other_rate = Gesture::new("z", SampleBuffer::mono(50, vec![0.0]).unwrap()).unwrap();
        assert!(matches!(
            t.add_gesture(other_rate),
            Err(AlgebraError::RateMismatch { .. })
        ));
    }

    #[test]
    fn fuzzy_examples() {
        let a = g("a", &[0.2]);
        let b = g("b", &[-0.9]);
        assert_eq!(
            fuzzy_combine(&a, &b, FuzzyMode::Union).unwrap().samples(),
            &[-0.9]
        );
        assert_eq!(
            fuzzy_combine(&a, &b, FuzzyMode::Intersect)
                .unwrap()
                .samples(),
            &[0.2]
        );
        // tie on magnitude keeps a's sign
        let c = g("c", &[-0.2]);
        assert_eq!(
            fuzzy_combine(&a, &c, FuzzyMode::Union).unwrap().samples(),
            &[0.2]
        );
        assert_eq!(
            fuzzy_combine(&c, &a, FuzzyMode::Intersect)
                .unwrap()
                .samples(),
            &[-0.2]
        );
        let long = g("l", &[0.1, 0.2]);
        assert!(matches!(
            fuzzy_combine(&a, &long, FuzzyMode::Union),
            Err(AlgebraError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn almost_disjoint_examples() {
        assert!(is_almost_disjoint(1.0, 1.0, 0.0, 0.0).is_almost_disjoint);
        assert!(!is_almost_disjoint(2.0, 2.0, 2.0, 0.0).is_almost_disjoint);
        let v = is_almost_disjoint(1.30, 1.30, 1.19, 0.05);
        assert!(v.is_almost_disjoint);
        assert!((v.margin - 0.11).abs() < 1e-12);
        assert!(!is_almost_disjoint(1.30, 1.30, 1.19, 0.2).is_almost_disjoint);
    }

    #[test]
    fn render_mixing_law() {
        let t = Timeline::new(100, 100);
        let silent = render_timeline(&t);
        assert_eq!(silent.len(), 100);
        assert!(silent.samples().iter().all(|&x| x == 0.0));

        let gest = g("g", &[0.3, -0.7, 1.0, -1.0]);
        let mut t = Timeline::new(100, 10);
        t.add_gesture(gest.clone()).unwrap();
        t.place(Placement {
            gesture_id: "g".into(),
            row: 0,
            start: 0,
        })
        .unwrap();
        assert_eq!(&render_timeline(&t).samples()[..4], gest.samples());
        t.place(Placement {
            gesture_id: "g".into(),
            row: 1,
            start: 0,
        })
        .unwrap();
        assert_eq!(&render_timeline(&t).samples()[..4], gest.samples());
        t.place(Placement {
            gesture_id: "g".into(),
            row: 2,
            start: 2,
        })
        .unwrap();
        let r = render_timeline(&t);
        assert_eq!(r.samples()[2], (1.0 + 1.0 + 0.3) / 3.0);
        assert_eq!(r.samples()[3], (-1.0 - 1.0 - 0.7) / 3.0);
        assert_eq!(r.samples()[5], -1.0);
        assert_eq!(r.samples()[9], 0.0);
    }
}
