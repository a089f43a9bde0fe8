//! Domain types shared by every other module: time intervals, power
//! quantities, schedule fragments and protocol messages.
//!
//! All times are integer seconds since the simulation epoch, all powers are
//! integer watts. Intervals are half-open `[start, end)`, so adjacent
//! schedule slots partition time without double-counting. Gcd-based
//! atomization is only well-defined over integers; fractional inputs are
//! rejected when scenarios are parsed.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid interval [{start}, {end}): end must exceed start")]
    InvalidInterval { start: u64, end: u64 },
    #[error("no intervals")]
    NoIntervals,
    #[error("mapping has no entries")]
    EmptyMapping,
    #[error("mapping entry has zero magnitude")]
    ZeroMagnitude,
    #[error("mapping entries overlap at t={at}")]
    OverlappingEntries { at: u64 },
    #[error("mapping mixes supply and demand entries")]
    MixedDirections,
    #[error("malformed notification: {0}")]
    InvalidNotification(&'static str),
}

/// Half-open time interval `[start, end)` in whole seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TimeInterval {
    start: u64,
    end: u64,
}

impl TimeInterval {
    pub fn new(start: u64, end: u64) -> Result<Self, ModelError> {
        if end <= start {
            return Err(ModelError::InvalidInterval { start, end });
        }
        Ok(TimeInterval { start, end })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    pub fn duration(&self) -> u64 {
        self.end - self.start
    }

    /// Overlap of two intervals, if non-empty.
    pub fn intersect(&self, other: &TimeInterval) -> Option<TimeInterval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        if start < end {
            Some(TimeInterval { start, end })
        } else {
            None
        }
    }

    pub fn contains(&self, other: &TimeInterval) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// Smallest interval covering both.
    pub fn hull(&self, other: &TimeInterval) -> TimeInterval {
        TimeInterval {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// Whether power is offered into the grid or requested from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Supply,
    Demand,
}

impl Direction {
    pub fn opposite(self) -> Direction {
        match self {
            Direction::Supply => Direction::Demand,
            Direction::Demand => Direction::Supply,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Supply => write!(f, "supply"),
            Direction::Demand => write!(f, "demand"),
        }
    }
}

/// A directed, non-negative amount of power in whole watts.
///
/// Direction is a field rather than a sign so magnitudes stay non-negative;
/// gcd atomization and atom counts work on the magnitudes directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PowerQuantum {
    pub magnitude: u64,
    pub direction: Direction,
}

impl PowerQuantum {
    pub fn new(magnitude: u64, direction: Direction) -> Self {
        PowerQuantum {
            magnitude,
            direction,
        }
    }
}

/// A schedule fragment: an ordered list of non-overlapping time intervals,
/// each holding one power quantum.
///
/// Construction normalizes: entries are sorted by start, adjacent entries
/// with equal power merge into one. All entries of one mapping carry the
/// same direction. `new` rejects empty input; the explicit empty mapping
/// (used by acknowledgement payloads) comes from [`TimePowerMapping::empty`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TimePowerMapping {
    entries: Vec<(TimeInterval, PowerQuantum)>,
}

impl TimePowerMapping {
    pub fn new(mut entries: Vec<(TimeInterval, PowerQuantum)>) -> Result<Self, ModelError> {
        if entries.is_empty() {
            return Err(ModelError::EmptyMapping);
        }
        if entries.iter().any(|(_, p)| p.magnitude == 0) {
            return Err(ModelError::ZeroMagnitude);
        }
        let dir = entries[0].1.direction;
        if entries.iter().any(|(_, p)| p.direction != dir) {
            return Err(ModelError::MixedDirections);
        }
        entries.sort_by_key(|(iv, _)| (iv.start, iv.end));
        for w in entries.windows(2) {
            if w[1].0.start < w[0].0.end {
                return Err(ModelError::OverlappingEntries { at: w[1].0.start });
            }
        }
        // merge adjacent runs of equal power
        let mut merged: Vec<(TimeInterval, PowerQuantum)> = Vec::with_capacity(entries.len());
        for (iv, p) in entries {
            match merged.last_mut() {
                Some((last_iv, last_p)) if last_iv.end == iv.start && *last_p == p => {
                    last_iv.end = iv.end;
                }
                _ => merged.push((iv, p)),
            }
        }
        Ok(TimePowerMapping { entries: merged })
    }

    /// Convenience constructor for a single-entry mapping.
    pub fn single(interval: TimeInterval, power: PowerQuantum) -> Result<Self, ModelError> {
        Self::new(vec![(interval, power)])
    }

    /// The empty mapping. Only acknowledgement payloads carry it.
    pub fn empty() -> Self {
        TimePowerMapping {
            entries: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(TimeInterval, PowerQuantum)] {
        &self.entries
    }

    /// Uniform direction of the entries, if any exist.
    pub fn direction(&self) -> Option<Direction> {
        self.entries.first().map(|(_, p)| p.direction)
    }

    /// Smallest interval covering every entry.
    pub fn hull(&self) -> Option<TimeInterval> {
        let first = self.entries.first()?.0;
        let last = self.entries.last()?.0;
        Some(first.hull(&last))
    }

    /// Magnitude in force over `interval`, or 0 where no entry covers it.
    /// `interval` must not straddle an entry boundary.
    pub fn magnitude_over(&self, interval: &TimeInterval) -> u64 {
        for (iv, p) in &self.entries {
            if iv.contains(interval) {
                return p.magnitude;
            }
        }
        0
    }

    /// Total energy content in watt-seconds.
    pub fn total_watt_seconds(&self) -> u128 {
        self.entries
            .iter()
            .map(|(iv, p)| iv.duration() as u128 * p.magnitude as u128)
            .sum()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Gcd of every interval duration across the given mappings.
pub fn duration_gcd<'a, I>(mappings: I) -> Result<u64, ModelError>
where
    I: IntoIterator<Item = &'a TimePowerMapping>,
{
    let mut g = 0u64;
    for m in mappings {
        for (iv, _) in m.entries() {
            g = gcd(g, iv.duration());
        }
    }
    if g == 0 {
        Err(ModelError::NoIntervals)
    } else {
        Ok(g)
    }
}

/// Gcd of every power magnitude across the given mappings.
pub fn power_gcd<'a, I>(mappings: I) -> Result<u64, ModelError>
where
    I: IntoIterator<Item = &'a TimePowerMapping>,
{
    let mut g = 0u64;
    for m in mappings {
        for (_, p) in m.entries() {
            g = gcd(g, p.magnitude);
        }
    }
    if g == 0 {
        Err(ModelError::NoIntervals)
    } else {
        Ok(g)
    }
}

/// Identity of one agent within a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AgentId(pub u32);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unique identifier of an emitted notification. The id of the initial
/// notification doubles as the negotiation's request id; replies carry it in
/// their correlation field. Zero is reserved for "no correlation" on the
/// wire, so generated ids are always non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MessageId(pub u128);

impl MessageId {
    /// Deterministic id from an agent and its per-agent message counter.
    pub fn compose(agent: AgentId, seq: u64) -> MessageId {
        MessageId(((agent.0 as u128 + 1) << 64) | (seq as u128 + 1))
    }
}

impl fmt::Display for MessageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NotificationKind {
    Demand,
    Offer,
    Acceptance,
    AcceptanceAck,
}

impl NotificationKind {
    pub fn is_initial_kind(self) -> bool {
        matches!(self, NotificationKind::Demand | NotificationKind::Offer)
    }

    pub fn label(self) -> &'static str {
        match self {
            NotificationKind::Demand => "demand",
            NotificationKind::Offer => "offer",
            NotificationKind::Acceptance => "acceptance",
            NotificationKind::AcceptanceAck => "acceptance_ack",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AckStatus {
    Confirm,
    Withdraw,
}

/// One protocol message.
///
/// A Demand or Offer with no correlation opens a negotiation; the same kinds
/// with a correlation are replies to the initial notification they name.
/// Acceptance and AcceptanceAck always correlate, and only AcceptanceAck
/// carries an `ack_status`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Notification {
    pub kind: NotificationKind,
    pub id: MessageId,
    pub correlation: Option<MessageId>,
    pub origin: AgentId,
    pub sender: AgentId,
    pub hop_count: u16,
    pub mapping: TimePowerMapping,
    pub ack_status: Option<AckStatus>,
}

impl Notification {
    /// Whether this is an initial Demand/Offer (no correlation).
    pub fn is_initial(&self) -> bool {
        self.kind.is_initial_kind() && self.correlation.is_none()
    }

    /// The negotiation this message belongs to: its correlation if present,
    /// otherwise its own id (initials).
    pub fn negotiation_id(&self) -> MessageId {
        self.correlation.unwrap_or(self.id)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self.kind {
            NotificationKind::Demand | NotificationKind::Offer => {
                if self.mapping.is_empty() {
                    return Err(ModelError::InvalidNotification(
                        "demand/offer requires a non-empty mapping",
                    ));
                }
                if self.ack_status.is_some() {
                    return Err(ModelError::InvalidNotification(
                        "ack_status on a non-ack notification",
                    ));
                }
            }
            NotificationKind::Acceptance => {
                if self.correlation.is_none() {
                    return Err(ModelError::InvalidNotification(
                        "acceptance requires a correlation",
                    ));
                }
                if self.mapping.is_empty() {
                    return Err(ModelError::InvalidNotification(
                        "acceptance requires a non-empty mapping",
                    ));
                }
                if self.ack_status.is_some() {
                    return Err(ModelError::InvalidNotification(
                        "ack_status on a non-ack notification",
                    ));
                }
            }
            NotificationKind::AcceptanceAck => {
                if self.correlation.is_none() {
                    return Err(ModelError::InvalidNotification(
                        "acceptance ack requires a correlation",
                    ));
                }
                if self.ack_status.is_none() {
                    return Err(ModelError::InvalidNotification(
                        "acceptance ack requires an ack status",
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(start: u64, end: u64) -> TimeInterval {
        TimeInterval::new(start, end).unwrap()
    }

    fn supply(watts: u64) -> PowerQuantum {
        PowerQuantum::new(watts, Direction::Supply)
    }

    fn mapping(entries: &[(u64, u64, u64)]) -> TimePowerMapping {
        TimePowerMapping::new(
            entries
                .iter()
                .map(|&(s, e, w)| (iv(s, e), supply(w)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn interval_rejects_empty_and_reversed() {
        assert!(TimeInterval::new(5, 5).is_err());
        assert!(TimeInterval::new(7, 3).is_err());
        assert_eq!(iv(3, 7).duration(), 4);
    }

    #[test]
    fn intersect_overlap() {
        assert_eq!(iv(0, 10).intersect(&iv(5, 20)), Some(iv(5, 10)));
    }

    #[test]
    fn intersect_touching_half_open() {
        assert_eq!(iv(0, 5).intersect(&iv(5, 9)), None);
    }

    #[test]
    fn intersect_identity() {
        assert_eq!(iv(3, 7).intersect(&iv(3, 7)), Some(iv(3, 7)));
    }

    #[test]
    fn duration_gcd_pair() {
        let maps = [mapping(&[(0, 900, 1)]), mapping(&[(0, 600, 1)])];
        assert_eq!(duration_gcd(&maps).unwrap(), 300);
    }

    #[test]
    fn duration_gcd_single() {
        let maps = [mapping(&[(0, 60, 1)])];
        assert_eq!(duration_gcd(&maps).unwrap(), 60);
    }

    #[test]
    fn duration_gcd_coprime() {
        // gcd(7, 13) = 1, gcd(1, 21) = 1
        let maps = [mapping(&[(0, 7, 1), (10, 23, 1), (30, 51, 1)])];
        assert_eq!(duration_gcd(&maps).unwrap(), 1);
    }

    #[test]
    fn duration_gcd_empty_input() {
        assert_eq!(duration_gcd([].iter()), Err(ModelError::NoIntervals));
    }

    #[test]
    fn power_gcd_paper_values() {
        let maps = [
            mapping(&[(0, 10, 5)]),
            mapping(&[(0, 10, 51)]),
            mapping(&[(0, 10, 150)]),
        ];
        assert_eq!(power_gcd(&maps).unwrap(), 1);
    }

    #[test]
    fn power_gcd_equal_values() {
        let maps = [mapping(&[(0, 10, 100)]), mapping(&[(0, 10, 100)])];
        assert_eq!(power_gcd(&maps).unwrap(), 100);
    }

    #[test]
    fn power_gcd_composite() {
        // gcd(12, 18, 30) = 6
        let maps = [mapping(&[(0, 10, 12), (10, 20, 18), (20, 30, 30)])];
        assert_eq!(power_gcd(&maps).unwrap(), 6);
    }

    #[test]
    fn mapping_rejects_zero_magnitude() {
        let r = TimePowerMapping::new(vec![(iv(0, 5), supply(0))]);
        assert_eq!(r, Err(ModelError::ZeroMagnitude));
    }

    #[test]
    fn mapping_rejects_overlap() {
        let r = TimePowerMapping::new(vec![(iv(0, 5), supply(1)), (iv(3, 8), supply(1))]);
        assert!(matches!(r, Err(ModelError::OverlappingEntries { at: 3 })));
    }

    #[test]
    fn mapping_rejects_mixed_directions() {
        let r = TimePowerMapping::new(vec![
            (iv(0, 5), supply(1)),
            (iv(5, 8), PowerQuantum::new(1, Direction::Demand)),
        ]);
        assert_eq!(r, Err(ModelError::MixedDirections));
    }

    #[test]
    fn mapping_sorts_and_merges_adjacent_equal_power() {
        let m = TimePowerMapping::new(vec![
            (iv(5, 9), supply(4)),
            (iv(0, 5), supply(4)),
            (iv(9, 12), supply(7)),
        ])
        .unwrap();
        assert_eq!(
            m.entries(),
            &[(iv(0, 9), supply(4)), (iv(9, 12), supply(7))]
        );
    }

    #[test]
    fn normalization_is_idempotent() {
        let m = mapping(&[(0, 5, 4), (5, 9, 4), (20, 30, 2)]);
        let again = TimePowerMapping::new(m.entries().to_vec()).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn magnitude_over_slices() {
        let m = mapping(&[(0, 300, 6), (300, 600, 4)]);
        assert_eq!(m.magnitude_over(&iv(0, 300)), 6);
        assert_eq!(m.magnitude_over(&iv(300, 450)), 4);
        assert_eq!(m.magnitude_over(&iv(600, 900)), 0);
    }

    #[test]
    fn watt_seconds() {
        let m = mapping(&[(0, 300, 6), (300, 600, 4)]);
        assert_eq!(m.total_watt_seconds(), 300 * 6 + 300 * 4);
    }

    #[test]
    fn message_id_compose_nonzero_and_unique() {
        let a = MessageId::compose(AgentId(0), 0);
        let b = MessageId::compose(AgentId(0), 1);
        let c = MessageId::compose(AgentId(1), 0);
        assert_ne!(a.0, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(b, c);
    }

    #[test]
    fn notification_validation() {
        let initial = Notification {
            kind: NotificationKind::Demand,
            id: MessageId(1),
            correlation: None,
            origin: AgentId(1),
            sender: AgentId(1),
            hop_count: 0,
            mapping: mapping(&[(0, 900, 10)]),
            ack_status: None,
        };
        assert!(initial.validate().is_ok());
        assert!(initial.is_initial());

        let bad_ack = Notification {
            kind: NotificationKind::AcceptanceAck,
            correlation: Some(MessageId(1)),
            ack_status: None,
            ..initial.clone()
        };
        assert!(bad_ack.validate().is_err());

        let ack = Notification {
            kind: NotificationKind::AcceptanceAck,
            correlation: Some(MessageId(1)),
            ack_status: Some(AckStatus::Withdraw),
            mapping: TimePowerMapping::empty(),
            ..initial.clone()
        };
        assert!(ack.validate().is_ok());
        assert!(!ack.is_initial());
        assert_eq!(ack.negotiation_id(), MessageId(1));
    }
}
