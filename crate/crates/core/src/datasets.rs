//! Published maximal-gap record tables: parsing, validation, merging with
//! computed tables.
//!
//! Line format, one record per line:
//!
//! ```text
//! # comment (a `# provenance: ...` comment names the source)
//! <gap> <opening prime>
//! ```
//!
//! Two base-10 integers separated by spaces or tabs; `#` starts a comment
//! that runs to end of line; blank lines are ignored; gaps must increase.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::primality::is_prime;
use crate::real::Real;
use crate::scanner::{sqrt_difference, GapRecord, GapRecordTable, TableSource};
use crate::sieve::PrimeEngine;

/// The bundled list of the 75 maximal gaps known up to gap 1476.
pub const BUNDLED_MAXIMAL_GAPS: &str = include_str!("../data/maximal_gaps.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub gap: u64,
    pub computed: Option<u64>,
    pub reference: Option<u64>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: Option<u64>| p.map_or_else(|| "none".to_string(), |p| p.to_string());
        write!(
            f,
            "gap {}: computed {} vs reference {}",
            self.gap,
            show(self.computed),
            show(self.reference)
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: record ({gap}, {prime}) rejected: {reason}")]
    Invalid {
        line: usize,
        gap: u64,
        prime: u64,
        reason: String,
    },
    #[error("computed and reference records disagree: {}", list(.0))]
    Inconsistent(Vec<Mismatch>),
    #[error("merge expects a computed table, got {0:?}")]
    NotComputed(TableSource),
}

fn list(m: &[Mismatch]) -> String {
    m.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceRecord {
    pub gap: u64,
    pub p: u64,
}

impl ReferenceRecord {
    pub fn q(&self) -> u64 {
        self.p + self.gap
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReferenceTable {
    pub records: Vec<ReferenceRecord>,
    pub provenance: String,
}

impl ReferenceTable {
    pub fn bundled() -> Self {
        parse_reference_table(BUNDLED_MAXIMAL_GAPS).expect("bundled fixture is valid")
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Canonical text: `<gap> <prime>` per line, single space, no comments.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{} {}\n", r.gap, r.p));
        }
        out
    }

    pub fn to_record_table<T: Real>(&self) -> GapRecordTable<T> {
        GapRecordTable {
            records: self
                .records
                .iter()
                .map(|r| GapRecord::from_pair(r.p, r.gap, None))
                .collect(),
            source: TableSource::Reference,
            limit: self.records.last().map_or(0, |r| r.q() + 1),
        }
    }

    /// Checks that no prime lies strictly inside any recorded gap. Parsing
    /// only checks the endpoints.
    pub fn check_consecutive(&self, engine: &PrimeEngine) -> Result<(), ReferenceRecord> {
        for r in &self.records {
            let inside = engine
                .primes_in_range(r.p + 1, r.q())
                .expect("engine auto-splits");
            if !inside.is_empty() {
                return Err(*r);
            }
        }
        Ok(())
    }
}

pub fn parse_reference_table(text: &str) -> Result<ReferenceTable, DatasetError> {
    let mut records: Vec<ReferenceRecord> = Vec::new();
    let mut provenance = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (body, comment) = match raw.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (raw, None),
        };
        if let Some(src) = comment.and_then(|c| c.trim().strip_prefix("provenance:")) {
            provenance.push(src.trim().to_string());
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(DatasetError::Parse {
                line,
                message: format!("expected `<gap> <prime>`, found {} fields", fields.len()),
            });
        }
        let number = |s: &str| {
            s.parse::<u64>().map_err(|e| DatasetError::Parse {
                line,
                message: format!("`{s}`: {e}"),
            })
        };
        let (gap, p) = (number(fields[0])?, number(fields[1])?);
        let invalid = |reason: String| DatasetError::Invalid {
            line,
            gap,
            prime: p,
            reason,
        };
        if gap == 0 {
            return Err(invalid("gap must be positive".into()));
        }
        let q = p
            .checked_add(gap)
            .ok_or_else(|| invalid("closing prime overflows 64 bits".into()))?;
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        if !is_prime(q) {
            return Err(invalid(format!("{p} + {gap} = {q} is not prime")));
        }
        if let Some(prev) = records.last() {
            if gap <= prev.gap || p <= prev.p {
                return Err(invalid(format!(
                    "not increasing after ({}, {})",
                    prev.gap, prev.p
                )));
            }
        }
        records.push(ReferenceRecord { gap, p });
    }
    Ok(ReferenceTable {
        records,
        provenance: provenance.join(" "),
    })
}

/// Extends a computed table with the reference records beyond its reach.
///
/// Both sides must agree wherever they overlap: a gap present in both must
/// open at the same prime, a reference record below the computed limit must
/// have been found by the scan, and between its smallest and largest gap below
/// the limit the reference may not skip a computed record.
pub fn merge_records<T: Real>(
    computed: &GapRecordTable<T>,
    reference: &ReferenceTable,
) -> Result<GapRecordTable<T>, DatasetError> {
    if computed.source != TableSource::Computed {
        return Err(DatasetError::NotComputed(computed.source));
    }
    let limit = computed.limit;
    let ours: BTreeMap<u64, u64> = computed.records.iter().map(|r| (r.gap, r.p)).collect();
    let theirs: BTreeMap<u64, u64> = reference.records.iter().map(|r| (r.gap, r.p)).collect();
    let mut mismatches = Vec::new();

    for r in &computed.records {
        if let Some(&p) = theirs.get(&r.gap) {
            if p != r.p {
                mismatches.push(Mismatch {
                    gap: r.gap,
                    computed: Some(r.p),
                    reference: Some(p),
                });
            }
        }
    }
    let below: Vec<u64> = reference
        .records
        .iter()
        .filter(|r| r.q() < limit)
        .map(|r| r.gap)
        .collect();
    for r in reference.records.iter().filter(|r| r.q() < limit) {
        if !ours.contains_key(&r.gap) {
            mismatches.push(Mismatch {
                gap: r.gap,
                computed: None,
                reference: Some(r.p),
            });
        }
    }
    if let (Some(&lo), Some(&hi)) = (below.first(), below.last()) {
        for r in computed.records.iter().filter(|r| (lo..=hi).contains(&r.gap)) {
            if !theirs.contains_key(&r.gap) {
                mismatches.push(Mismatch {
                    gap: r.gap,
                    computed: Some(r.p),
                    reference: None,
                });
            }
        }
    }

    let mut merged = computed.records.clone();
    for r in reference.records.iter().filter(|r| r.q() >= limit) {
        if let Some(last) = merged.last() {
            if r.gap <= last.gap || r.p <= last.p {
                // A larger gap already appears below the limit, so this one
                // cannot be a record.
                if ours.get(&r.gap) != Some(&r.p) {
                    mismatches.push(Mismatch {
                        gap: r.gap,
                        computed: ours.get(&r.gap).copied(),
                        reference: Some(r.p),
                    });
                }
                continue;
            }
        }
        merged.push(GapRecord::from_pair(r.p, r.gap, None));
    }

    if !mismatches.is_empty() {
        mismatches.sort_by_key(|m| m.gap);
        mismatches.dedup();
        return Err(DatasetError::Inconsistent(mismatches));
    }
    let merged_limit = match merged.last() {
        Some(last) if last.q >= limit => last.q + 1,
        _ => limit,
    };
    Ok(GapRecordTable {
        records: merged,
        source: TableSource::Merged,
        limit: merged_limit,
    })
}

/// `(p_L, √(p_L + g) − √p_L)` for each reference record, in quotient form.
pub fn r_points_from_reference<T: Real>(reference: &ReferenceTable) -> Vec<(u64, T)> {
    reference
        .records
        .iter()
        .map(|r| (r.p, sqrt_difference(r.p, r.gap)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scanner::max_gap_records;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parses_largest_known_gap() {
        let t = parse_reference_table("1476 1425172824437699411\n").unwrap();
        assert_eq!(
            t.records,
            vec![ReferenceRecord {
                gap: 1476,
                p: 1_425_172_824_437_699_411
            }]
        );
    }

    #[test]
    fn whitespace_comments_and_blanks() {
        let text = "# provenance: test data\n\n 1\t2  # first\n2 3\n   \n4     7\n";
        let t = parse_reference_table(text).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.provenance, "test data");
        assert_eq!(t.serialize(), "1 2\n2 3\n4 7\n");
    }

    #[test]
    fn bundled_fixture_has_75_records() {
        let t = ReferenceTable::bundled();
        assert_eq!(t.len(), 75);
        assert_eq!(t.records.last().unwrap().gap, 1476);
        assert!(t.provenance.contains("trnicely.net"));
    }

    #[test]
    fn composite_entry_is_rejected() {
        let err = parse_reference_table("1 2\n14 115\n").unwrap_err();
        match err {
            DatasetError::Invalid { line, gap, prime, .. } => {
                assert_eq!((line, gap, prime), (2, 14, 115));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_reference_table("14 113\n1 2\n"),
            Err(DatasetError::Invalid { line: 2, .. })
        ));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        assert!(matches!(
            parse_reference_table("1 2\n\n2 3 4\n"),
            Err(DatasetError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_reference_table("x 2\n"),
            Err(DatasetError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_reference_table("0 2\n"),
            Err(DatasetError::Invalid { .. })
        ));
        assert!(matches!(
            parse_reference_table("2 18446744073709551557\n"),
            Err(DatasetError::Invalid { .. })
        ));
    }

    #[test]
    fn merge_with_empty_reference_is_identity() {
        let computed = max_gap_records::<f64>(10_000);
        let merged = merge_records(&computed, &ReferenceTable::default()).unwrap();
        assert_eq!(merged.records, computed.records);
        assert_eq!(merged.limit, computed.limit);
        assert_eq!(merged.source, TableSource::Merged);
    }

    #[test]
    fn merge_detects_wrong_opening_prime() {
        let computed = max_gap_records::<f64>(1000);
        // 127 + 14 = 141 is composite, so build the corrupt table by hand.
        let reference = ReferenceTable {
            records: vec![ReferenceRecord { gap: 14, p: 127 }],
            provenance: String::new(),
        };
        let err = merge_records(&computed, &reference).unwrap_err();
        assert_eq!(
            err,
            DatasetError::Inconsistent(vec![Mismatch {
                gap: 14,
                computed: Some(113),
                reference: Some(127)
            }])
        );
    }

    #[test]
    fn merge_detects_omissions_on_either_side() {
        let computed = max_gap_records::<f64>(1000);
        let skip_six = parse_reference_table("1 2\n2 3\n4 7\n8 89\n").unwrap();
        assert!(matches!(
            merge_records(&computed, &skip_six),
            Err(DatasetError::Inconsistent(m)) if m[0].gap == 6 && m[0].reference.is_none()
        ));
        let short = max_gap_records::<f64>(100);
        let mut extra = ReferenceTable::bundled();
        extra.records.truncate(6);
        assert!(merge_records(&short, &extra).is_ok());
    }

    #[test]
    fn merge_rejects_non_computed_input() {
        let t = ReferenceTable::bundled().to_record_table::<f64>();
        assert_eq!(
            merge_records(&t, &ReferenceTable::default()),
            Err(DatasetError::NotComputed(TableSource::Reference))
        );
    }

    #[test]
    fn merge_extends_with_fixture() {
        let computed = max_gap_records::<f64>(1_000_000);
        let merged = merge_records(&computed, &ReferenceTable::bundled()).unwrap();
        assert_eq!(merged.records.len(), 75);
        assert_eq!(&merged.records[..computed.records.len()], &computed.records[..]);
        assert!(merged.is_monotone());
        assert_eq!(merged.limit, 1_425_172_824_437_699_411 + 1476 + 1);
    }

    #[test]
    fn reference_r_points() {
        let t = parse_reference_table("1 2\n14 113\n1476 1425172824437699411\n").unwrap();
        let pts: Vec<(u64, f64)> = r_points_from_reference(&t);
        assert_abs_diff_eq!(pts[0].1, 0.317837245, epsilon = 5e-10);
        assert_abs_diff_eq!(pts[1].1, 0.6392819, epsilon = 5e-8);
        assert!((pts[2].1 / 6.18190882585027e-7 - 1.0).abs() < 1e-14);
    }
}
