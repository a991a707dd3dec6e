//! ℓ∞ Hausdorff distances between profile sets and Cauchy diagnostics for
//! sequences of them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::ProfileSet;
use crate::rational::{abs_diff, int, to_exact_string, to_f64, Rational};
use crate::setfn::QuotientPoint;

/// `max_I |p_I − q_I|`.
pub fn linf_distance(p: &QuotientPoint, q: &QuotientPoint) -> Result<Rational> {
    if p.k() != q.k() {
        return Err(Error::DimensionMismatch {
            left: p.k(),
            right: q.k(),
        });
    }
    Ok(linf_unchecked(p, q))
}

fn linf_unchecked(p: &QuotientPoint, q: &QuotientPoint) -> Rational {
    p.coords()
        .iter()
        .zip(q.coords())
        .map(|(a, b)| abs_diff(a, b))
        .max()
        .unwrap_or_else(|| int(0))
}

fn same_k(a: &[QuotientPoint], b: &[QuotientPoint]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyProfile);
    }
    for p in a.iter().chain(b) {
        if p.k() != a[0].k() {
            return Err(Error::DimensionMismatch {
                left: a[0].k(),
                right: p.k(),
            });
        }
    }
    Ok(())
}

/// Distance from `p` to the nearest point of `b`.
pub fn point_to_set(p: &QuotientPoint, b: &[QuotientPoint]) -> Rational {
    let mut best: Option<Rational> = None;
    for q in b {
        let d = linf_unchecked(p, q);
        if best.map_or(true, |cur| d < cur) {
            if d == int(0) {
                return d;
            }
            best = Some(d);
        }
    }
    best.expect("nonempty target set")
}

/// `sup_{a∈A} inf_{b∈B} ‖a − b‖∞` with the first point of `A` attaining it.
pub fn directed_points(a: &[QuotientPoint], b: &[QuotientPoint]) -> Result<(Rational, QuotientPoint)> {
    same_k(a, b)?;
    let dists: Vec<Rational> = a.par_iter().map(|p| point_to_set(p, b)).collect();
    let mut best = 0;
    for (i, d) in dists.iter().enumerate() {
        if *d > dists[best] {
            best = i;
        }
    }
    Ok((dists[best], a[best].clone()))
}

pub fn directed(a: &ProfileSet, b: &ProfileSet) -> Result<(Rational, QuotientPoint)> {
    directed_points(&a.point_vec(), &b.point_vec())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HausdorffReport {
    #[serde(with = "crate::rational::exact_str")]
    pub distance: Rational,
    #[serde(with = "crate::rational::exact_str")]
    pub directed_ab: Rational,
    #[serde(with = "crate::rational::exact_str")]
    pub directed_ba: Rational,
    /// Point of `A` farthest from `B`.
    pub witness_ab: QuotientPoint,
    /// Point of `B` farthest from `A`.
    pub witness_ba: QuotientPoint,
}

pub fn hausdorff_points(a: &[QuotientPoint], b: &[QuotientPoint]) -> Result<HausdorffReport> {
    let (ab, witness_ab) = directed_points(a, b)?;
    let (ba, witness_ba) = directed_points(b, a)?;
    Ok(HausdorffReport {
        distance: ab.max(ba),
        directed_ab: ab,
        directed_ba: ba,
        witness_ab,
        witness_ba,
    })
}

pub fn hausdorff(a: &ProfileSet, b: &ProfileSet) -> Result<HausdorffReport> {
    if a.k() != b.k() {
        return Err(Error::DimensionMismatch {
            left: a.k(),
            right: b.k(),
        });
    }
    hausdorff_points(&a.point_vec(), &b.point_vec())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Containment {
    pub holds: bool,
    /// A point of `A` farther than `ε` from `B`.
    pub witness: Option<QuotientPoint>,
}

/// Whether `A ⊆ B^ε` in ℓ∞.
pub fn eps_contained_points(a: &[QuotientPoint], b: &[QuotientPoint], eps: &Rational) -> Result<Containment> {
    same_k(a, b)?;
    let witness = a.iter().find(|p| point_to_set(p, b) > *eps).cloned();
    Ok(Containment {
        holds: witness.is_none(),
        witness,
    })
}

pub fn eps_contained(a: &ProfileSet, b: &ProfileSet, eps: &Rational) -> Result<Containment> {
    eps_contained_points(&a.point_vec(), &b.point_vec(), eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWithCauchy,
    Inconclusive,
    Diverging,
}

/// Thresholds for the verdict. With `s_0` the tail supremum over the whole
/// prefix and `s_last` the distance between the last two sets, the verdict
/// is consistent when `s_last ≤ decrease·s_0`, diverging when
/// `s_last ≥ stall·s_0`, and inconclusive otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyConfig {
    #[serde(with = "crate::rational::exact_str")]
    pub decrease: Rational,
    #[serde(with = "crate::rational::exact_str")]
    pub stall: Rational,
}

impl Default for CauchyConfig {
    fn default() -> Self {
        CauchyConfig {
            decrease: Rational::new(1, 2),
            stall: Rational::new(9, 10),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceDiagnostic {
    #[serde(serialize_with = "crate::rational::exact_matrix::serialize")]
    pub pairwise: Vec<Vec<Rational>>,
    /// `tail_sup[n] = max_{i,j ≥ n} pairwise[i][j]`.
    #[serde(with = "crate::rational::exact_vec")]
    pub tail_sup: Vec<Rational>,
    pub verdict: Verdict,
    /// Pair attaining the last tail supremum when diverging.
    pub witness: Option<(usize, usize)>,
    pub config: CauchyConfig,
}

pub fn cauchy_diagnostic(sets: &[ProfileSet], config: &CauchyConfig) -> Result<ConvergenceDiagnostic> {
    let len = sets.len();
    if len == 0 {
        return Err(Error::EmptyProfile);
    }
    if let Some(s) = sets.iter().find(|s| s.k() != sets[0].k()) {
        return Err(Error::DimensionMismatch {
            left: sets[0].k(),
            right: s.k(),
        });
    }
    if len == 1 {
        return Ok(ConvergenceDiagnostic {
            pairwise: Vec::new(),
            tail_sup: Vec::new(),
            verdict: Verdict::Inconclusive,
            witness: None,
            config: config.clone(),
        });
    }
    let points: Vec<Vec<QuotientPoint>> = sets.iter().map(|s| s.point_vec()).collect();
    let pairs: Vec<(usize, usize)> = (0..len)
        .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
        .collect();
    let dists = pairs
        .par_iter()
        .map(|&(i, j)| hausdorff_points(&points[i], &points[j]).map(|r| r.distance))
        .collect::<Result<Vec<_>>>()?;
    let mut pairwise = vec![vec![int(0); len]; len];
    for (&(i, j), d) in pairs.iter().zip(dists) {
        pairwise[i][j] = d;
        pairwise[j][i] = d;
    }
    let mut tail_sup = vec![int(0); len];
    for n in (0..len).rev() {
        let row_max = (n..len).map(|j| pairwise[n][j]).max().unwrap_or_else(|| int(0));
        tail_sup[n] = if n + 1 < len {
            row_max.max(tail_sup[n + 1])
        } else {
            row_max
        };
    }
    let first = tail_sup[0];
    let last = tail_sup[len - 2];
    let verdict = if last <= config.decrease * first {
        Verdict::ConsistentWithCauchy
    } else if last >= config.stall * first {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    };
    let witness = (verdict == Verdict::Diverging).then_some((len - 2, len - 1));
    Ok(ConvergenceDiagnostic {
        pairwise,
        tail_sup,
        verdict,
        witness,
        config: config.clone(),
    })
}

/// Matrix as CSV with a header of labels; exact `num/den` entries or their
/// float rendering.
pub fn matrix_csv(labels: &[String], matrix: &[Vec<Rational>], exact: bool) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    w.write_record(&header).map_err(io)?;
    for (label, row) in labels.iter().zip(matrix) {
        let mut record = vec![label.clone()];
        record.extend(row.iter().map(|r| {
            if exact {
                to_exact_string(r)
            } else {
                format!("{}", to_f64(r))
            }
        }));
        w.write_record(&record).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pt(coords: &[Rational]) -> QuotientPoint {
        let k = coords.len().trailing_zeros() as usize;
        QuotientPoint::new(k, coords.to_vec()).unwrap()
    }

    #[test]
    fn linf_examples() {
        let zero = QuotientPoint::zero(2);
        let q = pt(&[int(0), rat(1, 2), rat(1, 3), int(1)]);
        assert_eq!(linf_distance(&zero, &q).unwrap(), int(1));
        assert_eq!(linf_distance(&q, &q).unwrap(), int(0));
        let a = pt(&[int(0), rat(7, 8), rat(7, 8), rat(7, 8)]);
        let b = pt(&[int(0), rat(4, 9), rat(4, 9), rat(8, 9)]);
        assert_eq!(linf_distance(&a, &b).unwrap(), rat(31, 72));
        assert!(linf_distance(&zero, &QuotientPoint::zero(1)).is_err());
    }

    #[test]
    fn hausdorff_on_one_coordinate() {
        let u = [pt(&[int(0), int(0)]), pt(&[int(0), int(1)])];
        let v = [pt(&[int(0), rat(2, 5)])];
        let r = hausdorff_points(&u, &v).unwrap();
        assert_eq!(r.directed_ab, rat(3, 5));
        assert_eq!(r.directed_ba, rat(2, 5));
        assert_eq!(r.distance, rat(3, 5));
        assert_eq!(r.witness_ab, u[1]);
    }

    #[test]
    fn empty_sets_rejected() {
        assert_eq!(
            hausdorff_points(&[], &[QuotientPoint::zero(1)]).unwrap_err(),
            Error::EmptyProfile
        );
    }

    #[test]
    fn containment() {
        let a = [pt(&[int(0), int(1)])];
        let b = [pt(&[int(0), int(0)])];
        let c = eps_contained_points(&a, &b, &rat(1, 2)).unwrap();
        assert!(!c.holds);
        assert_eq!(c.witness, Some(a[0].clone()));
        assert!(eps_contained_points(&a, &b, &int(1)).unwrap().holds);
        assert!(eps_contained_points(&a, &a, &int(0)).unwrap().holds);
    }

    #[test]
    fn csv_rendering() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let m = vec![vec![int(0), rat(1, 2)], vec![rat(1, 2), int(0)]];
        assert_eq!(matrix_csv(&labels, &m, true).unwrap(), ",a,b\na,0/1,1/2\nb,1/2,0/1\n");
        assert_eq!(matrix_csv(&labels, &m, false).unwrap(), ",a,b\na,0,0.5\nb,0.5,0\n");
    }
}
