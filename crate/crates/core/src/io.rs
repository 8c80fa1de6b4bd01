//! CSV documents exchanged by the command line tools.
//!
//! Every number is written with six significant digits in plain decimal
//! notation so output files diff cleanly and are reproducible.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::fitting::{Condition, PathLossSample};
use crate::link::CoveragePoint;
use crate::los_probability::LosProbabilityCurve;
use crate::scalar::Scalar;

pub const LOS_CURVE_HEADER: [&str; 3] = ["radius_m", "p_los", "valid"];
pub const PATHLOSS_HEADER: [&str; 4] = ["d_m", "p_los", "mean_pl_db", "sigma_db"];
pub const SAMPLES_HEADER: [&str; 3] = ["d_m", "pl_db", "condition"];
pub const COVERAGE_HEADER: [&str; 3] = ["d_m", "coverage", "outage"];

/// Six significant digits, fixed-point (`124.161`, `0.0348640`, `1.00000`).
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may have bumped the magnitude, e.g. 9.999996 -> 10.00000
    let rounded: f64 = s.parse().unwrap_or(x);
    if rounded != 0.0 && (rounded.abs().log10().floor() as i32) > magnitude && decimals > 0 {
        let decimals = decimals - 1;
        return format!("{x:.decimals$}");
    }
    s
}

fn parse_err(what: &'static str, message: impl ToString) -> Error {
    Error::Parse { what, message: message.to_string() }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str], what: &'static str) -> Result<()> {
    let header = rdr.headers().map_err(|e| parse_err(what, e))?;
    if header.len() < expected.len() || header.iter().zip(expected).any(|(h, e)| h != *e) {
        return Err(parse_err(what, format!("expected header {}", expected.join(","))));
    }
    Ok(())
}

fn parse_num<T: Scalar>(field: Option<&str>, what: &'static str, line: u64) -> Result<T> {
    let raw = field.ok_or_else(|| parse_err(what, format!("line {line}: missing field")))?;
    let v: f64 = raw.parse().map_err(|_| parse_err(what, format!("line {line}: bad number {raw:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(what, format!("line {line}: non-finite value")));
    }
    Ok(T::lit(v))
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

fn write_line<W: Write>(out: &mut W, fields: &[String]) -> Result<()> {
    writeln!(out, "{}", fields.join(","))?;
    Ok(())
}

pub fn write_los_curve<T: Scalar, W: Write>(out: &mut W, curve: &LosProbabilityCurve<T>) -> Result<()> {
    writeln!(out, "{}", LOS_CURVE_HEADER.join(","))?;
    for ((r, p), v) in curve.radii().iter().zip(curve.p_los()).zip(curve.valid_mask()) {
        write_line(out, &[format_sig6(r.as_f64()), format_sig6(p.as_f64()), u8::from(*v).to_string()])?;
    }
    Ok(())
}

pub fn read_los_curve<T: Scalar, R: Read>(input: R) -> Result<LosProbabilityCurve<T>> {
    const WHAT: &str = "LOS probability curve";
    let mut rdr = reader(input);
    check_header(&mut rdr, &LOS_CURVE_HEADER, WHAT)?;
    let (mut radii, mut p, mut valid) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(WHAT, e))?;
        let line = line_of(&rec);
        radii.push(parse_num(rec.get(0), WHAT, line)?);
        p.push(parse_num(rec.get(1), WHAT, line)?);
        valid.push(match rec.get(2) {
            Some("1") | Some("true") => true,
            Some("0") | Some("false") => false,
            other => return Err(parse_err(WHAT, format!("line {line}: bad valid flag {other:?}"))),
        });
    }
    LosProbabilityCurve::new(radii, p, valid).map_err(|e| parse_err(WHAT, e))
}

/// One row of a hybrid path loss curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossRow<T> {
    pub distance: T,
    pub p_los: T,
    pub mean_pl_db: T,
    pub sigma_db: T,
}

pub fn write_pathloss_rows<T: Scalar, W: Write>(out: &mut W, rows: &[PathLossRow<T>]) -> Result<()> {
    writeln!(out, "{}", PATHLOSS_HEADER.join(","))?;
    for r in rows {
        write_line(
            out,
            &[r.distance, r.p_los, r.mean_pl_db, r.sigma_db].map(|v| format_sig6(v.as_f64())),
        )?;
    }
    Ok(())
}

pub fn read_pathloss_rows<T: Scalar, R: Read>(input: R) -> Result<Vec<PathLossRow<T>>> {
    const WHAT: &str = "path loss curve";
    let mut rdr = reader(input);
    check_header(&mut rdr, &PATHLOSS_HEADER, WHAT)?;
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(|e| parse_err(WHAT, e))?;
            let line = line_of(&rec);
            Ok(PathLossRow {
                distance: parse_num(rec.get(0), WHAT, line)?,
                p_los: parse_num(rec.get(1), WHAT, line)?,
                mean_pl_db: parse_num(rec.get(2), WHAT, line)?,
                sigma_db: parse_num(rec.get(3), WHAT, line)?,
            })
        })
        .collect()
}

/// Reads measurement samples. Rows with an empty `pl_db` field are locations
/// with no measurable signal and are skipped; their count is returned.
pub fn read_samples<T: Scalar, R: Read>(input: R) -> Result<(Vec<PathLossSample<T>>, usize)> {
    const WHAT: &str = "path loss samples";
    let mut rdr = reader(input);
    check_header(&mut rdr, &SAMPLES_HEADER, WHAT)?;
    let mut samples = Vec::new();
    let mut skipped = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(WHAT, e))?;
        let line = line_of(&rec);
        if rec.get(1).is_some_and(str::is_empty) {
            skipped += 1;
            continue;
        }
        let d = parse_num(rec.get(0), WHAT, line)?;
        let pl = parse_num(rec.get(1), WHAT, line)?;
        let cond: Condition = rec
            .get(2)
            .ok_or_else(|| parse_err(WHAT, format!("line {line}: missing condition")))?
            .parse()
            .map_err(|e| parse_err(WHAT, format!("line {line}: {e}")))?;
        samples.push(PathLossSample::new(d, pl, cond).map_err(|e| parse_err(WHAT, format!("line {line}: {e}")))?);
    }
    Ok((samples, skipped))
}

pub fn write_samples<T: Scalar, W: Write>(out: &mut W, samples: &[PathLossSample<T>]) -> Result<()> {
    writeln!(out, "{}", SAMPLES_HEADER.join(","))?;
    for s in samples {
        write_line(
            out,
            &[format_sig6(s.distance.as_f64()), format_sig6(s.path_loss.as_f64()), s.condition.as_str().to_string()],
        )?;
    }
    Ok(())
}

/// Coverage curve; with `monte_carlo` an extra `outage_mc` column is appended.
pub fn write_coverage<T: Scalar, W: Write>(
    out: &mut W,
    points: &[CoveragePoint<T>],
    monte_carlo: Option<&[T]>,
) -> Result<()> {
    let mut header = COVERAGE_HEADER.join(",");
    if monte_carlo.is_some() {
        header.push_str(",outage_mc");
    }
    writeln!(out, "{header}")?;
    for (i, p) in points.iter().enumerate() {
        let mut fields = vec![format_sig6(p.distance.as_f64()), format_sig6(p.coverage.as_f64()), format_sig6(p.outage.as_f64())];
        if let Some(mc) = monte_carlo {
            fields.push(format_sig6(mc[i].as_f64()));
        }
        write_line(out, &fields)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DistanceGrid;
    use crate::los_probability::LosProbParams;
    use proptest::prelude::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig6(124.16096358), "124.161");
        assert_eq!(format_sig6(0.034864040578), "0.0348640");
        assert_eq!(format_sig6(1.0), "1.00000");
        assert_eq!(format_sig6(200.0), "200.000");
        assert_eq!(format_sig6(0.0), "0.00000");
        assert_eq!(format_sig6(-3.5), "-3.50000");
        assert_eq!(format_sig6(9.9999996), "10.0000");
        assert_eq!(format_sig6(1234567.0), "1234567");
    }

    #[test]
    fn curve_round_trip() {
        let params = LosProbParams::squared(27.0, 71.0).unwrap();
        let curve = LosProbabilityCurve::from_model(&params, &DistanceGrid::default());
        let mut buf = Vec::new();
        write_los_curve(&mut buf, &curve).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("radius_m,p_los,valid\n10.0000,1.00000,1\n"));
        let back: LosProbabilityCurve<f64> = read_los_curve(buf.as_slice()).unwrap();
        assert_eq!(back.radii(), curve.radii());
        for (a, b) in back.p_los().iter().zip(curve.p_los()) {
            assert!((a - b).abs() <= 5e-6 * b.max(1e-3));
        }
    }

    #[test]
    fn malformed_curves_rejected() {
        assert!(read_los_curve::<f64, _>("r,p,v\n10,1,1\n".as_bytes()).is_err());
        assert!(read_los_curve::<f64, _>("radius_m,p_los,valid\n10,abc,1\n".as_bytes()).is_err());
        assert!(read_los_curve::<f64, _>("radius_m,p_los,valid\n10,1,maybe\n".as_bytes()).is_err());
        assert!(read_los_curve::<f64, _>("radius_m,p_los,valid\n10,1.5,1\n".as_bytes()).is_err());
        assert!(read_los_curve::<f64, _>("radius_m,p_los,valid\n10,NaN,1\n".as_bytes()).is_err());
    }

    #[test]
    fn samples_skip_unmeasurable_rows() {
        let text = "d_m,pl_db,condition\n10,80.5,LOS\n150,,NLOS\n60,120,NLOS\n";
        let (samples, skipped) = read_samples::<f64, _>(text.as_bytes()).unwrap();
        assert_eq!(samples.len(), 2);
        assert_eq!(skipped, 1);
        assert_eq!(samples[1].condition, Condition::Nlos);
        assert!(read_samples::<f64, _>("d_m,pl_db,condition\n10,80,DIAG\n".as_bytes()).is_err());

        let mut buf = Vec::new();
        write_samples(&mut buf, &samples).unwrap();
        let (again, _) = read_samples::<f64, _>(buf.as_slice()).unwrap();
        assert_eq!(again, samples);
    }

    proptest! {
        #[test]
        fn sig6_is_close(x in -1e6..1e6f64) {
            let back: f64 = format_sig6(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 5e-6 * x.abs() + 1e-300);
        }
    }
}
