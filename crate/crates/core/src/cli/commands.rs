//! Command execution with captured output, shared by the binary and tests.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::pl::PlFun;
use crate::scalar::{fmt_scalar, int, parse_scalar, to_f64, Scalar};
use crate::smt::{bound_coefficients, proof_trace, verify, HyperplaneCheck, VerificationReport, VerificationStatus};

use super::scenario::Scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_UNCERTIFIED: i32 = 3;

/// `a:b:k`: `k ≥ 2` equally spaced points from `a` to `b` inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub start: Scalar,
    pub end: Scalar,
    pub count: usize,
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse { field: "--grid".into(), message: m.into() };
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, k] = parts[..] else {
            return Err(bad("expected a:b:k"));
        };
        let start = parse_scalar(a)?;
        let end = parse_scalar(b)?;
        let count: usize = k.parse().map_err(|_| bad("k must be a positive integer"))?;
        if count < 2 || start >= end {
            return Err(bad("need k ≥ 2 and a < b"));
        }
        Ok(Grid { start, end, count })
    }

    pub fn points(&self) -> Vec<Scalar> {
        let step = (&self.end - &self.start) / int(self.count as i64 - 1);
        (0..self.count).map(|i| &self.start + &step * int(i as i64)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Invariants { json: bool },
    Evaluate { grid: Grid, csv: Option<PathBuf> },
    Verify { json: bool, svg: Option<PathBuf>, require_certified: bool },
    FmtCheck,
    Trace { at: Scalar, json: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs one command. Errors are returned, not rendered; see [`exit_code`].
pub fn run_command(cmd: &Command, s: &Scenario) -> Result<Outcome> {
    match cmd {
        Command::Invariants { json } => invariants(s, *json),
        Command::Evaluate { grid, csv } => {
            let table = evaluate_csv(s, grid)?;
            match csv {
                Some(path) => {
                    write_file(path, &table)?;
                    Ok(Outcome { code: EXIT_OK, stdout: format!("wrote {} rows to {}\n", grid.count, path.display()) })
                }
                None => Ok(Outcome { code: EXIT_OK, stdout: table }),
            }
        }
        Command::Verify { json, svg, require_certified } => {
            let r = verify(s)?;
            if let Some(path) = svg {
                write_file(path, &render_svg(&r))?;
            }
            let stdout = if *json { r.to_json() } else { summary(&r) };
            let code = if r.violated() {
                EXIT_VIOLATION
            } else if *require_certified && r.status != VerificationStatus::Verified {
                EXIT_UNCERTIFIED
            } else {
                EXIT_OK
            };
            Ok(Outcome { code, stdout })
        }
        Command::FmtCheck => {
            let r = verify(s)?;
            let mut out = String::new();
            for h in &r.hypersurfaces {
                writeln!(out, "{}: m + N - {}*T = {} on the whole domain", h.name, h.degree, h.fmt_constant).unwrap();
            }
            Ok(Outcome { code: EXIT_OK, stdout: out })
        }
        Command::Trace { at, json } => {
            let tr = proof_trace(s, at)?;
            let code = if tr.pieces_sum_to_lhs() && tr.last_piece.as_ref().is_none_or(|l| l.holds) {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            };
            let stdout = if *json { tr.to_json() } else { render_trace(&tr) };
            Ok(Outcome { code, stdout })
        }
    }
}

/// Maps an error to the process exit code.
pub fn exit_code(err: &Error, require_certified: bool) -> i32 {
    match err {
        Error::FmtNotConstant(_) => EXIT_VIOLATION,
        Error::Uncertified(_) | Error::ContainmentUndetermined(_) | Error::MultiplicityUnavailable
            if require_certified =>
        {
            EXIT_UNCERTIFIED
        }
        _ => EXIT_ERROR,
    }
}

fn invariants(s: &Scenario, json: bool) -> Result<Outcome> {
    let (profile, m, a) = crate::smt::report_invariants(s)?;
    let bounds = bound_coefficients(&profile, &m, &s.degrees());
    if json {
        let v = serde_json::json!({
            "q": profile.q,
            "n": profile.n,
            "t_seq": profile.t_seq,
            "general_position": profile.general_position,
            "M": m.m,
            "M_status": m.status.to_string(),
            "M_witness": m.witness,
            "alpha": fmt_scalar(&a),
            "bounds": bounds.iter().map(|b| serde_json::json!({
                "theorem": b.theorem.to_string(),
                "coefficient": fmt_scalar(&b.coefficient),
                "applicable": b.applicable,
            })).collect::<Vec<_>>(),
        });
        return Ok(Outcome { code: EXIT_OK, stdout: serde_json::to_string_pretty(&v).unwrap() + "\n" });
    }
    let mut out = String::new();
    writeln!(out, "q = {}, n = {}", profile.q, profile.n).unwrap();
    let ts: Vec<String> = profile.t_seq.iter().enumerate().map(|(k, t)| format!("t_{} = {t}", k as i64 - 1)).collect();
    writeln!(out, "{}", ts.join(", ")).unwrap();
    writeln!(out, "general position: {}", if profile.general_position { "yes" } else { "no" }).unwrap();
    writeln!(out, "M = {} ({})", m.m, m.status).unwrap();
    if let Some(w) = &m.witness {
        writeln!(out, "  {w}").unwrap();
    }
    writeln!(out, "alpha = {a}").unwrap();
    for b in &bounds {
        let note = if b.applicable { "" } else { " (not applicable)" };
        writeln!(out, "{} coefficient = {}{note}", b.theorem, b.coefficient).unwrap();
    }
    Ok(Outcome { code: EXIT_OK, stdout: out })
}

/// CSV with columns `t, T, m_1.., N_1..`, exact cells.
pub fn evaluate_csv(s: &Scenario, grid: &Grid) -> Result<String> {
    for t in [&grid.start, &grid.end] {
        if t < &s.options.t_min || t > &s.options.t_max {
            return Err(Error::OutOfDomain(t.to_string(), format!("{}, {}", s.options.t_min, s.options.t_max)));
        }
    }
    let r = verify(s)?;
    let q = r.hypersurfaces.len();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    let mut header = vec!["t".to_string(), "T".to_string()];
    header.extend((1..=q).map(|j| format!("m_{j}")));
    header.extend((1..=q).map(|j| format!("N_{j}")));
    w.write_record(&header).map_err(|e| Error::Io(e.to_string()))?;
    for t in grid.points() {
        let mut row = vec![fmt_scalar(&t), fmt_scalar(&r.characteristic.eval(&t)?)];
        for h in &r.hypersurfaces {
            row.push(fmt_scalar(&h.proximity.eval(&t)?));
        }
        for h in &r.hypersurfaces {
            row.push(fmt_scalar(&h.counting.eval(&t)?));
        }
        w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).unwrap())
}

fn summary(r: &VerificationReport) -> String {
    let mut out = String::new();
    let name = r.scenario.as_deref().unwrap_or("scenario");
    let status = match r.status {
        VerificationStatus::Verified => "verified",
        VerificationStatus::Conditional => "conditionally verified",
    };
    writeln!(out, "{name}: {status} on t in [{}, {}] ({})", r.domain[0], r.domain[1], r.valuation).unwrap();
    for a in &r.assumptions {
        writeln!(out, "  assumption: {a}").unwrap();
    }
    writeln!(out, "T = {}", r.characteristic).unwrap();
    writeln!(out, "sum m/deg = {}", r.lhs).unwrap();
    for b in &r.bounds {
        let status = match (b.applicable, b.holds) {
            (false, _) => "not applicable".to_string(),
            (true, true) => format!("holds with C_min = {} (domain-relative)", b.c_min),
            (true, false) => "VIOLATED".to_string(),
        };
        writeln!(out, "{:>5}: {} * T  {status}", b.theorem.to_string(), b.coefficient).unwrap();
    }
    match &r.sharpness_ratio {
        Some(x) => writeln!(out, "sharpness ratio = {x}").unwrap(),
        None => writeln!(out, "sharpness ratio undefined (T is flat at the right end)").unwrap(),
    }
    out
}

fn render_trace(tr: &crate::smt::ProofTrace) -> String {
    let mut out = String::new();
    writeln!(out, "t = {}, T(t) = {}, t_0 = {}, t_-1 = {}, M = {}", tr.t, tr.characteristic, tr.t0, tr.t_minus1, tr.m).unwrap();
    let show = |es: &[crate::smt::PieceEntry]| -> String {
        es.iter().map(|e| format!("{}={}", e.name, e.m_over_deg)).collect::<Vec<_>>().join(", ")
    };
    writeln!(out, "sorted m/deg: {}", show(&tr.sorted)).unwrap();
    writeln!(out, "first  (j <= t_0):        [{}] sum {}", show(&tr.first), tr.first_sum).unwrap();
    writeln!(out, "middle (t_0 < j <= t_-1): [{}] sum {}", show(&tr.middle), tr.middle_sum).unwrap();
    writeln!(out, "last   (j > t_-1):        [{}] sum {}", show(&tr.last), tr.last_sum).unwrap();
    writeln!(out, "total {} = lhs {}: {}", &tr.first_sum + &tr.middle_sum + &tr.last_sum, tr.lhs, tr.pieces_sum_to_lhs())
        .unwrap();
    if let Some(l) = &tr.last_piece {
        writeln!(
            out,
            "(1) log C_1 = {}, min head m = {}, cap {} on last piece: {}",
            l.log_c1,
            l.min_head_proximity,
            l.cap,
            if l.holds { "ok" } else { "FAILED" }
        )
        .unwrap();
    }
    for c in &tr.middle_checks {
        writeln!(
            out,
            "(4) {}: m/deg - {}*T = {}, slope {}",
            c.name,
            c.weight,
            c.excess,
            if c.slope_consistent { "consistent" } else { "exceeds" }
        )
        .unwrap();
        match &c.hyperplanes {
            HyperplaneCheck::Skipped { reason } => writeln!(out, "(3) skipped: {reason}").unwrap(),
            HyperplaneCheck::Checked { hyperplanes, excess, slope_consistent, .. } => writeln!(
                out,
                "(3) hyperplanes [{}]: sum m(H) - T = {excess}, slope {}",
                hyperplanes.join(", "),
                if *slope_consistent { "consistent" } else { "exceeds" }
            )
            .unwrap(),
        }
    }
    for n in &tr.notices {
        writeln!(out, "note: {n}").unwrap();
    }
    out
}

/// Plot of `Σ m/deg` against each applicable `c·T + C_min`.
pub fn render_svg(r: &VerificationReport) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let mut curves: Vec<(String, PlFun, &str)> = vec![("sum m/deg".into(), r.lhs.clone(), "#000000")];
    let colors = ["#1f77b4", "#d62728", "#2ca02c"];
    for (b, c) in r.bounds.iter().zip(colors) {
        if b.applicable {
            curves.push((
                format!("{} ({}T + {})", b.theorem, b.coefficient, b.c_min),
                r.characteristic.scale(&b.coefficient).add_constant(&b.c_min),
                c,
            ));
        }
    }
    let x0 = to_f64(r.lhs.t_min());
    let x1 = to_f64(r.lhs.t_max());
    let ys: Vec<f64> = curves.iter().flat_map(|(_, f, _)| f.values().iter().map(to_f64)).collect();
    let (ylo, yhi) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(*y), b.max(*y)));
    let yspan = if yhi > ylo { yhi - ylo } else { 1.0 };
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - ylo) / yspan * (h - 2.0 * pad);
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="gray"/>"#,
        h - pad,
        w - pad,
        h - pad
    )
    .unwrap();
    writeln!(out, r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="gray"/>"#, h - pad).unwrap();
    for (k, (label, f, color)) in curves.iter().enumerate() {
        let pts: Vec<String> = f
            .breakpoints()
            .iter()
            .zip(f.values())
            .map(|(x, y)| format!("{:.2},{:.2}", sx(to_f64(x)), sy(to_f64(y))))
            .collect();
        writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" ")).unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{label}</text>"#,
            pad + 8.0,
            pad + 14.0 * (k as f64 + 1.0)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">t = log r in [{}, {}]</text>"#,
        w / 2.0 - 60.0,
        h - 10.0,
        r.domain[0],
        r.domain[1]
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::builtin;

    #[test]
    fn grid_parsing() {
        let g = Grid::parse("0:10:21").unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 21);
        assert_eq!(pts[10], int(5));
        assert!(Grid::parse("0:10").is_err());
        assert!(Grid::parse("3:1:4").is_err());
        assert!(Grid::parse("0:1:1").is_err());
        assert_eq!(Grid::parse("-1/2:1/2:3").unwrap().points()[1], int(0));
    }

    #[test]
    fn evaluate_three_conics() {
        let s = builtin("three_conics").unwrap();
        let csv = evaluate_csv(&s, &Grid::parse("0:10:21").unwrap()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 22);
        assert_eq!(lines[0], "t,T,m_1,m_2,m_3,N_1,N_2,N_3");
        assert_eq!(lines[11], "5,5,5,10,5,5,0,5");
        assert_eq!(lines[2], "1/2,1/2,1/2,1,1/2,1/2,0,1/2");
        assert!(evaluate_csv(&s, &Grid::parse("0:11:3").unwrap()).is_err());
    }

    #[test]
    fn verify_exit_codes() {
        let s = builtin("three_conics").unwrap();
        let cmd = Command::Verify { json: true, svg: None, require_certified: true };
        let out = run_command(&cmd, &s).unwrap();
        assert_eq!(out.code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["bounds"][2]["coefficient"], "2");
        assert_eq!(v["bounds"][2]["c_min"], "0");
        assert_eq!(v["constants"], "domain-relative");
        let g = builtin("quang_sharp_transcendental").unwrap();
        assert_eq!(run_command(&cmd, &g).unwrap().code, EXIT_UNCERTIFIED);
        let relaxed = Command::Verify { json: false, svg: None, require_certified: false };
        let out = run_command(&relaxed, &g).unwrap();
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("conditionally verified"));
    }

    #[test]
    fn invariants_text() {
        let out = run_command(&Command::Invariants { json: false }, &builtin("three_conics").unwrap()).unwrap();
        assert!(out.stdout.contains("t_-1 = 3, t_0 = 1"));
        assert!(out.stdout.contains("M = 1 (certified)"));
        assert!(out.stdout.contains("alpha = 1"));
        assert!(out.stdout.contains("levin coefficient = 3/2 (not applicable)"));
    }

    #[test]
    fn svg_is_emitted() {
        let r = verify(&builtin("three_conics").unwrap()).unwrap();
        let svg = render_svg(&r);
        assert!(svg.starts_with("<svg") && svg.contains("polyline"));
    }
}
