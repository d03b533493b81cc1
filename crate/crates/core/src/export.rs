//! Plain-text exports: JSON lines and CSV.

use std::fmt::Write;

use crate::entropy::EntropyLedger;
use crate::fronts::Trajectory;
use crate::hjb::HlSample;

/// One JSON object per snapshot.
pub fn trajectory_jsonl(traj: &Trajectory) -> serde_json::Result<String> {
    let mut out = String::new();
    for snap in &traj.snapshots {
        out.push_str(&serde_json::to_string(snap)?);
        out.push('\n');
    }
    Ok(out)
}

/// `t,x_i,u_left,u_right,sigma,kind`, one row per front per snapshot.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,x_i,u_left,u_right,sigma,kind\n");
    for snap in &traj.snapshots {
        for i in 0..snap.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                snap.time,
                snap.positions[i],
                snap.states[i],
                snap.states[i + 1],
                snap.speeds[i],
                snap.front_kinds[i].as_str()
            );
        }
    }
    out
}

pub fn ledger_csv(ledger: &EntropyLedger) -> String {
    let mut out = String::from("front_id,t_start,t_end,u_minus,u_plus,sigma,D,absD,Delta\n");
    for e in &ledger.per_front {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            e.front_id, e.t_start, e.t_end, e.u_minus, e.u_plus, e.sigma, e.d, e.abs_d, e.delta
        );
    }
    out
}

pub fn ledger_summary(ledger: &EntropyLedger) -> serde_json::Value {
    serde_json::json!({
        "total_signed": ledger.total_signed,
        "total_abs": ledger.total_abs,
        "window": ledger.window,
    })
}

pub fn hopf_lax_csv(samples: &[HlSample]) -> String {
    let mut out = String::from("x,t,g,u\n");
    for s in samples {
        let _ = writeln!(out, "{},{},{},{}", s.x, s.t, s.g, s.u);
    }
    out
}

/// `t,x_center,u` for each snapshot.
pub fn grid_csv(snapshots: &[(f64, Vec<f64>)], centers: &[f64]) -> String {
    let mut out = String::from("t,x_center,u\n");
    for (t, u) in snapshots {
        for (x, v) in centers.iter().zip(u) {
            let _ = writeln!(out, "{t},{x},{v}");
        }
    }
    out
}
