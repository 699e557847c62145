//! End-to-end acceptance: every criterion of the battery within its time
//! budget, then the shipped binary's `selftest` and `subdivide` output.
//!
//! The table goes to stderr on every run: `cargo test -p triconic-cli --test acceptance`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Duration;

use triconic::Integrator;
use triconic_cli::battery;
use triconic_cli::corpus::GOLDEN;

fn budget(name: &str) -> Option<Duration> {
    let secs = match name {
        "moment-exactness" | "analytic-regions" => 1,
        "complement-identity" | "subdivision-certification" => 30,
        "oracle-equivalence" => 300,
        "rigid-equivariance" => 60,
        "degenerate-battery" => 10,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_triconic")
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("triconic-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

/// Runs `subdivide` on every golden job and compares the written file.
fn binary_goldens(dir: &Path) -> Result<(), String> {
    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, job, _) in GOLDEN {
        let job_path = dir.join(format!("{name}.json"));
        let svg_path = dir.join(format!("{name}.svg"));
        std::fs::write(&job_path, job).map_err(|e| e.to_string())?;
        let status =
            Command::new(bin()).arg("subdivide").arg(&job_path).arg("--svg").arg(&svg_path).output().map_err(|e| e.to_string())?.status;
        if !status.success() {
            return Err(format!("{name}: subdivide exited with {status}"));
        }
        let written = std::fs::read(&svg_path).map_err(|e| e.to_string())?;
        let want = std::fs::read(golden_dir.join(format!("{name}.svg"))).map_err(|e| e.to_string())?;
        if written != want {
            return Err(format!("{name}: written SVG differs from tests/golden/{name}.svg"));
        }
    }
    Ok(())
}

#[test]
fn every_criterion_passes_within_budget() {
    let mut failures = Vec::new();
    let _ = writeln!(std::io::stderr());
    let mut line = |ok: bool, name: &str, text: String| {
        // Straight to the handle, not through the test harness's capture,
        // so the table shows up in plain `cargo test` output.
        let _ = writeln!(std::io::stderr(), "{} {name:<27} {text}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };

    for c in battery::run_all(&Integrator::new()) {
        let secs = c.elapsed.as_secs_f64();
        let (in_time, limit) = match budget(c.name) {
            Some(b) => (c.elapsed <= b, format!(" (budget {} s)", b.as_secs())),
            None => (true, String::new()),
        };
        let mut text = format!("{secs:.2} s{limit}: {}", c.detail);
        if !in_time {
            text.push_str("; over time budget");
        }
        line(c.passed && in_time, c.name, text);
    }

    let out = Command::new(bin()).arg("selftest").output().expect("run selftest");
    let code = out.status.code();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let last = stdout.lines().last().unwrap_or("").to_string();
    line(code == Some(0), "binary-selftest", format!("exit {code:?}, {last}"));

    let dir = scratch_dir();
    let goldens = binary_goldens(&dir);
    let _ = std::fs::remove_dir_all(&dir);
    line(goldens.is_ok(), "binary-subdivide-goldens", goldens.err().unwrap_or_else(|| format!("{} SVGs byte-identical", GOLDEN.len())));

    assert!(failures.is_empty(), "failed: {}", failures.join(", "));
}
