//! The one CSV schema every command shares, plus atomic file persistence.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::Context;
use opdc_core::strategy::{Action, GameVariant, OPD_STRATEGIES};
use opdc_core::sweep::{Extras, PointRecord};

/// Formats with 12 significant digits, shortest-form: positional notation
/// for moderate magnitudes, exponent notation outside them, trailing zeros
/// trimmed, and both zeros rendered "0". The same value always renders the
/// same bytes, which the byte-identical-output contract leans on.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.11e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("float e-format");
    let exp: i32 = exp.parse().expect("float exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa
        .chars()
        .filter(|c| c.is_ascii_digit())
        .collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-4..=11).contains(&exp) {
        let k = digits.len() as i32;
        if exp >= k - 1 {
            out.push_str(digits);
            for _ in 0..(exp - k + 1) {
                out.push('0');
            }
        } else if exp >= 0 {
            let split = (exp + 1) as usize;
            out.push_str(&digits[..split]);
            out.push('.');
            out.push_str(&digits[split..]);
        } else {
            out.push_str("0.");
            for _ in 0..(-exp - 1) {
                out.push('0');
            }
            out.push_str(digits);
        }
    } else {
        out.push(digits.as_bytes()[0] as char);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        let _ = write!(out, "e{exp}");
    }
    out
}

pub fn variant_name(v: GameVariant) -> &'static str {
    match v {
        GameVariant::Opd => "opd",
        GameVariant::Pd => "pd",
    }
}

pub fn scheme_name(s: opdc_core::payoff::IncentiveScheme) -> &'static str {
    match s {
        opdc_core::payoff::IncentiveScheme::None => "none",
        opdc_core::payoff::IncentiveScheme::StrictCom => "strict",
        opdc_core::payoff::IncentiveScheme::FlexibleCom => "flexible",
    }
}

pub fn dominant_name(a: Action) -> &'static str {
    match a {
        Action::Cooperate => "cooperation",
        Action::Defect => "defection",
        Action::Exit => "exit",
    }
}

/// Column order is fixed; comparison sweeps append their difference columns
/// at the end.
pub fn csv_header(extras: Extras) -> String {
    let mut h = String::from("variant,scheme,sigma,epsilon,u,M,s");
    for s in OPD_STRATEGIES {
        let _ = write!(h, ",p_{}", s.label());
    }
    h.push_str(",coop_freq,defect_freq,exit_freq,accept_freq,social_welfare,dominant");
    match extras {
        Extras::None => {}
        Extras::PdComparison { improvement } => {
            h.push_str(",accept_opd_minus_pd");
            if improvement {
                h.push_str(",improvement_pct");
            }
        }
        Extras::SchemeComparison => {
            h.push_str(
                ",coop_freq_strict_minus_flexible,exit_freq_strict_minus_flexible,social_welfare_strict_minus_flexible",
            );
        }
    }
    h
}

/// One record as one row. Stationary masses land in the canonical strategy
/// columns; strategies absent from the record's variant leave their cells
/// empty, as do difference cells on non-primary rows.
pub fn csv_row(record: &PointRecord, extras: Extras) -> String {
    let r = &record.result;
    let mut row = String::new();
    let _ = write!(
        row,
        "{},{},{},{},{},{},{}",
        variant_name(r.game.variant),
        scheme_name(r.game.scheme),
        fmt_sig(r.game.sigma),
        fmt_sig(r.game.epsilon),
        fmt_sig(r.game.u),
        r.dynamics.population,
        fmt_sig(r.dynamics.selection),
    );
    for strat in OPD_STRATEGIES {
        row.push(',');
        if let Some(i) = r.stationary.strategies().iter().position(|x| *x == strat) {
            row.push_str(&fmt_sig(r.stationary.p()[i]));
        }
    }
    let _ = write!(
        row,
        ",{},{},{},{},{},{}",
        fmt_sig(r.behaviour.cooperation),
        fmt_sig(r.behaviour.defection),
        fmt_sig(r.behaviour.exit),
        fmt_sig(r.acceptance),
        fmt_sig(r.social_welfare),
        dominant_name(r.dominant),
    );
    let mut push_opt = |v: Option<f64>| {
        row.push(',');
        if let Some(v) = v {
            row.push_str(&fmt_sig(v));
        }
    };
    match extras {
        Extras::None => {}
        Extras::PdComparison { improvement } => {
            push_opt(record.extras.accept_opd_minus_pd);
            if improvement {
                push_opt(record.extras.improvement_pct);
            }
        }
        Extras::SchemeComparison => {
            push_opt(record.extras.coop_strict_minus_flexible);
            push_opt(record.extras.exit_strict_minus_flexible);
            push_opt(record.extras.welfare_strict_minus_flexible);
        }
    }
    row
}

/// Header plus rows, LF line endings, trailing newline.
pub fn render_csv(records: &[PointRecord], extras: Extras) -> String {
    let mut out = csv_header(extras);
    out.push('\n');
    for record in records {
        out.push_str(&csv_row(record, extras));
        out.push('\n');
    }
    out
}

/// Writes via a temporary file in the destination directory and renames it
/// into place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, content: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(content.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}
