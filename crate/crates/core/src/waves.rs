//! Wave counting on traffic density profiles.
//!
//! The total density profile is split into plateaus, where it is flat up to a
//! tolerance, and the transition regions between them. Every transition
//! region counts as one wave.

use serde::Serialize;

use crate::snapshot::ProfileSnapshot;

/// Thresholds of [`analyze_waves`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveThresholds {
    /// Density change below which a stretch of road counts as flat.
    pub plateau_tol: f64,
    /// Transitions at least this many cells wide are fan-like.
    pub fan_width: usize,
    /// Transitions separated by fewer flat cells than this are merged.
    pub min_plateau: usize,
}

impl Default for WaveThresholds {
    /// Tolerance `1e-3` (for a unit jam density), fans from 12 cells.
    fn default() -> Self {
        Self {
            plateau_tol: 1e-3,
            fan_width: 12,
            min_plateau: 3,
        }
    }
}

impl WaveThresholds {
    /// Default thresholds with the tolerance scaled to `rho_jam`.
    pub fn for_jam_density(rho_jam: f64) -> Self {
        Self {
            plateau_tol: 1e-3 * rho_jam,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveKind {
    ShockLike,
    FanLike,
    ContactAtX0,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Wave {
    /// Interface positions bounding the transition region.
    pub left: f64,
    pub right: f64,
    pub cells: usize,
    pub kind: WaveKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveReport {
    pub waves: Vec<Wave>,
    /// Set when the profile has too few plateau cells to separate waves.
    pub inconclusive: bool,
}

impl WaveReport {
    pub fn count(&self) -> usize {
        self.waves.len()
    }

    pub fn has_contact(&self) -> bool {
        self.waves.iter().any(|w| w.kind == WaveKind::ContactAtX0)
    }
}

/// Segments the total-density profile into plateaus and waves. `x0` is the
/// position of the parameter jump; a jump across the cell interface nearest
/// to it is reported on its own as [`WaveKind::ContactAtX0`], even when a fan
/// is attached to it.
///
/// An interface is part of a transition when the neighbor difference, or the
/// difference across a window of `fan_width` cells centered on it, reaches
/// `plateau_tol`. The window catches fans whose per-cell change is below the
/// tolerance. Transition edges whose own difference is below
/// `plateau_tol / fan_width` are trimmed off again.
pub fn analyze_waves(snapshot: &ProfileSnapshot, x0: f64, thresholds: &WaveThresholds) -> WaveReport {
    let inconclusive = WaveReport {
        waves: Vec::new(),
        inconclusive: true,
    };
    let n = snapshot.n_rows();
    if n < thresholds.min_plateau.max(2) {
        return inconclusive;
    }
    let rho = snapshot.row_sums();
    let dx = snapshot.x[1] - snapshot.x[0];
    let tol = thresholds.plateau_tol;
    let h = (thresholds.fan_width / 2).max(1);
    let small = tol / (2 * h) as f64;

    // d[i]: jump across the interface between cells i and i + 1
    let d: Vec<f64> = rho.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let steep: Vec<bool> = (0..n - 1)
        .map(|i| {
            let window = (rho[(i + h).min(n - 1)] - rho[(i + 1).saturating_sub(h)]).abs();
            d[i] >= tol || window >= tol
        })
        .collect();

    let mut in_wave = vec![false; n];
    for (i, &s) in steep.iter().enumerate() {
        if s {
            in_wave[i] = true;
            in_wave[i + 1] = true;
        }
    }
    if in_wave.iter().filter(|&&w| !w).count() < 3 {
        return inconclusive;
    }

    // runs of steep interfaces, merged across plateaus that are too short
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n - 1 {
        if !steep[i] {
            i += 1;
            continue;
        }
        let a = i;
        while i < n - 1 && steep[i] {
            i += 1;
        }
        match runs.last_mut() {
            Some(last) if a - last.1 <= thresholds.min_plateau => last.1 = i - 1,
            _ => runs.push((a, i - 1)),
        }
    }

    let left_edge = snapshot.x[0] - 0.5 * dx;
    let contact = (((x0 - left_edge) / dx).round() as isize - 1).clamp(0, n as isize - 2) as usize;
    let mut waves = Vec::new();
    let mut push = |a: usize, b: usize, kind: Option<WaveKind>| {
        let (mut a, mut b) = (a, b);
        if kind.is_none() {
            while a <= b && d[a] < small {
                a += 1;
            }
            while b > a && d[b] < small {
                b -= 1;
            }
            if a > b || (rho[b + 1] - rho[a]).abs() < tol {
                return;
            }
        }
        let interfaces = b - a + 1;
        let kind = kind.unwrap_or(if interfaces >= thresholds.fan_width {
            WaveKind::FanLike
        } else {
            WaveKind::ShockLike
        });
        waves.push(Wave {
            left: left_edge + (a + 1) as f64 * dx,
            right: left_edge + (b + 1) as f64 * dx,
            cells: b - a,
            kind,
        });
    };
    for (a, b) in runs {
        if (a..=b).contains(&contact) && d[contact] >= tol {
            if contact > a {
                push(a, contact - 1, None);
            }
            push(contact, contact, Some(WaveKind::ContactAtX0));
            if contact < b {
                push(contact + 1, b, None);
            }
        } else {
            push(a, b, None);
        }
    }
    WaveReport {
        waves,
        inconclusive: false,
    }
}

/// A localized hump of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pulse {
    /// Cell center of the largest value.
    pub position: f64,
    pub amplitude: f64,
}

/// Humps of a profile rising above `threshold`, ordered in `x`.
///
/// The profile is first reduced to its maximum over consecutive blocks of
/// `block` cells, so that in a periodically layered medium the jumps between
/// layers do not split a pulse. Every maximal run of blocks above
/// `threshold` is one pulse. Runs do not wrap around the domain ends.
pub fn find_pulses(x: &[f64], values: &[f64], block: usize, threshold: f64) -> Vec<Pulse> {
    let block = block.max(1);
    let mut pulses = Vec::new();
    let mut current: Option<Pulse> = None;
    for (xs, vs) in x.chunks(block).zip(values.chunks(block)) {
        let (k, &peak) = vs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty chunk");
        if peak > threshold {
            let candidate = Pulse {
                position: xs[k],
                amplitude: peak,
            };
            match &mut current {
                Some(p) if p.amplitude >= peak => {}
                Some(p) => *p = candidate,
                None => current = Some(candidate),
            }
        } else if let Some(p) = current.take() {
            pulses.push(p);
        }
    }
    pulses.extend(current);
    pulses
}
