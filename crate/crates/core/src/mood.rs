//! A posteriori MOOD limiting: candidate detection and the cascade of
//! lower-order recomputations.

use crate::error::{Error, Result};
use crate::grid::Field;
use crate::models::Model;
use crate::par;
use crate::state::Conserved;
use crate::sweep::{apply_update, updated_cell, CellFluxes, FluxEngine, Interfaces, Periodicity};

/// Relaxation of the discrete maximum principle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionParams {
    /// Absolute floor of the relaxation.
    pub eps1: f64,
    /// Relative relaxation factor.
    pub eps2: f64,
}

impl Default for DetectionParams {
    fn default() -> Self {
        DetectionParams { eps1: 1e-4, eps2: 1e-3 }
    }
}

impl DetectionParams {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self> {
        if !(eps1 > 0.0 && eps2 > 0.0) {
            return Err(Error::config(format!(
                "detection parameters must be positive, got eps1={eps1}, eps2={eps2}"
            )));
        }
        Ok(DetectionParams { eps1, eps2 })
    }
}

/// Which candidates the detector rejects.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Detector {
    Standard(DetectionParams),
    /// Accepts every candidate.
    AcceptAll,
    /// Rejects every candidate.
    RejectAll,
}

/// Computer admissibility: every component finite.
pub fn cad_check<S: Conserved>(u: &S) -> bool {
    u.is_finite()
}

/// Physical admissibility.
pub fn pad_check<M: Model>(model: &M, u: &M::State) -> bool {
    model.is_admissible(u)
}

/// Relaxed maximum principle: `min - d <= w <= max + d` with
/// `d = max(eps1, eps2 (max - min))`.
pub fn nad_check(w: f64, min: f64, max: f64, params: &DetectionParams) -> bool {
    let d = params.eps1.max(params.eps2 * (max - min));
    w >= min - d && w <= max + d
}

/// Per-cell markers: 1 failed, -1 neighbour of a failed cell, 0 valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoodMask {
    pub nx: usize,
    pub ny: usize,
    pub marks: Vec<i8>,
}

impl MoodMask {
    pub fn new(nx: usize, ny: usize) -> Self {
        MoodMask {
            nx,
            ny,
            marks: vec![0; nx * ny],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.marks[j * self.nx + i]
    }

    pub fn troubled(&self) -> usize {
        self.marks.iter().filter(|&&m| m != 0).count()
    }

    pub fn failed(&self) -> usize {
        self.marks.iter().filter(|&&m| m == 1).count()
    }

    /// Give -1 to every `eligible` unmarked neighbour of a failed cell:
    /// eight neighbours in 2D, two in 1D, wrapping on periodic axes.
    fn propagate(&mut self, eligible: Option<&[bool]>, per: Periodicity) {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let failed: Vec<usize> = (0..self.marks.len()).filter(|&k| self.marks[k] == 1).collect();
        let dys: &[isize] = if ny == 1 && !per.y { &[0] } else { &[-1, 0, 1] };
        for k in failed {
            let (i, j) = ((k % self.nx) as isize, (k / self.nx) as isize);
            for &dy in dys {
                for dx in -1..=1isize {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (mut a, mut b) = (i + dx, j + dy);
                    if per.x {
                        a = a.rem_euclid(nx);
                    }
                    if per.y {
                        b = b.rem_euclid(ny);
                    }
                    if a < 0 || a >= nx || b < 0 || b >= ny {
                        continue;
                    }
                    let q = (b * nx + a) as usize;
                    if self.marks[q] == 0 && eligible.is_none_or(|e| e[q]) {
                        self.marks[q] = -1;
                    }
                }
            }
        }
    }
}

/// Run the detection chain on the interior cells of `candidate` (all of
/// them, or only the `eligible` ones) and build the mask.
///
/// `old` is the ghost-filled solution at the start of the step; the
/// relaxed maximum principle uses the `(2r+1)`-wide neighbourhood of each
/// cell in it, the cell itself included (a `2r+1` segment in 1D).
#[allow(clippy::too_many_arguments)]
pub fn detect<M: Model>(
    model: &M,
    candidate: &Field<M::State>,
    old: &Field<M::State>,
    radius: usize,
    detector: &Detector,
    per: Periodicity,
    eligible: Option<&[bool]>,
) -> MoodMask {
    let m = candidate.mesh;
    let (nx, ny) = (m.nx, m.ny);
    let mut mask = MoodMask::new(nx, ny);
    let r = radius.min(m.gx) as isize;
    let ry = if m.is_1d() { 0 } else { (radius.min(m.gy)) as isize };
    let rows = par::map_range(ny, |j| {
        (0..nx)
            .map(|i| {
                let k = j * nx + i;
                if eligible.is_some_and(|e| !e[k]) {
                    return 0i8;
                }
                let valid = match detector {
                    Detector::AcceptAll => true,
                    Detector::RejectAll => false,
                    Detector::Standard(params) => {
                        let (i, j) = (i as isize, j as isize);
                        let u = candidate.get(i, j);
                        cad_check(&u) && pad_check(model, &u) && {
                            let w = model.nad_values(&u);
                            let mut lo = [f64::INFINITY; 2];
                            let mut hi = [f64::NEG_INFINITY; 2];
                            for b in j - ry..=j + ry {
                                for a in i - r..=i + r {
                                    let v = model.nad_values(&old.get(a, b));
                                    for c in 0..M::NAD_COUNT {
                                        lo[c] = lo[c].min(v[c]);
                                        hi[c] = hi[c].max(v[c]);
                                    }
                                }
                            }
                            (0..M::NAD_COUNT).all(|c| nad_check(w[c], lo[c], hi[c], params))
                        }
                    }
                };
                i8::from(!valid)
            })
            .collect::<Vec<_>>()
    });
    for (j, row) in rows.into_iter().enumerate() {
        mask.marks[j * nx..(j + 1) * nx].copy_from_slice(&row);
    }
    mask.propagate(eligible, per);
    mask
}

/// Cells finalized by each cascade stage during one step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepStats {
    pub labels: Vec<String>,
    pub counts: Vec<usize>,
    /// Mask after the first detection pass; empty without detection.
    pub mask: Vec<i8>,
}

impl StepStats {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Percentage of cells per stage.
    pub fn percentages(&self) -> Vec<f64> {
        let t = self.total().max(1) as f64;
        self.counts.iter().map(|&c| 100.0 * c as f64 / t).collect()
    }
}

/// One MOOD step. `engines` is the cascade, ending with the parachute;
/// `old` must be ghost-filled and `cf` its cell fluxes.
///
/// Interfaces of troubled cells are recomputed with the next stage and
/// every cell touching them is updated again from the shared fluxes, so
/// the step stays conservative. Cells finalized at a stage are never
/// marked again; parachute results are accepted as they are, and an
/// inadmissible parachute state is fatal.
#[allow(clippy::too_many_arguments)]
pub fn mood_step<M: Model>(
    model: &M,
    old: &Field<M::State>,
    cf: &CellFluxes<M::State>,
    engines: &[FluxEngine],
    detector: &Detector,
    per: Periodicity,
    dt: f64,
    out: &mut Field<M::State>,
    fl: &mut Interfaces<M::State>,
) -> Result<StepStats> {
    assert!(!engines.is_empty(), "cascade needs at least one stage");
    let m = old.mesh;
    let (nx, ny) = (m.nx, m.ny);
    let two_d = !m.is_1d();
    let labels: Vec<String> = engines.iter().map(|e| e.kind().label()).collect();
    let mut counts = vec![0usize; engines.len()];

    engines[0].compute_all(model, old, cf, fl, &mut ());
    apply_update(old, fl, dt, out, &mut ());
    if engines.len() == 1 {
        counts[0] = nx * ny;
        return Ok(StepStats {
            labels,
            counts,
            mask: Vec::new(),
        });
    }
    let mut mask = detect(model, out, old, engines[0].kind().order() / 2, detector, per, None);
    counts[0] = nx * ny - mask.troubled();
    let first_mask = mask.marks.clone();

    let (cx, cy) = (dt / m.dx, dt / m.dy);
    let last = engines.len() - 1;
    for (s, engine) in engines.iter().enumerate().skip(1) {
        let troubled: Vec<bool> = mask.marks.iter().map(|&v| v != 0).collect();
        let n_troubled = troubled.iter().filter(|&&t| t).count();
        if n_troubled == 0 {
            break;
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut touch = vec![false; nx * ny];
        let touch_cell = |a: isize, b: isize, touch: &mut Vec<bool>| {
            let a = if per.x { a.rem_euclid(nx as isize) } else { a };
            let b = if per.y { b.rem_euclid(ny as isize) } else { b };
            if a >= 0 && (a as usize) < nx && b >= 0 && (b as usize) < ny {
                touch[b as usize * nx + a as usize] = true;
            }
        };
        for k in (0..nx * ny).filter(|&k| troubled[k]) {
            let (i, j) = (k % nx, k / nx);
            xs.push((i, j));
            xs.push((i + 1, j));
            let (ii, jj) = (i as isize, j as isize);
            touch_cell(ii - 1, jj, &mut touch);
            touch_cell(ii, jj, &mut touch);
            touch_cell(ii + 1, jj, &mut touch);
            if two_d {
                ys.push((i, j));
                ys.push((i, j + 1));
                touch_cell(ii, jj - 1, &mut touch);
                touch_cell(ii, jj + 1, &mut touch);
            }
        }
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        engine.compute_subset(model, old, cf, &xs, &ys, fl);
        for k in (0..nx * ny).filter(|&k| touch[k]) {
            let (i, j) = (k % nx, k / nx);
            let (ii, jj) = (i as isize, j as isize);
            let v = updated_cell(&old.get(ii, jj), fl, i, j, cx, cy);
            out.set(ii, jj, v);
        }

        if s == last {
            for k in (0..nx * ny).filter(|&k| troubled[k]) {
                let (i, j) = ((k % nx) as isize, (k / nx) as isize);
                let u = out.get(i, j);
                if !(cad_check(&u) && pad_check(model, &u)) {
                    return Err(Error::Admissibility(parachute_report(model, old, fl, k % nx, k / nx, &u)));
                }
            }
            counts[s] += n_troubled;
            break;
        }
        mask = detect(model, out, old, engine.kind().order() / 2, detector, per, Some(&troubled));
        counts[s] += n_troubled - mask.troubled();
    }
    Ok(StepStats {
        labels,
        counts,
        mask: first_mask,
    })
}

fn parachute_report<M: Model>(
    model: &M,
    old: &Field<M::State>,
    fl: &Interfaces<M::State>,
    i: usize,
    j: usize,
    u: &M::State,
) -> String {
    let (ii, jj) = (i as isize, j as isize);
    let mut s = format!(
        "parachute produced an inadmissible state at cell ({i}, {j}): candidate {:?}, previous {:?} (frame {:?}); x-fluxes {:?} / {:?}",
        u,
        old.get(ii, jj),
        model.frame_values(&old.get(ii, jj)),
        fl.fx_at(i, j),
        fl.fx_at(i + 1, j),
    );
    if !fl.gy.is_empty() {
        s.push_str(&format!("; y-fluxes {:?} / {:?}", fl.gy_at(i, j), fl.gy_at(i, j + 1)));
    }
    s
}
