//! Superpositions over several mutually orthogonal stabilizer frames:
//! coalescing of unbiased entry pairs into rotated frames, merging of
//! frames with equal matrices, the orthogonality invariant (fast
//! intersection heuristic plus an exact generator-set test), and pivot
//! orthogonalization.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::bits::BitVec;
use crate::exec::Workers;
use crate::frame::{FrameEntry, StabilizerFrame, PRUNE_EPS};
use crate::pauli::{CliffordOp, PauliString};
use crate::tableau::{Amp, StabilizerMatrix, TableauError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error("coalesce/merge loop did not reach a fixpoint within {0} rounds")]
    CoalesceDivergence(usize),
}

/// Tolerance for recognizing candidate-pair amplitude ratios i^d.
const RATIO_EPS: f64 = 1e-9;

/// An ordered list of mutually orthogonal frames over the same qubits,
/// plus the cached intersection of Pauli rows common to every matrix.
#[derive(Debug, Clone)]
pub struct Multiframe {
    n: usize,
    pub frames: Vec<StabilizerFrame>,
    intersection: Vec<PauliString>,
}

impl Multiframe {
    pub fn from_basis(bits: &BitVec) -> Self {
        let frame = StabilizerFrame::from_basis(bits);
        let intersection = frame.matrix.rows().to_vec();
        Multiframe { n: bits.len(), frames: vec![frame], intersection }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    /// Total number of stabilizer states across all frames.
    pub fn total_states(&self) -> usize {
        self.frames.iter().map(|f| f.len()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.frames.iter().map(|f| f.norm_sqr()).sum()
    }

    /// Weighted amplitude of one basis state across the whole superposition.
    pub fn basis_amplitude(&self, b: &BitVec) -> Complex64 {
        self.frames.iter().map(|f| f.basis_amplitude(b)).sum()
    }

    /// Dense state vector for verification at desk scale.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        assert!(self.n <= 20, "reconstruction is for desk-scale checks");
        (0..1usize << self.n)
            .map(|i| {
                let b = BitVec::from_fn(self.n, |j| (i >> j) & 1 == 1);
                self.basis_amplitude(&b)
            })
            .collect()
    }

    // ---- gate application ------------------------------------------------

    /// Clifford or Pauli gate: rotate every frame independently.
    pub fn rotate(&mut self, op: CliffordOp, workers: &Workers) -> Result<(), EngineError> {
        if self.frames.len() > 1 {
            let serial = Workers::serial();
            let results = workers.map_mut_frames(&mut self.frames, |f| f.rotate(op, &serial));
            for r in results {
                r?;
            }
        } else if let Some(f) = self.frames.first_mut() {
            f.rotate(op, workers)?;
        }
        self.evict_intersection();
        Ok(())
    }

    /// Toffoli / controlled-phase / T dispatch with coalescing, merging and
    /// orthogonality restoration. `peak` observes the entry count right
    /// after the per-frame cofactoring, where the superposition is widest.
    pub fn apply_nonclifford(
        &mut self,
        gate: NonClifford,
        workers: &Workers,
        single_frame: bool,
        mut peak: impl FnMut(&Multiframe),
    ) -> Result<(), EngineError> {
        {
            let serial = Workers::serial();
            if self.frames.len() > 1 {
                let results = workers.map_mut_frames(&mut self.frames, |f| {
                    apply_gate_to_frame(f, gate, &serial)
                });
                for r in results {
                    r?;
                }
            } else if let Some(f) = self.frames.first_mut() {
                apply_gate_to_frame(f, gate, workers)?;
            }
        }
        peak(self);
        if !single_frame {
            self.coalesce_merge_fixpoint(workers)?;
            peak(self);
            self.recompute_intersection();
            if self.frames.len() > 1 && !self.check_orthogonality() {
                self.orthogonalize(workers)?;
                peak(self);
                self.recompute_intersection();
            }
        } else {
            self.evict_intersection();
        }
        Ok(())
    }

    /// Iterate coalescing + merging until no new frames appear. Bounded by
    /// a safety cap; entry counts halve per productive round, so hitting
    /// the cap signals a bug rather than slow convergence.
    fn coalesce_merge_fixpoint(&mut self, workers: &Workers) -> Result<(), EngineError> {
        let cap = self.n.max(2) + 1;
        for _ in 0..cap {
            let mut changed = false;
            let mut next: Vec<StabilizerFrame> = Vec::with_capacity(self.frames.len());
            for frame in self.frames.drain(..) {
                let before = frame.len();
                let parts = coalesce(frame);
                if parts.len() > 1 || parts.iter().map(|p| p.len()).sum::<usize>() != before
                {
                    changed = true;
                }
                next.extend(parts);
            }
            self.frames = next;
            if self.merge_frames(workers) {
                changed = true;
            }
            if !changed {
                return Ok(());
            }
        }
        Err(EngineError::CoalesceDivergence(cap))
    }

    /// Union frames whose canonical matrices coincide; duplicate phase
    /// vectors combine by amplitude addition and dead entries are pruned.
    /// Returns true when anything changed.
    pub fn merge_frames(&mut self, _workers: &Workers) -> bool {
        if self.frames.len() <= 1 {
            return false;
        }
        for f in &mut self.frames {
            canonicalize_frame(f);
        }
        self.frames
            .sort_by(|a, b| matrix_key(&a.matrix).cmp(&matrix_key(&b.matrix)));
        let mut changed = false;
        let mut out: Vec<StabilizerFrame> = Vec::with_capacity(self.frames.len());
        for f in self.frames.drain(..) {
            match out.last_mut() {
                Some(last) if last.matrix.same_literals(&f.matrix) => {
                    changed = true;
                    merge_entry_lists(&mut last.entries, f.entries);
                }
                _ => out.push(f),
            }
        }
        for f in &mut out {
            let before = f.len();
            f.entries.retain(|e| e.amp.norm() >= PRUNE_EPS);
            if f.len() != before {
                changed = true;
            }
        }
        let before = out.len();
        out.retain(|f| !f.is_empty());
        changed |= out.len() != before;
        self.frames = out;
        changed
    }

    // ---- orthogonality ---------------------------------------------------

    /// True when every pair of states drawn from two different frames is
    /// orthogonal. Pairs whose phase vectors differ on a shared
    /// intersection row are orthogonal by the sign argument; leftovers go
    /// through the exact generator-set test.
    pub fn check_orthogonality(&self) -> bool {
        self.orthogonality_decisions(false).0
    }

    /// Detailed variant for verification: also reports, for every
    /// cross-frame entry pair settled by the intersection fast path, the
    /// frame/entry indices involved.
    pub fn orthogonality_decisions(
        &self,
        collect_fast: bool,
    ) -> (bool, Vec<(usize, usize, usize, usize)>) {
        let mut fast_pairs = Vec::new();
        if self.frames.len() <= 1 {
            return (true, fast_pairs);
        }
        // signature = phase bits on the intersection rows, in intersection
        // order; entries in different frames with different signatures are
        // orthogonal without any inner-product work
        let row_maps: Vec<Option<Vec<usize>>> = self
            .frames
            .iter()
            .map(|f| {
                if self.intersection.is_empty() {
                    return None;
                }
                let mut map = Vec::with_capacity(self.intersection.len());
                for p in &self.intersection {
                    match f.matrix.rows().iter().position(|r| r == p) {
                        Some(i) => map.push(i),
                        None => return None,
                    }
                }
                Some(map)
            })
            .collect();
        let all_mapped = row_maps.iter().all(|m| m.is_some());
        let mut buckets: BTreeMap<Vec<u64>, Vec<(usize, usize)>> = BTreeMap::new();
        if all_mapped && !self.intersection.is_empty() {
            for (fi, f) in self.frames.iter().enumerate() {
                let map = row_maps[fi].as_ref().unwrap();
                for (ei, e) in f.entries.iter().enumerate() {
                    let mut sig = vec![0u64; (map.len() + 63) / 64];
                    for (k, &r) in map.iter().enumerate() {
                        if e.phases.get(r) {
                            sig[k >> 6] |= 1 << (k & 63);
                        }
                    }
                    buckets.entry(sig).or_default().push((fi, ei));
                }
            }
        } else {
            // no usable intersection: a single bucket holds everything
            let mut all = Vec::new();
            for (fi, f) in self.frames.iter().enumerate() {
                for ei in 0..f.entries.len() {
                    all.push((fi, ei));
                }
            }
            buckets.insert(Vec::new(), all);
        }
        if collect_fast {
            let groups: Vec<&Vec<(usize, usize)>> = buckets.values().collect();
            for (gi, ga) in groups.iter().enumerate() {
                for gb in groups.iter().skip(gi + 1) {
                    for &(fa, ea) in ga.iter() {
                        for &(fb, eb) in gb.iter() {
                            if fa != fb {
                                fast_pairs.push((fa, ea, fb, eb));
                            }
                        }
                    }
                }
            }
        }
        // within a bucket, cross-frame pairs need the exact test
        for group in buckets.values() {
            for (i, &(fa, ea)) in group.iter().enumerate() {
                for &(fb, eb) in group.iter().skip(i + 1) {
                    if fa == fb {
                        continue;
                    }
                    let a = &self.frames[fa];
                    let b = &self.frames[fb];
                    if !states_orthogonal(
                        &a.matrix,
                        &a.entries[ea].phases,
                        &b.matrix,
                        &b.entries[eb].phases,
                    ) {
                        return (false, fast_pairs);
                    }
                }
            }
        }
        (true, fast_pairs)
    }

    /// Decompose back into a single frame by iterated pivot cofactoring,
    /// merging equal matrices along the way. The surviving frame's entries
    /// are distinct phase vectors, hence pairwise orthogonal.
    pub fn orthogonalize(&mut self, workers: &Workers) -> Result<(), EngineError> {
        let mut rounds = 0usize;
        loop {
            self.merge_frames(workers);
            if self.frames.len() <= 1 {
                self.recompute_intersection();
                return Ok(());
            }
            rounds += 1;
            assert!(rounds <= self.n + 1, "orthogonalization failed to converge");
            let Some(p) = self.pick_pivot() else {
                // all matrices agree column-wise yet differ: cofactor the
                // lowest non-pure column to force progress
                let q = (0..self.n)
                    .find(|&q| {
                        self.frames.iter().any(|f| f.matrix.pure_z_row(q).is_none())
                    })
                    .expect("distinct matrices must differ somewhere");
                for f in &mut self.frames {
                    f.cofactor(q, workers)?;
                }
                continue;
            };
            for f in &mut self.frames {
                f.cofactor(p, workers)?;
            }
        }
    }

    /// Lowest qubit whose column holds different literal multisets across
    /// at least two frame matrices.
    fn pick_pivot(&self) -> Option<usize> {
        for q in 0..self.n {
            let counts: Vec<[usize; 4]> = self
                .frames
                .iter()
                .map(|f| {
                    let mut c = [0usize; 4];
                    for r in f.matrix.rows() {
                        c[r.literal(q) as usize] += 1;
                    }
                    c
                })
                .collect();
            if counts.windows(2).any(|w| w[0] != w[1]) {
                return Some(q);
            }
        }
        None
    }

    // ---- measurement -----------------------------------------------------

    /// Outcome probabilities for qubit q: the amplitude-weighted sum of the
    /// per-state probabilities, each of which is 0, 1/2 or 1.
    pub fn measure_probability(&self, q: usize) -> (f64, f64) {
        let mut p = (0.0, 0.0);
        for f in &self.frames {
            let (p0, p1) = f.outcome_weights(q);
            p.0 += p0;
            p.1 += p1;
        }
        debug_assert!((p.0 + p.1 - 1.0).abs() < 1e-9);
        p
    }

    /// Flip the (biased) coin against p(0), collapse every frame to the
    /// outcome, and renormalize the surviving superposition.
    pub fn measure_collapse<R: Rng>(
        &mut self,
        q: usize,
        rng: &mut R,
        workers: &Workers,
    ) -> Result<bool, EngineError> {
        let (p0, _) = self.measure_probability(q);
        let outcome = rng.gen::<f64>() >= p0;
        for f in &mut self.frames {
            f.collapse_to(q, outcome, workers)?;
        }
        self.frames.retain(|f| !f.is_empty());
        self.merge_frames(workers);
        let norm = self.norm_sqr();
        debug_assert!(norm > 0.0);
        let scale = 1.0 / norm.sqrt();
        for f in &mut self.frames {
            f.scale(scale, workers);
        }
        self.recompute_intersection();
        if self.frames.len() > 1 && !self.check_orthogonality() {
            self.orthogonalize(workers)?;
        }
        Ok(outcome)
    }

    // ---- intersection set -------------------------------------------------

    /// Drop cached operators no longer present in every matrix (cheap
    /// post-gate maintenance).
    fn evict_intersection(&mut self) {
        if self.frames.len() == 1 {
            self.intersection = self.frames[0].matrix.rows().to_vec();
            return;
        }
        self.intersection.retain(|p| {
            self.frames
                .iter()
                .all(|f| f.matrix.rows().iter().any(|r| r == p))
        });
    }

    /// Rebuild the intersection from scratch (after structural changes).
    pub fn recompute_intersection(&mut self) {
        let Some(first) = self.frames.first() else {
            self.intersection.clear();
            return;
        };
        let mut common: Vec<PauliString> = first.matrix.rows().to_vec();
        for f in self.frames.iter().skip(1) {
            common.retain(|p| f.matrix.rows().iter().any(|r| r == p));
            if common.is_empty() {
                break;
            }
        }
        common.sort();
        self.intersection = common;
    }

    pub fn intersection(&self) -> &[PauliString] {
        &self.intersection
    }
}

/// Non-Clifford gates the frame layer understands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonClifford {
    Toffoli(usize, usize, usize),
    ControlledPhase(usize, usize, f64),
    T(usize, bool),
}

fn apply_gate_to_frame(
    f: &mut StabilizerFrame,
    gate: NonClifford,
    workers: &Workers,
) -> Result<(), TableauError> {
    match gate {
        NonClifford::Toffoli(c1, c2, t) => f.apply_toffoli(c1, c2, t, workers),
        NonClifford::ControlledPhase(c, t, alpha) => {
            f.apply_controlled_phase(c, t, alpha, workers)
        }
        NonClifford::T(t, dagger) => f.apply_t(t, dagger, workers),
    }
}

fn matrix_key(m: &StabilizerMatrix) -> Vec<u64> {
    let mut key = Vec::with_capacity(m.qubits() * 2);
    for r in m.rows() {
        key.extend_from_slice(r.xs.words());
        key.extend_from_slice(r.zs.words());
    }
    key
}

/// Put a frame's matrix in full canonical form, replaying the row
/// operations onto every entry.
fn canonicalize_frame(f: &mut StabilizerFrame) {
    let memo = f.matrix.to_row_echelon();
    if memo.is_empty() {
        return;
    }
    for e in &mut f.entries {
        memo.replay(&mut e.phases, None);
    }
    f.entries.sort_by(|a, b| a.phases.cmp(&b.phases));
}

fn merge_entry_lists(into: &mut Vec<FrameEntry>, from: Vec<FrameEntry>) {
    into.extend(from);
    into.sort_by(|a, b| a.phases.cmp(&b.phases));
    let mut out: Vec<FrameEntry> = Vec::with_capacity(into.len());
    for e in into.drain(..) {
        match out.last_mut() {
            Some(last) if last.phases == e.phases => last.amp += e.amp,
            _ => out.push(e),
        }
    }
    *into = out;
}

// ---- coalescing ----------------------------------------------------------

/// Fuse candidate entry pairs of one frame. A pair qualifies when the
/// phase vectors differ only on rows that are pure Z_k operators and the
/// amplitudes are related by i^d. Each distinct (differing-row set, d)
/// signature produces one rotated output frame; unpaired entries stay in a
/// residual frame with the original matrix.
pub fn coalesce(frame: StabilizerFrame) -> Vec<StabilizerFrame> {
    if frame.len() <= 1 {
        return vec![frame];
    }
    let mut frame = frame;
    // full canonical form: pure-Z columns carry no stray Z bits in other
    // rows, which is what makes the pair rotation below exact
    canonicalize_frame(&mut frame);
    let n = frame.qubits();
    // pure Z_k rows and the qubits they stabilize
    let mut z_rows: Vec<(usize, usize)> = Vec::new();
    for (r, row) in frame.matrix.rows().iter().enumerate() {
        if row.xs.is_zero() && row.zs.count_ones() == 1 {
            z_rows.push((r, row.zs.first_one().unwrap()));
        }
    }
    if z_rows.is_empty() {
        return vec![frame];
    }
    // sort entries so candidates share the masked part of their vectors;
    // bit 0 is most significant so pairs sit next to each other in the
    // order their differing rows appear in the matrix
    let masked = |i: usize| {
        let mut v = frame.entries[i].phases.clone();
        for &(r, _) in &z_rows {
            v.set(r, false);
        }
        v
    };
    let keys: Vec<BitVec> = (0..frame.entries.len()).map(masked).collect();
    let mut order: Vec<usize> = (0..frame.entries.len()).collect();
    order.sort_by(|&a, &b| {
        keys[a]
            .cmp_msb(&keys[b])
            .then(frame.entries[a].phases.cmp_msb(&frame.entries[b].phases))
    });

    let mut taken = vec![false; frame.entries.len()];
    type PairList = Vec<(usize, usize)>; // (base entry, partner entry)
    let mut buckets: BTreeMap<(Vec<usize>, u8), PairList> = BTreeMap::new();
    let mut run_start = 0usize;
    while run_start < order.len() {
        let mut run_end = run_start + 1;
        while run_end < order.len() && keys[order[run_end]] == keys[order[run_start]] {
            run_end += 1;
        }
        for i in run_start..run_end {
            let a = order[i];
            if taken[a] {
                continue;
            }
            for j in i + 1..run_end {
                let b = order[j];
                if taken[b] {
                    continue;
                }
                let (aa, ab) = (frame.entries[a].amp, frame.entries[b].amp);
                let Some(d) = i_power_ratio(ab, aa) else { continue };
                // differing rows, all within the pure-Z mask by construction
                let mut diff: Vec<usize> = Vec::new();
                let pa = &frame.entries[a].phases;
                let pb = &frame.entries[b].phases;
                for &(r, _) in &z_rows {
                    if pa.get(r) != pb.get(r) {
                        diff.push(r);
                    }
                }
                debug_assert!(!diff.is_empty());
                taken[a] = true;
                taken[b] = true;
                buckets.entry((diff, d)).or_default().push((a, b));
                break;
            }
        }
        run_start = run_end;
    }
    if buckets.is_empty() {
        return vec![frame];
    }

    let mut out: Vec<StabilizerFrame> = Vec::new();
    let residual: Vec<FrameEntry> = (0..frame.entries.len())
        .filter(|&i| !taken[i])
        .map(|i| frame.entries[i].clone())
        .collect();
    if !residual.is_empty() {
        out.push(StabilizerFrame { matrix: frame.matrix.clone(), entries: residual });
    }
    let qubit_of: BTreeMap<usize, usize> = z_rows.iter().copied().collect();
    for ((diff, d), pairs) in buckets {
        // C = CNOT_{v1,v2} ... CNOT_{v1,vm} P^d_{v1} H_{v1}, applied
        // rightmost first
        let v: Vec<usize> = diff.iter().map(|r| qubit_of[r]).collect();
        let mut gates: Vec<CliffordOp> = vec![CliffordOp::H(v[0])];
        for _ in 0..d {
            gates.push(CliffordOp::Phase(v[0]));
        }
        for &vk in &v[1..] {
            gates.push(CliffordOp::Cnot(v[0], vk));
        }
        let mut matrix = frame.matrix.clone();
        let memos: Vec<_> = gates
            .iter()
            .map(|&g| matrix.conjugate(g).expect("coalesce rotation"))
            .collect();
        let x_new = matrix.x_block_len() as i32;
        let mut entries: Vec<FrameEntry> = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let base = &frame.entries[a];
            let partner = &frame.entries[b];
            let mut phases = base.phases.clone();
            for memo in &memos {
                memo.replay(&mut phases, None);
            }
            let anchor = matrix.anchor(&phases);
            // the fused state's amplitude at the new anchor comes from
            // whichever half of the pair supports that basis state
            let contrib_a = frame.matrix.amp_exact(&base.phases, &anchor);
            let amp_at_anchor = if contrib_a.zero {
                partner.amp * frame.matrix.amp_exact(&partner.phases, &anchor).to_complex()
            } else {
                base.amp * contrib_a.to_complex()
            };
            let amp = amp_at_anchor * Amp::new(0, x_new).to_complex();
            entries.push(FrameEntry { phases, amp });
        }
        let mut nf = StabilizerFrame { matrix, entries };
        nf.entries.sort_by(|a, b| a.phases.cmp(&b.phases));
        out.push(nf);
    }
    out
}

/// Coalesce after rotating the frame into computational-basis form, then
/// rotate every output frame back; finds candidates even when the matrix
/// has no pure Z rows.
pub fn coalesce_general(
    frame: StabilizerFrame,
    workers: &Workers,
) -> Result<Vec<StabilizerFrame>, TableauError> {
    let gates = frame.matrix.basis_form_circuit();
    if gates.is_empty() {
        return Ok(coalesce(frame));
    }
    let mut f = frame;
    for &g in &gates {
        f.rotate(g, workers)?;
    }
    let mut parts = coalesce(f);
    for part in &mut parts {
        for g in gates.iter().rev() {
            let inv = g.inverse();
            part.rotate(inv, workers)?;
        }
    }
    Ok(parts)
}

/// d such that a == i^d * b within tolerance, if any.
fn i_power_ratio(a: Complex64, b: Complex64) -> Option<u8> {
    let nb = b.norm();
    if nb < PRUNE_EPS {
        return None;
    }
    let ratio = a / b;
    if (ratio.norm() - 1.0).abs() > RATIO_EPS {
        return None;
    }
    let angle = ratio.arg() / std::f64::consts::FRAC_PI_2;
    let rounded = angle.round();
    if (angle - rounded).abs() > RATIO_EPS {
        return None;
    }
    Some(((rounded as i64).rem_euclid(4)) as u8)
}

/// Exact orthogonality of two stabilizer states given as signed matrices:
/// orthogonal iff some product of rows from both sides yields -identity.
/// A GF(2) nullspace of the stacked literal rows gives the candidate
/// products; the sign test is a homomorphism on that nullspace, so checking
/// a basis suffices.
pub fn states_orthogonal(
    ma: &StabilizerMatrix,
    sa: &BitVec,
    mb: &StabilizerMatrix,
    sb: &BitVec,
) -> bool {
    let n = ma.qubits();
    debug_assert_eq!(n, mb.qubits());
    if n == 0 {
        return false;
    }
    let total = 2 * n;
    // stacked literal rows as 2n-bit vectors, plus combination trackers
    let mut vecs: Vec<(BitVec, BitVec)> = Vec::with_capacity(total);
    for src in [ma, mb] {
        for r in src.rows() {
            let mut v = BitVec::new(2 * n);
            for i in r.xs.iter_ones() {
                v.set(i, true);
            }
            for i in r.zs.iter_ones() {
                v.set(n + i, true);
            }
            let combo = BitVec::new(total);
            vecs.push((v, combo));
        }
    }
    for (i, (_, combo)) in vecs.iter_mut().enumerate() {
        combo.set(i, true);
    }
    // eliminate; rows that become zero span the nullspace combinations
    let mut pivots: Vec<usize> = Vec::new(); // vec index per pivot column order
    for col in 0..2 * n {
        let taken: Vec<usize> = pivots.clone();
        let Some(p) = (0..vecs.len())
            .find(|i| !taken.contains(i) && vecs[*i].0.get(col))
        else {
            continue;
        };
        for i in 0..vecs.len() {
            if i != p && !taken.contains(&i) && vecs[i].0.get(col) {
                let (a, b) = if i < p {
                    let (x, y) = vecs.split_at_mut(p);
                    (&mut x[i], &y[0])
                } else {
                    let (x, y) = vecs.split_at_mut(i);
                    (&mut y[0], &x[p])
                };
                a.0.xor_with(&b.0);
                a.1.xor_with(&b.1);
            }
        }
        pivots.push(p);
    }
    // evaluate the sign character on each nullspace basis element
    for (v, combo) in &vecs {
        if !v.is_zero() {
            continue;
        }
        // product of chosen rows from A and from B; equal literals by
        // construction, so compare phases
        let mut phase_a: u8 = 0;
        let mut acc_a = PauliString::identity(n);
        let mut phase_b: u8 = 0;
        let mut acc_b = PauliString::identity(n);
        for i in combo.iter_ones() {
            if i < n {
                phase_a = (phase_a + acc_a.mul_assign(ma.row(i))) & 3;
                if sa.get(i) {
                    phase_a = (phase_a + 2) & 3;
                }
            } else {
                let r = i - n;
                phase_b = (phase_b + acc_b.mul_assign(mb.row(r))) & 3;
                if sb.get(r) {
                    phase_b = (phase_b + 2) & 3;
                }
            }
        }
        debug_assert_eq!(acc_a, acc_b, "nullspace element must cancel literals");
        debug_assert_eq!(phase_a & 1, 0);
        debug_assert_eq!(phase_b & 1, 0);
        if phase_a != phase_b {
            return true;
        }
    }
    false
}
