//! Canonical enumeration of list assignments under palette permutations.
//!
//! An assignment maps each vertex to a color subset of fixed size; two
//! assignments related by a permutation of the palette color the same way.
//! The enumerator walks assignments vertex by vertex in ascending mask
//! order and prunes any prefix some permutation would map to a strictly
//! smaller one, so exactly the lexicographically least representative of
//! each orbit reaches the visitor, in lexicographic order.

use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;
use std::time::Instant;

use crate::error::{Error, Result};

/// Permutations of a palette of at most 7 colors, with a precomputed
/// mask-image table.
pub struct PaletteSymmetry {
    palette: usize,
    /// `image[p][m]` is the image of mask `m` under permutation `p`.
    image: Vec<Vec<u32>>,
}

impl PaletteSymmetry {
    pub fn new(palette: usize) -> Result<Self> {
        if palette == 0 || palette > 7 {
            return Err(Error::Input(format!(
                "canonical enumeration supports palettes of 1..=7 colors, got {palette}"
            )));
        }
        let perms = permutations(palette);
        let masks = 1usize << palette;
        let mut image = Vec::with_capacity(perms.len());
        for perm in &perms {
            let mut row = vec![0u32; masks];
            for (m, slot) in row.iter_mut().enumerate() {
                let mut out = 0u32;
                for (c, &target) in perm.iter().enumerate() {
                    if m & (1 << c) != 0 {
                        out |= 1 << target;
                    }
                }
                *slot = out;
            }
            image.push(row);
        }
        Ok(PaletteSymmetry { palette, image })
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn group_order(&self) -> u128 {
        self.image.len() as u128
    }

    /// The image of an assignment under one group element.
    pub fn apply(&self, perm_index: usize, masks: &[u32]) -> Vec<u32> {
        let row = &self.image[perm_index % self.image.len()];
        masks.iter().map(|&m| row[m as usize]).collect()
    }

    /// The lexicographically least permuted image of an assignment.
    pub fn canonical_form(&self, masks: &[u32]) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for row in &self.image {
            let mapped: Vec<u32> = masks.iter().map(|&m| row[m as usize]).collect();
            if best.as_ref().is_none_or(|b| &mapped < b) {
                best = Some(mapped);
            }
        }
        best.expect("group is nonempty")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// A canonical prefix and the permutations still fixing it.
type PrefixJob = (Vec<u32>, Vec<u16>);

/// The space of exact-size list assignments over a fixed palette.
pub struct CanonicalSpace {
    sizes: Vec<u8>,
    sym: PaletteSymmetry,
    /// Candidate masks per vertex, ascending.
    candidates: Vec<Vec<u32>>,
}

/// What a visitor found at one canonical assignment.
pub enum Found<T> {
    Nothing,
    /// Collect this item and keep scanning.
    Item(T),
    /// Collect this item; the worker may stop scanning its range.
    Final(T),
}

/// Result of a scan over the canonical space.
pub struct ScanOutcome<T> {
    /// Canonical assignments visited (all of them unless items marked
    /// `Final` cut workers short, or the deadline hit).
    pub checked: u64,
    /// Items in enumeration (lexicographic) order.
    pub items: Vec<T>,
    pub timed_out: bool,
}

impl CanonicalSpace {
    pub fn new(sizes: &[u8], palette: usize) -> Result<Self> {
        let sym = PaletteSymmetry::new(palette)?;
        for &s in sizes {
            if s == 0 || s as usize > palette {
                return Err(Error::Input(format!("list size {s} outside 1..={palette}")));
            }
        }
        let candidates = sizes
            .iter()
            .map(|&s| {
                (0u32..1 << palette)
                    .filter(|m| m.count_ones() == s as u32)
                    .collect()
            })
            .collect();
        Ok(CanonicalSpace {
            sizes: sizes.to_vec(),
            sym,
            candidates,
        })
    }

    pub fn palette(&self) -> usize {
        self.sym.palette()
    }

    pub fn sizes(&self) -> &[u8] {
        &self.sizes
    }

    pub fn symmetry(&self) -> &PaletteSymmetry {
        &self.sym
    }

    /// Orbit-count estimate: the raw product of binomials divided by the
    /// group order. A lower bound on the true canonical count, used for
    /// budget decisions before any work starts.
    pub fn estimate(&self) -> u128 {
        let mut product: u128 = 1;
        for c in &self.candidates {
            product = product.saturating_mul(c.len() as u128);
        }
        (product / self.sym.group_order()).max(1)
    }

    /// Canonical prefixes of the assignment space, expanded level by
    /// level until there are at least `want` of them (or the space is
    /// exhausted). Each carries the permutations still fixing it.
    fn prefix_jobs(&self, want: usize) -> (usize, Vec<PrefixJob>) {
        let all: Vec<u16> = (0..self.sym.image.len() as u16).collect();
        let mut depth = 0usize;
        let mut jobs: Vec<PrefixJob> = vec![(Vec::new(), all)];
        while depth < self.sizes.len().saturating_sub(1) && jobs.len() < want {
            let mut next = Vec::with_capacity(jobs.len() * 4);
            for (prefix, tight) in &jobs {
                for &mask in &self.candidates[depth] {
                    if let Some(narrowed) = narrow(&self.sym, tight, mask) {
                        let mut longer = prefix.clone();
                        longer.push(mask);
                        next.push((longer, narrowed));
                    }
                }
            }
            jobs = next;
            depth += 1;
        }
        (depth, jobs)
    }

    /// Scans every canonical assignment. Work is split by canonical
    /// prefixes dealt round-robin to `threads` workers; the visitor must
    /// be pure. Items come back in lexicographic order regardless of the
    /// worker count.
    pub fn scan<T, F>(&self, threads: usize, deadline: Option<Instant>, visit: F) -> ScanOutcome<T>
    where
        T: Send,
        F: Fn(&[u32]) -> Found<T> + Sync,
    {
        let threads = threads.max(1);
        let (depth, jobs) = self.prefix_jobs(if threads == 1 { 1 } else { threads * 16 });
        let expired = AtomicBool::new(false);
        type WorkerResult<T> = (u64, Vec<(usize, Vec<T>)>, bool);
        let mut results: Vec<WorkerResult<T>> = thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..threads {
                let expired = &expired;
                let visit = &visit;
                let jobs = &jobs;
                handles.push(scope.spawn(move || {
                    let mut worker = Worker {
                        space: self,
                        deadline,
                        expired,
                        visit,
                        prefix: vec![0; self.sizes.len()],
                        checked: 0,
                        items: Vec::new(),
                        stop: false,
                        timed_out: false,
                    };
                    let mut by_job: Vec<(usize, Vec<T>)> = Vec::new();
                    let mut index = w;
                    while index < jobs.len() && !worker.stop {
                        let (prefix, tight) = &jobs[index];
                        worker.prefix[..depth].copy_from_slice(prefix);
                        worker.dfs(depth, tight.clone());
                        if !worker.items.is_empty() {
                            by_job.push((index, std::mem::take(&mut worker.items)));
                        }
                        index += threads;
                    }
                    (worker.checked, by_job, worker.timed_out)
                }));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect()
        });
        let mut outcome = ScanOutcome {
            checked: 0,
            items: Vec::new(),
            timed_out: false,
        };
        let mut tagged: Vec<(usize, Vec<T>)> = Vec::new();
        for (checked, by_job, timed_out) in results.drain(..) {
            outcome.checked += checked;
            outcome.timed_out |= timed_out;
            tagged.extend(by_job);
        }
        tagged.sort_by_key(|(index, _)| *index);
        for (_, items) in tagged {
            outcome.items.extend(items);
        }
        outcome
    }
}

/// `None` when some tight permutation maps `mask` strictly lower, else
/// the permutations still fixing the extended prefix.
fn narrow(sym: &PaletteSymmetry, tight: &[u16], mask: u32) -> Option<Vec<u16>> {
    let mut next = Vec::with_capacity(tight.len());
    for &p in tight {
        let mapped = sym.image[p as usize][mask as usize];
        if mapped < mask {
            return None;
        }
        if mapped == mask {
            next.push(p);
        }
    }
    Some(next)
}

struct Worker<'a, T, F>
where
    F: Fn(&[u32]) -> Found<T>,
{
    space: &'a CanonicalSpace,
    deadline: Option<Instant>,
    expired: &'a AtomicBool,
    visit: &'a F,
    prefix: Vec<u32>,
    checked: u64,
    items: Vec<T>,
    stop: bool,
    timed_out: bool,
}

impl<T, F> Worker<'_, T, F>
where
    F: Fn(&[u32]) -> Found<T>,
{
    fn dfs(&mut self, depth: usize, tight: Vec<u16>) {
        if self.stop {
            return;
        }
        if depth == self.space.sizes.len() {
            self.checked += 1;
            if self.checked.is_multiple_of(8192) {
                if self.expired.load(Ordering::Relaxed) {
                    self.stop = true;
                    return;
                }
                if let Some(deadline) = self.deadline {
                    if Instant::now() >= deadline {
                        self.expired.store(true, Ordering::Relaxed);
                        self.timed_out = true;
                        self.stop = true;
                        return;
                    }
                }
            }
            match (self.visit)(&self.prefix) {
                Found::Nothing => {}
                Found::Item(item) => self.items.push(item),
                Found::Final(item) => {
                    self.items.push(item);
                    self.stop = true;
                }
            }
            return;
        }
        for i in 0..self.space.candidates[depth].len() {
            let mask = self.space.candidates[depth][i];
            if let Some(next_tight) = narrow(&self.space.sym, &tight, mask) {
                self.prefix[depth] = mask;
                self.dfs(depth + 1, next_tight);
                if self.stop {
                    return;
                }
            }
        }
    }
}
