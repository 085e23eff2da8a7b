//! Shared concurrent structures for the parallel explorer: an
//! append-only region array with a two-counter publication protocol and
//! a grow-only basis dedup table, plus the static (round-barrier) and
//! dynamic (shared work pool) schedulers.

use std::cell::UnsafeCell;
use std::collections::VecDeque;
use std::mem::MaybeUninit;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::atomic::{AtomicBool, AtomicPtr, AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Instant;

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;

use crate::explore::{process_task, PlpSolution, SharedState};
use crate::lp::Basis;
use crate::plp::{ParametricLP, PlpError, Region, SolveConfig, Task};
use crate::rat::RatVec;

const SEG0: usize = 32;
const NSEGS: usize = 40;

type Slot<T> = UnsafeCell<MaybeUninit<T>>;

/// Append-only concurrent vector with reservation (`n_fill`) and
/// publication (`n_ready`) counters.
///
/// A writer reserves slot `i` with a fetch-and-increment, fills it while
/// earlier writers are still publishing, waits until `n_ready == i`
/// (bounded spin, then a condition variable), and publishes with a
/// release store of `i + 1`. Readers that observe `n_ready > i` with
/// acquire ordering therefore observe slot `i` fully written. Storage is
/// a ladder of doubling segments so published slots never move.
pub struct ConcurrentVec<T> {
    segments: [AtomicPtr<Slot<T>>; NSEGS],
    n_fill: AtomicUsize,
    n_ready: AtomicUsize,
    lock: Mutex<()>,
    ready_cv: Condvar,
}

unsafe impl<T: Send> Send for ConcurrentVec<T> {}
unsafe impl<T: Send + Sync> Sync for ConcurrentVec<T> {}

fn locate(i: usize) -> (usize, usize) {
    let adjusted = i / SEG0 + 1;
    let s = (usize::BITS - 1 - adjusted.leading_zeros()) as usize;
    let before = SEG0 * ((1usize << s) - 1);
    (s, i - before)
}

fn seg_len(s: usize) -> usize {
    SEG0 << s
}

impl<T> ConcurrentVec<T> {
    pub fn new() -> Self {
        ConcurrentVec {
            segments: std::array::from_fn(|_| AtomicPtr::new(ptr::null_mut())),
            n_fill: AtomicUsize::new(0),
            n_ready: AtomicUsize::new(0),
            lock: Mutex::new(()),
            ready_cv: Condvar::new(),
        }
    }

    fn segment(&self, s: usize) -> *mut Slot<T> {
        let existing = self.segments[s].load(Ordering::Acquire);
        if !existing.is_null() {
            return existing;
        }
        let fresh: Box<[Slot<T>]> = (0..seg_len(s))
            .map(|_| UnsafeCell::new(MaybeUninit::uninit()))
            .collect();
        let raw = Box::into_raw(fresh) as *mut Slot<T>;
        match self.segments[s].compare_exchange(
            ptr::null_mut(),
            raw,
            Ordering::AcqRel,
            Ordering::Acquire,
        ) {
            Ok(_) => raw,
            Err(winner) => {
                // lost the allocation race; free ours
                unsafe {
                    drop(Box::from_raw(ptr::slice_from_raw_parts_mut(raw, seg_len(s))));
                }
                winner
            }
        }
    }

    fn slot(&self, i: usize) -> *mut Slot<T> {
        let (s, off) = locate(i);
        unsafe { self.segment(s).add(off) }
    }

    /// Reserves a slot, builds the value from its index, publishes it.
    pub fn push_with(&self, make: impl FnOnce(usize) -> T) -> usize {
        let i = self.n_fill.fetch_add(1, Ordering::Relaxed);
        let slot = self.slot(i);
        unsafe {
            (*slot).get().write(MaybeUninit::new(make(i)));
        }
        let mut spins = 0u32;
        while self.n_ready.load(Ordering::Acquire) != i {
            if spins < 64 {
                std::hint::spin_loop();
                spins += 1;
            } else {
                let mut guard = self.lock.lock().unwrap();
                while self.n_ready.load(Ordering::Acquire) != i {
                    guard = self.ready_cv.wait(guard).unwrap();
                }
                break;
            }
        }
        self.n_ready.store(i + 1, Ordering::Release);
        drop(self.lock.lock().unwrap());
        self.ready_cv.notify_all();
        i
    }

    pub fn push(&self, value: T) -> usize {
        self.push_with(|_| value)
    }

    /// Published length, with acquire semantics; monotonically
    /// nondecreasing across calls.
    pub fn snapshot_len(&self) -> usize {
        self.n_ready.load(Ordering::Acquire)
    }

    /// Reference into the published prefix.
    pub fn get(&self, i: usize) -> &T {
        assert!(i < self.snapshot_len(), "read past the published prefix");
        unsafe { (*(*self.slot(i)).get()).assume_init_ref() }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        (0..self.snapshot_len()).map(move |i| self.get(i))
    }

    /// Consumes the vector after quiescence; slots reserved but never
    /// published are leaked (they cannot be distinguished from
    /// half-written ones).
    pub fn into_vec(mut self) -> Vec<T> {
        let n = *self.n_ready.get_mut();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let slot = self.slot(i);
            unsafe {
                out.push((*slot).get().read().assume_init());
            }
        }
        *self.n_ready.get_mut() = 0;
        *self.n_fill.get_mut() = 0;
        out
    }
}

impl<T> Default for ConcurrentVec<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Drop for ConcurrentVec<T> {
    fn drop(&mut self) {
        let n = *self.n_ready.get_mut();
        for i in 0..n {
            let slot = self.slot(i);
            unsafe {
                (*slot).get_mut().assume_init_drop();
            }
        }
        for s in 0..NSEGS {
            let p = *self.segments[s].get_mut();
            if !p.is_null() {
                unsafe {
                    drop(Box::from_raw(ptr::slice_from_raw_parts_mut(p, seg_len(s))));
                }
            }
        }
    }
}

/// The concurrent array of published regions; region ids equal slot
/// indices.
pub type RegionStore = ConcurrentVec<Region>;

/// Appends a region, assigning its id from the reserved slot.
pub fn push_region(store: &RegionStore, mut region: Region) -> usize {
    store.push_with(|i| {
        region.id = i;
        region
    })
}

/// Lifecycle of a claimed basis key. Keys are never removed; only the
/// state changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BasisState {
    /// A task owns the key and is computing its region.
    Pending,
    /// The region for this basis is in the store.
    Published,
    /// The owner's float basis did not verify; the key is up for
    /// adoption.
    Abandoned,
}

/// Outcome of claiming a basis key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    /// The key was absent or abandoned; the caller now owns it.
    Owned,
    /// Another task is computing this basis right now.
    Busy,
    /// The region for this basis has been published.
    Covered,
}

/// Grow-only table of basis keys (the ordered basic-index sequences)
/// that have been or are being processed.
#[derive(Default)]
pub struct BasisTable {
    map: DashMap<Vec<usize>, BasisState>,
}

impl BasisTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` iff the basis was already present; otherwise
    /// inserts it and returns `false`. Atomic: among concurrent calls
    /// with one key, exactly one gets `false`.
    pub fn test_and_insert(&self, basis: &Basis) -> bool {
        self.claim(basis) != Claim::Owned
    }

    /// Insert-or-adopt under the shard lock; linearizable.
    pub fn claim(&self, basis: &Basis) -> Claim {
        match self.map.entry(basis.indices().to_vec()) {
            Entry::Vacant(slot) => {
                slot.insert(BasisState::Pending);
                Claim::Owned
            }
            Entry::Occupied(mut slot) => match *slot.get() {
                BasisState::Pending => Claim::Busy,
                BasisState::Published => Claim::Covered,
                BasisState::Abandoned => {
                    *slot.get_mut() = BasisState::Pending;
                    Claim::Owned
                }
            },
        }
    }

    /// Claim that waits out a pending owner. Callers must not own any
    /// key while waiting: every pending key then belongs to a task that
    /// is actively computing, so the wait is finite and cannot cycle.
    pub fn claim_blocking(&self, basis: &Basis) -> Claim {
        let mut spins = 0u32;
        loop {
            match self.claim(basis) {
                Claim::Busy => {
                    if spins < 64 {
                        std::hint::spin_loop();
                        spins += 1;
                    } else {
                        std::thread::yield_now();
                    }
                }
                done => return done,
            }
        }
    }

    pub fn mark_published(&self, basis: &Basis) {
        self.map
            .insert(basis.indices().to_vec(), BasisState::Published);
    }

    pub fn mark_abandoned(&self, basis: &Basis) {
        self.map
            .insert(basis.indices().to_vec(), BasisState::Abandoned);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

// ---------------------------------------------------------------------------
// schedulers

/// Round-based scheduler: run every task of the current set in parallel,
/// barrier, gather the spawned tasks as the next set.
pub fn solve_static(
    plp: &ParametricLP,
    d0: RatVec,
    threads: usize,
    config: &SolveConfig,
) -> Result<PlpSolution, PlpError> {
    assert!(threads >= 1);
    let start = Instant::now();
    let state = SharedState::new(plp, config.clone());
    let mut current = vec![Task::seed(d0, config.retry_budget)];
    state.stats().task_spawned(1);
    let mut first_err: Option<PlpError> = None;
    while !current.is_empty() && first_err.is_none() {
        let workers = threads.min(current.len());
        let mut chunks: Vec<Vec<Task>> = (0..workers).map(|_| Vec::new()).collect();
        for (i, task) in current.drain(..).enumerate() {
            chunks[i % workers].push(task);
        }
        let results: Vec<Result<Vec<Task>, PlpError>> = std::thread::scope(|scope| {
            let state = &state;
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        let mut spawned = Vec::new();
                        for task in chunk {
                            spawned.extend(run_task(task, state)?);
                        }
                        Ok(spawned)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for result in results {
            match result {
                Ok(tasks) => {
                    state.stats().task_spawned(tasks.len() as u64);
                    current.extend(tasks);
                }
                Err(e) => first_err = Some(first_err.take().unwrap_or(e)),
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(state.finish("static", threads, start)),
    }
}

fn run_task(task: Task, state: &SharedState) -> Result<Vec<Task>, PlpError> {
    catch_unwind(AssertUnwindSafe(|| process_task(task, state)))
        .unwrap_or_else(|p| Err(PlpError::Internal(panic_message(&p))))
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_string()
    }
}

struct Pool {
    queue: Mutex<VecDeque<Task>>,
    task_cv: Condvar,
    /// Tasks pushed but not yet fully processed (children registered).
    pending: AtomicUsize,
    stop: AtomicBool,
    error: Mutex<Option<PlpError>>,
}

/// Shared-pool scheduler: workers pop tasks and push spawned tasks
/// immediately; quiescence is an in-flight count reaching zero.
pub fn solve_dynamic(
    plp: &ParametricLP,
    d0: RatVec,
    threads: usize,
    config: &SolveConfig,
) -> Result<PlpSolution, PlpError> {
    assert!(threads >= 1);
    let start = Instant::now();
    let state = SharedState::new(plp, config.clone());
    let pool = Pool {
        queue: Mutex::new(VecDeque::new()),
        task_cv: Condvar::new(),
        pending: AtomicUsize::new(1),
        stop: AtomicBool::new(false),
        error: Mutex::new(None),
    };
    pool.queue.lock().unwrap().push_back(Task::seed(d0, config.retry_budget));
    state.stats().task_spawned(1);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| dynamic_worker(&pool, &state));
        }
    });
    let err = pool.error.lock().unwrap().take();
    match err {
        Some(e) => Err(e),
        None => Ok(state.finish("dynamic", threads, start)),
    }
}

fn dynamic_worker(pool: &Pool, state: &SharedState) {
    loop {
        let task = {
            let mut queue = pool.queue.lock().unwrap();
            let mut idle = false;
            loop {
                if pool.stop.load(Ordering::Acquire) {
                    return;
                }
                // busy workers drain their own recent work LIFO; workers
                // returning from idle take the oldest task instead
                let popped = if idle {
                    queue.pop_front()
                } else {
                    queue.pop_back()
                };
                if let Some(t) = popped {
                    break t;
                }
                if pool.pending.load(Ordering::Acquire) == 0 {
                    return;
                }
                queue = pool.task_cv.wait(queue).unwrap();
                idle = true;
            }
        };
        match run_task(task, state) {
            Ok(spawned) => {
                if !spawned.is_empty() {
                    state.stats().task_spawned(spawned.len() as u64);
                    pool.pending.fetch_add(spawned.len(), Ordering::AcqRel);
                    let mut queue = pool.queue.lock().unwrap();
                    queue.extend(spawned);
                    drop(queue);
                    pool.task_cv.notify_all();
                }
                if pool.pending.fetch_sub(1, Ordering::AcqRel) == 1 {
                    // quiesced: wake idle workers so they can exit
                    drop(pool.queue.lock().unwrap());
                    pool.task_cv.notify_all();
                }
            }
            Err(e) => {
                let mut slot = pool.error.lock().unwrap();
                slot.get_or_insert(e);
                drop(slot);
                pool.stop.store(true, Ordering::Release);
                drop(pool.queue.lock().unwrap());
                pool.task_cv.notify_all();
                return;
            }
        }
    }
}
