//! Per-thread execution policy and the worker pools algorithms run on.
//!
//! Every algorithm reads the calling thread's [`ExecutionPolicy`] once on entry
//! and runs its data-parallel loops inside the pool sized by `worker_count`.
//! Policies set on one thread are never observed by another.

use std::cell::Cell;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use parking_lot::Mutex;
use rayon::ThreadPool;

/// Memory/execution space of a managed object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Device {
    #[default]
    Cpu,
    /// Accelerator stand-in: a separately accounted allocation space that is
    /// driven by the same worker pool as the CPU.
    EmulatedDevice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExecutionPolicy {
    pub device: Device,
    /// 0 selects the machine's available parallelism.
    pub worker_count: usize,
    pub print_timings: bool,
    pub debug_messages: bool,
}

impl ExecutionPolicy {
    pub fn serial() -> Self {
        Self { worker_count: 1, ..Self::default() }
    }

    pub fn with_device(mut self, device: Device) -> Self {
        self.device = device;
        self
    }

    pub fn with_workers(mut self, n: usize) -> Self {
        self.worker_count = n;
        self
    }

    /// Worker count after resolving `0` to the machine default.
    pub fn effective_workers(&self) -> usize {
        if self.worker_count == 0 {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        } else {
            self.worker_count
        }
    }
}

thread_local! {
    static POLICY: Cell<ExecutionPolicy> = Cell::new(ExecutionPolicy::default());
}

pub fn set_execution_policy(policy: ExecutionPolicy) {
    POLICY.with(|p| p.set(policy));
}

pub fn get_execution_policy() -> ExecutionPolicy {
    POLICY.with(|p| p.get())
}

/// Runs `f` with `policy` installed on this thread, restoring the previous one afterwards.
pub fn with_execution_policy<R>(policy: ExecutionPolicy, f: impl FnOnce() -> R) -> R {
    struct Restore(ExecutionPolicy);
    impl Drop for Restore {
        fn drop(&mut self) {
            set_execution_policy(self.0);
        }
    }
    let _restore = Restore(get_execution_policy());
    set_execution_policy(policy);
    f()
}

fn pool(workers: usize) -> Arc<ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock();
    pools
        .entry(workers)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(move |i| format!("vkt-worker-{workers}-{i}"))
                    .build()
                    .expect("worker pool construction"),
            )
        })
        .clone()
}

/// Runs an algorithm body inside the current policy's worker pool, reporting
/// its wall time to stderr when the policy asks for timings.
pub(crate) fn run<R: Send>(name: &str, f: impl FnOnce() -> R + Send) -> R {
    let policy = get_execution_policy();
    let workers = policy.effective_workers();
    if policy.debug_messages {
        eprintln!("[vkt] {name}: device={:?} workers={workers}", policy.device);
    }
    let start = Instant::now();
    let out = pool(workers).install(|| with_execution_policy(policy, f));
    if policy.print_timings {
        eprintln!("[vkt] {name}: {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    }
    out
}

/// Fixed block length for deterministic reductions. Independent of the worker
/// count so the reduction tree has the same shape on every policy.
pub(crate) const REDUCE_BLOCK: usize = 4096;

/// Combines partial results along a balanced binary tree over their index order.
pub(crate) fn pairwise<P: Clone>(parts: &[P], combine: &impl Fn(&P, &P) -> P) -> Option<P> {
    match parts.len() {
        0 => None,
        1 => Some(parts[0].clone()),
        n => {
            let (l, r) = parts.split_at(n / 2);
            let a = pairwise(l, combine)?;
            let b = pairwise(r, combine)?;
            Some(combine(&a, &b))
        }
    }
}
