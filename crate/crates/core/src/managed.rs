//! Deferred, policy-driven residency for byte buffers and the handle registry.
//!
//! A [`ManagedBuffer`] remembers the [`ExecutionPolicy`] it was last accessed
//! under. [`ManagedBuffer::migrate`] compares that snapshot against the
//! calling thread's policy and moves the bytes into the other memory space
//! only when the device differs.

use std::any::Any;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock, Weak};

use parking_lot::{MappedRwLockReadGuard, MappedRwLockWriteGuard, Mutex, RwLock, RwLockReadGuard, RwLockWriteGuard};

use crate::error::{Result, VktError};
use crate::exec::{get_execution_policy, Device, ExecutionPolicy};

/// Integral identifier of a managed object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResourceHandle(pub u64);

impl ResourceHandle {
    pub const INVALID: ResourceHandle = ResourceHandle(u64::MAX);

    pub fn is_valid(self) -> bool {
        self != Self::INVALID
    }
}

impl Default for ResourceHandle {
    fn default() -> Self {
        Self::INVALID
    }
}

fn next_handle() -> ResourceHandle {
    static NEXT: AtomicU64 = AtomicU64::new(0);
    ResourceHandle(NEXT.fetch_add(1, Ordering::Relaxed))
}

// Emulated device memory accounting.
static DEVICE_CAPACITY: AtomicUsize = AtomicUsize::new(usize::MAX);
static DEVICE_IN_USE: AtomicUsize = AtomicUsize::new(0);

/// Caps the emulated device allocation space (bytes). Defaults to unbounded.
pub fn set_emulated_device_capacity(bytes: usize) {
    DEVICE_CAPACITY.store(bytes, Ordering::SeqCst);
}

pub fn emulated_device_bytes_in_use() -> usize {
    DEVICE_IN_USE.load(Ordering::SeqCst)
}

fn reserve(space: Device, n: usize) -> Result<()> {
    if space != Device::EmulatedDevice {
        return Ok(());
    }
    let cap = DEVICE_CAPACITY.load(Ordering::SeqCst);
    DEVICE_IN_USE
        .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |used| {
            used.checked_add(n).filter(|&t| t <= cap)
        })
        .map(|_| ())
        .map_err(|used| VktError::AllocationFailure {
            requested: n,
            available: cap.saturating_sub(used),
        })
}

fn release(space: Device, n: usize) {
    if space == Device::EmulatedDevice {
        DEVICE_IN_USE.fetch_sub(n, Ordering::SeqCst);
    }
}

#[derive(Debug)]
struct BufferState {
    bytes: Vec<u8>,
    residency: Device,
    last_policy: ExecutionPolicy,
    migration_count: u64,
}

/// Byte storage with deferred residency management.
#[derive(Debug)]
pub struct ManagedBuffer {
    handle: ResourceHandle,
    state: RwLock<BufferState>,
}

impl ManagedBuffer {
    /// Zero-filled buffer allocated in the current policy's space.
    pub fn new(len: usize) -> Result<Self> {
        Self::from_vec(vec![0; len])
    }

    pub fn from_vec(bytes: Vec<u8>) -> Result<Self> {
        let policy = get_execution_policy();
        reserve(policy.device, bytes.len())?;
        Ok(Self {
            handle: next_handle(),
            state: RwLock::new(BufferState {
                bytes,
                residency: policy.device,
                last_policy: policy,
                migration_count: 0,
            }),
        })
    }

    pub fn handle(&self) -> ResourceHandle {
        self.handle
    }

    pub fn len(&self) -> usize {
        self.state.read().bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn residency(&self) -> Device {
        self.state.read().residency
    }

    pub fn last_policy(&self) -> ExecutionPolicy {
        self.state.read().last_policy
    }

    pub fn migration_count(&self) -> u64 {
        self.state.read().migration_count
    }

    /// Moves the bytes into the current policy's memory space if they live elsewhere.
    pub fn migrate(&self) -> Result<()> {
        let policy = get_execution_policy();
        let mut st = self.state.write();
        if st.residency != policy.device {
            let n = st.bytes.len();
            reserve(policy.device, n)?;
            // fresh allocation in the destination space, then drop the source
            let moved = st.bytes.as_slice().to_vec();
            let old = std::mem::replace(&mut st.bytes, moved);
            release(st.residency, old.len());
            drop(old);
            st.residency = policy.device;
            st.migration_count += 1;
        }
        st.last_policy = policy;
        Ok(())
    }

    pub fn bytes(&self) -> MappedRwLockReadGuard<'_, [u8]> {
        RwLockReadGuard::map(self.state.read(), |s| s.bytes.as_slice())
    }

    /// Write access through a shared reference (used by shared objects such as LUTs).
    pub fn bytes_write(&self) -> MappedRwLockWriteGuard<'_, [u8]> {
        RwLockWriteGuard::map(self.state.write(), |s| s.bytes.as_mut_slice())
    }

    pub fn bytes_mut(&mut self) -> &mut [u8] {
        self.state.get_mut().bytes.as_mut_slice()
    }

    /// Copy under a fresh handle, allocated in the same space as the source.
    pub fn try_clone(&self) -> Result<Self> {
        let st = self.state.read();
        reserve(st.residency, st.bytes.len())?;
        Ok(Self {
            handle: next_handle(),
            state: RwLock::new(BufferState {
                bytes: st.bytes.clone(),
                residency: st.residency,
                last_policy: st.last_policy,
                migration_count: 0,
            }),
        })
    }
}

impl Drop for ManagedBuffer {
    fn drop(&mut self) {
        let st = self.state.get_mut();
        release(st.residency, st.bytes.len());
    }
}

type Entry = Weak<dyn Any + Send + Sync>;

fn registry() -> &'static Mutex<HashMap<ResourceHandle, Entry>> {
    static REG: OnceLock<Mutex<HashMap<ResourceHandle, Entry>>> = OnceLock::new();
    REG.get_or_init(Default::default)
}

/// Makes `obj` resolvable through `handle` for as long as the registrant keeps it alive.
pub fn register<T: Any + Send + Sync>(handle: ResourceHandle, obj: &Arc<T>) {
    let erased: Arc<dyn Any + Send + Sync> = obj.clone();
    registry().lock().insert(handle, Arc::downgrade(&erased));
}

pub fn unregister(handle: ResourceHandle) {
    registry().lock().remove(&handle);
}

/// Looks up a live registered object of type `T`.
pub fn resolve<T: Any + Send + Sync>(handle: ResourceHandle) -> Result<Arc<T>> {
    let entry = registry().lock().get(&handle).and_then(Weak::upgrade);
    entry
        .and_then(|a| a.downcast::<T>().ok())
        .ok_or(VktError::UnresolvedHandle(handle.0))
}
