//! Identical results across worker counts and devices; migration accounting.

mod common;

use common::catalog::{outputs, policies, vol};
use vkt_core::ops::{self, Axis};
use vkt_core::render::{self, Camera, RenderState};
use vkt_core::{with_execution_policy, Box3i, DataFormat, Device, ExecutionPolicy, LookupTable, Vec3};

#[test]
fn every_operation_is_bit_identical_across_policies() {
    let results: Vec<_> = policies().into_iter().map(|p| with_execution_policy(p, outputs)).collect();
    for (p, r) in policies().iter().zip(&results).skip(1) {
        assert_eq!(r.len(), results[0].len());
        for ((name, a), (_, b)) in results[0].iter().zip(r) {
            assert!(a == b, "{name} differs under {p:?}");
        }
    }
}

#[test]
fn migration_count_tracks_memory_space_changes() {
    let cpu = ExecutionPolicy::serial();
    let cpu8 = ExecutionPolicy::default().with_workers(8);
    let dev = ExecutionPolicy::serial().with_device(Device::EmulatedDevice);
    let mut v = with_execution_policy(cpu, || vol(4, DataFormat::UInt8));
    assert_eq!(v.buffer().migration_count(), 0);
    with_execution_policy(cpu8, || ops::flip(&mut v, Axis::X)).unwrap();
    assert_eq!(v.buffer().migration_count(), 0, "worker count alone is not a memory space");
    with_execution_policy(dev, || ops::flip(&mut v, Axis::X)).unwrap();
    assert_eq!(v.buffer().migration_count(), 1);
    assert_eq!(v.residency(), Device::EmulatedDevice);
    with_execution_policy(dev, || ops::compute_aggregates(&v)).unwrap();
    assert_eq!(v.buffer().migration_count(), 1);
    with_execution_policy(cpu8, || ops::compute_aggregates(&v)).unwrap();
    assert_eq!(v.buffer().migration_count(), 2);
    assert_eq!(v.residency(), Device::Cpu);

    // rendering migrates the volume once after a switch
    let lut = LookupTable::from_entries(&[[1.0, 1.0, 1.0, 0.5]]).unwrap();
    let cam = Camera::new(Vec3::new(10.0, 8.0, 60.0), Vec3::new(11.5, 8.5, 9.5), Vec3::new(0.0, 1.0, 0.0), 30.0, 8, 8).unwrap();
    let state = RenderState { lut: lut.handle(), ..RenderState::default() };
    with_execution_policy(dev, || render::render(&v, &cam, &state)).unwrap();
    assert_eq!(v.buffer().migration_count(), 3);
    with_execution_policy(dev, || render::render(&v, &cam, &state)).unwrap();
    assert_eq!(v.buffer().migration_count(), 3);
    assert_eq!(lut.data().buffer().residency(), Device::EmulatedDevice);
}

#[test]
fn outputs_are_allocated_in_the_current_space() {
    let v = vol(5, DataFormat::UInt16);
    let dev = ExecutionPolicy::default().with_device(Device::EmulatedDevice);
    let c = with_execution_policy(dev, || ops::crop(&v, Box3i::from_coords([0, 0, 0], [4, 4, 4]))).unwrap();
    assert_eq!(c.residency(), Device::EmulatedDevice);
    assert_eq!(v.residency(), Device::EmulatedDevice);
}
