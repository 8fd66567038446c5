use crate::amr::HierarchicalVolume;
use crate::scalar::Scalar;
use crate::volume::StructuredVolume;

/// Either volume topology, owned.
#[derive(Debug)]
pub enum Volume<T: Scalar = f64> {
    Structured(StructuredVolume<T>),
    Hierarchical(HierarchicalVolume<T>),
}

/// Either volume topology, borrowed.
#[derive(Debug, Clone, Copy)]
pub enum VolumeRef<'a, T: Scalar = f64> {
    Structured(&'a StructuredVolume<T>),
    Hierarchical(&'a HierarchicalVolume<T>),
}

/// Either volume topology, mutably borrowed.
#[derive(Debug)]
pub enum VolumeMut<'a, T: Scalar = f64> {
    Structured(&'a mut StructuredVolume<T>),
    Hierarchical(&'a mut HierarchicalVolume<T>),
}

impl<T: Scalar> Volume<T> {
    pub fn as_ref(&self) -> VolumeRef<'_, T> {
        match self {
            Volume::Structured(v) => VolumeRef::Structured(v),
            Volume::Hierarchical(h) => VolumeRef::Hierarchical(h),
        }
    }

    pub fn as_mut(&mut self) -> VolumeMut<'_, T> {
        match self {
            Volume::Structured(v) => VolumeMut::Structured(v),
            Volume::Hierarchical(h) => VolumeMut::Hierarchical(h),
        }
    }

    pub fn structured(self) -> Option<StructuredVolume<T>> {
        match self {
            Volume::Structured(v) => Some(v),
            Volume::Hierarchical(_) => None,
        }
    }

    pub fn hierarchical(self) -> Option<HierarchicalVolume<T>> {
        match self {
            Volume::Hierarchical(h) => Some(h),
            Volume::Structured(_) => None,
        }
    }
}

impl<'a, T: Scalar> VolumeRef<'a, T> {
    pub fn migrate(&self) -> crate::Result<()> {
        match self {
            VolumeRef::Structured(v) => v.migrate(),
            VolumeRef::Hierarchical(h) => h.migrate(),
        }
    }
}

impl<'a, T: Scalar> VolumeMut<'a, T> {
    pub fn reborrow(&self) -> VolumeRef<'_, T> {
        match self {
            VolumeMut::Structured(v) => VolumeRef::Structured(v),
            VolumeMut::Hierarchical(h) => VolumeRef::Hierarchical(h),
        }
    }
}

impl<T: Scalar> From<StructuredVolume<T>> for Volume<T> {
    fn from(v: StructuredVolume<T>) -> Self {
        Volume::Structured(v)
    }
}

impl<T: Scalar> From<HierarchicalVolume<T>> for Volume<T> {
    fn from(h: HierarchicalVolume<T>) -> Self {
        Volume::Hierarchical(h)
    }
}

impl<'a, T: Scalar> From<&'a StructuredVolume<T>> for VolumeRef<'a, T> {
    fn from(v: &'a StructuredVolume<T>) -> Self {
        VolumeRef::Structured(v)
    }
}

impl<'a, T: Scalar> From<&'a HierarchicalVolume<T>> for VolumeRef<'a, T> {
    fn from(h: &'a HierarchicalVolume<T>) -> Self {
        VolumeRef::Hierarchical(h)
    }
}

impl<'a, T: Scalar> From<&'a Volume<T>> for VolumeRef<'a, T> {
    fn from(v: &'a Volume<T>) -> Self {
        v.as_ref()
    }
}

impl<'a, T: Scalar> From<&'a mut StructuredVolume<T>> for VolumeMut<'a, T> {
    fn from(v: &'a mut StructuredVolume<T>) -> Self {
        VolumeMut::Structured(v)
    }
}

impl<'a, T: Scalar> From<&'a mut HierarchicalVolume<T>> for VolumeMut<'a, T> {
    fn from(h: &'a mut HierarchicalVolume<T>) -> Self {
        VolumeMut::Hierarchical(h)
    }
}

impl<'a, T: Scalar> From<&'a mut Volume<T>> for VolumeMut<'a, T> {
    fn from(v: &'a mut Volume<T>) -> Self {
        v.as_mut()
    }
}
