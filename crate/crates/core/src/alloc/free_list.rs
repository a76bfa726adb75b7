use std::ptr::NonNull;

#[cfg(feature = "shadow-checks")]
use std::collections::HashSet;

/// LIFO stack of returned blocks.
///
/// With the `shadow-checks` feature a set of currently-freed addresses is
/// kept alongside, and pushing an address that is already free panics.
#[derive(Debug, Default)]
pub(crate) struct FreeList {
    stack: Vec<NonNull<u8>>,
    #[cfg(feature = "shadow-checks")]
    shadow: HashSet<usize>,
}

unsafe impl Send for FreeList {}

impl FreeList {
    #[inline]
    pub fn push(&mut self, ptr: NonNull<u8>) {
        #[cfg(feature = "shadow-checks")]
        assert!(
            self.shadow.insert(ptr.as_ptr() as usize),
            "double free of block {ptr:p}"
        );
        self.stack.push(ptr);
    }

    #[inline]
    pub fn pop(&mut self) -> Option<NonNull<u8>> {
        let ptr = self.stack.pop()?;
        #[cfg(feature = "shadow-checks")]
        self.shadow.remove(&(ptr.as_ptr() as usize));
        Some(ptr)
    }

    pub fn clear(&mut self) {
        self.stack.clear();
        #[cfg(feature = "shadow-checks")]
        self.shadow.clear();
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.stack.len()
    }
}
