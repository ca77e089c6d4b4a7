use std::fmt;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident($inner:ty)) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(pub $inner);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }

        impl From<$inner> for $name {
            fn from(v: $inner) -> Self {
                $name(v)
            }
        }
    };
}

id_type!(
    /// Network-wide router identifier. Routers of one AS occupy a contiguous block.
    RouterId(u32)
);
id_type!(
    /// Dense AS index. The original AS number is kept as the AS label.
    AsId(u32)
);
id_type!(
    /// Identifier in the global data-id space `[0, n_p)`.
    ObjectId(u64)
);
