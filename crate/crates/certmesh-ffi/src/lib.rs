//! C ABI surface; filled in once the core pipeline is complete.
