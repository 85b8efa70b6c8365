//! File-backed persistence, the HTTP service and the terminal session for the coach.

pub mod service;
pub mod session;
pub mod store;

pub use service::{router, AppState, ServiceConfig};
pub use store::FileStore;
