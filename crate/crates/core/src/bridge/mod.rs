//! Clients for external decision engines: a GTP client for Go engines
//! and a line-delimited JSON policy protocol for Doudizhu oracles.

pub mod gtp;
pub mod policy;
pub mod transport;

pub use gtp::{parse_analysis, AnalysisRecord, GtpConfig, GtpSession, MoveCandidate};
pub use policy::{PolicyClient, PolicyRequest, PolicyResponse, POLICY_PROTOCOL_VERSION};
pub use transport::{BridgeError, EndpointConfig, TransportConfig};
