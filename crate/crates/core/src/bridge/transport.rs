//! Endpoint configuration and line-oriented transports.
//!
//! Both bridge protocols speak LF-terminated lines over either a child
//! process's stdio or a TCP stream. A background thread owns the read
//! side; commands enforce their response timeout by waiting on its
//! channel, and a timed-out connection is killed rather than reused, so
//! no reply can leak into a later exchange.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("connect failed: {0}")]
    ConnectFailed(String),
    #[error("engine did not answer the handshake in time")]
    HandshakeTimeout,
    #[error("protocol error: {0}")]
    ProtocolError(String),
    #[error("engine error: {0}")]
    EngineError(String),
    #[error("response timed out")]
    ResponseTimeout,
    #[error("malformed response: {message} (raw: {raw:?})")]
    MalformedResponse { message: String, raw: String },
    #[error("response names an unknown or illegal action: {0:?}")]
    UnknownActionInResponse(String),
    #[error("invalid endpoint: {0}")]
    InvalidEndpoint(String),
    #[error("transport I/O error: {0}")]
    Io(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "transport", rename_all = "snake_case")]
pub enum TransportConfig {
    /// Spawn a child process and talk over its stdio.
    Subprocess { command: Vec<String> },
    /// Connect to a listening socket.
    Tcp { address: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointConfig {
    #[serde(flatten)]
    pub transport: TransportConfig,
    #[serde(default = "default_connect_timeout")]
    pub connect_timeout_ms: u64,
    #[serde(default = "default_response_timeout")]
    pub response_timeout_ms: u64,
}

fn default_connect_timeout() -> u64 {
    3_000
}

fn default_response_timeout() -> u64 {
    10_000
}

impl EndpointConfig {
    pub fn tcp(address: impl Into<String>) -> EndpointConfig {
        EndpointConfig {
            transport: TransportConfig::Tcp { address: address.into() },
            connect_timeout_ms: default_connect_timeout(),
            response_timeout_ms: default_response_timeout(),
        }
    }

    pub fn subprocess(command: Vec<String>) -> EndpointConfig {
        EndpointConfig {
            transport: TransportConfig::Subprocess { command },
            connect_timeout_ms: default_connect_timeout(),
            response_timeout_ms: default_response_timeout(),
        }
    }

    pub fn validate(&self) -> Result<(), BridgeError> {
        if self.connect_timeout_ms == 0 || self.response_timeout_ms == 0 {
            return Err(BridgeError::InvalidEndpoint("timeouts must be positive".into()));
        }
        if let TransportConfig::Subprocess { command } = &self.transport {
            if command.is_empty() {
                return Err(BridgeError::InvalidEndpoint("empty command line".into()));
            }
        }
        Ok(())
    }

    pub fn response_timeout(&self) -> Duration {
        Duration::from_millis(self.response_timeout_ms)
    }
}

/// A connected line transport. Dropping it kills any child process.
pub(crate) struct LineIo {
    writer: Box<dyn Write + Send>,
    rx: mpsc::Receiver<std::io::Result<String>>,
    child: Option<Child>,
}

impl LineIo {
    pub fn connect(cfg: &EndpointConfig) -> Result<LineIo, BridgeError> {
        cfg.validate()?;
        match &cfg.transport {
            TransportConfig::Tcp { address } => {
                let addr = address
                    .to_socket_addrs()
                    .map_err(|e| BridgeError::ConnectFailed(format!("{address}: {e}")))?
                    .next()
                    .ok_or_else(|| {
                        BridgeError::ConnectFailed(format!("{address}: no usable address"))
                    })?;
                let stream =
                    TcpStream::connect_timeout(&addr, Duration::from_millis(cfg.connect_timeout_ms))
                        .map_err(|e| BridgeError::ConnectFailed(format!("{address}: {e}")))?;
                let reader = stream
                    .try_clone()
                    .map_err(|e| BridgeError::ConnectFailed(e.to_string()))?;
                Ok(LineIo::start(Box::new(stream), Box::new(reader), None))
            }
            TransportConfig::Subprocess { command } => {
                let mut child = Command::new(&command[0])
                    .args(&command[1..])
                    .stdin(Stdio::piped())
                    .stdout(Stdio::piped())
                    .stderr(Stdio::null())
                    .spawn()
                    .map_err(|e| BridgeError::ConnectFailed(format!("{}: {e}", command[0])))?;
                let stdin = child.stdin.take().expect("piped stdin");
                let stdout = child.stdout.take().expect("piped stdout");
                Ok(LineIo::start(Box::new(stdin), Box::new(stdout), Some(child)))
            }
        }
    }

    fn start(
        writer: Box<dyn Write + Send>,
        reader: Box<dyn Read + Send>,
        child: Option<Child>,
    ) -> LineIo {
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let mut reader = BufReader::new(reader);
            loop {
                let mut line = String::new();
                match reader.read_line(&mut line) {
                    Ok(0) => break,
                    Ok(_) => {
                        while line.ends_with('\n') || line.ends_with('\r') {
                            line.pop();
                        }
                        if tx.send(Ok(line)).is_err() {
                            break;
                        }
                    }
                    Err(e) => {
                        let _ = tx.send(Err(e));
                        break;
                    }
                }
            }
        });
        LineIo { writer, rx, child }
    }

    pub fn send_line(&mut self, line: &str) -> Result<(), BridgeError> {
        debug_assert!(!line.contains('\n'));
        self.writer
            .write_all(line.as_bytes())
            .and_then(|_| self.writer.write_all(b"\n"))
            .and_then(|_| self.writer.flush())
            .map_err(|e| BridgeError::Io(e.to_string()))
    }

    pub fn recv_line(&mut self, timeout: Duration) -> Result<String, BridgeError> {
        match self.rx.recv_timeout(timeout) {
            Ok(Ok(line)) => Ok(line),
            Ok(Err(e)) => Err(BridgeError::Io(e.to_string())),
            Err(mpsc::RecvTimeoutError::Timeout) => Err(BridgeError::ResponseTimeout),
            Err(mpsc::RecvTimeoutError::Disconnected) => {
                Err(BridgeError::Io("connection closed".into()))
            }
        }
    }
}

impl Drop for LineIo {
    fn drop(&mut self) {
        if let Some(child) = &mut self.child {
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}
