//! TCP front end: one JSON request per line in, one response per line out.

mod config;
mod procedure;
mod service;

use std::future::Future;
use std::io;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;

use tokio::io::{AsyncBufRead, AsyncBufReadExt, AsyncWriteExt, BufReader};
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::watch;
use tokio::task::JoinSet;

pub use config::{ConfigError, ServerConfig, BUILTIN_REASONER, DEFAULT_LISTEN, ENV_PREFIX};
pub use procedure::{
    Macro, Procedure, ProcedureError, ProcedureRegistry, Template, ABSTRACT_CLASS,
};
pub use service::Service;

use crate::error::Error;
use crate::protocol::{encode_response, CommandResponse};
use crate::registry::ReferenceMap;

/// Longest accepted request line, newline excluded.
pub const MAX_LINE: usize = 1 << 20;

/// Client name used for preloading references at startup.
pub const PRELOAD_CLIENT: &str = "armordb";

#[derive(Debug, thiserror::Error)]
pub enum StartError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("procedures: {0}")]
    Procedures(String),
    #[error("preloading `{reference}`: {error}")]
    Preload { reference: String, error: Error },
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: io::Error },
}

impl StartError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            StartError::Bind { .. } => 2,
            _ => 1,
        }
    }
}

/// Builds the service a config describes: procedures and preloads.
pub fn build_service(config: &ServerConfig) -> Result<Service, StartError> {
    config.validate()?;
    let procedures = match &config.procedures {
        Some(p) => ProcedureRegistry::load(p).map_err(StartError::Procedures)?,
        None => ProcedureRegistry::default(),
    };
    let registry = ReferenceMap::new(config.registry_config());
    for (name, path) in &config.preload {
        let preload = |error| StartError::Preload {
            reference: name.clone(),
            error,
        };
        registry.create(name, None).map_err(preload)?;
        registry.mount(PRELOAD_CLIENT, name).map_err(preload)?;
        registry.load(PRELOAD_CLIENT, name, path).map_err(preload)?;
        registry.unmount(PRELOAD_CLIENT, name).map_err(preload)?;
    }
    Ok(Service::new(registry, procedures, config.base_dir.clone()))
}

enum Line {
    Eof,
    Complete,
    TooLong,
}

/// Reads one line into `buf` without the terminator. Overlong lines are
/// consumed up to their newline and reported as `TooLong`.
async fn read_line<R: AsyncBufRead + Unpin>(
    r: &mut R,
    buf: &mut Vec<u8>,
    cap: usize,
) -> io::Result<Line> {
    buf.clear();
    let mut overflow = false;
    let mut seen = false;
    loop {
        let chunk = r.fill_buf().await?;
        if chunk.is_empty() {
            return Ok(if !seen {
                Line::Eof
            } else if overflow {
                Line::TooLong
            } else {
                Line::Complete
            });
        }
        seen = true;
        let (part, done) = match chunk.iter().position(|&b| b == b'\n') {
            Some(i) => (&chunk[..i], Some(i + 1)),
            None => (chunk, None),
        };
        if !overflow && buf.len() + part.len() <= cap {
            buf.extend_from_slice(part);
        } else {
            overflow = true;
            buf.clear();
        }
        let used = done.unwrap_or(chunk.len());
        r.consume(used);
        if done.is_some() {
            return Ok(if overflow {
                Line::TooLong
            } else {
                Line::Complete
            });
        }
    }
}

async fn serve_connection(
    stream: TcpStream,
    service: Arc<Service>,
    mut shutdown: watch::Receiver<bool>,
) {
    let peer = stream.peer_addr().ok();
    let (read, mut write) = stream.into_split();
    let mut reader = BufReader::new(read);
    let mut buf = Vec::new();
    loop {
        let line = tokio::select! {
            biased;
            _ = shutdown.wait_for(|stop| *stop) => break,
            line = read_line(&mut reader, &mut buf, MAX_LINE) => line,
        };
        let response = match line {
            Ok(Line::Eof) => break,
            Err(e) => {
                log::debug!("{peer:?}: {e}");
                break;
            }
            Ok(Line::TooLong) => {
                let e = Error::Malformed(format!("request line longer than {MAX_LINE} bytes"));
                CommandResponse::error(&e, false, 0)
            }
            Ok(Line::Complete) => {
                let service = service.clone();
                let request = std::mem::take(&mut buf);
                match tokio::task::spawn_blocking(move || service.handle_line(&request)).await {
                    Ok(r) => r,
                    Err(e) => {
                        log::error!("request handler failed: {e}");
                        CommandResponse::error(
                            &Error::Internal("request handler failed".into()),
                            false,
                            0,
                        )
                    }
                }
            }
        };
        let mut out = encode_response(&response).into_bytes();
        out.push(b'\n');
        if let Err(e) = write.write_all(&out).await {
            log::debug!("{peer:?}: {e}");
            break;
        }
    }
}

pub struct Server {
    listener: TcpListener,
    service: Arc<Service>,
}

impl Server {
    pub async fn bind(config: &ServerConfig) -> Result<Server, StartError> {
        let service = build_service(config)?;
        let listener =
            TcpListener::bind(config.listen)
                .await
                .map_err(|source| StartError::Bind {
                    addr: config.listen,
                    source,
                })?;
        Ok(Server {
            listener,
            service: Arc::new(service),
        })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    pub fn service(&self) -> &Arc<Service> {
        &self.service
    }

    /// Accepts connections until `shutdown` resolves. Requests already being
    /// handled are answered before their connections close.
    pub async fn run_until(self, shutdown: impl Future<Output = ()>) {
        let (stop_tx, stop_rx) = watch::channel(false);
        let mut connections = JoinSet::new();
        tokio::pin!(shutdown);
        loop {
            tokio::select! {
                _ = &mut shutdown => break,
                accepted = self.listener.accept() => match accepted {
                    Ok((stream, peer)) => {
                        log::debug!("connection from {peer}");
                        let _ = stream.set_nodelay(true);
                        connections.spawn(serve_connection(stream, self.service.clone(), stop_rx.clone()));
                    }
                    Err(e) => log::warn!("accept: {e}"),
                },
                Some(_) = connections.join_next(), if !connections.is_empty() => {}
            }
        }
        drop(self.listener);
        let _ = stop_tx.send(true);
        while connections.join_next().await.is_some() {}
    }
}

/// A server running on its own runtime thread.
pub struct ServerHandle {
    addr: SocketAddr,
    stop: Option<tokio::sync::oneshot::Sender<()>>,
    thread: Option<std::thread::JoinHandle<()>>,
}

impl ServerHandle {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Stops accepting, lets in-flight requests finish and joins the thread.
    pub fn shutdown(mut self) {
        self.stop_and_join();
    }

    fn stop_and_join(&mut self) {
        if let Some(tx) = self.stop.take() {
            let _ = tx.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        self.stop_and_join();
    }
}

/// Starts a server in the background; use port 0 for an ephemeral port.
pub fn spawn(config: ServerConfig) -> Result<ServerHandle, StartError> {
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| StartError::Procedures(format!("runtime: {e}")))?;
    let server = runtime.block_on(Server::bind(&config))?;
    let addr = server.local_addr().map_err(|source| StartError::Bind {
        addr: config.listen,
        source,
    })?;
    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    let thread = std::thread::spawn(move || {
        runtime.block_on(server.run_until(async {
            let _ = rx.await;
        }));
    });
    Ok(ServerHandle {
        addr,
        stop: Some(tx),
        thread: Some(thread),
    })
}

async fn ctrl_c_or_term() {
    #[cfg(unix)]
    {
        use tokio::signal::unix::{signal, SignalKind};
        match signal(SignalKind::terminate()) {
            Ok(mut term) => {
                tokio::select! {
                    _ = tokio::signal::ctrl_c() => {}
                    _ = term.recv() => {}
                }
            }
            Err(_) => {
                let _ = tokio::signal::ctrl_c().await;
            }
        }
    }
    #[cfg(not(unix))]
    {
        let _ = tokio::signal::ctrl_c().await;
    }
}

/// Runs the daemon until SIGINT or SIGTERM and returns the exit status:
/// 0 after a clean shutdown, 1 for configuration errors, 2 when the listen
/// address cannot be bound.
pub fn launch(config_path: Option<&Path>) -> i32 {
    let mut config = match config_path {
        Some(p) => match ServerConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                log::error!("{e}");
                eprintln!("armordb: {e}");
                return 1;
            }
        },
        None => ServerConfig::default(),
    };
    if let Err(e) = config.apply_env(std::env::vars()) {
        eprintln!("armordb: {e}");
        return 1;
    }
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("armordb: runtime: {e}");
            return 1;
        }
    };
    runtime.block_on(async {
        let server = match Server::bind(&config).await {
            Ok(s) => s,
            Err(e) => {
                eprintln!("armordb: {e}");
                return e.exit_code();
            }
        };
        match server.local_addr() {
            Ok(addr) => eprintln!("armordb: listening on {addr}"),
            Err(e) => log::warn!("{e}"),
        }
        server.run_until(ctrl_c_or_term()).await;
        eprintln!("armordb: shut down");
        0
    })
}
