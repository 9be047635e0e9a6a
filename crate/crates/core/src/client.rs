//! Blocking client: a connection type, the script format and the runner
//! behind `armordb-cli`.
//!
//! A script holds one command per line in the text grammar
//! (`ADD OBJECTPROP INDIVIDUAL hasNorth LivingRoom Corridor`), `#`
//! comments, and `#expect` directives checked against the response of the
//! command above them. Keys are `code`, `names`, `consistent` and `applied`:
//!
//! ```text
//! MOUNT
//! #expect code=201
//! QUERY IND CLASS Room
//! #expect names=LivingRoom,Corridor consistent=true
//! ```

use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::path::PathBuf;

use crate::ofn::parse_entity_name;
use crate::protocol::{
    decode_response, parse_command_line, CommandLine, CommandResponse, WireRequest,
};

pub const DEFAULT_ADDR: &str = "127.0.0.1:7878";

pub mod exit {
    pub const OK: i32 = 0;
    /// A response reported an error that no `#expect code=` anticipated.
    pub const COMMAND_FAILED: i32 = 1;
    pub const CONNECTION: i32 = 3;
    pub const EXPECTATION: i32 = 4;
    pub const USAGE: i32 = 5;
}

pub struct Connection {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
}

impl Connection {
    pub fn connect(addr: impl ToSocketAddrs) -> io::Result<Self> {
        let stream = TcpStream::connect(addr)?;
        stream.set_nodelay(true)?;
        Ok(Connection {
            reader: BufReader::new(stream.try_clone()?),
            writer: stream,
        })
    }

    /// Sends one raw line and returns the response line without its newline.
    pub fn round_trip(&mut self, line: &str) -> io::Result<String> {
        let mut out = Vec::with_capacity(line.len() + 1);
        out.extend_from_slice(line.as_bytes());
        out.push(b'\n');
        self.writer.write_all(&out)?;
        let mut resp = String::new();
        if self.reader.read_line(&mut resp)? == 0 {
            return Err(io::Error::new(
                io::ErrorKind::UnexpectedEof,
                "server closed the connection",
            ));
        }
        while resp.ends_with('\n') || resp.ends_with('\r') {
            resp.pop();
        }
        Ok(resp)
    }

    /// Sends a request; returns the raw response line and its decoding.
    pub fn send(&mut self, req: &WireRequest) -> io::Result<(String, CommandResponse)> {
        let line = self.round_trip(&req.encode())?;
        let resp = decode_response(line.as_bytes()).map_err(|e| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("bad response `{line}`: {e}"),
            )
        })?;
        Ok((line, resp))
    }

    /// Parses `text` as one command line and sends it.
    pub fn command(
        &mut self,
        client: &str,
        reference: &str,
        text: &str,
    ) -> io::Result<CommandResponse> {
        let cmd = parse_command_line(text)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
        Ok(self.send(&cmd.into_wire(client, reference))?.1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectation {
    pub code: Option<u16>,
    pub names: Option<Vec<String>>,
    pub consistent: Option<bool>,
    pub applied: Option<bool>,
}

/// Bare names are compared as `ex:` names, and order does not matter.
fn normalize(names: &[String]) -> Vec<String> {
    let mut out: Vec<String> = names
        .iter()
        .map(|n| {
            parse_entity_name(n)
                .map(|e| e.to_string())
                .unwrap_or_else(|_| n.clone())
        })
        .collect();
    out.sort();
    out
}

fn flag(value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("bad flag `{value}`")),
    }
}

impl Expectation {
    fn parse(text: &str) -> Result<Self, String> {
        let mut e = Expectation::default();
        for item in text.split_whitespace() {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found `{item}`"))?;
            match key {
                "code" => e.code = Some(value.parse().map_err(|_| format!("bad code `{value}`"))?),
                "names" => {
                    e.names = Some(
                        value
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(str::to_owned)
                            .collect(),
                    )
                }
                "consistent" => e.consistent = Some(flag(value)?),
                "applied" => e.applied = Some(flag(value)?),
                _ => return Err(format!("unknown expectation `{key}`")),
            }
        }
        if e == Expectation::default() {
            return Err("empty #expect".into());
        }
        Ok(e)
    }

    /// Describes the first violated expectation.
    pub fn check(&self, resp: &CommandResponse) -> Result<(), String> {
        if let Some(code) = self.code {
            if resp.error_code.code() != code {
                return Err(format!("expected code {code}, got {}", resp.error_code));
            }
        }
        if let Some(names) = &self.names {
            let (want, got) = (normalize(names), normalize(&resp.queried_names));
            if want != got {
                return Err(format!(
                    "expected names [{}], got [{}]",
                    want.join(","),
                    got.join(",")
                ));
            }
        }
        if let Some(c) = self.consistent {
            if resp.consistent != c {
                return Err(format!("expected consistent={c}, got {}", resp.consistent));
            }
        }
        if let Some(a) = self.applied {
            if resp.applied != a {
                return Err(format!("expected applied={a}, got {}", resp.applied));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptLine {
    Command {
        line: usize,
        command: CommandLine,
    },
    Expect {
        line: usize,
        expectation: Expectation,
    },
}

pub fn parse_script(text: &str) -> Result<Vec<ScriptLine>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix("#expect") {
            if !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
                continue;
            }
            if !out.iter().any(|l| matches!(l, ScriptLine::Command { .. })) {
                return Err(format!("line {line}: #expect before any command"));
            }
            let expectation = Expectation::parse(rest).map_err(|e| format!("line {line}: {e}"))?;
            out.push(ScriptLine::Expect { line, expectation });
        } else if !t.starts_with('#') {
            let command = parse_command_line(t).map_err(|e| format!("line {line}: {e}"))?;
            out.push(ScriptLine::Command { line, command });
        }
    }
    Ok(out)
}

/// One-line human rendering of a response; a successful DUMP is followed
/// by the document.
pub fn format_human(resp: &CommandResponse) -> String {
    let mut s = if resp.success {
        format!(
            "OK consistent={} applied={} revision={}",
            resp.consistent, resp.applied, resp.revision
        )
    } else {
        format!(
            "ERR {}: {} (consistent={} revision={})",
            resp.error_code, resp.error_description, resp.consistent, resp.revision
        )
    };
    if !resp.queried_names.is_empty() {
        s.push_str(&format!(" [{}]", resp.queried_names.join(", ")));
    }
    if resp.success && !resp.error_description.is_empty() {
        s.push('\n');
        s.push_str(resp.error_description.trim_end());
    }
    s
}

#[derive(Clone, Debug)]
pub struct Options {
    pub client: String,
    pub reference: String,
    pub addr: String,
    pub porcelain: bool,
    /// Writes `> request` / `< response` wire lines for every command.
    pub record: Option<PathBuf>,
}

/// Runs `script` over one connection and returns the exit status. Nothing
/// is written to `out` if the server cannot be reached.
pub fn run(opts: &Options, script: &[ScriptLine], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut conn = match Connection::connect(opts.addr.as_str()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "armordb-cli: cannot connect to {}: {e}", opts.addr);
            return exit::CONNECTION;
        }
    };
    let mut transcript = String::new();
    let mut status = exit::OK;
    let mut fail = |code: i32, msg: String, err: &mut dyn Write| {
        let _ = writeln!(err, "armordb-cli: {msg}");
        if status == exit::OK {
            status = code;
        }
    };
    let mut i = 0;
    while i < script.len() {
        let ScriptLine::Command { line, command } = &script[i] else {
            i += 1;
            continue;
        };
        let req = command.clone().into_wire(&opts.client, &opts.reference);
        let request_line = req.encode();
        let (raw, resp) = match conn.send(&req) {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(err, "armordb-cli: line {line}: {e}");
                return exit::CONNECTION;
            }
        };
        transcript.push_str(&format!("> {request_line}\n< {raw}\n"));
        let shown = if opts.porcelain {
            raw
        } else {
            format_human(&resp)
        };
        if writeln!(out, "{shown}").is_err() {
            return exit::USAGE;
        }
        i += 1;
        let mut code_expected = false;
        while let Some(ScriptLine::Expect { line, expectation }) = script.get(i) {
            code_expected |= expectation.code.is_some();
            if let Err(m) = expectation.check(&resp) {
                fail(exit::EXPECTATION, format!("line {line}: {m}"), err);
            }
            i += 1;
        }
        if !resp.success && !code_expected {
            fail(
                exit::COMMAND_FAILED,
                format!(
                    "line {line}: {} {}",
                    resp.error_code, resp.error_description
                ),
                err,
            );
        }
    }
    if let Some(path) = &opts.record {
        if let Err(e) = std::fs::write(path, transcript) {
            fail(exit::USAGE, format!("{}: {e}", path.display()), err);
        }
    }
    status
}
