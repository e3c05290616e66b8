//! Read-only HTTP endpoint for exported viewer files.
//!
//! Routes:
//! - `GET /api/threads`: `[{"id", "title", "file"}]` for every `<id>.json`
//!   in the data directory, sorted by id; `file` is the URL path to fetch.
//! - `GET /threads/{id}.json`: the exported file, byte for byte.
//! - anything else under GET: a static asset from the assets directory,
//!   `/` mapping to `index.html`.
//!
//! Unknown paths are 404, methods other than GET are 405.

use std::fs;
use std::path::{Component, Path, PathBuf};
use std::sync::Arc;
use std::thread;

use anyhow::{anyhow, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone)]
pub struct Site {
    pub data_dir: PathBuf,
    pub assets_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub content_type: &'static str,
    pub body: Vec<u8>,
}

impl Response {
    fn text(status: u16, msg: &str) -> Self {
        Response {
            status,
            content_type: "text/plain; charset=utf-8",
            body: format!("{msg}\n").into_bytes(),
        }
    }

    fn not_found() -> Self {
        Self::text(404, "not found")
    }
}

#[derive(Debug, Serialize)]
struct ThreadEntry {
    id: u64,
    title: String,
    file: String,
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        Some("ico") => "image/x-icon",
        Some("map" | "txt") => "text/plain; charset=utf-8",
        _ => "application/octet-stream",
    }
}

fn list_threads(dir: &Path) -> Result<Vec<ThreadEntry>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let Some(stem) = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_suffix(".json"))
        else {
            continue;
        };
        let Ok(id) = stem.parse::<u64>() else { continue };
        let doc: Value = match fs::read(&path).map_err(anyhow::Error::from).and_then(|b| Ok(serde_json::from_slice(&b)?)) {
            Ok(v) => v,
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                continue;
            }
        };
        out.push(ThreadEntry {
            id,
            title: doc.get("title").and_then(Value::as_str).unwrap_or_default().to_string(),
            file: format!("/threads/{id}.json"),
        });
    }
    out.sort_by_key(|e| e.id);
    Ok(out)
}

/// Maps a URL path to a file under `root`, refusing anything that would
/// leave it.
fn safe_join(root: &Path, url_path: &str) -> Option<PathBuf> {
    let rel = Path::new(url_path.trim_start_matches('/'));
    if rel.components().all(|c| matches!(c, Component::Normal(_))) {
        Some(root.join(rel))
    } else {
        None
    }
}

pub fn route(site: &Site, method: &str, url: &str) -> Response {
    if method != "GET" {
        return Response::text(405, "method not allowed");
    }
    let path = url.split(['?', '#']).next().unwrap_or("");
    if path == "/api/threads" {
        return match list_threads(&site.data_dir) {
            Ok(list) => Response {
                status: 200,
                content_type: "application/json",
                body: serde_json::to_vec(&list).expect("thread list serializes"),
            },
            Err(e) => Response::text(500, &format!("cannot list threads: {e}")),
        };
    }
    if let Some(name) = path.strip_prefix("/threads/") {
        let id_ok = name
            .strip_suffix(".json")
            .is_some_and(|id| !id.is_empty() && id.bytes().all(|b| b.is_ascii_digit()));
        if !id_ok {
            return Response::not_found();
        }
        return match fs::read(site.data_dir.join(name)) {
            Ok(body) => Response {
                status: 200,
                content_type: "application/json",
                body,
            },
            Err(_) => Response::not_found(),
        };
    }
    let Some(assets) = &site.assets_dir else {
        return Response::not_found();
    };
    let rel = if path == "/" { "index.html" } else { path };
    match safe_join(assets, rel) {
        Some(file) if file.is_file() => match fs::read(&file) {
            Ok(body) => Response {
                status: 200,
                content_type: content_type(&file),
                body,
            },
            Err(_) => Response::not_found(),
        },
        _ => Response::not_found(),
    }
}

/// Serves `site` until the process is killed. `workers` threads share the
/// listener.
pub fn serve(site: Site, addr: &str, workers: usize) -> Result<()> {
    let server = Arc::new(tiny_http::Server::http(addr).map_err(|e| anyhow!("cannot bind {addr}: {e}"))?);
    println!("serving {} on http://{}", site.data_dir.display(), server.server_addr());
    let site = Arc::new(site);
    let handles: Vec<_> = (0..workers.max(1))
        .map(|_| {
            let server = Arc::clone(&server);
            let site = Arc::clone(&site);
            thread::spawn(move || {
                for req in server.incoming_requests() {
                    let resp = route(&site, req.method().as_str(), req.url());
                    log::info!("{} {} -> {}", req.method(), req.url(), resp.status);
                    let mut out = tiny_http::Response::from_data(resp.body).with_status_code(resp.status);
                    let ct = tiny_http::Header::from_bytes("Content-Type", resp.content_type).expect("static header");
                    out.add_header(ct);
                    if resp.status == 405 {
                        out.add_header(tiny_http::Header::from_bytes("Allow", "GET").expect("static header"));
                    }
                    if let Err(e) = req.respond(out) {
                        log::warn!("response failed: {e}");
                    }
                }
            })
        })
        .collect();
    for h in handles {
        h.join().map_err(|_| anyhow!("server worker panicked"))?;
    }
    Ok(())
}
