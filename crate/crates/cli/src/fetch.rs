//! Issue download from the GitHub REST API.
//!
//! Network access goes through [`Transport`] so a recorded fixture can stand
//! in for the live API. The issue description becomes comment 0 and the
//! comments pages are followed through the `Link` header.

use std::collections::{HashMap, VecDeque};
use std::fs;
use std::path::Path;
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use argmine::corpus::{parse_thread, IssueThread};
use serde::Deserialize;
use serde_json::{json, Value};

pub const DEFAULT_API_BASE: &str = "https://api.github.com";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    /// Header names are lowercase.
    pub headers: Vec<(String, String)>,
    pub body: String,
}

impl HttpResponse {
    pub fn header(&self, name: &str) -> Option<&str> {
        let name = name.to_ascii_lowercase();
        self.headers.iter().find(|(k, _)| *k == name).map(|(_, v)| v.as_str())
    }
}

pub trait Transport {
    /// One GET request. `Err` means no HTTP response was received.
    fn get(&self, url: &str, token: Option<&str>) -> Result<HttpResponse>;
}

pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .user_agent(concat!("argmine/", env!("CARGO_PKG_VERSION")))
            .timeout(Duration::from_secs(30))
            .build()?;
        Ok(HttpTransport { client })
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str, token: Option<&str>) -> Result<HttpResponse> {
        let mut req = self
            .client
            .get(url)
            .header("Accept", "application/vnd.github+json")
            .header("X-GitHub-Api-Version", "2022-11-28");
        if let Some(t) = token {
            req = req.bearer_auth(t);
        }
        let resp = req.send()?;
        let status = resp.status().as_u16();
        let headers = resp
            .headers()
            .iter()
            .filter_map(|(k, v)| Some((k.as_str().to_ascii_lowercase(), v.to_str().ok()?.to_string())))
            .collect();
        Ok(HttpResponse {
            status,
            headers,
            body: resp.text()?,
        })
    }
}

#[derive(Debug, Deserialize)]
struct RecordedResponse {
    #[serde(default = "ok_status")]
    status: u16,
    #[serde(default)]
    headers: HashMap<String, String>,
    #[serde(default)]
    body: Value,
}

fn ok_status() -> u16 {
    200
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Recorded {
    One(RecordedResponse),
    Sequence(Vec<RecordedResponse>),
}

/// Replays responses recorded in a JSON file keyed by URL. A key may hold a
/// list of responses, served in order with the last one repeating.
pub struct FixtureTransport {
    responses: Mutex<HashMap<String, VecDeque<HttpResponse>>>,
}

impl FixtureTransport {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: HashMap<String, Recorded> = serde_json::from_str(text).context("reading fixture")?;
        let convert = |r: RecordedResponse| HttpResponse {
            status: r.status,
            headers: r.headers.into_iter().map(|(k, v)| (k.to_ascii_lowercase(), v)).collect(),
            body: match r.body {
                Value::String(s) => s,
                v => v.to_string(),
            },
        };
        let responses = raw
            .into_iter()
            .map(|(url, rec)| {
                let list = match rec {
                    Recorded::One(r) => vec![r],
                    Recorded::Sequence(v) => v,
                };
                (url, list.into_iter().map(convert).collect())
            })
            .collect();
        Ok(FixtureTransport {
            responses: Mutex::new(responses),
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text)
    }
}

impl Transport for FixtureTransport {
    fn get(&self, url: &str, _token: Option<&str>) -> Result<HttpResponse> {
        let mut map = self.responses.lock().expect("fixture lock");
        let queue = map
            .get_mut(url)
            .ok_or_else(|| anyhow!("fixture has no recorded response for {url}"))?;
        let resp = if queue.len() > 1 {
            queue.pop_front()
        } else {
            queue.front().cloned()
        };
        resp.ok_or_else(|| anyhow!("fixture entry for {url} is empty"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RetryPolicy {
    pub attempts: u32,
    /// Delay before the second attempt; doubles after each failure.
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 3,
            base_delay: Duration::from_secs(1),
        }
    }
}

pub struct Fetcher<'a> {
    pub transport: &'a dyn Transport,
    pub api_base: String,
    pub token: Option<String>,
    pub retry: RetryPolicy,
}

fn rate_limited(resp: &HttpResponse) -> bool {
    resp.status == 429 || (resp.status == 403 && resp.header("x-ratelimit-remaining") == Some("0"))
}

fn rate_limit_message(resp: &HttpResponse) -> String {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    if let Some(reset) = resp.header("x-ratelimit-reset").and_then(|v| v.parse::<u64>().ok()) {
        format!(
            "GitHub API rate limit exhausted; wait until {reset} (unix time, about {}s from now) or supply a token",
            reset.saturating_sub(now)
        )
    } else if let Some(after) = resp.header("retry-after") {
        format!("GitHub API rate limit exhausted; retry after {after}s")
    } else {
        "GitHub API rate limit exhausted".to_string()
    }
}

/// URL of the `rel="next"` entry of a `Link` header.
pub fn next_link(link: &str) -> Option<String> {
    link.split(',').find_map(|part| {
        let (url, params) = part.split_once(';')?;
        params
            .split(';')
            .any(|p| p.trim() == "rel=\"next\"")
            .then(|| url.trim().trim_start_matches('<').trim_end_matches('>').to_string())
    })
}

impl Fetcher<'_> {
    fn get(&self, url: &str, what: &str) -> Result<HttpResponse> {
        let mut delay = self.retry.base_delay;
        let mut last = String::new();
        for attempt in 1..=self.retry.attempts.max(1) {
            match self.transport.get(url, self.token.as_deref()) {
                Ok(resp) if (200..300).contains(&resp.status) => return Ok(resp),
                Ok(resp) if resp.status == 404 => bail!("{what} not found (HTTP 404 for {url})"),
                Ok(resp) if rate_limited(&resp) => bail!("{}", rate_limit_message(&resp)),
                Ok(resp) if resp.status >= 500 => last = format!("HTTP {}", resp.status),
                Ok(resp) => bail!("{what}: HTTP {} for {url}: {}", resp.status, resp.body.trim()),
                Err(e) => last = format!("{e:#}"),
            }
            if attempt < self.retry.attempts {
                log::warn!("{url}: {last}; retrying in {delay:?}");
                thread::sleep(delay);
                delay *= 2;
            }
        }
        bail!("{what}: giving up after {} attempts: {last}", self.retry.attempts)
    }

    fn get_json(&self, url: &str, what: &str) -> Result<(Value, HttpResponse)> {
        let resp = self.get(url, what)?;
        let v = serde_json::from_str(&resp.body).with_context(|| format!("{what}: invalid JSON from {url}"))?;
        Ok((v, resp))
    }

    /// Downloads `owner/name#number` and maps it into the thread schema.
    pub fn fetch_issue(&self, repo: &str, number: u64) -> Result<IssueThread> {
        if repo.split('/').count() != 2 || repo.split('/').any(str::is_empty) {
            bail!("repository must look like owner/name, got {repo:?}");
        }
        let what = format!("issue {repo}#{number}");
        let base = self.api_base.trim_end_matches('/');
        let (issue, _) = self.get_json(&format!("{base}/repos/{repo}/issues/{number}"), &what)?;
        let mut comments = vec![comment_doc(&issue, "issue")?];

        let mut next = Some(format!("{base}/repos/{repo}/issues/{number}/comments?per_page=100"));
        let mut page = 0;
        while let Some(url) = next {
            page += 1;
            let (v, resp) = self.get_json(&url, &format!("comments of {what}"))?;
            let items = v.as_array().ok_or_else(|| anyhow!("comments page {page} of {what} is not an array"))?;
            for (i, c) in items.iter().enumerate() {
                comments.push(comment_doc(c, &format!("comments page {page} item {i}"))?);
            }
            next = resp.header("link").and_then(next_link);
        }
        log::info!("fetched {what}: {} comments over {page} page(s)", comments.len() - 1);

        let doc = json!({
            "id": issue.get("number").and_then(Value::as_u64).unwrap_or(number),
            "title": issue.get("title").and_then(Value::as_str).unwrap_or_default(),
            "comments": comments,
        });
        Ok(parse_thread(doc.to_string().as_bytes())?)
    }
}

fn comment_doc(v: &Value, what: &str) -> Result<Value> {
    let s = |key: &str| v.get(key).and_then(Value::as_str);
    let author = v
        .pointer("/user/login")
        .and_then(Value::as_str)
        .unwrap_or("ghost");
    let created_at = s("created_at").ok_or_else(|| anyhow!("{what}: missing created_at"))?;
    Ok(json!({
        "author": author,
        "association": s("author_association").unwrap_or("NONE"),
        "created_at": created_at,
        "body": s("body").unwrap_or_default(),
    }))
}
