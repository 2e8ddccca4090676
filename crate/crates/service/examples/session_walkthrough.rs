//! A full annotation session over HTTP against an in-process service:
//! upload sentences, save gold, export it, and lint it.
//!
//! The same requests work against `factbench serve`.

use std::sync::mpsc;

use factbench::fixtures;
use factbench::io::save_state;
use factbench_service::{serve_with_shutdown, ServiceConfig};

fn json(r: &mut ureq::http::Response<ureq::Body>) -> serde_json::Value {
    serde_json::from_slice(&r.body_mut().read_to_vec().unwrap()).unwrap()
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ServiceConfig::new(dir.path());
    cfg.bind_addr = "127.0.0.1:0".parse().unwrap();

    let (bound, addr) = mpsc::channel();
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = std::thread::spawn(move || {
        tokio::runtime::Runtime::new().unwrap().block_on(async move {
            let shutdown = async { stopped.await.ok(); };
            serve_with_shutdown(cfg, shutdown, |a| bound.send(a).unwrap()).await.unwrap();
        })
    });
    let base = format!("http://{}/api", addr.recv().unwrap());
    let http: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();

    let mut r = http.post(format!("{base}/sessions")).send(fixtures::TABLE_SENTENCES_JSON).unwrap();
    let created: serde_json::Value = json(&mut r);
    let id = created["session_id"].as_str().unwrap().to_owned();
    println!("POST /sessions -> {} {created}", r.status());

    let mut r = http.get(format!("{base}/sessions/{id}/sentences/sent1")).call().unwrap();
    let sentence: serde_json::Value = json(&mut r);
    let marked: Vec<String> = sentence["tokens"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|t| t["highlight"] != "NONE")
        .map(|t| format!("{}:{}", t["text"].as_str().unwrap(), t["highlight"].as_str().unwrap()))
        .collect();
    println!("highlighted tokens: {}", marked.join(" "));

    // the annotator's work, as the UI would send it
    let r = http
        .put(format!("{base}/sessions/{id}/state"))
        .send(&save_state(&fixtures::table_state())[..])
        .unwrap();
    println!("PUT /state -> {}", r.status());

    let mut r = http.get(format!("{base}/sessions/{id}/export?format=tsv")).call().unwrap();
    println!("export ({}):", r.headers()["content-disposition"].to_str().unwrap());
    print!("{}", r.body_mut().read_to_string().unwrap());

    let mut r = http.get(format!("{base}/sessions/{id}/lint")).call().unwrap();
    let lint: serde_json::Value = json(&mut r);
    println!("lint: {} diagnostics", lint.as_array().map_or(0, Vec::len));

    let mut r = http.put(format!("{base}/sessions/{id}/state")).send("{\"version\": 9}").unwrap();
    println!("bad PUT -> {} {}", r.status(), r.body_mut().read_to_string().unwrap());

    stop.send(()).unwrap();
    server.join().unwrap();
}
