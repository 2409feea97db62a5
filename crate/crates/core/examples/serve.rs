// Starts the HTTP service on an ephemeral port, loads a hierarchy and
// asks for an authorization over a plain TCP connection.

use std::io::{Read, Write};
use std::net::TcpStream;
use std::sync::Arc;

use rbac_ahp::service::{serve, SnapshotStore};

fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> String {
    let mut stream = TcpStream::connect(addr).unwrap();
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    response
        .split_once("\r\n\r\n")
        .map(|(_, b)| b.to_string())
        .unwrap_or(response)
}

fn main() {
    let rt = tokio::runtime::Runtime::new().unwrap();
    let listener = rt
        .block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))
        .unwrap();
    let addr = listener.local_addr().unwrap();
    rt.spawn(serve(listener, Arc::new(SnapshotStore::new()), None));

    let h1 = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/h1.rhf"))
        .unwrap();
    println!(
        "PUT /hierarchy -> {}",
        request(addr, "PUT", "/hierarchy", &h1)
    );
    println!("GET /roles -> {}", request(addr, "GET", "/roles", ""));
    println!(
        "POST /authorize -> {}",
        request(
            addr,
            "POST",
            "/authorize",
            r#"{"require":["p1","p2"],"s":2}"#
        )
    );
}
