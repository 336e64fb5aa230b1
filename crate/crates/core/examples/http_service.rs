//! Serves the adversarial panel on an ephemeral port and queries it once.

use std::collections::BTreeMap;

use vetrank::fixture::{adversarial_panel, AdversarialConfig};
use vetrank::ingestion::default_criteria;
use vetrank::service::{router, AppState, Dataset};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let matrices = adversarial_panel(&AdversarialConfig::default());
    let dataset = Dataset::new(default_criteria(), matrices, BTreeMap::new())?;
    let app = router(AppState::loaded(dataset));

    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    tokio::spawn(async move { axum::serve(listener, app).await });
    println!("listening on http://{addr}");

    // a bare HTTP/1.1 request keeps the example free of a client dependency
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    let mut stream = tokio::net::TcpStream::connect(addr).await?;
    stream
        .write_all(b"GET /api/scenarios/summary HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n")
        .await?;
    let mut response = String::new();
    stream.read_to_string(&mut response).await?;
    let body = response.split("\r\n\r\n").nth(1).unwrap_or_default();
    println!("{}", response.lines().next().unwrap_or_default());
    println!("{}...", &body[..body.len().min(300)]);
    Ok(())
}
