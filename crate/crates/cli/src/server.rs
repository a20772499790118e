use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::http::header;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::Router;
use tokio::net::TcpListener;

use isbci::sim::SessionHub;

/// `GET /ws` upgrades to a WebSocket carrying one JSON message per text
/// frame; `POST /api` takes one message as the body and returns the reply.
/// Messages on a connection are answered in arrival order.
pub fn router(hub: Arc<SessionHub>) -> Router {
    Router::new()
        .route("/ws", get(ws_upgrade))
        .route("/api", post(api))
        .route("/health", get(|| async { "ok" }))
        .with_state(hub)
}

pub async fn serve(listener: TcpListener, hub: Arc<SessionHub>) -> std::io::Result<()> {
    axum::serve(listener, router(hub)).await
}

/// Session start may train a model, so requests run off the async workers.
async fn answer(hub: Arc<SessionHub>, text: String) -> String {
    match tokio::task::spawn_blocking(move || hub.handle_text(&text)).await {
        Ok(reply) => reply,
        Err(e) => {
            log::error!("request handler panicked: {e}");
            r#"{"type":"error","message":"internal error"}"#.to_string()
        }
    }
}

async fn api(State(hub): State<Arc<SessionHub>>, body: String) -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/json")], answer(hub, body).await)
}

async fn ws_upgrade(State(hub): State<Arc<SessionHub>>, ws: WebSocketUpgrade) -> impl IntoResponse {
    ws.on_upgrade(move |socket| connection(socket, hub))
}

async fn connection(mut socket: WebSocket, hub: Arc<SessionHub>) {
    while let Some(Ok(msg)) = socket.recv().await {
        let text = match msg {
            Message::Text(t) => t.to_string(),
            Message::Binary(b) => String::from_utf8_lossy(&b).into_owned(),
            Message::Close(_) => break,
            _ => continue,
        };
        let reply = answer(hub.clone(), text).await;
        if socket.send(Message::Text(reply.into())).await.is_err() {
            break;
        }
    }
}
