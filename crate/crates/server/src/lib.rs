//! Stateless local HTTP service backing the datasheet wizard.
//!
//! | Route                   | Body                          | Response           |
//! |-------------------------|-------------------------------|--------------------|
//! | `GET /api/v1/template`  | query `name`, `title`         | draft datasheet    |
//! | `POST /api/v1/infer`    | multipart field `file`        | resource           |
//! | `POST /api/v1/validate` | datasheet                     | validation report  |
//! | `POST /api/v1/evaluate` | `{datasheet, policy?}`        | verdict            |
//! | `GET /*`                | none                          | static assets      |
//!
//! Every JSON body uses the library's canonical serialization. Invalid
//! datasheets still get 200 from `validate`; the report carries validity.

mod error;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, Multipart, Query, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{Html, Response};
use axum::routing::{get, post};
use axum::Router;
use opendatasheets::error::InferenceError;
use opendatasheets::inference::{infer_resource, InferenceConfig};
use opendatasheets::json::parse_strict;
use opendatasheets::model::{new_template, parse_datasheet, serialize_datasheet, to_canonical_json, Datasheet};
use opendatasheets::policy::{evaluate_policy, Policy};
use opendatasheets::validation::validate_datasheet;
use serde::Deserialize;
use serde_json::Value;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;

pub use error::{json_response, ApiError};

pub const DEFAULT_ADDR: ([u8; 4], u16) = ([127, 0, 0, 1], 8080);
pub const DEFAULT_TEMPLATE_NAME: &str = "untitled-dataset";

/// Multipart framing allowance on top of the upload cap.
const MULTIPART_OVERHEAD: usize = 64 * 1024;

#[derive(Debug, Clone, Default)]
pub struct ServerConfig {
    /// Used by `evaluate` when the request carries no policy.
    pub policy: Option<Policy>,
    /// Directory of wizard assets served under `/`.
    pub assets: Option<PathBuf>,
    pub inference: InferenceConfig,
}

type AppState = Arc<ServerConfig>;

pub fn router(config: ServerConfig) -> Router {
    let body_limit = usize::try_from(config.inference.max_bytes)
        .unwrap_or(usize::MAX)
        .saturating_add(MULTIPART_OVERHEAD);
    let assets = config.assets.clone();
    let state: AppState = Arc::new(config);

    let api = Router::new()
        .route("/api/v1/template", get(template))
        .route("/api/v1/infer", post(infer))
        .route("/api/v1/validate", post(validate))
        .route("/api/v1/evaluate", post(evaluate))
        .method_not_allowed_fallback(not_found)
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(state);

    let app = match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir).not_found_service(axum::routing::any(not_found))),
        None => api.route("/", get(placeholder_index)).fallback(not_found),
    };
    app.layer(cors())
}

fn is_local_origin(origin: &HeaderValue) -> bool {
    let Ok(origin) = origin.to_str() else { return false };
    let Some(rest) = origin.strip_prefix("http://").or_else(|| origin.strip_prefix("https://")) else {
        return false;
    };
    let host = match rest.rsplit_once(':') {
        Some((host, port)) if !port.is_empty() && port.bytes().all(|b| b.is_ascii_digit()) => host,
        _ => rest,
    };
    matches!(host, "localhost" | "127.0.0.1" | "[::1]")
}

fn cors() -> CorsLayer {
    CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin, _| is_local_origin(origin)))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([axum::http::header::CONTENT_TYPE])
}

async fn not_found() -> ApiError {
    ApiError::not_found()
}

async fn placeholder_index() -> Html<&'static str> {
    Html(
        "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>Open Datasheets</title></head>\n\
         <body><h1>Open Datasheets</h1><p>The API is available under <code>/api/v1/</code>. \
         Start the server with <code>--assets DIR</code> to serve the wizard.</p></body></html>\n",
    )
}

fn ok_json(body: String) -> Response {
    json_response(StatusCode::OK, body)
}

fn body_text(body: Result<Bytes, BytesRejection>) -> Result<String, ApiError> {
    let bytes = body.map_err(|e| match e.status() {
        StatusCode::PAYLOAD_TOO_LARGE => ApiError::too_large(e.body_text()),
        _ => ApiError::bad_request("bad-body", e.body_text()),
    })?;
    String::from_utf8(bytes.to_vec()).map_err(|_| ApiError::bad_request("malformed-json", "request body is not UTF-8"))
}

#[derive(Debug, Deserialize)]
struct TemplateQuery {
    name: Option<String>,
    title: Option<String>,
}

async fn template(Query(q): Query<TemplateQuery>) -> Result<Response, ApiError> {
    let name = q.name.unwrap_or_else(|| DEFAULT_TEMPLATE_NAME.to_string());
    let d = new_template(&name, q.title.as_deref().unwrap_or(""))?;
    Ok(ok_json(serialize_datasheet(&d)))
}

async fn infer(State(state): State<AppState>, mut multipart: Multipart) -> Result<Response, ApiError> {
    let multipart_error = |e: axum::extract::multipart::MultipartError| match e.status() {
        StatusCode::PAYLOAD_TOO_LARGE => ApiError::too_large(e.body_text()),
        _ => ApiError::bad_request("bad-multipart", e.body_text()),
    };
    while let Some(field) = multipart.next_field().await.map_err(multipart_error)? {
        if field.name() != Some("file") {
            continue;
        }
        let file_name = field.file_name().unwrap_or("upload").to_string();
        let bytes = field.bytes().await.map_err(multipart_error)?;
        let cfg = state.inference.clone();
        let inferred = tokio::task::spawn_blocking(move || infer_resource(&file_name, &bytes, &cfg))
            .await
            .map_err(|e| ApiError::internal(e.to_string()))?;
        return match inferred {
            Ok(r) => Ok(ok_json(to_canonical_json(&r.resource))),
            Err(e @ InferenceError::Oversize { .. }) => Err(ApiError::too_large(e.to_string())),
            Err(e @ InferenceError::Undecodable(_)) => Err(ApiError::bad_request("undecodable", e.to_string())),
            Err(e) => Err(ApiError::internal(e.to_string())),
        };
    }
    Err(ApiError::bad_request("missing-file", "multipart field \"file\" is required"))
}

async fn validate(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let d = parse_datasheet(&body_text(body)?)?;
    Ok(ok_json(to_canonical_json(&validate_datasheet(&d))))
}

async fn evaluate(State(state): State<AppState>, body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let Value::Object(mut request) = parse_strict(&body_text(body)?)? else {
        return Err(ApiError::bad_request("bad-body", "expected an object with \"datasheet\" and optional \"policy\""));
    };
    let datasheet = request
        .remove("datasheet")
        .ok_or_else(|| ApiError::bad_request("missing-key", "required key \"datasheet\" missing at pointer \"\""))?;
    let d = Datasheet::from_value(datasheet, "/datasheet")?;
    let policy = match request.remove("policy") {
        Some(Value::Null) | None => state.policy.clone(),
        Some(p) => Some(Policy::from_value(p)?),
    };
    let policy = policy.ok_or_else(|| {
        ApiError::bad_request("no-policy", "the request has no policy and the server was started without one")
    })?;
    Ok(ok_json(to_canonical_json(&evaluate_policy(&d, &policy))))
}

/// Serves until Ctrl-C.
pub async fn serve(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

/// [`serve`] on a fresh multi-threaded runtime, for synchronous callers.
pub fn serve_blocking(addr: SocketAddr, config: ServerConfig) -> std::io::Result<()> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?
        .block_on(serve(addr, config))
}
